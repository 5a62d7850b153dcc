"""File formats and experiment protocols.

Edge lists are whitespace-separated ``src dst [weight]`` lines ('#' starts
a comment, weight defaults to 1.0, tokens are arbitrary labels mapped to
dense ids in first-appearance order).  Colour files are two-column CSVs
``node,colour`` with colours b/r/u; unlisted nodes default to uncoloured.
Results land in a fixed-schema CSV.  All writes go through a temp file and
an atomic rename.
"""

from __future__ import annotations

import csv
import io as _stdio
import json
import os
import tempfile
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .dynamics import RED, RngStream, System, all_uncoloured, make_evaluator
from .generators import HrgParams, gen_hrg, hrg_colouring
from .graph import GraphValidationError, WeightedDigraph
from .markov import ROUND_CAP, estimate_convergence_time
from .maximize import CENTRALITIES, METHODS, centrality_rank, evaluate_strategy, greedy_seed

WEIGHT_MODES = ("as_given", "unweighted", "absolute")
RESULTS_HEADER = ["method", "budget", "expected_blue", "expected_blue_fraction",
                  "evaluator", "rounds", "seed"]
CONVERGENCE_HEADER = ["strategy", "n", "graphs", "mean_rounds", "stderr_rounds",
                      "cap_hits", "seed"]


def atomic_write_text(path: str, text: str) -> None:
    """Write via a sibling temp file and rename, so readers never see partials."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", text=True)
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# ---------------------------------------------------------------------------
# edge lists
# ---------------------------------------------------------------------------


def load_graph(path: str, weight_mode: str = "as_given") -> WeightedDigraph:
    """Parse an edge-list file; node tokens become dense ids in first appearance order.

    weight_mode: as_given rejects non-positive weights, unweighted forces
    every weight to 1.0, absolute takes |w| and rejects zeros.
    """
    if weight_mode not in WEIGHT_MODES:
        raise GraphValidationError(
            f"unknown weight mode {weight_mode!r}, expected one of {WEIGHT_MODES}"
        )
    index: dict[str, int] = {}
    edges: list[tuple[int, int, float]] = []

    def node_id(token: str) -> int:
        i = index.get(token)
        if i is None:
            i = index[token] = len(index)
        return i

    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) not in (2, 3):
                raise GraphValidationError(
                    f"{path}:{lineno}: expected 'src dst [weight]', got {line!r}"
                )
            if len(parts) == 3:
                try:
                    w = float(parts[2])
                except ValueError:
                    raise GraphValidationError(
                        f"{path}:{lineno}: bad weight {parts[2]!r}"
                    ) from None
            else:
                w = 1.0
            if weight_mode == "unweighted":
                w = 1.0
            elif weight_mode == "absolute":
                w = abs(w)
                if w == 0.0:
                    raise GraphValidationError(f"{path}:{lineno}: zero weight")
            elif not np.isfinite(w) or w <= 0.0:
                raise GraphValidationError(
                    f"{path}:{lineno}: non-positive weight {w!r}"
                )
            edges.append((node_id(parts[0]), node_id(parts[1]), w))
    if not edges:
        raise GraphValidationError(f"{path}: no edges found")
    labels = tuple(sorted(index, key=index.get))
    return WeightedDigraph.from_edges(edges, n=len(labels), labels=labels)


def save_graph(g: WeightedDigraph, path: str) -> None:
    lines = [
        f"{g.label(int(s))} {g.label(int(d))} {float(w)!r}"
        for s, d, w in zip(g.src, g.dst, g.weight)
    ]
    atomic_write_text(path, "\n".join(lines) + "\n")


# ---------------------------------------------------------------------------
# colour files
# ---------------------------------------------------------------------------


def load_colouring(path: str, graph: WeightedDigraph) -> np.ndarray:
    from .dynamics import Colour

    label_to_id = {graph.label(v): v for v in range(graph.n)}
    colouring = all_uncoloured(graph.n)
    seen: set[str] = set()
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != ["node", "colour"]:
            raise GraphValidationError(
                f"{path}: expected header 'node,colour', got {header!r}"
            )
        for row in reader:
            if not row:
                continue
            if len(row) != 2:
                raise GraphValidationError(f"{path}: malformed row {row!r}")
            token, letter = row[0].strip(), row[1].strip()
            if token in seen:
                raise GraphValidationError(f"{path}: duplicate node {token!r}")
            seen.add(token)
            v = label_to_id.get(token)
            if v is None:
                raise GraphValidationError(f"{path}: unknown node {token!r}")
            colouring[v] = Colour.from_letter(letter)
    return colouring


def save_colouring(colouring: np.ndarray, graph: WeightedDigraph, path: str) -> None:
    out = _stdio.StringIO()
    out.write("node,colour\n")
    for v in range(graph.n):
        out.write(f"{graph.label(v)},{'bru'[colouring[v]]}\n")
    atomic_write_text(path, out.getvalue())


def save_node_table(graph: WeightedDigraph, path: str) -> None:
    """Dense id -> input label table, for mapping results back to source ids."""
    lines = ["node,label"] + [f"{v},{graph.label(v)}" for v in range(graph.n)]
    atomic_write_text(path, "\n".join(lines) + "\n")


# ---------------------------------------------------------------------------
# results CSV
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ResultsRow:
    method: str
    budget: int
    expected_blue: float
    expected_blue_fraction: float
    evaluator: str
    rounds: int
    seed: int


def write_results_csv(rows: Iterable[ResultsRow], path: str) -> None:
    out = [",".join(RESULTS_HEADER)]
    for r in rows:
        out.append(
            f"{r.method},{r.budget},{r.expected_blue!r},{r.expected_blue_fraction!r},"
            f"{r.evaluator},{r.rounds},{r.seed}"
        )
    atomic_write_text(path, "\n".join(out) + "\n")


def read_results_csv(path: str) -> list[ResultsRow]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != RESULTS_HEADER:
            raise GraphValidationError(f"{path}: unexpected header {header!r}")
        return [
            ResultsRow(row[0], int(row[1]), float(row[2]), float(row[3]),
                       row[4], int(row[5]), int(row[6]))
            for row in reader if row
        ]


@dataclass(frozen=True)
class ConvergenceRow:
    strategy: int
    n: int
    graphs: int
    mean_rounds: float
    stderr_rounds: float
    cap_hits: int
    seed: int


def write_convergence_csv(rows: Iterable[ConvergenceRow], path: str) -> None:
    out = [",".join(CONVERGENCE_HEADER)]
    for r in rows:
        out.append(
            f"{r.strategy},{r.n},{r.graphs},{r.mean_rounds!r},{r.stderr_rounds!r},"
            f"{r.cap_hits},{r.seed}"
        )
    atomic_write_text(path, "\n".join(out) + "\n")


# ---------------------------------------------------------------------------
# experiment protocols
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExperimentResult:
    rows: tuple[ResultsRow, ...]
    red_nodes: tuple[int, ...]
    selections: dict[str, tuple[int, ...]]


def strategy_rows(
    system: System,
    methods: Sequence[str],
    budget_max: int,
    rounds: int,
    evaluator: str,
    seed: int,
    mc_runs: int = 1000,
) -> ExperimentResult:
    """Rows for each method and budget 1..budget_max plus the empty baseline.

    Greedy may seed any node (converting a red node is allowed and often
    optimal).  Plain centrality baselines never seed initially-red nodes;
    the *_red variants seed only them (padded by node id past the red count).
    """
    options = {"seed": seed, "runs": mc_runs} if evaluator == "montecarlo" else {}
    n = system.n
    red_mask = system.colouring == RED
    empty_value = make_evaluator(system, rounds, evaluator, **options)([])
    rows = [ResultsRow("none", 0, float(empty_value), float(empty_value) / n,
                       evaluator, rounds, seed)]
    selections: dict[str, tuple[int, ...]] = {}
    for method in methods:
        if method == "greedy":
            res = greedy_seed(system, budget_max, rounds, evaluator, **options)
        elif method in CENTRALITIES:
            order = [v for v in centrality_rank(system, method) if not red_mask[v]]
            res = evaluate_strategy(system, order, budget_max, rounds, evaluator,
                                    method=method, **options)
        elif method.endswith("_red") and method[:-4] in CENTRALITIES:
            order = centrality_rank(system, method)
            res = evaluate_strategy(system, order, budget_max, rounds, evaluator,
                                    method=method, **options)
        else:
            raise GraphValidationError(
                f"unknown method {method!r}, expected one of {METHODS}"
            )
        selections[method] = res.nodes
        rows.extend(
            ResultsRow(method, b, float(v), float(v) / n, evaluator, rounds, seed)
            for b, v in enumerate(res.values, start=1)
        )
    red_nodes = tuple(int(v) for v in np.flatnonzero(red_mask))
    return ExperimentResult(rows=tuple(rows), red_nodes=red_nodes, selections=selections)


def run_experiment(
    graph: WeightedDigraph,
    red_count: int,
    budget_max: int,
    rounds: int,
    methods: Sequence[str],
    evaluator: str,
    seed: int,
    mc_runs: int = 1000,
) -> ExperimentResult:
    """Budget-curve protocol: draw `red_count` red nodes uniformly without
    replacement (one shared draw for every method), leave the rest
    uncoloured, then record each method's objective at budgets 1..budget_max."""
    norm = graph.normalized()
    if not 0 <= red_count <= norm.n:
        raise GraphValidationError(f"red_count must be in [0, {norm.n}]")
    if budget_max < 0 or red_count + budget_max > norm.n:
        raise GraphValidationError(
            f"infeasible budget: red_count + budget_max must be <= {norm.n}"
        )
    rng = RngStream(seed).generator(1)
    red = np.sort(rng.choice(norm.n, size=red_count, replace=False)) if red_count else []
    colouring = all_uncoloured(norm.n)
    colouring[red] = RED
    return strategy_rows(System(norm, colouring), methods, budget_max, rounds,
                          evaluator, seed, mc_runs=mc_runs)


def run_convergence_experiment(
    sizes: Sequence[int],
    strategies: Sequence[int],
    graphs_per_size: int,
    seed: int,
    radius: float = 5.0,
    alpha: float = 1.0,
    round_cap: int = ROUND_CAP,
) -> list[ConvergenceRow]:
    """Mean rounds to convergence on random hyperbolic graphs.

    For each size, `graphs_per_size` strongly connected samples are drawn
    once and shared across colouring strategies, so strategy comparisons are
    paired.  One trajectory per (graph, strategy).
    """
    stream = RngStream(seed)
    samples_by_size = {}
    for size in sizes:
        samples_by_size[size] = [
            gen_hrg(HrgParams(n=size, radius=radius, alpha=alpha),
                    rng=stream.generator(0, size, g))
            for g in range(graphs_per_size)
        ]
    rows = []
    for size in sizes:
        for strat in strategies:
            times = []
            cap_hits = 0
            for g, sample in enumerate(samples_by_size[size]):
                colouring = hrg_colouring(
                    sample.coords, strat, stream.generator(1, size, strat, g)
                )
                est = estimate_convergence_time(
                    System(sample.graph.normalized(), colouring),
                    runs=1,
                    round_cap=round_cap,
                    rng=stream.generator(2, size, strat, g),
                )
                times.extend(int(t) for t in est.rounds)
                cap_hits += est.cap_hits
            arr = np.asarray(times, dtype=np.float64)
            stderr = float(arr.std(ddof=1) / np.sqrt(len(arr))) if len(arr) > 1 else 0.0
            rows.append(
                ConvergenceRow(
                    strategy=int(strat), n=int(size), graphs=graphs_per_size,
                    mean_rounds=float(arr.mean()), stderr_rounds=stderr,
                    cap_hits=cap_hits, seed=seed,
                )
            )
    return rows


# ---------------------------------------------------------------------------
# configs and coverage specs
# ---------------------------------------------------------------------------


def parse_config(text: str) -> dict[str, str]:
    """key=value lines; '#' comments and blank lines ignored."""
    out: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise GraphValidationError(f"config line {lineno}: expected key=value, got {line!r}")
        key, _, value = line.partition("=")
        out[key.strip()] = value.strip()
    return out


def load_coverage_spec(path: str, epsilon: float):
    """JSON with keys objects (m), subsets (list of object-index lists), budget (k)."""
    from .generators import MaxCoverageInstance

    with open(path) as fh:
        try:
            raw = json.load(fh)
        except json.JSONDecodeError as e:
            raise GraphValidationError(f"{path}: invalid JSON ({e})") from None
    for key in ("objects", "subsets", "budget"):
        if key not in raw:
            raise GraphValidationError(f"{path}: missing key {key!r}")
    subsets = tuple(tuple(int(o) for o in s) for s in raw["subsets"])
    return MaxCoverageInstance(
        num_objects=int(raw["objects"]),
        subsets=subsets,
        budget=int(raw["budget"]),
        epsilon=float(epsilon),
    )
