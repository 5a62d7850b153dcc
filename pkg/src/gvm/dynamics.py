"""Simultaneous-update colour dynamics on a normalized digraph.

Each round, every node with out-edges picks one out-neighbour with
probability proportional to edge weight and adopts its colour unless the
picked node is uncoloured, in which case it keeps its own.  Nodes without
out-edges (stubborn) never change.  Uncoloured nodes can gain a colour but
a coloured node never becomes uncoloured.

The module offers three views of the process: sampled trajectories
(`step_sample`, `simulate_mc`), the per-node marginal recurrence
(`propagate_marginals`, exact when no node is ever uncoloured or for a
single round, a mean-field estimate otherwise), and the exact joint
distribution over all 3^n colourings (`exact_distribution`, small n only).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum
from typing import Callable, Iterable, Sequence

import numpy as np

from .graph import GraphValidationError, NormalizedDigraph, WeightedDigraph

EXACT_CAP = 10  # largest n the exact joint-distribution path accepts by default


class Colour(IntEnum):
    BLUE = 0
    RED = 1
    UNCOLOURED = 2

    @property
    def letter(self) -> str:
        return "bru"[self]

    @classmethod
    def from_letter(cls, ch: str) -> "Colour":
        try:
            return cls("bru".index(ch))
        except ValueError:
            raise GraphValidationError(f"unknown colour {ch!r}, expected b, r or u") from None


BLUE, RED, UNCOLOURED = Colour.BLUE, Colour.RED, Colour.UNCOLOURED


def colouring_from_letters(letters: str) -> np.ndarray:
    return np.array([Colour.from_letter(ch) for ch in letters], dtype=np.int8)


def letters_of(colouring: np.ndarray) -> str:
    return "".join("bru"[c] for c in colouring)


def all_uncoloured(n: int) -> np.ndarray:
    return np.full(n, UNCOLOURED, dtype=np.int8)


def colour_counts(colouring: np.ndarray) -> tuple[int, int, int]:
    """(blue, red, uncoloured) counts."""
    counts = np.bincount(colouring, minlength=3)
    return int(counts[BLUE]), int(counts[RED]), int(counts[UNCOLOURED])


@dataclass(frozen=True)
class System:
    """A normalized graph together with an initial colouring."""

    graph: NormalizedDigraph
    colouring: np.ndarray

    def __post_init__(self) -> None:
        if not isinstance(self.graph, NormalizedDigraph):
            raise GraphValidationError("System requires a normalized graph")
        c = np.asarray(self.colouring, dtype=np.int8).copy()
        if c.shape != (self.graph.n,):
            raise GraphValidationError(
                f"colouring has shape {c.shape}, expected ({self.graph.n},)"
            )
        if c.size and (c.min() < 0 or c.max() > 2):
            raise GraphValidationError("colouring values must be in {0, 1, 2}")
        c.setflags(write=False)
        object.__setattr__(self, "colouring", c)

    @property
    def n(self) -> int:
        return self.graph.n


def make_system(graph: WeightedDigraph, colouring: np.ndarray | None = None) -> System:
    """Normalize the graph and wrap it with a colouring (default all uncoloured)."""
    norm = graph.normalized()
    return System(norm, all_uncoloured(norm.n) if colouring is None else colouring)


def seed_apply(system: System, seeds: Iterable[int]) -> System:
    """Force the seed nodes blue at time zero, leaving everything else intact."""
    seeds = np.asarray(sorted(set(int(s) for s in seeds)), dtype=np.int64)
    if seeds.size and (seeds.min() < 0 or seeds.max() >= system.n):
        raise GraphValidationError(f"seed outside node range [0, {system.n})")
    c = system.colouring.copy()
    c[seeds] = BLUE
    return System(system.graph, c)


# ---------------------------------------------------------------------------
# randomness
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RngStream:
    """Deterministic randomness for the Monte Carlo runners.

    Batched runners draw one (runs, active-nodes) uniform block per round
    from a generator derived here, so the draw consumed by a given
    (run, round, node) triple sits at a fixed stream position regardless of
    how runs are scheduled: trajectories are bit-reproducible for a fixed
    master seed and draws for distinct triples are independent.
    """

    master_seed: int

    def generator(self, *key: int) -> np.random.Generator:
        ss = np.random.SeedSequence(entropy=self.master_seed, spawn_key=tuple(key))
        return np.random.Generator(np.random.PCG64(ss))


def _as_generator(rng: int | np.random.Generator) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    return RngStream(int(rng)).generator(0)


# ---------------------------------------------------------------------------
# sampled trajectories
# ---------------------------------------------------------------------------


def step_sample(system: System, colouring: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """One simultaneous update of every non-stubborn node."""
    new = _step_batch(system.graph, colouring[np.newaxis, :].copy(), rng)
    return new[0]


def _step_batch(
    graph: NormalizedDigraph, colours: np.ndarray, rng: np.random.Generator
) -> np.ndarray:
    """Advance (runs, n) colour matrix one round in place and return it."""
    active, _, _ = graph._pick_tables
    if active.size == 0:
        return colours
    u = rng.random((colours.shape[0], active.size))
    picked = graph.sample_picks(u)
    picked_col = np.take_along_axis(colours, picked, axis=1)
    keep = picked_col == UNCOLOURED
    colours[:, active] = np.where(keep, colours[:, active], picked_col)
    return colours


@dataclass(frozen=True)
class McEstimate:
    """Monte Carlo estimate of the expected final blue count."""

    value: float
    stderr: float
    trace: np.ndarray  # mean blue count per round, length rounds + 1
    blue_counts: np.ndarray  # final blue count per run

    @property
    def runs(self) -> int:
        return len(self.blue_counts)


def simulate_mc(
    system: System,
    seeds: Iterable[int] = (),
    rounds: int = 0,
    runs: int = 1,
    rng: int | np.random.Generator = 0,
) -> McEstimate:
    """Estimate the expected blue count after `rounds` rounds from `runs` trajectories."""
    if rounds < 0 or runs < 1:
        raise GraphValidationError("rounds must be >= 0 and runs >= 1")
    gen = _as_generator(rng)
    seeded = seed_apply(system, seeds)
    colours = np.repeat(seeded.colouring[np.newaxis, :], runs, axis=0)
    trace = np.empty(rounds + 1, dtype=np.float64)
    trace[0] = float((seeded.colouring == BLUE).sum())
    for t in range(1, rounds + 1):
        colours = _step_batch(system.graph, colours, gen)
        trace[t] = (colours == BLUE).sum(axis=1).mean()
    finals = (colours == BLUE).sum(axis=1).astype(np.int64)
    value = float(finals.mean())
    stderr = float(finals.std(ddof=1) / np.sqrt(runs)) if runs > 1 else 0.0
    return McEstimate(value=value, stderr=stderr, trace=trace, blue_counts=finals)


# ---------------------------------------------------------------------------
# marginal recurrence
# ---------------------------------------------------------------------------


def belief_from_colouring(colouring: np.ndarray) -> np.ndarray:
    """(n, 3) one-hot matrix, column order (blue, red, uncoloured)."""
    s = np.zeros((len(colouring), 3), dtype=np.float64)
    s[np.arange(len(colouring)), colouring] = 1.0
    return s


def propagate_marginals(system: System, seeds: Iterable[int] = (), rounds: int = 0) -> np.ndarray:
    """Per-node colour marginals after `rounds` rounds under the pick recurrence.

    Each round computes pick-colour probabilities P = H S and combines them
    with the previous marginals as if a node's own state and its pick were
    independent.  Stubborn rows are carried over bit-identically.  The result
    is exact for one round, or whenever no node is ever uncoloured; with
    uncoloured intermediaries it is a mean-field estimate.
    """
    if rounds < 0:
        raise GraphValidationError("rounds must be >= 0")
    seeded = seed_apply(system, seeds)
    g = system.graph
    s = belief_from_colouring(seeded.colouring)
    if rounds == 0:
        return s
    h = g.adjacency()
    stub = g.stubborn
    for _ in range(rounds):
        p = h @ s
        pb, pr = p[:, 0], p[:, 1]
        b, r, u = s[:, 0], s[:, 1], s[:, 2]
        nxt = np.column_stack(
            (
                b * (1.0 - pr) + (1.0 - b) * pb,
                r * (1.0 - pb) + (1.0 - r) * pr,
                u * (1.0 - pb - pr),
            )
        )
        # rounding in pb + pr can push entries a few ulp outside [0, 1]
        np.clip(nxt, 0.0, 1.0, out=nxt)
        nxt[stub] = s[stub]
        s = nxt
    return s


# ---------------------------------------------------------------------------
# exact joint distribution
# ---------------------------------------------------------------------------


class StateSpace:
    """Joint colourings of a small system encoded as base-3 integers.

    Digit i of a state code is node i's colour.  Successor distributions are
    memoized per code: the transition kernel depends only on the graph, so
    one instance can be shared across many initial colourings (greedy reuses
    this heavily).
    """

    def __init__(self, graph: NormalizedDigraph, cap: int = EXACT_CAP):
        if graph.n > cap:
            raise GraphValidationError(
                f"exact state space needs n <= {cap} (got n = {graph.n}); "
                "raise the cap explicitly to override"
            )
        self.graph = graph
        self.n = graph.n
        self.pow3 = 3 ** np.arange(graph.n, dtype=np.int64)
        self._succ: dict[int, list[tuple[int, float]]] = {}
        self._decoded: dict[int, np.ndarray] = {}

    def encode(self, colouring: np.ndarray) -> int:
        return int(np.dot(self.pow3, np.asarray(colouring, dtype=np.int64)))

    def decode(self, code: int) -> np.ndarray:
        cached = self._decoded.get(code)
        if cached is None:
            digits = np.empty(self.n, dtype=np.int8)
            c = code
            for i in range(self.n):
                digits[i] = c % 3
                c //= 3
            digits.setflags(write=False)
            cached = self._decoded[code] = digits
        return cached

    def successors(self, code: int) -> list[tuple[int, float]]:
        """All states reachable in one round with their probabilities."""
        memo = self._succ.get(code)
        if memo is not None:
            return memo
        colours = self.decode(code)
        g = self.graph
        base = 0
        branches: list[tuple[int, list[tuple[int, float]]]] = []
        for v in range(self.n):
            own = int(colours[v])
            if g.stubborn[v]:
                base += own * int(self.pow3[v])
                continue
            nbrs, w = g.out_edges(v)
            probs = np.zeros(3)
            np.add.at(probs, colours[nbrs], w)
            pb, pr, pu = probs
            if own == UNCOLOURED:
                entries = [(int(BLUE), pb), (int(RED), pr), (int(UNCOLOURED), pu)]
            elif own == BLUE:
                entries = [(int(BLUE), pb + pu), (int(RED), pr)]
            else:
                entries = [(int(BLUE), pb), (int(RED), pr + pu)]
            entries = [(c, p) for c, p in entries if p > 0.0]
            if len(entries) == 1:
                base += entries[0][0] * int(self.pow3[v])
            else:
                branches.append((v, entries))
        combos: list[tuple[int, float]] = [(base, 1.0)]
        for v, entries in branches:
            step = int(self.pow3[v])
            combos = [(c + col * step, p * q) for c, p in combos for col, q in entries]
        self._succ[code] = combos
        return combos

    def propagate(self, dist: dict[int, float], rounds: int) -> dict[int, float]:
        for _ in range(rounds):
            nxt: dict[int, float] = {}
            for code, p in dist.items():
                for c2, q in self.successors(code):
                    nxt[c2] = nxt.get(c2, 0.0) + p * q
            dist = nxt
        return dist

    def marginals(self, dist: dict[int, float]) -> np.ndarray:
        out = np.zeros((self.n, 3), dtype=np.float64)
        idx = np.arange(self.n)
        for code, p in dist.items():
            out[idx, self.decode(code)] += p
        return out

    def expected_blue(self, dist: dict[int, float]) -> float:
        return float(
            sum(p * int((self.decode(code) == BLUE).sum()) for code, p in dist.items())
        )


@dataclass(frozen=True)
class ColouringDistribution:
    """Exact distribution over joint colourings after some number of rounds."""

    space: StateSpace
    probs: dict[int, float]

    def marginals(self) -> np.ndarray:
        return self.space.marginals(self.probs)

    def expected_blue(self) -> float:
        return self.space.expected_blue(self.probs)

    def support(self) -> list[int]:
        return sorted(self.probs)


def exact_distribution(
    system: System,
    seeds: Iterable[int] = (),
    rounds: int = 0,
    cap: int = EXACT_CAP,
    space: StateSpace | None = None,
) -> ColouringDistribution:
    """Propagate the full joint distribution; feasible for n up to ~10."""
    if rounds < 0:
        raise GraphValidationError("rounds must be >= 0")
    sp = space if space is not None else StateSpace(system.graph, cap=cap)
    seeded = seed_apply(system, seeds)
    dist = sp.propagate({sp.encode(seeded.colouring): 1.0}, rounds)
    return ColouringDistribution(space=sp, probs=dist)


# ---------------------------------------------------------------------------
# objective evaluators
# ---------------------------------------------------------------------------

EVALUATORS = ("marginal", "exact", "montecarlo")


def make_evaluator(
    system: System,
    rounds: int,
    evaluator: str = "marginal",
    *,
    runs: int = 1000,
    seed: int = 0,
    exact_cap: int = EXACT_CAP,
) -> Callable[[Sequence[int]], float]:
    """Return A -> estimate of the expected blue count after seeding A blue.

    The Monte Carlo evaluator derives its substream from the seed set, so it
    is a deterministic function of A regardless of evaluation order.
    """
    if evaluator == "marginal":
        return lambda seeds: float(propagate_marginals(system, seeds, rounds)[:, 0].sum())
    if evaluator == "exact":
        space = StateSpace(system.graph, cap=exact_cap)
        return lambda seeds: exact_distribution(
            system, seeds, rounds, space=space
        ).expected_blue()
    if evaluator == "montecarlo":
        stream = RngStream(seed)
        def run(seeds: Sequence[int]) -> float:
            key = sorted(set(int(s) for s in seeds))
            gen = stream.generator(len(key), *key)
            return simulate_mc(system, key, rounds, runs, gen).value
        return run
    raise GraphValidationError(
        f"unknown evaluator {evaluator!r}, expected one of {EVALUATORS}"
    )


def expected_blue(
    system: System,
    seeds: Iterable[int] = (),
    rounds: int = 0,
    evaluator: str = "marginal",
    **options,
) -> float:
    """Expected number of blue nodes after `rounds` rounds with `seeds` forced blue."""
    return make_evaluator(system, rounds, evaluator, **options)(list(seeds))
