"""The dynamics as a finite Markov chain over all 3^n joint colourings.

A state's successors follow from each node's achievable next colours; the
chain's absorbing strongly connected components ("leaves") are where runs
end up, and the size of a leaf is the period of the eventual behaviour.
Also provides convergence detection for strongly connected graphs (every
period class monochromatic in blue or red, or everything uncoloured),
Monte Carlo convergence-time estimation, and an exact expected hitting
time via a linear solve at small n.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import spsolve

from .dynamics import (
    EXACT_CAP,
    UNCOLOURED,
    StateSpace,
    System,
    _as_generator,
    _step_batch,
)
from .graph import GraphValidationError, PeriodStructure, period_classes

ROUND_CAP = 10**6  # default per-run round budget for convergence estimation


# ---------------------------------------------------------------------------
# state graph and its absorbing components
# ---------------------------------------------------------------------------


def state_successors(
    system: System,
    colouring: np.ndarray | None = None,
    cap: int = EXACT_CAP,
    space: StateSpace | None = None,
) -> list[tuple[int, float]]:
    """Successor states of one joint colouring with transition probabilities."""
    sp_ = space if space is not None else StateSpace(system.graph, cap=cap)
    code = sp_.encode(system.colouring if colouring is None else colouring)
    return sp_.successors(code)


@dataclass(frozen=True)
class LeafComponent:
    """An absorbing component of the state graph."""

    states: tuple[int, ...]
    deterministic: bool  # True when every member state has a single successor

    @property
    def size(self) -> int:
        return len(self.states)


@dataclass(frozen=True)
class LeafReport:
    leaves: tuple[LeafComponent, ...]
    states_examined: int
    full_space: bool

    def sizes(self) -> tuple[int, ...]:
        return tuple(leaf.size for leaf in self.leaves)


def absorbing_analysis(
    system: System,
    full_space: bool = False,
    cap: int = EXACT_CAP,
    space: StateSpace | None = None,
) -> LeafReport:
    """Find the absorbing components, over the reachable set or all 3^n states."""
    sp_ = space if space is not None else StateSpace(system.graph, cap=cap)
    if full_space:
        roots = range(3 ** system.n)
    else:
        roots = [sp_.encode(system.colouring)]

    succ_ids: Callable[[int], list[int]] = lambda code: [c for c, _ in sp_.successors(code)]
    order: dict[int, int] = {}
    low: dict[int, int] = {}
    on_stack: set[int] = set()
    stack: list[int] = []
    components: list[tuple[int, ...]] = []
    counter = 0

    for root in roots:
        if root in order:
            continue
        work: list[list] = [[root, succ_ids(root), 0]]
        while work:
            frame = work[-1]
            v, succs, idx = frame
            if idx == 0:
                order[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack.add(v)
            descended = False
            while frame[2] < len(succs):
                w = succs[frame[2]]
                frame[2] += 1
                if w not in order:
                    work.append([w, succ_ids(w), 0])
                    descended = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], order[w])
            if descended:
                continue
            work.pop()
            if low[v] == order[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                components.append(tuple(sorted(comp)))
            if work:
                low[work[-1][0]] = min(low[work[-1][0]], low[v])

    leaves = []
    for comp in components:
        members = set(comp)
        if all(c in members for code in comp for c in succ_ids(code)):
            deterministic = all(len(sp_.successors(code)) == 1 for code in comp)
            leaves.append(LeafComponent(states=comp, deterministic=deterministic))
    return LeafReport(
        leaves=tuple(leaves), states_examined=len(order), full_space=full_space
    )


# ---------------------------------------------------------------------------
# convergence on strongly connected graphs
# ---------------------------------------------------------------------------


def detect_converged(
    system: System,
    colouring: np.ndarray | None = None,
    structure: PeriodStructure | None = None,
) -> bool:
    """Whether a colouring lies in a leaf of a strongly connected graph's chain.

    That is the case exactly when every period class is monochromatic in
    blue or red (the subsequent evolution is a deterministic rotation), or
    when the entire colouring is uncoloured.
    """
    ps = structure if structure is not None else period_classes(system.graph)
    c = system.colouring if colouring is None else colouring
    return bool(_class_converged(ps)(c[np.newaxis, :])[0])


def _class_converged(ps: PeriodStructure) -> Callable[[np.ndarray], np.ndarray]:
    """Vectorised converged-test over a (runs, n) colour matrix."""
    classes = [np.asarray(c, dtype=np.int64) for c in ps.classes]

    def check(colmat: np.ndarray) -> np.ndarray:
        ok = np.ones(len(colmat), dtype=bool)
        for cls in classes:
            sub = colmat[:, cls]
            ok &= (sub == sub[:, :1]).all(axis=1) & (sub[:, 0] != UNCOLOURED)
        return ok | (colmat == UNCOLOURED).all(axis=1)

    return check


def monochromatic_coloured(colmat: np.ndarray) -> np.ndarray:
    """Batch predicate: every node the same colour and that colour not uncoloured."""
    return (colmat == colmat[:, :1]).all(axis=1) & (colmat[:, 0] != UNCOLOURED)


@dataclass(frozen=True)
class ConvergenceEstimate:
    """Monte Carlo summary of rounds-to-convergence."""

    mean: float
    stderr: float
    cap_hits: int
    rounds: np.ndarray  # per-run rounds, censored at the cap
    finals: np.ndarray  # (runs, n) colourings when the estimator stopped


def estimate_convergence_time(
    system: System,
    runs: int = 128,
    round_cap: int = ROUND_CAP,
    rng: int | np.random.Generator = 0,
    predicate: Callable[[np.ndarray], np.ndarray] | None = None,
) -> ConvergenceEstimate:
    """Rounds until convergence, averaged over runs.

    The default predicate is the strongly-connected period-class rule (and
    rejects other graphs); pass e.g. `monochromatic_coloured` for chains
    whose leaf structure is known another way.  Runs hitting the round cap
    are censored at the cap and counted in `cap_hits`, not discarded.
    """
    if runs < 1 or round_cap < 0:
        raise GraphValidationError("runs must be >= 1 and round_cap >= 0")
    if predicate is None:
        predicate = _class_converged(period_classes(system.graph))
    gen = _as_generator(rng)
    colours = np.repeat(system.colouring[np.newaxis, :], runs, axis=0)
    taken = np.full(runs, -1, dtype=np.int64)
    taken[predicate(colours)] = 0
    t = 0
    while (taken < 0).any() and t < round_cap:
        t += 1
        colours = _step_batch(system.graph, colours, gen)
        newly = predicate(colours) & (taken < 0)
        taken[newly] = t
    cap_hits = int((taken < 0).sum())
    taken[taken < 0] = round_cap
    mean = float(taken.mean())
    stderr = float(taken.std(ddof=1) / np.sqrt(runs)) if runs > 1 else 0.0
    return ConvergenceEstimate(
        mean=mean, stderr=stderr, cap_hits=cap_hits, rounds=taken, finals=colours
    )


# ---------------------------------------------------------------------------
# exact expected hitting time
# ---------------------------------------------------------------------------


def expected_absorption_time(system: System, cap: int = EXACT_CAP) -> float:
    """Exact expected rounds until the chain first enters a leaf.

    Solves (I - Q) h = 1 over the reachable transient states, with Q the
    transition block among them.
    """
    space = StateSpace(system.graph, cap=cap)
    report = absorbing_analysis(system, space=space)
    leaf_states = {code for leaf in report.leaves for code in leaf.states}
    start = space.encode(system.colouring)
    if start in leaf_states:
        return 0.0
    reachable = {start}
    frontier = [start]
    while frontier:
        code = frontier.pop()
        for c2, _ in space.successors(code):
            if c2 not in reachable:
                reachable.add(c2)
                frontier.append(c2)
    transient = sorted(reachable - leaf_states)
    index = {code: i for i, code in enumerate(transient)}
    rows, cols, vals = [], [], []
    for code in transient:
        i = index[code]
        for c2, p in space.successors(code):
            j = index.get(c2)
            if j is not None:
                rows.append(i)
                cols.append(j)
                vals.append(p)
    k = len(transient)
    q = sp.csr_matrix((vals, (rows, cols)), shape=(k, k))
    h = spsolve(sp.identity(k, format="csr") - q, np.ones(k))
    return float(np.atleast_1d(h)[index[start]])
