"""Seed-set selection for adoption maximisation.

Greedy selection under any objective evaluator (the objective is monotone
and submodular, so greedy carries the usual 1 - 1/e guarantee against the
best budget-k set), plus the centrality rankings used as baselines:
in-degree, out-degree, harmonic closeness on out-distances, betweenness,
and PageRank.  Ties everywhere break toward the smaller node id.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .dynamics import RED, System, make_evaluator
from .graph import GraphValidationError, WeightedDigraph, bfs_distances

CENTRALITIES = ("indeg", "outdeg", "closeness", "betweenness", "pagerank")
METHODS = ("greedy",) + CENTRALITIES + tuple(c + "_red" for c in CENTRALITIES)


@dataclass(frozen=True)
class StrategyResult:
    """Selected seed order with the objective value at every budget prefix."""

    method: str
    nodes: tuple[int, ...]
    values: tuple[float, ...]  # F at budgets 1..len(values)
    evaluator: str
    empty_value: float

    def gains(self) -> tuple[float, ...]:
        prev = (self.empty_value,) + self.values[:-1]
        return tuple(v - p for v, p in zip(self.values, prev))


def greedy_seed(
    system: System,
    budget: int,
    rounds: int,
    evaluator: str = "marginal",
    candidates: Iterable[int] | None = None,
    **options,
) -> StrategyResult:
    """Pick up to `budget` seeds, each maximising the evaluator's gain.

    Candidates default to every node, including already-coloured ones (a
    blue node's marginal gain is simply ~0).  Evaluations within one
    iteration are independent; this implementation runs them in ascending
    node order so ties resolve to the smallest id.
    """
    if budget < 0:
        raise GraphValidationError("budget must be >= 0")
    pool = sorted(set(int(v) for v in candidates)) if candidates is not None \
        else list(range(system.n))
    if pool and (pool[0] < 0 or pool[-1] >= system.n):
        raise GraphValidationError(f"candidate outside node range [0, {system.n})")
    f = make_evaluator(system, rounds, evaluator, **options)
    empty_value = f([])
    chosen: list[int] = []
    values: list[float] = []
    remaining = list(pool)
    for _ in range(min(budget, len(pool))):
        best_v = -1
        best_val = -np.inf
        for v in remaining:
            val = f(chosen + [v])
            if val > best_val:
                best_v, best_val = v, val
        chosen.append(best_v)
        remaining.remove(best_v)
        values.append(best_val)
    return StrategyResult(
        method="greedy",
        nodes=tuple(chosen),
        values=tuple(values),
        evaluator=evaluator,
        empty_value=empty_value,
    )


# ---------------------------------------------------------------------------
# centralities
# ---------------------------------------------------------------------------


def in_degree_scores(g: WeightedDigraph) -> np.ndarray:
    return g.in_degree.astype(np.float64)


def out_degree_scores(g: WeightedDigraph) -> np.ndarray:
    return g.out_degree.astype(np.float64)


def harmonic_closeness_scores(g: WeightedDigraph) -> np.ndarray:
    """Sum over reachable targets of 1/hop-distance, per source node."""
    scores = np.zeros(g.n)
    for v in range(g.n):
        d = bfs_distances(g, v)
        finite = np.isfinite(d) & (d > 0)
        scores[v] = float((1.0 / d[finite]).sum())
    return scores


def betweenness_scores(g: WeightedDigraph) -> np.ndarray:
    """Brandes betweenness on the unweighted digraph, endpoints excluded."""
    n = g.n
    indptr, indices = g.indptr, g.dst
    bc = np.zeros(n)
    for s in range(n):
        visited: list[int] = []
        preds: list[list[int]] = [[] for _ in range(n)]
        sigma = np.zeros(n)
        sigma[s] = 1.0
        dist = np.full(n, -1, dtype=np.int64)
        dist[s] = 0
        queue = deque([s])
        while queue:
            v = queue.popleft()
            visited.append(v)
            for k in range(indptr[v], indptr[v + 1]):
                w = int(indices[k])
                if dist[w] < 0:
                    dist[w] = dist[v] + 1
                    queue.append(w)
                if dist[w] == dist[v] + 1:
                    sigma[w] += sigma[v]
                    preds[w].append(v)
        delta = np.zeros(n)
        for w in reversed(visited):
            for v in preds[w]:
                delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w])
            if w != s:
                bc[w] += delta[w]
    return bc


def pagerank_scores(
    g: WeightedDigraph,
    damping: float = 0.85,
    tol: float = 1e-10,
    max_iter: int = 200,
) -> np.ndarray:
    """Power iteration on the weight-normalized graph until the L1 residual
    drops below `tol` or `max_iter` rounds pass; the mass of out-degree-zero
    nodes is redistributed uniformly."""
    norm = g.normalized()
    n = norm.n
    ht = norm.adjacency(dense=False).T.tocsr()
    stub = norm.stubborn
    x = np.full(n, 1.0 / n)
    for _ in range(max_iter):
        dangling = float(x[stub].sum())
        nxt = damping * (ht @ x + dangling / n) + (1.0 - damping) / n
        if float(np.abs(nxt - x).sum()) < tol:
            return nxt
        x = nxt
    return x


_SCORERS = {
    "indeg": in_degree_scores,
    "outdeg": out_degree_scores,
    "closeness": harmonic_closeness_scores,
    "betweenness": betweenness_scores,
    "pagerank": pagerank_scores,
}


def centrality_rank(system: System, method: str, red_only: bool = False) -> list[int]:
    """All nodes ordered by descending centrality, node id breaking ties.

    With red_only, the ranking is filtered to the initially red nodes (the
    relative order is the unfiltered one).
    """
    base = method[:-4] if method.endswith("_red") else method
    if method.endswith("_red"):
        red_only = True
    scorer = _SCORERS.get(base)
    if scorer is None:
        raise GraphValidationError(
            f"unknown centrality {method!r}, expected one of {CENTRALITIES}"
        )
    scores = scorer(system.graph)
    order = np.lexsort((np.arange(system.n), -scores))
    if red_only:
        red = system.colouring == RED
        return [int(v) for v in order if red[v]]
    return [int(v) for v in order]


def evaluate_strategy(
    system: System,
    node_order: Sequence[int],
    budget: int,
    rounds: int,
    evaluator: str = "marginal",
    method: str = "ranking",
    **options,
) -> StrategyResult:
    """Objective value of every budget prefix of a node ranking.

    Rankings shorter than the budget are padded with the remaining nodes in
    ascending id order.
    """
    if budget < 0:
        raise GraphValidationError("budget must be >= 0")
    order = list(dict.fromkeys(int(v) for v in node_order))
    if order and (min(order) < 0 or max(order) >= system.n):
        raise GraphValidationError(f"ranked node outside range [0, {system.n})")
    if len(order) < budget:
        present = set(order)
        order += [v for v in range(system.n) if v not in present]
    order = order[: min(budget, system.n)]
    f = make_evaluator(system, rounds, evaluator, **options)
    empty_value = f([])
    values = [f(order[:b]) for b in range(1, budget + 1)]
    return StrategyResult(
        method=method,
        nodes=tuple(order),
        values=tuple(values),
        evaluator=evaluator,
        empty_value=empty_value,
    )
