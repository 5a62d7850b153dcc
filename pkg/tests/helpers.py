"""Shared builders and brute-force oracles for the test suite.

The oracles deliberately re-derive results by the dumbest correct method
available (cycle enumeration, shortest-path enumeration, full pick-vector
products, dense linear solves) so the library's optimised implementations
are checked against independent code paths.
"""

from __future__ import annotations

import math
from itertools import combinations, product

import numpy as np

from gvm import System, WeightedDigraph, colouring_from_letters, seed_apply
from gvm.graph import bfs_distances


def system_of(edges, letters, n=None):
    """System from (src, dst[, weight]) tuples and a colour-letter string."""
    g = WeightedDigraph.from_edges(edges, n=len(letters) if n is None else n)
    return System(g.normalized(), colouring_from_letters(letters))


def random_sc_graph(rng, n, extra=0, weighted=False, span=1):
    """A Hamiltonian cycle plus `extra` random chords, strongly connected.

    With span = d, chords (i, j) are restricted to (j - i) % d == 1 % d, so
    every edge advances the position-mod-d by one and every cycle length is
    a multiple of d (the graph period comes out as a multiple of d).
    """
    edges = {(i, (i + 1) % n) for i in range(n)}
    cands = [
        (i, j)
        for i in range(n)
        for j in range(n)
        if i != j and (j - i) % span == 1 % span and (i, j) not in edges
    ]
    if span == 1:
        cands += [(i, i) for i in range(n)]
    k = min(extra, len(cands))
    if k:
        for t in rng.choice(len(cands), size=k, replace=False):
            edges.add(cands[int(t)])
    rows = [
        (a, b, float(rng.uniform(0.5, 2.0)) if weighted else 1.0)
        for a, b in sorted(edges)
    ]
    return WeightedDigraph.from_edges(rows, n=n)


def random_digraph(rng, n, m, weighted=False):
    """m distinct random edges; may be disconnected and have stubborn nodes."""
    cands = [(i, j) for i in range(n) for j in range(n) if i != j]
    idx = rng.choice(len(cands), size=min(m, len(cands)), replace=False)
    rows = [
        (*cands[int(t)], float(rng.uniform(0.5, 2.0)) if weighted else 1.0)
        for t in idx
    ]
    return WeightedDigraph.from_edges(rows, n=n)


def random_colouring(rng, n, p=(1 / 3, 1 / 3, 1 / 3)):
    return rng.choice(3, size=n, p=p).astype(np.int8)


# ---------------------------------------------------------------------------
# oracles
# ---------------------------------------------------------------------------


def simple_cycle_gcd(g: WeightedDigraph) -> int:
    """gcd of all simple cycle lengths by exhaustive DFS (n <= 8 or so)."""
    adj = [g.out_edges(v)[0].tolist() for v in range(g.n)]
    best = 0
    on_path: set[int] = set()

    def dfs(start: int, v: int, depth: int) -> None:
        nonlocal best
        for w in adj[v]:
            if w == start:
                best = math.gcd(best, depth + 1)
            elif w > start and w not in on_path:
                on_path.add(w)
                dfs(start, w, depth + 1)
                on_path.discard(w)

    for s in range(g.n):
        dfs(s, s, 0)
    return best


def naive_betweenness(g: WeightedDigraph) -> np.ndarray:
    """Betweenness by enumerating every shortest path (endpoints excluded)."""
    n = g.n
    adj = [g.out_edges(v)[0].tolist() for v in range(n)]
    bc = np.zeros(n)
    for s in range(n):
        dist = bfs_distances(g, s)
        for t in range(n):
            if t == s or not np.isfinite(dist[t]):
                continue
            paths: list[list[int]] = []

            def extend(path: list[int]) -> None:
                v = path[-1]
                if v == t:
                    paths.append(list(path))
                    return
                for w in adj[v]:
                    if dist[w] == dist[v] + 1 and dist[w] <= dist[t]:
                        path.append(w)
                        extend(path)
                        path.pop()

            extend([s])
            for p in paths:
                for v in p[1:-1]:
                    bc[v] += 1.0 / len(paths)
    return bc


def pagerank_linear(g: WeightedDigraph, damping: float = 0.85) -> np.ndarray:
    """Stationary PageRank by a dense linear solve (dangling mass uniform)."""
    norm = g.normalized()
    n = norm.n
    h = norm.adjacency(dense=True)
    stub = norm.stubborn.astype(np.float64)
    a = np.eye(n) - damping * (h.T + np.outer(np.full(n, 1.0 / n), stub))
    return np.linalg.solve(a, np.full(n, (1.0 - damping) / n))


def brute_distribution(system: System, seeds, rounds: int) -> dict[tuple, float]:
    """Joint colouring distribution by enumerating full pick vectors.

    Exponential in the number of non-stubborn nodes; only for tiny systems.
    """
    g = system.graph
    active = np.flatnonzero(~g.stubborn)
    choices = [
        [(int(v), int(w), float(q)) for w, q in zip(*g.out_edges(int(v)))]
        for v in active
    ]
    start = tuple(int(c) for c in seed_apply(system, seeds).colouring)
    dist = {start: 1.0}
    for _ in range(rounds):
        nxt: dict[tuple, float] = {}
        for col, p in dist.items():
            for combo in product(*choices):
                q = p
                new = list(col)
                for v, w, pw in combo:
                    q *= pw
                    if col[w] != 2:
                        new[v] = col[w]
                key = tuple(new)
                nxt[key] = nxt.get(key, 0.0) + q
        dist = nxt
    return dist


def brute_marginals(system: System, seeds, rounds: int) -> np.ndarray:
    dist = brute_distribution(system, seeds, rounds)
    out = np.zeros((system.n, 3))
    for col, p in dist.items():
        for v, c in enumerate(col):
            out[v, c] += p
    return out


def exhaustive_best(evaluator, n: int, k: int) -> float:
    """max over all size-k seed sets of evaluator(set)."""
    return max(evaluator(list(a)) for a in combinations(range(n), k))
