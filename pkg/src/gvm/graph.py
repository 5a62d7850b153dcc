"""Weighted directed graphs over dense integer node ids.

Provides construction with validation, out-edge normalization (the
row-stochastic form the dynamics run on), strongly connected components,
the cycle-length period of a strongly connected graph together with its
period classes, the derived class graph, and hop-count distances.
"""

from __future__ import annotations

import math
import warnings
from collections import deque
from dataclasses import dataclass
from functools import cached_property

import numpy as np
import scipy.sparse as sp
from scipy.sparse import csgraph

NodeId = int


class GraphValidationError(ValueError):
    """A graph, colouring or operation precondition does not hold."""


# ---------------------------------------------------------------------------
# graph types
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WeightedDigraph:
    """Directed graph with strictly positive edge weights.

    Nodes are dense ids 0..n-1; ``labels``, when present, maps each id back
    to the token it carried in the input file.  Edge arrays are stored
    sorted by (src, dst) with duplicates already merged, so they double as
    a CSR layout via :attr:`indptr`.
    """

    n: int
    src: np.ndarray
    dst: np.ndarray
    weight: np.ndarray
    labels: tuple[str, ...] | None = None

    @classmethod
    def from_edges(
        cls,
        edges,
        n: int | None = None,
        labels: tuple[str, ...] | None = None,
    ) -> "WeightedDigraph":
        """Build a graph from (src, dst[, weight]) tuples; weight defaults to 1.

        Duplicate (src, dst) pairs are merged by summing their weights and a
        warning reports how many were folded.
        """
        rows = [(int(e[0]), int(e[1]), float(e[2]) if len(e) > 2 else 1.0) for e in edges]
        if rows:
            src = np.array([r[0] for r in rows], dtype=np.int64)
            dst = np.array([r[1] for r in rows], dtype=np.int64)
            weight = np.array([r[2] for r in rows], dtype=np.float64)
        else:
            src = np.empty(0, dtype=np.int64)
            dst = np.empty(0, dtype=np.int64)
            weight = np.empty(0, dtype=np.float64)
        if n is None:
            if not rows:
                raise GraphValidationError("cannot infer node count from an empty edge list")
            n = int(max(src.max(), dst.max())) + 1
        if n < 0:
            raise GraphValidationError(f"node count must be >= 0, got {n}")
        if labels is not None and len(labels) != n:
            raise GraphValidationError(f"got {len(labels)} labels for {n} nodes")
        if rows:
            if src.min() < 0 or dst.min() < 0 or src.max() >= n or dst.max() >= n:
                bad = next(r for r in rows if not (0 <= r[0] < n and 0 <= r[1] < n))
                raise GraphValidationError(f"edge {bad[:2]} outside node range [0, {n})")
            finite = np.isfinite(weight)
            if not finite.all() or (weight <= 0).any():
                k = int(np.argmax(~finite | (weight <= 0)))
                raise GraphValidationError(
                    f"edge ({src[k]}, {dst[k]}) has non-positive weight {weight[k]!r}"
                )
            order = np.lexsort((dst, src))
            src, dst, weight = src[order], dst[order], weight[order]
            keep = np.ones(len(src), dtype=bool)
            keep[1:] = (src[1:] != src[:-1]) | (dst[1:] != dst[:-1])
            if not keep.all():
                starts = np.flatnonzero(keep)
                weight = np.add.reduceat(weight, starts)
                src, dst = src[starts], dst[starts]
                warnings.warn(
                    f"merged {len(keep) - len(starts)} duplicate edge(s) by summing weights",
                    stacklevel=2,
                )
        g = cls(n=n, src=src, dst=dst, weight=weight,
                labels=tuple(labels) if labels is not None else None)
        return g

    @property
    def m(self) -> int:
        return len(self.src)

    @cached_property
    def indptr(self) -> np.ndarray:
        counts = np.bincount(self.src, minlength=self.n)
        indptr = np.zeros(self.n + 1, dtype=np.int64)
        np.cumsum(counts, out=indptr[1:])
        return indptr

    @cached_property
    def out_degree(self) -> np.ndarray:
        return np.diff(self.indptr)

    @cached_property
    def in_degree(self) -> np.ndarray:
        return np.bincount(self.dst, minlength=self.n)

    @cached_property
    def stubborn(self) -> np.ndarray:
        """Boolean mask of nodes with no outgoing edge (they never change colour)."""
        return self.out_degree == 0

    def out_edges(self, v: int) -> tuple[np.ndarray, np.ndarray]:
        """(destinations, weights) of v's outgoing edges."""
        lo, hi = self.indptr[v], self.indptr[v + 1]
        return self.dst[lo:hi], self.weight[lo:hi]

    def label(self, v: int) -> str:
        return self.labels[v] if self.labels is not None else str(v)

    def normalized(self) -> "NormalizedDigraph":
        """Divide every node's out-weights by their sum; stubborn rows stay empty."""
        if isinstance(self, NormalizedDigraph):
            return self
        sums = np.bincount(self.src, weights=self.weight, minlength=self.n)
        w = self.weight / sums[self.src] if self.m else self.weight
        return NormalizedDigraph(n=self.n, src=self.src, dst=self.dst, weight=w,
                                 labels=self.labels)


@dataclass(frozen=True)
class NormalizedDigraph(WeightedDigraph):
    """Graph whose out-weights sum to exactly one for every non-stubborn node."""

    def __post_init__(self) -> None:
        if self.m:
            sums = np.bincount(self.src, weights=self.weight, minlength=self.n)
            live = ~self.stubborn
            if not np.allclose(sums[live], 1.0, atol=1e-9):
                raise GraphValidationError("normalized rows must sum to 1")

    def adjacency(self, dense: bool | None = None):
        """Row-stochastic adjacency H (stubborn rows all zero).

        Dense ndarray when dense, scipy CSR otherwise; default picks dense
        for m > n^2/4.
        """
        if dense is None:
            dense = self.m > self.n * self.n / 4
        mat = sp.csr_matrix((self.weight, (self.src, self.dst)), shape=(self.n, self.n))
        return mat.toarray() if dense else mat

    @cached_property
    def _pick_tables(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Tables for vectorised neighbour sampling.

        active: non-stubborn node ids.  aug: per-edge within-row cumulative
        weight plus the rank of the edge's row among active rows, a globally
        strictly increasing array, with each row's final entry pinned to an
        exact integer boundary so a uniform draw can never leak into the
        next row.  Edge k of the CSR layout maps to destination dst[k].
        """
        active = np.flatnonzero(~self.stubborn)
        cs = np.cumsum(self.weight)
        pre = np.concatenate(([0.0], cs))
        within = cs - np.repeat(pre[self.indptr[:-1]], self.out_degree)
        row_ends = self.indptr[1:][~self.stubborn] - 1
        within[row_ends] = 1.0
        rank = np.cumsum(~self.stubborn) - 1  # rank[v] = position of v among active
        aug = within + rank[self.src]  # src of any edge is active by definition
        return active, aug, row_ends

    def sample_picks(self, uniforms: np.ndarray) -> np.ndarray:
        """Map uniforms in [0,1) to picked out-neighbours for each active node.

        ``uniforms`` has shape (..., a) where a = number of non-stubborn nodes,
        ordered by ascending node id; the result has the same shape and holds
        picked destination ids.
        """
        active, aug, row_ends = self._pick_tables
        ranks = np.arange(len(active), dtype=np.float64)
        targets = uniforms + ranks
        k = np.searchsorted(aug, targets.ravel(), side="right").reshape(uniforms.shape)
        # rank + u can round up to the next integer boundary when u is just
        # below 1.0; clamp each pick back into its own row
        np.minimum(k, row_ends, out=k)
        return self.dst[k]


# ---------------------------------------------------------------------------
# strongly connected components
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SccResult:
    """Tarjan output: components in reverse topological order of the condensation."""

    components: tuple[tuple[int, ...], ...]
    comp_of: np.ndarray
    dag_edges: frozenset[tuple[int, int]]

    @property
    def count(self) -> int:
        return len(self.components)

    @cached_property
    def leaves(self) -> tuple[int, ...]:
        """Component indices with out-degree zero in the condensation."""
        has_out = {a for a, _ in self.dag_edges}
        return tuple(i for i in range(self.count) if i not in has_out)


def strongly_connected_components(g: WeightedDigraph) -> SccResult:
    n = g.n
    indptr, indices = g.indptr, g.dst
    order = np.full(n, -1, dtype=np.int64)
    low = np.zeros(n, dtype=np.int64)
    on_stack = np.zeros(n, dtype=bool)
    comp_of = np.full(n, -1, dtype=np.int64)
    stack: list[int] = []
    components: list[tuple[int, ...]] = []
    counter = 0

    for root in range(n):
        if order[root] != -1:
            continue
        work = [(root, 0)]
        while work:
            v, ei = work.pop()
            if ei == 0:
                order[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            descended = False
            for k in range(indptr[v] + ei, indptr[v + 1]):
                w = int(indices[k])
                if order[w] == -1:
                    work.append((v, k - indptr[v] + 1))
                    work.append((w, 0))
                    descended = True
                    break
                if on_stack[w]:
                    low[v] = min(low[v], order[w])
            if descended:
                continue
            if low[v] == order[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp_of[w] = len(components)
                    comp.append(w)
                    if w == v:
                        break
                components.append(tuple(sorted(comp)))
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])

    dag = frozenset(
        (int(comp_of[a]), int(comp_of[b]))
        for a, b in zip(g.src, g.dst)
        if comp_of[a] != comp_of[b]
    )
    return SccResult(components=tuple(components), comp_of=comp_of, dag_edges=dag)


def is_strongly_connected(g: WeightedDigraph) -> bool:
    return strongly_connected_components(g).count == 1


# ---------------------------------------------------------------------------
# period and period classes
# ---------------------------------------------------------------------------


def _bfs_levels(g: WeightedDigraph, source: int) -> np.ndarray:
    level = np.full(g.n, -1, dtype=np.int64)
    level[source] = 0
    queue = deque([source])
    indptr, indices = g.indptr, g.dst
    while queue:
        v = queue.popleft()
        for k in range(indptr[v], indptr[v + 1]):
            w = int(indices[k])
            if level[w] == -1:
                level[w] = level[v] + 1
                queue.append(w)
    return level


def graph_period(g: WeightedDigraph) -> int:
    """Greatest common divisor of all cycle lengths of a strongly connected graph.

    Computed as the gcd over every edge (x, y) of level(x) + 1 - level(y),
    with levels from a BFS rooted at node 0.  A single node with no edges is
    treated as period 1.
    """
    if not is_strongly_connected(g):
        raise GraphValidationError("graph_period requires a strongly connected graph")
    if g.m == 0:
        return 1
    level = _bfs_levels(g, 0)
    gamma = 0
    for x, y in zip(g.src, g.dst):
        gamma = math.gcd(gamma, int(level[x]) + 1 - int(level[y]))
    return gamma


@dataclass(frozen=True)
class PeriodStructure:
    """Period gamma with the distance-mod-gamma equivalence classes.

    Class i holds the nodes whose BFS level from node 0 is congruent to
    i mod gamma; every edge goes from class i to class (i + 1) mod gamma.
    """

    gamma: int
    classes: tuple[tuple[int, ...], ...]
    class_of: np.ndarray


def period_classes(g: WeightedDigraph) -> PeriodStructure:
    gamma = graph_period(g)
    level = _bfs_levels(g, 0) if g.m else np.zeros(g.n, dtype=np.int64)
    class_of = level % gamma
    classes = tuple(
        tuple(np.flatnonzero(class_of == i).tolist()) for i in range(gamma)
    )
    if any(len(c) == 0 for c in classes):
        raise AssertionError("period classes must all be non-empty")
    shifted = (class_of[g.src] + 1) % gamma
    if g.m and not np.array_equal(shifted, class_of[g.dst]):
        raise AssertionError("every edge must advance its period class by one")
    return PeriodStructure(gamma=gamma, classes=classes, class_of=class_of)


@dataclass(frozen=True)
class DerivedClassGraph:
    """One period class viewed through gamma-step transitions.

    ``graph`` is row-stochastic over the class members (weights are the
    corresponding entries of H^gamma, i.e. gamma-step walk probabilities);
    ``members`` maps its dense ids back to the original node ids.
    """

    graph: NormalizedDigraph
    members: tuple[int, ...]


def derived_class_graph(
    g: WeightedDigraph,
    class_index: int = 0,
    structure: PeriodStructure | None = None,
) -> DerivedClassGraph:
    """Restrict H^gamma to one period class of a periodic strongly connected graph."""
    norm = g.normalized()
    ps = structure if structure is not None else period_classes(norm)
    if ps.gamma < 2:
        raise GraphValidationError(
            f"derived class graph requires period >= 2, got {ps.gamma}"
        )
    if not 0 <= class_index < ps.gamma:
        raise GraphValidationError(f"class index {class_index} out of range")
    members = ps.classes[class_index]
    h = norm.adjacency(dense=True)
    block = h[list(members), :]
    for _ in range(ps.gamma - 1):
        block = block @ h
    outside = np.ones(norm.n, dtype=bool)
    outside[list(members)] = False
    if block[:, outside].any():
        raise AssertionError("gamma-step walks must stay inside the class")
    w = block[:, list(members)]
    edges = [
        (i, j, w[i, j]) for i in range(len(members)) for j in range(len(members)) if w[i, j] > 0
    ]
    labels = tuple(norm.label(v) for v in members)
    sub = WeightedDigraph.from_edges(edges, n=len(members), labels=labels)
    derived = NormalizedDigraph(n=sub.n, src=sub.src, dst=sub.dst,
                                weight=sub.weight, labels=sub.labels)
    return DerivedClassGraph(graph=derived, members=members)


# ---------------------------------------------------------------------------
# distances
# ---------------------------------------------------------------------------


def bfs_distances(g: WeightedDigraph, source: int) -> np.ndarray:
    """Hop counts from source along edge direction; unreachable nodes get inf."""
    level = _bfs_levels(g, source)
    out = level.astype(np.float64)
    out[level == -1] = np.inf
    return out


@dataclass(frozen=True)
class DistanceReport:
    matrix: np.ndarray  # (n, n) hop counts, inf where unreachable
    diameter: int


def distances_and_diameter(g: WeightedDigraph) -> DistanceReport:
    """All-pairs hop distances (O(n^2) memory) and the largest finite one."""
    adj = sp.csr_matrix(
        (np.ones(g.m, dtype=np.int8), (g.src, g.dst)), shape=(g.n, g.n)
    )
    dist = csgraph.shortest_path(adj, method="D", unweighted=True)
    finite = dist[np.isfinite(dist)]
    return DistanceReport(matrix=dist, diameter=int(finite.max()) if finite.size else 0)
