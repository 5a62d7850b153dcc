"""Graph constructions with known behaviour.

- gen_reduction: embeds a max-coverage instance so that seeding subset
  nodes blue and counting expected blue adoptions preserves approximation
  ratios (satellites amplify each object's weight).
- gen_exp_period: a non-strongly-connected family whose single reachable
  absorbing component has 2^(n-2) states.
- gen_exp_time: a chain that provably reaches the all-blue consensus, but
  in expected time growing faster than any fixed polynomial.
- gen_hrg: random hyperbolic graphs (radial density alpha*sinh(alpha*r) up
  to radius R, uniform angle, connect within hyperbolic distance R),
  resampled until strongly connected, plus the four colouring strategies.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dynamics import BLUE, RED, System, _as_generator, all_uncoloured
from .graph import GraphValidationError, WeightedDigraph, is_strongly_connected


# ---------------------------------------------------------------------------
# max-coverage reduction
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MaxCoverageInstance:
    """Objects 0..m-1, subsets as tuples of object indices, a budget k and
    the approximation slack epsilon."""

    num_objects: int
    subsets: tuple[tuple[int, ...], ...]
    budget: int
    epsilon: float

    def __post_init__(self) -> None:
        m, l, k = self.num_objects, len(self.subsets), self.budget
        if m < 1 or l < 1:
            raise GraphValidationError("need at least one object and one subset")
        if not 0 < k < l:
            raise GraphValidationError(f"budget must satisfy 0 < k < {l}, got {k}")
        if not k < m:
            raise GraphValidationError(f"budget must satisfy k < {m}, got {k}")
        if not 0.0 < self.epsilon < 1.0:
            raise GraphValidationError(
                f"epsilon must lie in (0, 1), got {self.epsilon}"
            )
        covered = {o for s in self.subsets for o in s}
        if any(not 0 <= o < m for o in covered):
            raise GraphValidationError("subset references an object out of range")
        if covered != set(range(m)):
            missing = sorted(set(range(m)) - covered)
            raise GraphValidationError(f"objects {missing} are covered by no subset")


@dataclass(frozen=True)
class ReductionSystem:
    """The instance embedded as a system, with the horizon to evaluate at."""

    system: System
    tau: int
    d: int
    object_ids: tuple[int, ...]
    subset_ids: tuple[int, ...]
    satellite_ids: tuple[int, ...]


def gen_reduction(instance: MaxCoverageInstance) -> ReductionSystem:
    """Objects point to the subsets covering them; d satellites point to each
    object, with d = max(ceil(1/epsilon), m) and horizon tau = l*d + 1.
    Unit weights, everything initially uncoloured."""
    m, l = instance.num_objects, len(instance.subsets)
    d = max(math.ceil(1.0 / instance.epsilon), m)
    objects = tuple(range(m))
    subsets = tuple(range(m, m + l))
    satellites = tuple(range(m + l, m + l + m * d))
    labels = (
        [f"o{j + 1}" for j in range(m)]
        + [f"s{i + 1}" for i in range(l)]
        + [f"o{j + 1}^{i + 1}" for j in range(m) for i in range(d)]
    )
    edges = [
        (objects[o], subsets[i])
        for i, subset in enumerate(instance.subsets)
        for o in subset
    ]
    edges += [
        (satellites[j * d + i], objects[j]) for j in range(m) for i in range(d)
    ]
    graph = WeightedDigraph.from_edges(edges, n=m + l + m * d, labels=tuple(labels))
    system = System(graph.normalized(), all_uncoloured(graph.n))
    return ReductionSystem(
        system=system,
        tau=l * d + 1,
        d=d,
        object_ids=objects,
        subset_ids=subsets,
        satellite_ids=satellites,
    )


# ---------------------------------------------------------------------------
# exponential-period and exponential-time families
# ---------------------------------------------------------------------------


def gen_exp_period(n: int) -> System:
    """Node 1 blue, node 2 red, nodes 3..n uncoloured with half-weight edges
    to both; the only reachable absorbing component has 2^(n-2) states."""
    if n < 3:
        raise GraphValidationError(f"construction needs n >= 3, got {n}")
    edges = []
    for i in range(2, n):
        edges.append((i, 0, 0.5))
        edges.append((i, 1, 0.5))
    labels = tuple(str(i + 1) for i in range(n))
    graph = WeightedDigraph.from_edges(edges, n=n, labels=labels)
    colouring = all_uncoloured(n)
    colouring[0] = BLUE
    colouring[1] = RED
    return System(graph.normalized(), colouring)


def gen_exp_time(n: int) -> System:
    """A blue stubborn root v1 with everything else red: v_{i+1} points back
    to v_i, and every v_i (i >= 2) points forward to all later nodes.  The
    chain converges to all-blue, slowly."""
    if n < 2:
        raise GraphValidationError(f"construction needs n >= 2, got {n}")
    edges = [(i, i - 1) for i in range(1, n)]
    edges += [(i, j) for i in range(1, n) for j in range(i + 1, n)]
    labels = tuple(f"v{i + 1}" for i in range(n))
    graph = WeightedDigraph.from_edges(edges, n=n, labels=labels)
    colouring = np.full(n, RED, dtype=np.int8)
    colouring[0] = BLUE
    return System(graph.normalized(), colouring)


# ---------------------------------------------------------------------------
# random hyperbolic graphs
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HrgParams:
    n: int
    radius: float = 5.0
    alpha: float = 1.0

    def __post_init__(self) -> None:
        if self.n < 0:
            raise GraphValidationError(f"n must be >= 0, got {self.n}")
        if self.radius <= 0 or self.alpha <= 0:
            raise GraphValidationError("radius and alpha must be positive")


@dataclass(frozen=True)
class HrgSample:
    graph: WeightedDigraph
    coords: np.ndarray  # (n, 2) columns (r, theta)
    attempts: int


def sample_hrg_coords(params: HrgParams, rng: np.random.Generator) -> np.ndarray:
    """Radial coordinate by inverting the CDF (cosh(a r)-1)/(cosh(a R)-1),
    angle uniform on [0, 2 pi)."""
    u = rng.random(params.n)
    r = np.arccosh(1.0 + u * (np.cosh(params.alpha * params.radius) - 1.0)) / params.alpha
    theta = rng.random(params.n) * 2.0 * np.pi
    return np.column_stack((r, theta))


def hyperbolic_distances(coords: np.ndarray) -> np.ndarray:
    """Pairwise hyperbolic distances for polar coordinates on the disk."""
    r = coords[:, 0]
    theta = coords[:, 1]
    arg = (
        np.cosh(r)[:, None] * np.cosh(r)[None, :]
        - np.sinh(r)[:, None] * np.sinh(r)[None, :] * np.cos(theta[:, None] - theta[None, :])
    )
    out = np.arccosh(np.maximum(arg, 1.0))
    # cancellation in arg leaves ~1e-8 noise on the diagonal; pin it to zero
    np.fill_diagonal(out, 0.0)
    return out


def gen_hrg(
    params: HrgParams,
    rng: int | np.random.Generator = 0,
    max_retries: int = 1000,
) -> HrgSample:
    """Sample whole graphs until one is strongly connected.

    Nodes within hyperbolic distance `radius` get a unit-weight edge in both
    directions.  Raises after `max_retries` rejected samples.
    """
    gen = _as_generator(rng)
    if params.n == 0:
        graph = WeightedDigraph.from_edges([], n=0)
        return HrgSample(graph=graph, coords=np.zeros((0, 2)), attempts=0)
    for attempt in range(1, max_retries + 1):
        coords = sample_hrg_coords(params, gen)
        dist = hyperbolic_distances(coords)
        close = dist <= params.radius
        np.fill_diagonal(close, False)
        src, dst = np.nonzero(close)
        if params.n == 1:
            graph = WeightedDigraph.from_edges([], n=1)
            return HrgSample(graph=graph, coords=coords, attempts=attempt)
        if len(src) == 0:
            continue
        graph = WeightedDigraph.from_edges(
            list(zip(src.tolist(), dst.tolist())), n=params.n
        )
        if is_strongly_connected(graph):
            return HrgSample(graph=graph, coords=coords, attempts=attempt)
    raise GraphValidationError(
        f"no strongly connected sample in {max_retries} attempts (n={params.n}, "
        f"R={params.radius}, alpha={params.alpha})"
    )


def hrg_colouring(
    coords: np.ndarray,
    strategy: int,
    rng: int | np.random.Generator = 0,
) -> np.ndarray:
    """The four initial-colouring strategies for hyperbolic samples.

    1: the two nodes at maximal hyperbolic distance get blue (smaller id)
       and red, everything else uncoloured.
    2: i.i.d. per node with probabilities (0.01, 0.01, 0.98) for (b, r, u).
    3: i.i.d. blue/red with probability one half each.
    4: the floor(n/2) nodes hyperbolically nearest node 0 (node 0 included)
       are blue, the rest red.
    """
    n = len(coords)
    gen = _as_generator(rng)
    if strategy == 1:
        dist = hyperbolic_distances(coords)
        flat = int(np.argmax(dist))
        i, j = divmod(flat, n)
        colouring = all_uncoloured(n)
        colouring[min(i, j)] = BLUE
        colouring[max(i, j)] = RED
        return colouring
    if strategy == 2:
        return gen.choice(3, size=n, p=(0.01, 0.01, 0.98)).astype(np.int8)
    if strategy == 3:
        return gen.choice(2, size=n, p=(0.5, 0.5)).astype(np.int8)
    if strategy == 4:
        dist = hyperbolic_distances(coords)[0]
        order = np.lexsort((np.arange(n), dist))
        colouring = np.full(n, RED, dtype=np.int8)
        colouring[order[: n // 2]] = BLUE
        return colouring
    raise GraphValidationError(f"unknown colouring strategy {strategy}, expected 1..4")
