"""Finite metric spaces: validation, snowflakes, aspect-ratio classification,
the truncated-copies reduction to well-conditioned spaces, and the concrete
metric constructions used by the experiments."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .graphs import Graph, distance_matrix, is_connected
from .rng import derive_rng


class MetricError(ValueError):
    """A metric axiom failed; carries the axiom name and witnessing indices."""

    def __init__(self, kind: str, indices: tuple, message: str):
        super().__init__(message)
        self.kind = kind
        self.indices = indices


@dataclass(frozen=True, eq=False)
class FiniteMetric:
    """N-point metric space given by its full distance matrix."""

    dist: np.ndarray
    labels: tuple | None = None

    @property
    def size(self) -> int:
        return self.dist.shape[0]

    def diam(self) -> float:
        return float(self.dist.max()) if self.size > 1 else 0.0

    def min_distance(self) -> float:
        n = self.size
        if n < 2:
            raise MetricError("size", (n,), "min distance needs N >= 2")
        off = self.dist[~np.eye(n, dtype=bool)]
        return float(off.min())


@dataclass(frozen=True)
class CostMatrix:
    """Elementwise q-th power of a metric; for q > 1 this is not a metric."""

    values: np.ndarray
    q: float


def cost_matrix(metric: FiniteMetric, q: float) -> CostMatrix:
    if q <= 0:
        raise MetricError("exponent", (q,), "cost exponent must be positive")
    return CostMatrix(np.power(metric.dist, q), q)


def validate(dist, labels=None, tol: float | None = None) -> FiniteMetric:
    """Check the metric axioms and wrap the matrix.

    Raises MetricError naming the first violated axiom (asymmetry, negative
    entry, nonzero diagonal, zero off-diagonal, triangle inequality) with
    the witnessing indices.  Triangle checks are exact up to an absolute
    tolerance of 1e-12 * diam to absorb float noise in constructions.
    """
    a = np.asarray(dist, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise MetricError("shape", a.shape, f"distance matrix must be square, got {a.shape}")
    n = a.shape[0]
    bad = np.argwhere(a != a.T)
    if bad.size:
        i, j = map(int, bad[0])
        raise MetricError("asymmetry", (i, j), f"dist[{i},{j}] != dist[{j},{i}]")
    bad = np.argwhere(a < 0)
    if bad.size:
        i, j = map(int, bad[0])
        raise MetricError("negative", (i, j), f"dist[{i},{j}] = {a[i, j]} < 0")
    diag = np.argwhere(np.diag(a) != 0)
    if diag.size:
        i = int(diag[0][0])
        raise MetricError("diagonal", (i,), f"dist[{i},{i}] = {a[i, i]} != 0")
    off = ~np.eye(n, dtype=bool)
    bad = np.argwhere((a == 0) & off)
    if bad.size:
        i, j = map(int, bad[0])
        raise MetricError("zero-off-diagonal", (i, j), f"dist[{i},{j}] = 0 for i != j")
    if tol is None:
        tol = 1e-12 * (float(a.max()) if n > 1 else 0.0)
    for j in range(n):
        slack = a - (a[:, j:j + 1] + a[j:j + 1, :])
        bad = np.argwhere(slack > tol)
        if bad.size:
            i, k = map(int, bad[0])
            raise MetricError(
                "triangle", (i, k, j),
                f"dist[{i},{k}] = {a[i, k]} > dist[{i},{j}] + dist[{j},{k}] = {a[i, j] + a[j, k]}",
            )
    a = a.copy()
    a.flags.writeable = False
    return FiniteMetric(a, tuple(labels) if labels is not None else None)


def snowflake(metric: FiniteMetric, eps: float) -> FiniteMetric:
    """The metric with every distance raised to the power 1 - eps."""
    if not 0.0 < eps < 1.0:
        raise MetricError("exponent", (eps,), "snowflake exponent must lie in (0,1)")
    return validate(np.power(metric.dist, 1.0 - eps), metric.labels)


def aspect_ratio(metric: FiniteMetric) -> float:
    """diam / min positive distance."""
    return metric.diam() / metric.min_distance()


def is_well_conditioned(metric: FiniteMetric) -> bool:
    """Aspect ratio at most e^N."""
    return aspect_ratio(metric) <= math.exp(metric.size)


def uniform_metric(n_points: int) -> FiniteMetric:
    if n_points < 2:
        raise MetricError("size", (n_points,), "uniform metric needs N >= 2")
    return validate(np.ones((n_points, n_points)) - np.eye(n_points))


def path_metric(g: Graph) -> FiniteMetric:
    """Shortest-path metric of a connected graph."""
    if not is_connected(g):
        raise MetricError("connectivity", (), "path metric needs a connected graph")
    return validate(distance_matrix(g).astype(np.float64))


def linf_grid(k: int, s: int, point_cap: int = 10 ** 6) -> FiniteMetric:
    """Sup-norm metric on the integer grid {-k,..,k}^s, with coordinate labels.

    Stores the full dense matrix, so keep (2k+1)^s small; point_cap guards
    the point count only.
    """
    if k < 0 or s < 1:
        raise MetricError("parameters", (k, s), "need k >= 0 and s >= 1")
    count = (2 * k + 1) ** s
    if count > point_cap:
        raise MetricError("cap", (count,), f"(2k+1)^s = {count} exceeds cap {point_cap}")
    pts = np.array(list(itertools.product(range(-k, k + 1), repeat=s)), dtype=np.int64)
    dist = np.abs(pts[:, None, :] - pts[None, :, :]).max(axis=2).astype(np.float64)
    return validate(dist, labels=[tuple(p) for p in pts])


def random_euclidean_metric(n_points: int, seed: int, dim: int = 2) -> FiniteMetric:
    """Distances of random points in [0,1]^dim; always a valid metric."""
    gen = derive_rng(seed, "metric", n_points, dim)
    pts = gen.random((n_points, dim))
    diff = pts[:, None, :] - pts[None, :, :]
    dist = np.sqrt((diff ** 2).sum(axis=2))
    np.fill_diagonal(dist, 0.0)
    return validate(np.maximum(dist, dist.T))


# ----------------------------------------------------------------------
# reduction to well-conditioned spaces
# ----------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class ReducedMetric:
    """Disjoint union of truncated copies of a base metric, one per scale.

    Cluster t holds the copy truncated at scale taus[t]; point x of the base
    space sits at flat index t * base_size + x.  Cross-cluster distance is
    n^2 and within-cluster distances are min(n^2, d/tau + 1/n^2).
    """

    metric: FiniteMetric
    taus: tuple[float, ...]   # distinct base distances, ascending
    base_size: int
    n: int

    def flat_index(self, cluster: int, point: int) -> int:
        return cluster * self.base_size + point

    def cluster_of_scale(self, tau: float) -> int:
        for t, val in enumerate(self.taus):
            if math.isclose(val, tau, rel_tol=1e-12, abs_tol=0.0):
                return t
        raise MetricError("scale", (tau,), f"{tau} is not a realized distance scale")


def _distinct_scales(metric: FiniteMetric) -> list[float]:
    n = metric.size
    off = metric.dist[~np.eye(n, dtype=bool)]
    scales: list[float] = []
    for v in np.unique(off):
        v = float(v)
        if not scales or v > scales[-1] * (1 + 1e-12):
            scales.append(v)
    return scales


def well_conditioned_reduction(metric: FiniteMetric, n: int) -> ReducedMetric:
    """Build the disjoint union of truncated copies, one per distance scale.

    The result always validates, has between N and N^3 points, diameter at
    most n^2 and minimum distance at least 1/n^2 (aspect ratio <= n^4).
    Clusters are ordered by increasing scale.
    """
    if n < 2 or metric.size < 2:
        raise MetricError("parameters", (n, metric.size), "reduction needs n >= 2, N >= 2")
    taus = _distinct_scales(metric)
    big = float(n * n)
    small = 1.0 / (n * n)
    nn = metric.size
    total = nn * len(taus)
    out = np.full((total, total), big, dtype=np.float64)
    for t, tau in enumerate(taus):
        block = np.minimum(big, metric.dist / tau + small)
        np.fill_diagonal(block, 0.0)
        sl = slice(t * nn, (t + 1) * nn)
        out[sl, sl] = block
    labels = [(tau, x) for tau in taus for x in range(nn)]
    return ReducedMetric(validate(out, labels=labels), tuple(taus), nn, n)


def lift_assignment(assignment, metric: FiniteMetric, reduced: ReducedMetric) -> list[int]:
    """Send a vertex->point assignment into the cluster of its maximum spread.

    The relevant scale tau(f) is the largest pairwise distance between image
    points; constant assignments have no positive scale and are rejected.
    """
    points = sorted(set(assignment))
    tau = 0.0
    for x, y in itertools.combinations(points, 2):
        tau = max(tau, float(metric.dist[x, y]))
    if tau == 0.0:
        raise MetricError("constant", (), "constant assignments have no scale to lift")
    cluster = reduced.cluster_of_scale(tau)
    return [reduced.flat_index(cluster, x) for x in assignment]
