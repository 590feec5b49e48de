"""Bi-Lipschitz distortion reports, the truncated-distance witness map that
certifies lower bounds on the optimal cost ratio, and the randomized
distance-to-set embedding into a bounded integer grid.

Logs are natural throughout; log base d-1 is log x / log(d-1).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .graphs import (Graph, GraphError, bfs_distances, diameter, distance_matrix,
                     is_connected, multi_source_distances)
from .rng import derive_rng


def trunc(level: int, x: float) -> float:
    """sign(x) * min(level, |x|)."""
    if level < 0:
        raise ValueError("truncation level must be nonnegative")
    return math.copysign(min(level, abs(x)), x) if x != 0 else 0.0


@dataclass(frozen=True)
class WitnessParams:
    """Derived sizes for the witness construction at target cardinality N."""

    n: int
    d: int
    log_n_points: float   # log N, kept separately since N may be astronomical
    k: int                # truncation level, floor(log log N)
    s: int                # grid dimension, floor(log N / log(2k+1))
    s0: int               # seed count, min(n, s)
    r0: int               # radius shift, floor(log_{d-1}(n / s0))


def witness_params(g: Graph, log_n_points: float) -> WitnessParams:
    d = g.regular_degree()
    if d is None or d < 3:
        raise GraphError("witness construction requires a d-regular graph with d >= 3")
    if log_n_points < math.e:
        raise ValueError("target cardinality too small: need log N >= e so k >= 1")
    k = math.floor(math.log(log_n_points))
    s = math.floor(log_n_points / math.log(2 * k + 1))
    s0 = min(g.n, s)
    r0 = math.floor(math.log(g.n / s0) / math.log(d - 1))
    return WitnessParams(n=g.n, d=d, log_n_points=log_n_points, k=k, s=s, s0=s0, r0=r0)


@dataclass(frozen=True, eq=False)
class GridMap:
    """Map of vertices into an integer grid with sup-norm distances.

    The grid itself is never materialized; coordinates are stored per
    vertex and pairwise distances are evaluated on demand.
    """

    coords: np.ndarray  # (n, width) integer array

    @property
    def n(self) -> int:
        return self.coords.shape[0]

    def pair_distance(self, v: int, u: int) -> int:
        if self.coords.shape[1] == 0:
            return 0
        return int(np.abs(self.coords[v] - self.coords[u]).max())

    def image_distance_matrix(self, block: int = 256) -> np.ndarray:
        n = self.n
        out = np.empty((n, n), dtype=np.int64)
        c = self.coords.astype(np.int64)
        for start in range(0, n, block):
            stop = min(start + block, n)
            out[start:stop] = np.abs(c[start:stop, None, :] - c[None, :, :]).max(axis=2)
        return out

    def edge_costs(self, g: Graph) -> list[int]:
        return [self.pair_distance(u, v) for u, v in g.edges]


def witness_map(g: Graph, log_n_points: float) -> tuple[GridMap, WitnessParams]:
    """Coordinates trunc_k(dist(v, seed_i) - r0) over the first s0 vertices.

    Coordinates beyond s0 are identically zero and therefore omitted from
    the stored array; sup-norm distances are unaffected.
    """
    if not is_connected(g):
        raise GraphError("witness construction requires a connected graph")
    p = witness_params(g, log_n_points)
    coords = np.zeros((g.n, p.s0), dtype=np.int16)
    for i in range(p.s0):
        row = bfs_distances(g, i)
        for v in range(g.n):
            coords[v, i] = int(trunc(p.k, row[v] - p.r0))
    return GridMap(coords), p


@dataclass(frozen=True)
class WitnessReport:
    params: WitnessParams
    q: float
    ave: float
    dirichlet: float
    ratio: float
    max_edge_cost: int


def witness_certificate(g: Graph, log_n_points: float, q: float = 1.0) -> WitnessReport:
    """Cost-ratio report of the witness map; a certified lower bound on the
    optimal ratio for the ambient grid metric since it is the ratio of an
    actual map.  Every edge cost is at most 1 by construction."""
    grid, p = witness_map(g, log_n_points)
    n = g.n
    c = grid.coords.astype(np.int16)
    total = 0.0
    block = max(1, (1 << 22) // max(1, n * p.s0))
    for start in range(0, n, block):
        stop = min(start + block, n)
        d = np.abs(c[start:stop, None, :] - c[None, :, :]).max(axis=2)
        total += float(np.power(d.astype(np.float64), q).sum())
    ave = total / (n * n)
    edge_costs = grid.edge_costs(g)
    dir_ = float(np.power(np.asarray(edge_costs, dtype=np.float64), q).mean())
    ratio = math.inf if dir_ == 0 and ave > 0 else (ave / dir_ if dir_ > 0 else math.nan)
    return WitnessReport(params=p, q=q, ave=ave, dirichlet=dir_, ratio=ratio,
                         max_edge_cost=max(edge_costs))


# ----------------------------------------------------------------------
# distortion
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class EmbeddingReport:
    lip: float         # max image distance across an edge (edge length 1)
    colip: float       # min over vertex pairs of image distance / graph distance
    distortion: float  # lip / colip, inf when a positive-distance pair collapses
    scale: float       # the optimal scaling factor, equal to colip


def embedding_distortion(g: Graph, image_dist: np.ndarray) -> EmbeddingReport:
    """Distortion report of a map given its full image-distance matrix."""
    if not is_connected(g):
        raise GraphError("distortion is defined here for connected graphs")
    gd = distance_matrix(g)
    img = np.asarray(image_dist, dtype=np.float64)
    lip = max(float(img[u, v]) for u, v in g.edges)
    mask = ~np.eye(g.n, dtype=bool)
    with np.errstate(divide="ignore"):
        ratios = img[mask] / gd[mask]
    colip = float(ratios.min()) if g.n > 1 else 0.0
    distortion = lip / colip if colip > 0 else math.inf
    return EmbeddingReport(lip=lip, colip=colip, distortion=distortion, scale=colip)


def vertex_map_image_distances(f) -> np.ndarray:
    a = np.asarray(f.assignment)
    return f.target.dist[a[:, None], a[None, :]]


# ----------------------------------------------------------------------
# distance-to-set embedding into {0..delta}^K
# ----------------------------------------------------------------------

def grid_embedding_width(n: int, distortion_target: float, c1: float) -> tuple[int, int, int]:
    """(m, K, r): level count, total coordinates, repetitions per level."""
    if n < 2 or distortion_target < 1 or c1 <= 0:
        raise ValueError(f"domain violation: {(n, distortion_target, c1)}")
    m = math.ceil(math.log2(n)) + 1
    r = math.ceil((2.0 / c1) * n ** (3.0 / distortion_target) * math.log(n))
    return m, m * r, r


def universal_space_size(n: int, delta: int, distortion_target: float,
                         c1: float) -> tuple[int, float]:
    """(K, log |M|) for the grid {0..delta}^K hosting all n-vertex graphs
    of diameter at most delta at the given distortion."""
    _, width, _ = grid_embedding_width(n, distortion_target, c1)
    return width, width * math.log(delta + 1)


def default_delta(n: int) -> int:
    return math.floor(500.0 * math.log(n))


@dataclass(frozen=True)
class JlsResult:
    grid: GridMap
    attempts: int
    report: EmbeddingReport
    success: bool


def jls_embedding(g: Graph, distortion_target: float, c1: float, seed: int,
                  retries: int = 50, delta: int | None = None) -> JlsResult:
    """Randomized coordinates dist(v, A) for uniform sets A of dyadic sizes.

    Each coordinate is 1-Lipschitz and bounded by the diameter, so the map
    lands in {0..delta}^K whenever diam(g) <= delta.  Attempts redraw all
    sets from a fresh derived stream until the distortion target is met or
    the retry cap is exhausted; the best map found is returned either way.
    """
    if not is_connected(g):
        raise GraphError("the embedding needs a connected graph")
    n = g.n
    if delta is None:
        delta = default_delta(n)
    if diameter(g) > delta:
        raise GraphError(f"diam(g) = {diameter(g)} exceeds delta = {delta}")
    m, width, r = grid_embedding_width(n, distortion_target, c1)
    best: JlsResult | None = None
    for attempt in range(1, retries + 1):
        gen = derive_rng(seed, "jls", attempt)
        coords = np.empty((n, width), dtype=np.int64)
        col = 0
        for k in range(m):
            size = min(2 ** k, n)
            for _ in range(r):
                subset = gen.choice(n, size=size, replace=False)
                coords[:, col] = multi_source_distances(g, subset.tolist())
                col += 1
        grid = GridMap(coords)
        report = embedding_distortion(g, grid.image_distance_matrix())
        candidate = JlsResult(grid, attempt, report,
                              report.distortion <= distortion_target)
        if candidate.success:
            return candidate
        if best is None or report.distortion < best.report.distortion:
            best = candidate
    assert best is not None
    return JlsResult(best.grid, retries, best.report, False)
