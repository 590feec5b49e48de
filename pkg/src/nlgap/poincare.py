"""Empirical statistics of vertex maps, concentration classification,
Dirichlet forms, per-map cost ratios, and the exact / heuristic optimal
ratio over all maps of a graph into a finite metric space.

Sums over vertex pairs are always over ordered pairs (v, u) in [n]^2,
including v = u, normalized by n^2; edge sums are over unordered edges,
normalized by |E|.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .graphs import Graph, distance_matrix, is_connected, lambda2
from .metrics import FiniteMetric, MetricError
from .rng import derive_rng


class CapExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class VertexMap:
    """Assignment of graph vertices to points of a finite metric space."""

    target: FiniteMetric
    assignment: tuple[int, ...]

    def __post_init__(self):
        if any(not 0 <= a < self.target.size for a in self.assignment):
            raise MetricError("assignment", (), "map value out of range of the target space")

    @property
    def n(self) -> int:
        return len(self.assignment)

    def is_constant(self) -> bool:
        return len(set(self.assignment)) <= 1

    def point_counts(self) -> np.ndarray:
        return np.bincount(np.asarray(self.assignment), minlength=self.target.size)


@dataclass(frozen=True)
class GammaReport:
    """Per-map statistics: average, Dirichlet form, their ratio, quantile,
    and the concentration verdict for the supplied (K, q, tau)."""

    q: float
    ave: float
    dirichlet: float
    ratio: float          # ave/dirichlet; inf if dirichlet = 0 < ave; nan if degenerate
    degenerate: bool      # both sums vanish (constant on every component)
    quantile_tau: float
    tau: float
    concentration_k: float
    concentrated: bool


def _meets(count: int, tau, nsq: int) -> bool:
    """count >= tau * nsq, exactly when tau is a Fraction."""
    if isinstance(tau, Fraction):
        return count * tau.denominator >= tau.numerator * nsq
    return count >= tau * nsq


def empirical_average(f: VertexMap, q: float) -> float:
    """Mean of pairwise image cost over all n^2 ordered vertex pairs."""
    if q <= 0:
        raise ValueError("exponent must be positive")
    cnt = f.point_counts().astype(np.float64)
    costs = np.power(f.target.dist, q)
    return float(cnt @ costs @ cnt) / (f.n * f.n)


def empirical_quantile(f: VertexMap, tau) -> float:
    """Smallest threshold t whose sublevel pair count reaches tau * n^2.

    Realized as the infimum over t > 0, so when pairs at distance zero
    already reach the mass the answer is 0 even though no positive t is
    the minimizer.
    """
    if not 0 < tau < 1:
        raise ValueError("quantile level must lie in (0,1)")
    n = f.n
    nsq = n * n
    cnt = f.point_counts()
    count = int((cnt.astype(np.int64) ** 2).sum())  # ordered pairs at distance 0
    if _meets(count, tau, nsq):
        return 0.0
    dist = f.target.dist
    order = []
    for v in np.unique(dist):
        if v > 0:
            order.append(float(v))
    for t in order:
        mask = (dist > 0) & (dist <= t)
        count_at = count + int(cnt @ mask.astype(np.int64) @ cnt)
        if _meets(count_at, tau, nsq):
            return t
    raise AssertionError("unreachable: total pair count always reaches tau * n^2")


def is_concentrated(f: VertexMap, k_const: float, q: float, tau) -> bool:
    """Empirical q-average bounded by k_const times the tau-quantile^q."""
    if k_const <= 0 or q < 1:
        raise ValueError("need K > 0 and q >= 1")
    return empirical_average(f, q) <= k_const * empirical_quantile(f, tau) ** q


def dirichlet(g: Graph, f: VertexMap, q: float) -> float:
    """Mean image cost over the edges of the graph."""
    if f.n != g.n:
        raise ValueError(f"map length {f.n} != graph order {g.n}")
    if g.m == 0:
        raise ValueError("graph has no edges")
    a = f.assignment
    costs = np.power(f.target.dist, q)
    return float(sum(costs[a[u], a[v]] for u, v in g.edges)) / g.m


def gamma_of_map(g: Graph, f: VertexMap, q: float,
                 concentration_k: float | None = None, tau=Fraction(1, 2)) -> GammaReport:
    """Full statistics report for one map; ratio conventions:
    inf when only the edge sum vanishes, degenerate when both vanish."""
    ave = empirical_average(f, q)
    dir_ = dirichlet(g, f, q)
    if dir_ > 0:
        ratio, degenerate = ave / dir_, False
    elif ave > 0:
        ratio, degenerate = math.inf, False
    else:
        ratio, degenerate = math.nan, True
    if concentration_k is None:
        concentration_k = 5.0 ** q
    quant = empirical_quantile(f, tau)
    conc = ave <= concentration_k * quant ** q
    return GammaReport(q=q, ave=ave, dirichlet=dir_, ratio=ratio, degenerate=degenerate,
                       quantile_tau=quant, tau=float(tau), concentration_k=concentration_k,
                       concentrated=conc)


# ----------------------------------------------------------------------
# bulk enumeration over all maps
# ----------------------------------------------------------------------

def _decode_maps(indices: np.ndarray, n: int, n_points: int) -> np.ndarray:
    """Mixed-radix decode; vertex 0 is the most significant digit, so row
    order equals lexicographic order of assignment tuples."""
    out = np.empty((indices.size, n), dtype=np.int64)
    rem = indices.copy()
    for v in range(n - 1, -1, -1):
        out[:, v] = rem % n_points
        rem //= n_points
    return out


def map_cost_sums(g: Graph, metric: FiniteMetric, q: float,
                  chunk: int = 1 << 18, cap: int = 10 ** 8):
    """Yield (indices, pair_sum, edge_sum) over all N^n maps in chunks.

    pair_sum is the sum over ordered vertex pairs of the image cost and
    edge_sum the plain sum over edges; divide by n^2 and |E| for averages.
    """
    n, n_points = g.n, metric.size
    total = n_points ** n
    if total > cap:
        raise CapExceeded(
            f"{n_points}^{n} = {total} maps exceeds the exhaustive cap {cap}; "
            "use gamma_lower_search instead"
        )
    costs = np.power(metric.dist, q)
    pairs = [(v, u) for v in range(n) for u in range(v + 1, n)]
    for start in range(0, total, chunk):
        idx = np.arange(start, min(start + chunk, total), dtype=np.int64)
        maps = _decode_maps(idx, n, n_points)
        pair_sum = np.zeros(idx.size, dtype=np.float64)
        for v, u in pairs:
            pair_sum += costs[maps[:, v], maps[:, u]]
        pair_sum *= 2.0  # ordered pairs; diagonal contributes 0
        edge_sum = np.zeros(idx.size, dtype=np.float64)
        for v, u in g.edges:
            edge_sum += costs[maps[:, v], maps[:, u]]
        yield idx, maps, pair_sum, edge_sum


@dataclass(frozen=True)
class GammaExactResult:
    gamma: float | None           # None when no non-degenerate map exists
    witness: VertexMap | None
    maps_evaluated: int


def gamma_exact(g: Graph, metric: FiniteMetric, q: float,
                cap: int = 10 ** 8) -> GammaExactResult:
    """Supremum of ave/dirichlet over all non-degenerate maps, by exhaustion.

    Degenerate 0/0 maps (constant per component) impose no constraint and
    are skipped.  The witness is the lexicographically smallest argmax.
    """
    if not is_connected(g):
        raise ValueError("gamma_exact requires a connected graph")
    n, n_points = g.n, metric.size
    best = -math.inf
    best_assignment: tuple[int, ...] | None = None
    total = 0
    for idx, maps, pair_sum, edge_sum in map_cost_sums(g, metric, q, cap=cap):
        total += idx.size
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(edge_sum > 0, (pair_sum / (n * n)) / (edge_sum / g.m), -math.inf)
        pos = int(np.argmax(ratio))
        if ratio[pos] > best:
            best = float(ratio[pos])
            best_assignment = tuple(int(x) for x in maps[pos])
    if best_assignment is None or best == -math.inf:
        return GammaExactResult(None, None, total)
    return GammaExactResult(best, VertexMap(metric, best_assignment), total)


def gamma_lower_search(g: Graph, metric: FiniteMetric, q: float,
                       iters: int, seed: int,
                       start: tuple[int, ...] | None = None) -> GammaExactResult:
    """Heuristic lower bound: random restarts plus single-vertex hill climbing.

    iters counts improvement steps across restarts.  The result never
    exceeds the exact optimum because every reported value is the ratio of
    an actual map.  Deterministic given the seed.
    """
    if iters < 1:
        raise ValueError("iters must be >= 1")
    if not is_connected(g):
        raise ValueError("gamma_lower_search requires a connected graph")
    n, n_points = g.n, metric.size
    costs = np.power(metric.dist, q)
    scale = g.m / (n * n)  # ratio = scale * pair_sum / edge_sum

    def full_sums(a: np.ndarray) -> tuple[np.ndarray, float, float]:
        cnt = np.bincount(a, minlength=n_points).astype(np.float64)
        pair = float(cnt @ costs @ cnt)
        edge = float(sum(costs[a[u], a[v]] for u, v in g.edges))
        return cnt, pair, edge

    def ratio(pair: float, edge: float) -> float:
        return scale * pair / edge if edge > 0 else -math.inf

    def fresh(restart: int) -> np.ndarray:
        gen = derive_rng(seed, "gamma-search", restart)
        a = gen.integers(0, n_points, size=n)
        if len(set(a.tolist())) <= 1 and n_points > 1:
            a[int(gen.integers(0, n))] = (a[0] + 1) % n_points
        return a

    if start is not None:
        current = np.asarray(start, dtype=np.int64).copy()
        if len(set(current.tolist())) <= 1 and n_points > 1:
            current[0] = (current[0] + 1) % n_points
    else:
        current = fresh(0)
    cnt, pair, edge = full_sums(current)
    best = ratio(pair, edge)
    best_map = current.copy()
    restart = 0
    steps = 0
    while steps < iters:
        base = ratio(pair, edge)
        move = None
        move_ratio = base
        # steepest single-vertex ascent: candidate sums in O(N^2 + N d) per vertex
        for v in range(n):
            old = int(current[v])
            nbr_vals = current[[u for u in g.adjacency[v]]]
            pair_new = pair + 2.0 * (costs @ cnt - costs[old] @ cnt - costs[:, old])
            edge_new = edge + costs[:, nbr_vals].sum(axis=1) - costs[old, nbr_vals].sum()
            with np.errstate(divide="ignore", invalid="ignore"):
                ratios = np.where(edge_new > 0, scale * pair_new / edge_new, -math.inf)
            ratios[old] = -math.inf
            x = int(np.argmax(ratios))
            if ratios[x] > move_ratio:
                move_ratio = float(ratios[x])
                move = (v, x, float(pair_new[x]), float(edge_new[x]))
        if move is not None:
            v, x, pair, edge = move
            cnt[current[v]] -= 1
            cnt[x] += 1
            current[v] = x
            steps += 1
            if move_ratio > best:
                # re-derive the sums so the recorded value is drift-free
                cnt, pair, edge = full_sums(current)
                exact_now = ratio(pair, edge)
                if exact_now > best:
                    best, best_map = exact_now, current.copy()
        else:
            restart += 1
            steps += 1
            current = fresh(restart)
            cnt, pair, edge = full_sums(current)
            r = ratio(pair, edge)
            if r > best:
                best, best_map = r, current.copy()
    if best == -math.inf:
        return GammaExactResult(None, None, steps)
    return GammaExactResult(best, VertexMap(metric, tuple(int(x) for x in best_map)), steps)


def gamma_euclidean_sq(g: Graph) -> float:
    """d / (2 (d - lambda2)): the optimal constant for squared-Euclidean costs."""
    d = g.regular_degree()
    if d is None:
        raise ValueError("gamma_euclidean_sq requires a regular graph")
    if not is_connected(g):
        raise ValueError("gamma_euclidean_sq requires a connected graph")
    return d / (2.0 * (d - lambda2(g)))


@dataclass(frozen=True)
class AverageDistortionReport:
    ratio: float            # sum of image distances over sum of graph distances
    edge_lipschitz: float   # max image distance across an edge
    distortion_lower: float  # edge_lipschitz / ratio, scale-invariant


def average_distortion(g: Graph, f: VertexMap) -> AverageDistortionReport:
    """Average scaling of a map plus the distortion lower bound it certifies.

    ratio lies between the optimal scale s and s*D, and the edge Lipschitz
    estimate is at most s*D, so their quotient never exceeds the
    bi-Lipschitz distortion of f.
    """
    if not is_connected(g):
        raise ValueError("average distortion requires a connected graph")
    if f.is_constant():
        raise ValueError("constant maps have no average distortion")
    gd = distance_matrix(g)
    a = np.asarray(f.assignment)
    img = f.target.dist[a[:, None], a[None, :]]
    ratio = float(img.sum()) / float(gd.sum())
    lip = max(float(f.target.dist[f.assignment[u], f.assignment[v]]) for u, v in g.edges)
    return AverageDistortionReport(ratio=ratio, edge_lipschitz=lip,
                                   distortion_lower=lip / ratio)


# ----------------------------------------------------------------------
# vectorized per-map statistics (acceptance machinery)
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class MapStatistics:
    """Arrays indexed by map (base-N counter order over all N^n maps)."""

    qs: tuple[float, ...]
    ave: dict[float, np.ndarray]
    dirichlet: dict[float, np.ndarray]
    quantile: dict[object, np.ndarray]   # keyed by tau
    nondegenerate: np.ndarray            # edge sum positive


def enumerate_map_statistics(g: Graph, metric: FiniteMetric, qs,
                             taus=(Fraction(1, 2),), cap: int = 10 ** 7) -> MapStatistics:
    """ave, dirichlet and quantiles for every map of g into the metric.

    Intended for small universes (N^n <= cap); the acceptance suite runs
    its exhaustive inequality checks on top of these arrays.
    """
    n, n_points = g.n, metric.size
    total = n_points ** n
    if total > cap:
        raise CapExceeded(f"{total} maps exceed bulk-statistics cap {cap}")
    qs = tuple(qs)
    idx = np.arange(total, dtype=np.int64)
    maps = _decode_maps(idx, n, n_points)
    counts = np.zeros((total, n_points), dtype=np.int64)
    for x in range(n_points):
        counts[:, x] = (maps == x).sum(axis=1)
    ave: dict[float, np.ndarray] = {}
    diri: dict[float, np.ndarray] = {}
    for q in qs:
        costs = np.power(metric.dist, q)
        pair = np.einsum("mx,xy,my->m", counts, costs, counts)
        ave[q] = pair / (n * n)
        edge = np.zeros(total, dtype=np.float64)
        for v, u in g.edges:
            edge += costs[maps[:, v], maps[:, u]]
        diri[q] = edge / g.m
    quant: dict[object, np.ndarray] = {}
    dist = metric.dist
    values = [float(v) for v in np.unique(dist) if v > 0]
    for tau in taus:
        nsq = n * n
        thresh = (float(Fraction(tau)) if isinstance(tau, Fraction) else float(tau)) * nsq
        cum = np.einsum("mx,xy,my->m", counts, (dist == 0).astype(np.int64), counts)
        out = np.full(total, np.nan)
        done = cum >= thresh - 1e-9  # counts are integers; threshold is tau*n^2
        out[done] = 0.0
        for t in values:
            mask = (dist > 0) & (dist <= t)
            cum_t = cum + np.einsum("mx,xy,my->m", counts, mask.astype(np.int64), counts)
            newly = (~done) & (cum_t >= thresh - 1e-9)
            out[newly] = t
            done |= newly
        quant[tau] = out
    nondeg = diri[qs[0]] > 0
    return MapStatistics(qs=qs, ave=ave, dirichlet=diri, quantile=quant, nondegenerate=nondeg)
