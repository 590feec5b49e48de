"""Simple undirected graphs: distances, expansion statistics, spectra, and
uniform random d-regular generation.

Vertices are 0..n-1.  Graphs are immutable after construction and safe to
share across workers.  The distance convention for vertices in different
components is n (the vertex count), not infinity, so all distance
arithmetic stays in integers.
"""
from __future__ import annotations

import itertools
import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .rng import derive_rng


class GraphError(ValueError):
    pass


@dataclass(frozen=True)
class Graph:
    """Immutable simple graph on [n] with cached adjacency."""

    n: int
    edges: tuple[tuple[int, int], ...]      # lexicographically sorted, u < v
    adjacency: tuple[tuple[int, ...], ...]  # sorted neighbour lists

    @property
    def m(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def degrees(self) -> tuple[int, ...]:
        return tuple(len(nbrs) for nbrs in self.adjacency)

    def regular_degree(self) -> int | None:
        """The common degree, or None if the graph is irregular."""
        degs = set(self.degrees())
        return degs.pop() if len(degs) == 1 else None

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adjacency[u]


def graph_from_edges(n: int, edges) -> Graph:
    """Build and validate a simple graph from an iterable of vertex pairs."""
    if n < 0:
        raise GraphError("vertex count must be nonnegative")
    seen: set[tuple[int, int]] = set()
    for u, v in edges:
        if not (0 <= u < n and 0 <= v < n):
            raise GraphError(f"edge ({u},{v}) out of range for n={n}")
        if u == v:
            raise GraphError(f"self-loop at vertex {u}")
        e = (u, v) if u < v else (v, u)
        if e in seen:
            raise GraphError(f"duplicate edge {e}")
        seen.add(e)
    sorted_edges = tuple(sorted(seen))
    adj: list[list[int]] = [[] for _ in range(n)]
    for u, v in sorted_edges:
        adj[u].append(v)
        adj[v].append(u)
    return Graph(n, sorted_edges, tuple(tuple(sorted(a)) for a in adj))


# ----------------------------------------------------------------------
# named constructions used throughout the test corpus
# ----------------------------------------------------------------------

def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise GraphError("cycle needs n >= 3")
    return graph_from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def path_graph(n: int) -> Graph:
    return graph_from_edges(n, [(i, i + 1) for i in range(n - 1)])


def complete_graph(n: int) -> Graph:
    return graph_from_edges(n, itertools.combinations(range(n), 2))


def complete_bipartite_graph(a: int, b: int) -> Graph:
    return graph_from_edges(a + b, [(i, a + j) for i in range(a) for j in range(b)])


def star_graph(n: int) -> Graph:
    return graph_from_edges(n, [(0, i) for i in range(1, n)])


def prism_graph() -> Graph:
    """Triangular prism: two triangles joined by a perfect matching."""
    return graph_from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5),
                                (0, 3), (1, 4), (2, 5)])


def cube_graph() -> Graph:
    edges = []
    for i in range(8):
        for b in range(3):
            j = i ^ (1 << b)
            if i < j:
                edges.append((i, j))
    return graph_from_edges(8, edges)


def petersen_graph() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    spokes = [(i, 5 + i) for i in range(5)]
    return graph_from_edges(10, outer + inner + spokes)


def disjoint_union(g1: Graph, g2: Graph) -> Graph:
    shifted = [(u + g1.n, v + g1.n) for u, v in g2.edges]
    return graph_from_edges(g1.n + g2.n, list(g1.edges) + shifted)


def relabel(g: Graph, perm) -> Graph:
    """Apply a permutation of [n] to the vertices (perm[v] is the new label)."""
    perm = tuple(int(p) for p in perm)
    return graph_from_edges(g.n, [(perm[u], perm[v]) for u, v in g.edges])


# ----------------------------------------------------------------------
# distances
# ----------------------------------------------------------------------

def bfs_distances(g: Graph, source: int) -> list[int]:
    """BFS distances from one vertex; unreachable vertices get the value n."""
    if not 0 <= source < g.n:
        raise GraphError(f"source {source} out of range")
    dist = [g.n] * g.n
    dist[source] = 0
    queue = deque([source])
    while queue:
        v = queue.popleft()
        for u in g.adjacency[v]:
            if dist[u] == g.n:
                dist[u] = dist[v] + 1
                queue.append(u)
    return dist


def multi_source_distances(g: Graph, sources) -> list[int]:
    sources = list(sources)
    if not sources:
        raise GraphError("source set must be nonempty")
    dist = [g.n] * g.n
    queue = deque()
    for s in sources:
        if dist[s] == g.n:
            dist[s] = 0
            queue.append(s)
    while queue:
        v = queue.popleft()
        for u in g.adjacency[v]:
            if dist[u] == g.n:
                dist[u] = dist[v] + 1
                queue.append(u)
    return dist


@lru_cache(maxsize=128)
def distance_matrix(g: Graph) -> np.ndarray:
    """All-pairs shortest-path distances, cross-component entries equal n."""
    out = np.empty((g.n, g.n), dtype=np.int64)
    for v in range(g.n):
        out[v] = bfs_distances(g, v)
    out.flags.writeable = False
    return out


def diameter(g: Graph) -> int:
    if g.n == 0:
        return 0
    return int(distance_matrix(g).max(initial=0))


def is_connected(g: Graph) -> bool:
    if g.n <= 1:
        return True
    return max(bfs_distances(g, 0)) < g.n


def ball(g: Graph, S, radius: int) -> set[int]:
    """All vertices at distance <= radius from the set S."""
    dist = multi_source_distances(g, S)
    return {v for v in range(g.n) if dist[v] <= radius}


def sphere(g: Graph, S, radius: int) -> set[int]:
    """All vertices at distance exactly radius from the set S."""
    dist = multi_source_distances(g, S)
    return {v for v in range(g.n) if dist[v] == radius}


# ----------------------------------------------------------------------
# Cheeger constant
# ----------------------------------------------------------------------

def cut_size(g: Graph, S) -> int:
    inc = [False] * g.n
    for v in S:
        inc[v] = True
    return sum(1 for u, v in g.edges if inc[u] != inc[v])


def cheeger_exact(g: Graph, limit: int = 22) -> Fraction:
    """Minimum of cut(S)/|S| over nonempty S with |S| <= n/2, exact.

    Enumerates subsets in Gray-code order so each step updates the cut by
    the flipped vertex's incident edges only.  2^n work: refuse above the
    limit and point callers at cheeger_bounds.
    """
    n = g.n
    if n < 2:
        raise GraphError("cheeger constant needs n >= 2")
    if n > limit:
        raise GraphError(
            f"n={n} exceeds the exhaustive-search limit {limit}; "
            "use cheeger_bounds for a spectral bracket"
        )
    side = [False] * n
    cut = 0
    size = 0
    best: Fraction | None = None
    half = n // 2
    adj = g.adjacency
    # Gray code: subset at step t flips bit ctz(t).
    for t in range(1, 1 << n):
        v = (t & -t).bit_length() - 1
        if side[v]:
            side[v] = False
            size -= 1
            for u in adj[v]:
                cut += 1 if side[u] else -1
        else:
            side[v] = True
            size += 1
            for u in adj[v]:
                cut += -1 if side[u] else 1
        if 0 < size <= half:
            if best is None or cut * best.denominator < best.numerator * size:
                best = Fraction(cut, size)
                if best == 0:
                    return best
    assert best is not None
    return best


def cheeger_bounds(g: Graph, eigenvalues: np.ndarray) -> tuple[float, float]:
    """Spectral bracket (d - l2)/2 <= h(G) <= sqrt(2 d (d - l2))."""
    d = g.regular_degree()
    if d is None:
        raise GraphError("cheeger_bounds requires a regular graph")
    lam2 = float(np.sort(eigenvalues)[-2]) if g.n >= 2 else float(eigenvalues[0])
    gap = d - lam2
    return gap / 2.0, math.sqrt(max(2.0 * d * gap, 0.0))


def cheeger_lower_bound(g: Graph, limit: int = 22) -> float:
    """h(G) exactly when feasible, else the conservative spectral lower bound."""
    if g.n <= limit:
        return float(cheeger_exact(g, limit=limit))
    return cheeger_bounds(g, spectrum(g))[0]


# ----------------------------------------------------------------------
# spectrum
# ----------------------------------------------------------------------

def adjacency_matrix(g: Graph) -> np.ndarray:
    a = np.zeros((g.n, g.n), dtype=np.float64)
    for u, v in g.edges:
        a[u, v] = 1.0
        a[v, u] = 1.0
    return a


def spectrum(g: Graph) -> np.ndarray:
    """All eigenvalues of the 0/1 adjacency matrix, ascending."""
    if g.n < 1:
        raise GraphError("spectrum needs n >= 1")
    return np.linalg.eigvalsh(adjacency_matrix(g))


def lambda2(g: Graph) -> float:
    """Second-largest adjacency eigenvalue."""
    eig = spectrum(g)
    if g.n < 2:
        raise GraphError("lambda2 needs n >= 2")
    return float(eig[-2])


# ----------------------------------------------------------------------
# random regular graphs (pairing model, rejection sampled)
# ----------------------------------------------------------------------

def random_regular(n: int, d: int, seed: int) -> Graph:
    """Uniform simple d-regular graph on [n] via the pairing model.

    A uniformly random pairing of d stubs per vertex is accepted iff it
    yields no loop and no multi-edge; conditioning on acceptance gives the
    uniform distribution on simple d-regular graphs.  Deterministic given
    the seed.
    """
    if not 3 <= d <= n - 1:
        raise GraphError(f"degree d={d} must satisfy 3 <= d <= n-1 (n={n})")
    if (n * d) % 2 != 0:
        raise GraphError(f"n*d must be even, got n={n}, d={d}")
    gen = derive_rng(seed, "pairing", n, d)
    cap = math.ceil(10.0 * math.exp(d * d))
    stubs = np.repeat(np.arange(n, dtype=np.int64), d)
    for _ in range(cap):
        perm = gen.permutation(stubs)
        us = perm[0::2]
        vs = perm[1::2]
        if np.any(us == vs):
            continue
        lo = np.minimum(us, vs)
        hi = np.maximum(us, vs)
        codes = lo * n + hi
        if np.unique(codes).size != codes.size:
            continue
        return graph_from_edges(n, zip(lo.tolist(), hi.tolist()))
    raise GraphError(
        f"pairing model rejected {cap} times for n={n}, d={d}; "
        "this is pathological for such parameters"
    )


def random_connected_regular(n: int, d: int, seed: int, tries: int = 200) -> Graph:
    """First connected sample from random_regular over derived seeds."""
    for t in range(tries):
        g = random_regular(n, d, seed + t * 1_000_003)
        if is_connected(g):
            return g
    raise GraphError(f"no connected {d}-regular sample found in {tries} tries")


# ----------------------------------------------------------------------
# tree-like vertices and long-range expansion
# ----------------------------------------------------------------------

def tree_like_set(g: Graph, m: int) -> set[int]:
    """Vertices whose radius-3m ball induces a tree (connected and acyclic).

    For 3m >= n the cross-component distance convention pulls other
    components into the ball, so connectivity of the induced subgraph must
    be checked explicitly, not inferred from the edge count.
    """
    if m < 0:
        raise GraphError("radius must be nonnegative")
    out = set()
    for v in range(g.n):
        b = ball(g, [v], 3 * m)
        inner = sum(1 for x, y in g.edges if x in b and y in b)
        if inner != len(b) - 1:
            continue
        reached = {v}
        queue = deque([v])
        while queue:
            x = queue.popleft()
            for u in g.adjacency[x]:
                if u in b and u not in reached:
                    reached.add(u)
                    queue.append(u)
        if len(reached) == len(b):
            out.add(v)
    return out


@dataclass(frozen=True)
class ExpansionResult:
    holds: bool
    violation: tuple[frozenset[int], int] | None  # (S, radius) of first failure
    mode: str                                     # "exact" or "sampled"


def _expansion_check_set(g: Graph, S: list[int], alpha: float, d: int) -> int | None:
    """Smallest radius violating |B(S,r)| >= min(3n/4, alpha (d-1)^r |S|), or None."""
    n = g.n
    dist = multi_source_distances(g, S)
    sizes = np.bincount(np.minimum(dist, n), minlength=n + 1).cumsum()
    top = 0.75 * n
    s = len(S)
    for r in range(n + 1):
        need = min(top, alpha * (d - 1) ** r * s)
        if sizes[min(r, n)] < need:
            return r
    return None


def expansion_holds(g: Graph, alpha: float, exact_limit: int = 18,
                    samples: int = 200, seed: int = 0) -> ExpansionResult:
    """Check the long-range expansion property with parameter alpha.

    Exact mode (n <= exact_limit) scans every nonempty vertex set; sampled
    mode scans singletons plus random subsets and is one-sided: a "holds"
    verdict only means no violation was found.
    """
    d = g.regular_degree()
    if d is None:
        raise GraphError("expansion check requires a regular graph")
    n = g.n
    if n <= exact_limit:
        for mask in range(1, 1 << n):
            S = [v for v in range(n) if mask >> v & 1]
            r = _expansion_check_set(g, S, alpha, d)
            if r is not None:
                return ExpansionResult(False, (frozenset(S), r), "exact")
        return ExpansionResult(True, None, "exact")
    gen = derive_rng(seed, "expansion", n)
    for v in range(n):
        r = _expansion_check_set(g, [v], alpha, d)
        if r is not None:
            return ExpansionResult(False, (frozenset([v]), r), "sampled")
    for _ in range(samples):
        size = int(gen.integers(1, n // 2 + 1))
        S = sorted(gen.choice(n, size=size, replace=False).tolist())
        r = _expansion_check_set(g, S, alpha, d)
        if r is not None:
            return ExpansionResult(False, (frozenset(S), r), "sampled")
    return ExpansionResult(True, None, "sampled")


# ----------------------------------------------------------------------
# small-n canonical forms (lexicographically smallest edge list)
# ----------------------------------------------------------------------

_CANON_CAP = 8
_perm_tables: dict[int, tuple[np.ndarray, list[tuple[int, int]]]] = {}


def _pair_index(n: int) -> dict[tuple[int, int], int]:
    return {e: i for i, e in enumerate(itertools.combinations(range(n), 2))}


def _perm_table(n: int) -> tuple[np.ndarray, list[tuple[int, int]]]:
    """For each permutation of [n], where every vertex pair index is sent."""
    if n not in _perm_tables:
        pairs = list(itertools.combinations(range(n), 2))
        idx = _pair_index(n)
        perms = list(itertools.permutations(range(n)))
        table = np.empty((len(perms), len(pairs)), dtype=np.int32)
        for p, perm in enumerate(perms):
            for e, (u, v) in enumerate(pairs):
                a, b = perm[u], perm[v]
                table[p, e] = idx[(a, b) if a < b else (b, a)]
        _perm_tables[n] = (table, pairs)
    return _perm_tables[n]


@lru_cache(maxsize=65536)
def canonical_form(g: Graph) -> Graph:
    """Isomorphic copy with the lexicographically smallest sorted edge list.

    Brute force over all n! permutations, so capped at n <= 8.  Constant on
    isomorphism classes by construction.
    """
    if g.n > _CANON_CAP:
        raise GraphError(f"canonical form is brute-force only, n <= {_CANON_CAP}")
    if g.n == 0:
        return g
    table, pairs = _perm_table(g.n)
    idx = _pair_index(g.n)
    bits = np.zeros(len(pairs), dtype=bool)
    for e in g.edges:
        bits[idx[e]] = True
    candidates = bits[table]  # (n!, C(n,2)) images of the edge indicator
    packed = np.packbits(candidates, axis=1)
    # smallest sorted edge list <=> greatest indicator string in pair order
    order = np.lexsort(packed[:, ::-1].T)
    best = candidates[order[-1]]
    return graph_from_edges(g.n, [pairs[i] for i in np.flatnonzero(best)])


def are_isomorphic(g1: Graph, g2: Graph) -> bool:
    if g1.n != g2.n or g1.m != g2.m:
        return False
    return canonical_form(g1).edges == canonical_form(g2).edges


def enumerate_regular_graphs(n: int, d: int, connected_only: bool = True) -> list[Graph]:
    """All d-regular graphs on n vertices up to isomorphism (brute force).

    Enumerates labelled graphs with N(0) = {1,..,d} (every isomorphism
    class has such a labelling) and deduplicates by canonical form.
    """
    if n > _CANON_CAP:
        raise GraphError(f"exhaustive enumeration capped at n <= {_CANON_CAP}")
    if d >= n or (n * d) % 2 != 0:
        return []
    base = [(0, j) for j in range(1, d + 1)]
    residual = [0] + [d - 1 if 1 <= v <= d else d for v in range(1, n)]
    reps: dict[tuple, Graph] = {}

    def extend(v: int, chosen: list[tuple[int, int]]):
        if v == n:
            if any(residual[u] for u in range(n)):
                return
            g = graph_from_edges(n, base + chosen)
            if connected_only and not is_connected(g):
                return
            key = canonical_form(g).edges
            if key not in reps:
                reps[key] = graph_from_edges(n, key)
            return
        need = residual[v]
        if need == 0:
            extend(v + 1, chosen)
            return
        candidates = [u for u in range(v + 1, n) if residual[u] > 0]
        if len(candidates) < need:
            return
        for combo in itertools.combinations(candidates, need):
            for u in combo:
                residual[u] -= 1
            residual[v] = 0
            extend(v + 1, chosen + [(v, u) for u in combo])
            residual[v] = need
            for u in combo:
                residual[u] += 1

    extend(1, [])
    return sorted(reps.values(), key=lambda g: g.edges)
