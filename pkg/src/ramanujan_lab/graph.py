"""Weighted undirected graphs and the combinatorial primitives used by the
certificate and sparsifier code: degrees, girth, BFS trees, ball sizes,
generators and edge-list I/O."""

from __future__ import annotations

import json
import math
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

INF = math.inf


class GraphError(ValueError):
    """Raised for malformed graphs, edge-list files and violated preconditions."""


@dataclass(frozen=True)
class WeightedGraph:
    """Simple weighted undirected graph on vertices ``0..n-1``.

    Edges are stored once with ``u < v``.  The adjacency index is built on
    construction; the object is treated as immutable afterwards.
    """

    n: int
    edges: tuple[tuple[int, int, float], ...]
    adj: tuple[tuple[tuple[int, float], ...], ...] = field(
        init=False, repr=False, compare=False
    )

    def __post_init__(self):
        if self.n < 1:
            raise GraphError("vertex count must be positive")
        canon = []
        seen = set()
        nbrs: list[list[tuple[int, float]]] = [[] for _ in range(self.n)]
        for u, v, w in self.edges:
            u, v, w = int(u), int(v), float(w)
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise GraphError(f"edge ({u}, {v}) has a vertex outside 0..{self.n - 1}")
            if u == v:
                raise GraphError(f"self-loop at vertex {u}")
            if not (math.isfinite(w) and w > 0):
                raise GraphError(f"edge ({u}, {v}) has nonpositive or non-finite weight {w}")
            if u > v:
                u, v = v, u
            if (u, v) in seen:
                raise GraphError(f"duplicate edge ({u}, {v})")
            seen.add((u, v))
            canon.append((u, v, w))
            nbrs[u].append((v, w))
            nbrs[v].append((u, w))
        object.__setattr__(self, "edges", tuple(canon))
        object.__setattr__(self, "adj", tuple(tuple(a) for a in nbrs))

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def average_degree(self) -> float:
        """Average combinatorial degree ``2m/n``."""
        return 2.0 * self.m / self.n

    def weight(self, u: int, v: int) -> float:
        for x, w in self.adj[u]:
            if x == v:
                return w
        return 0.0

    def edge_array(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Return ``(u, v, w)`` as numpy arrays."""
        if not self.edges:
            return (np.zeros(0, dtype=int), np.zeros(0, dtype=int), np.zeros(0))
        e = np.array(self.edges, dtype=float)
        return e[:, 0].astype(int), e[:, 1].astype(int), e[:, 2]

    def adjacency_matrix(self) -> np.ndarray:
        W = np.zeros((self.n, self.n))
        for u, v, w in self.edges:
            W[u, v] = W[v, u] = w
        return W

    def scaled(self, c: float) -> "WeightedGraph":
        return WeightedGraph(self.n, tuple((u, v, w * c) for u, v, w in self.edges))

    def with_weights(self, weights) -> "WeightedGraph":
        weights = list(weights)
        if len(weights) != self.m:
            raise GraphError("weight vector length does not match edge count")
        return WeightedGraph(
            self.n, tuple((u, v, float(w)) for (u, v, _), w in zip(self.edges, weights))
        )

    def is_connected(self) -> bool:
        return len(bfs_tree(self, 0, self.n).dist) == self.n


@dataclass(frozen=True)
class DegreeSummary:
    combinatorial: np.ndarray
    weighted: np.ndarray

    @property
    def max_combinatorial(self) -> int:
        return int(self.combinatorial.max())

    @property
    def min_combinatorial(self) -> int:
        return int(self.combinatorial.min())

    @property
    def max_weighted(self) -> float:
        return float(self.weighted.max())

    @property
    def min_weighted(self) -> float:
        return float(self.weighted.min())

    def to_dict(self) -> dict:
        return {
            "combinatorial_degree": self.combinatorial.tolist(),
            "weighted_degree": self.weighted.tolist(),
            "max_combinatorial": self.max_combinatorial,
            "min_combinatorial": self.min_combinatorial,
            "max_weighted": self.max_weighted,
            "min_weighted": self.min_weighted,
        }


@dataclass(frozen=True)
class BfsTree:
    """Breadth-first levels around ``root`` truncated at ``depth``.

    ``levels[l]`` lists the vertices at distance exactly ``l`` in discovery
    order; ``parent[root]`` is ``-1``.
    """

    root: int
    depth: int
    dist: dict[int, int]
    parent: dict[int, int]
    levels: list[list[int]]

    def vertices(self) -> list[int]:
        return [v for level in self.levels for v in level]


def degrees(G: WeightedGraph) -> DegreeSummary:
    comb = np.zeros(G.n, dtype=int)
    wdeg = np.zeros(G.n)
    for u, nbrs in enumerate(G.adj):
        comb[u] = len(nbrs)
        wdeg[u] = math.fsum(w for _, w in nbrs)
    return DegreeSummary(comb, wdeg)


def normalize_max_weighted_degree(G: WeightedGraph) -> WeightedGraph:
    """Rescale all weights by one constant so the largest weighted degree is 1."""
    if G.m == 0:
        raise GraphError("cannot normalize a graph with no edges")
    c = 1.0 / degrees(G).max_weighted
    return G.scaled(c)


def bfs_tree(G: WeightedGraph, r: int, k: int) -> BfsTree:
    if not 0 <= r < G.n:
        raise GraphError(f"invalid root {r}")
    if k < 0:
        raise GraphError("depth must be nonnegative")
    dist = {r: 0}
    parent = {r: -1}
    levels = [[r]]
    frontier = [r]
    for ell in range(1, k + 1):
        nxt = []
        for u in frontier:
            for v, _ in G.adj[u]:
                if v not in dist:
                    dist[v] = ell
                    parent[v] = u
                    nxt.append(v)
        if not nxt:
            break
        levels.append(nxt)
        frontier = nxt
    return BfsTree(r, k, dist, parent, levels)


def shortest_path_counts(G: WeightedGraph, tree: BfsTree) -> dict[int, int]:
    """Number of shortest-path predecessors of each vertex in ``tree``."""
    counts = {}
    for v, dv in tree.dist.items():
        if v == tree.root:
            counts[v] = 1
            continue
        counts[v] = sum(1 for x, _ in G.adj[v] if tree.dist.get(x) == dv - 1)
    return counts


def girth(G: WeightedGraph, limit: float = INF) -> float:
    """Length of the shortest cycle, ``inf`` for forests.

    BFS from every root; a non-tree edge between vertices at depths ``a`` and
    ``b`` closes a closed walk of length ``a + b + 1`` containing a cycle no
    longer than that, and the minimum over roots is attained by a root on a
    shortest cycle.  Searches stop once they cannot beat the current best, or
    ``limit`` when the caller only needs to know whether ``girth >= limit``.
    """
    best = limit
    for r in range(G.n):
        dist = {r: 0}
        parent = {r: -1}
        queue = deque([r])
        while queue:
            u = queue.popleft()
            du = dist[u]
            if 2 * du + 1 >= best:
                break
            for v, _ in G.adj[u]:
                if v == parent[u]:
                    continue
                dv = dist.get(v)
                if dv is None:
                    dist[v] = du + 1
                    parent[v] = u
                    queue.append(v)
                else:
                    best = min(best, du + dv + 1)
    return best


def girth_at_least(G: WeightedGraph, g: float) -> bool:
    return girth(G, limit=g) >= g


def ball_size_check(G: WeightedGraph, r: int, ell: int, g: float, d: float) -> dict:
    """Compare the radius-``ell`` ball around ``r`` with the girth-based bound
    ``2n / (d/4 - 1)^((g-1)/2 - ell)``."""
    if d < 12:
        raise GraphError(f"ball bound needs d >= 12, got {d}")
    deg = degrees(G)
    if deg.min_combinatorial < d / 4:
        raise GraphError(
            f"minimum combinatorial degree {deg.min_combinatorial} is below d/4 = {d / 4}"
        )
    if ell > (g - 1) / 2:
        raise GraphError(f"radius {ell} exceeds (g-1)/2 = {(g - 1) / 2}")
    if not girth_at_least(G, g):
        raise GraphError(f"graph girth is below the asserted value {g}")
    measured = len(bfs_tree(G, r, ell).dist)
    bound = 2.0 * G.n / (d / 4 - 1) ** ((g - 1) / 2 - ell)
    return {"root": r, "radius": ell, "measured": measured, "bound": bound,
            "holds": measured <= bound}


# --- generators -------------------------------------------------------------

def gen_complete(n: int) -> WeightedGraph:
    return WeightedGraph(n, tuple((u, v, 1.0) for u in range(n) for v in range(u + 1, n)))


def gen_cycle(n: int) -> WeightedGraph:
    if n < 3:
        raise GraphError("a cycle needs at least 3 vertices")
    return WeightedGraph(n, tuple((i, (i + 1) % n, 1.0) for i in range(n)))


def gen_path(n: int) -> WeightedGraph:
    return WeightedGraph(n, tuple((i, i + 1, 1.0) for i in range(n - 1)))


def gen_star(leaves: int) -> WeightedGraph:
    return WeightedGraph(leaves + 1, tuple((0, i, 1.0) for i in range(1, leaves + 1)))


def gen_hypercube(dim: int) -> WeightedGraph:
    n = 1 << dim
    return WeightedGraph(
        n, tuple((u, u ^ (1 << b), 1.0) for u in range(n) for b in range(dim) if u < u ^ (1 << b))
    )


def gen_petersen() -> WeightedGraph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return WeightedGraph(10, tuple((u, v, 1.0) for u, v in outer + spokes + inner))


def gen_gq_incidence(q: int) -> WeightedGraph:
    """Point-line incidence graph of the symplectic quadrangle W(q), q prime.

    Bipartite, ``(q+1)``-regular on ``2 (q^3 + q^2 + q + 1)`` vertices with
    girth exactly 8.  Random regular graphs of that degree only reach girth
    8 at sizes far beyond desk scale, so this is the high-girth fixture.
    """
    if q < 2 or any(q % p == 0 for p in range(2, int(math.isqrt(q)) + 1)):
        raise GraphError(f"q must be prime, got {q}")

    def normalize(x):
        for c in x:
            if c:
                inv = pow(c, q - 2, q)
                return tuple(v * inv % q for v in x)
        return None

    vecs = np.array(np.meshgrid(*[range(q)] * 4, indexing="ij")).reshape(4, -1).T
    points = sorted({normalize(tuple(int(c) for c in v)) for v in vecs[1:]})
    index = {p: i for i, p in enumerate(points)}

    def omega(x, y):
        return (x[0] * y[2] - x[2] * y[0] + x[1] * y[3] - x[3] * y[1]) % q

    lines = {}
    for p in points:
        for x in points:
            if x > p and omega(p, x) == 0:
                span = frozenset(
                    index[normalize(tuple((a * pi + b * xi) % q for pi, xi in zip(p, x)))]
                    for a in range(q) for b in range(q) if a or b
                )
                lines.setdefault(span, len(lines))
    P = len(points)
    edges = tuple((pt, P + li, 1.0) for span, li in lines.items() for pt in span)
    return WeightedGraph(P + len(lines), edges)


def _pairing_attempt(n: int, d: int, rng: np.random.Generator):
    """One draw of the configuration (pairing) model; ``None`` if the result
    has a loop or a repeated edge."""
    stubs = np.repeat(np.arange(n), d)
    rng.shuffle(stubs)
    pairs = stubs.reshape(-1, 2)
    adj = [set() for _ in range(n)]
    for a, b in pairs:
        a, b = int(a), int(b)
        if a == b or b in adj[a]:
            return None
        adj[a].add(b)
        adj[b].add(a)
    return adj


def _ball(adj, a: int, radius: int, skip: tuple[int, int]) -> set[int]:
    seen = {a}
    frontier = [a]
    for _ in range(radius):
        nxt = []
        for u in frontier:
            for v in adj[u]:
                if (u, v) == skip or (v, u) == skip or v in seen:
                    continue
                seen.add(v)
                nxt.append(v)
        frontier = nxt
    return seen


def _has_short_cycle_through(adj, a: int, b: int, g: int) -> bool:
    """True if edge ``ab`` lies on a cycle of length ``< g``, i.e. ``b`` is
    within distance ``g - 2`` of ``a`` once ``ab`` is ignored (meet in the
    middle: the two half-radius balls intersect)."""
    limit = g - 2
    ball_a = _ball(adj, a, (limit + 1) // 2, (a, b))
    ball_b = _ball(adj, b, limit // 2, (a, b))
    return not ball_a.isdisjoint(ball_b)


def gen_random_regular(n: int, d: int, min_girth: int = 3, seed: int = 0,
                       max_attempts: int = 100_000) -> WeightedGraph:
    """Random simple ``d``-regular graph with girth at least ``min_girth``.

    A simple graph is drawn from the pairing model (whole-pairing redraws
    only for ``d <= 4``; larger degrees start from the sequential stub
    matching used by networkx, whose simple-graph probability is not
    vanishing).  Short cycles are then destroyed by degree-preserving
    double-edge switches, each accepted only when neither new edge lies on a
    cycle shorter than ``min_girth``.  Every redraw or switch proposal counts
    towards ``max_attempts``.
    """
    if (n * d) % 2:
        raise GraphError("n * d must be even")
    if not 0 < d < n:
        raise GraphError("need 0 < d < n")
    rng = np.random.default_rng(seed)
    attempts = 0
    adj = None
    if d <= 4:
        while adj is None:
            attempts += 1
            if attempts > max_attempts:
                raise GraphError(f"rejection budget exhausted after {max_attempts} attempts")
            adj = _pairing_attempt(n, d, rng)
    else:
        import networkx as nx

        H = nx.random_regular_graph(d, n, seed=int(rng.integers(2**31)))
        adj = [set(H.adj[u]) for u in range(n)]
        attempts = 1

    if min_girth > 3:
        edges = sorted((u, v) for u in range(n) for v in adj[u] if u < v)
        bad = [e for e in edges if _has_short_cycle_through(adj, *e, min_girth)]
        bad_set = set(bad)
        while bad:
            attempts += 1
            if attempts > max_attempts:
                raise GraphError(
                    f"rejection budget exhausted after {max_attempts} attempts "
                    f"({len(bad)} short-cycle edges left)"
                )
            i = int(rng.integers(len(bad)))
            a, b = bad[i]
            if b not in adj[a] or not _has_short_cycle_through(adj, a, b, min_girth):
                bad[i] = bad[-1]
                bad.pop()
                bad_set.discard((a, b))
                continue
            c = int(rng.integers(n))
            if not adj[c]:
                continue
            nb = sorted(adj[c])
            dd = nb[int(rng.integers(len(nb)))]
            if len({a, b, c, dd}) < 4 or c in adj[a] or dd in adj[b]:
                continue
            adj[a].discard(b); adj[b].discard(a)
            adj[c].discard(dd); adj[dd].discard(c)
            adj[a].add(c); adj[c].add(a)
            ok = not _has_short_cycle_through(adj, a, c, min_girth)
            if ok:
                adj[b].add(dd); adj[dd].add(b)
                ok = not _has_short_cycle_through(adj, b, dd, min_girth)
                if not ok:
                    adj[b].discard(dd); adj[dd].discard(b)
            if not ok:
                adj[a].discard(c); adj[c].discard(a)
                adj[a].add(b); adj[b].add(a)
                adj[c].add(dd); adj[dd].add(c)
                continue
            # the switch removed ab and c-dd; only new edges could close short cycles
            bad[i] = bad[-1]
            bad.pop()
            bad_set.discard((a, b))
            cd = (min(c, dd), max(c, dd))
            if cd in bad_set:
                bad_set.discard(cd)
                bad.remove(cd)

    edges = tuple((u, v, 1.0) for u in range(n) for v in sorted(adj[u]) if u < v)
    return WeightedGraph(n, edges)


# --- I/O --------------------------------------------------------------------

def parse_edge_list(text: str, source: str = "<string>") -> WeightedGraph:
    """Parse the ``n m`` / ``u v w`` edge-list format (``#`` starts a comment)."""
    header = None
    edges = []
    seen = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            if header is None:
                if len(parts) != 2:
                    raise ValueError("header must be 'n m'")
                header = (int(parts[0]), int(parts[1]))
                continue
            if len(parts) != 3:
                raise ValueError("edge line must be 'u v w'")
            u, v, w = int(parts[0]), int(parts[1]), float(parts[2])
        except ValueError as exc:
            raise GraphError(f"{source}:{lineno}: parse error: {exc}") from None
        n = header[0]
        if not (0 <= u < n and 0 <= v < n):
            raise GraphError(f"{source}:{lineno}: vertex id outside 0..{n - 1}")
        if u == v:
            raise GraphError(f"{source}:{lineno}: self-loop at vertex {u}")
        if not (math.isfinite(w) and w > 0):
            raise GraphError(f"{source}:{lineno}: nonpositive weight {w}")
        key = (min(u, v), max(u, v))
        if key in seen:
            raise GraphError(f"{source}:{lineno}: duplicate edge {key}")
        seen.add(key)
        edges.append((u, v, w))
    if header is None:
        raise GraphError(f"{source}: missing 'n m' header")
    if len(edges) != header[1]:
        raise GraphError(f"{source}: header announces {header[1]} edges, found {len(edges)}")
    return WeightedGraph(header[0], tuple(edges))


def load_graph(path) -> WeightedGraph:
    path = Path(path)
    return parse_edge_list(path.read_text(), source=str(path))


def format_edge_list(G: WeightedGraph) -> str:
    lines = [f"{G.n} {G.m}"]
    lines += [f"{u} {v} {w!r}" for u, v, w in G.edges]
    return "\n".join(lines) + "\n"


def save_graph(G: WeightedGraph, path) -> None:
    Path(path).write_text(format_edge_list(G))


def girth_to_json(g: float):
    return "inf" if g == INF else int(g)


def dump_json(obj, path) -> None:
    Path(path).write_text(json.dumps(obj, indent=2, default=_json_default))


def _json_default(o):
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, (np.integer,)):
        return int(o)
    if isinstance(o, (np.floating,)):
        return float(o)
    raise TypeError(f"not JSON serializable: {type(o).__name__}")
