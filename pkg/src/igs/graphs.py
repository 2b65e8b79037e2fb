"""Finite simple graphs with the queries every other module builds on.

Vertex identifiers are opaque, totally ordered values.  Every iteration in
this module follows that order, so path enumeration, isomorphism search and
all derived reports are deterministic.
"""

import heapq
import math
from collections import deque

from .errors import (
    DuplicateEdge,
    LoopEdge,
    PathExplosion,
    UnknownVertex,
)


def edge_key(u, v):
    """Canonical form of an undirected edge: the sorted pair."""
    return (u, v) if u <= v else (v, u)


class Graph:
    """Immutable finite simple graph.

    Parameters
    ----------
    vertex_ids : iterable
        Vertex identifiers; must be mutually orderable.
    edge_pairs : iterable of pairs
        Unordered edges between declared vertices.  Loops and duplicates
        are rejected.
    """

    __slots__ = ("vertices", "edges", "adj", "_vset", "_degree")

    def __init__(self, vertex_ids, edge_pairs):
        vertices = sorted(vertex_ids)
        vset = set(vertices)
        if len(vertices) != len(vset):
            raise ValueError("duplicate vertex identifier")
        edges = []
        seen = set()
        adj = {v: [] for v in vertices}
        for pair in edge_pairs:
            u, v = pair
            if u == v:
                raise LoopEdge(f"loop edge {{{u!r},{v!r}}} is not allowed")
            if u not in vset:
                raise UnknownVertex(f"edge endpoint {u!r} is not a declared vertex")
            if v not in vset:
                raise UnknownVertex(f"edge endpoint {v!r} is not a declared vertex")
            key = edge_key(u, v)
            if key in seen:
                raise DuplicateEdge(f"edge {{{key[0]!r},{key[1]!r}}} appears twice")
            seen.add(key)
            edges.append(key)
        edges.sort()
        for u, v in edges:
            adj[u].append(v)
            adj[v].append(u)
        for v in vertices:
            adj[v].sort()
        self.vertices = tuple(vertices)
        self.edges = tuple(edges)
        self.adj = {v: tuple(ns) for v, ns in adj.items()}
        self._vset = vset
        self._degree = {v: len(self.adj[v]) for v in vertices}

    # -- basic queries -----------------------------------------------------

    def __contains__(self, v):
        return v in self._vset

    def has_edge(self, u, v):
        return v in self.adj.get(u, ())

    def degree(self, v):
        if v not in self._vset:
            raise UnknownVertex(repr(v))
        return self._degree[v]

    def max_degree(self):
        return max(self._degree.values()) if self.vertices else 0

    def neighbors(self, v):
        if v not in self._vset:
            raise UnknownVertex(repr(v))
        return self.adj[v]

    def check_vertices(self, vs):
        for v in vs:
            if v not in self._vset:
                raise UnknownVertex(repr(v))

    def is_connected(self):
        if not self.vertices:
            return True
        seen = {self.vertices[0]}
        stack = [self.vertices[0]]
        while stack:
            x = stack.pop()
            for y in self.adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return len(seen) == len(self.vertices)

    def induced_subgraph(self, vertex_subset):
        vs = sorted(vertex_subset)
        vset = set(vs)
        es = [(u, v) for (u, v) in self.edges if u in vset and v in vset]
        return Graph(vs, es)

    def remove_edge(self, u, v, drop_isolated=False):
        """Copy of the graph without edge {u,v}; optionally drop endpoints
        that become isolated."""
        key = edge_key(u, v)
        if key not in set(self.edges):
            raise UnknownVertex(f"edge {{{u!r},{v!r}}} not in graph")
        es = [e for e in self.edges if e != key]
        vs = list(self.vertices)
        if drop_isolated:
            used = {x for e in es for x in e}
            vs = [x for x in vs if x in used or x not in key]
        return Graph(vs, es)

    def __eq__(self, other):
        return (
            isinstance(other, Graph)
            and self.vertices == other.vertices
            and self.edges == other.edges
        )

    def __hash__(self):
        return hash((self.vertices, self.edges))

    def __repr__(self):
        return f"Graph(|V|={len(self.vertices)}, |E|={len(self.edges)})"


class Path:
    """A vertex path.  Consecutive vertices must be adjacent in the host."""

    __slots__ = ("vertices",)

    def __init__(self, vertices, host=None):
        vertices = tuple(vertices)
        if not vertices:
            raise ValueError("a path needs at least one vertex")
        if host is not None:
            host.check_vertices(vertices)
            for a, b in zip(vertices, vertices[1:]):
                if b not in host.adj[a]:
                    raise ValueError(f"{a!r} and {b!r} are not adjacent")
        self.vertices = vertices

    def __len__(self):
        return len(self.vertices) - 1

    @property
    def length(self):
        return len(self.vertices) - 1

    def edges(self):
        return [edge_key(a, b) for a, b in zip(self.vertices, self.vertices[1:])]

    def __iter__(self):
        return iter(self.vertices)

    def __getitem__(self, i):
        return self.vertices[i]

    def __eq__(self, other):
        return isinstance(other, Path) and self.vertices == other.vertices

    def __hash__(self):
        return hash(self.vertices)

    def __repr__(self):
        return f"Path({list(self.vertices)!r})"


def build_graph(vertex_ids, edge_pairs):
    """Validated construction; rejects loops, duplicates, dangling endpoints."""
    return Graph(vertex_ids, edge_pairs)


def _as_set(g, a):
    if isinstance(a, (list, tuple, set, frozenset)):
        vs = set(a)
    else:
        vs = {a}
    if not vs:
        raise UnknownVertex("empty vertex set")
    g.check_vertices(vs)
    return vs


def path_distance(g, a, b):
    """Length of the shortest path between vertex sets; inf if disconnected.

    Distance between sets is the minimum over endpoint pairs.
    """
    src = _as_set(g, a)
    dst = _as_set(g, b)
    if src & dst:
        return 0
    dist = {v: 0 for v in src}
    queue = deque(sorted(src))
    while queue:
        x = queue.popleft()
        for y in g.adj[x]:
            if y not in dist:
                dist[y] = dist[x] + 1
                if y in dst:
                    return dist[y]
                queue.append(y)
    return math.inf


def bfs_distances(g, sources):
    """Unscaled path distance from a vertex set to every vertex (inf outside
    the reachable component)."""
    src = _as_set(g, sources)
    dist = {v: 0 for v in src}
    queue = deque(sorted(src))
    while queue:
        x = queue.popleft()
        for y in g.adj[x]:
            if y not in dist:
                dist[y] = dist[x] + 1
                queue.append(y)
    return dist


def diameter(g):
    """max over vertex pairs of the path distance (graph must be connected)."""
    best = 0
    for v in g.vertices:
        dist = bfs_distances(g, [v])
        if len(dist) != len(g.vertices):
            return math.inf
        best = max(best, max(dist.values()))
    return best


def enumerate_simple_paths(g, A, B, cap=100000):
    """All simple paths starting in A and ending in B, lexicographic order.

    Raises PathExplosion when more than `cap` paths exist.
    """
    src = _as_set(g, A)
    dst = _as_set(g, B)
    if src & dst:
        raise UnknownVertex("A and B must be disjoint")
    out = []
    on_path = set()
    path = []

    def walk(x):
        path.append(x)
        on_path.add(x)
        if x in dst:
            if len(out) >= cap:
                raise PathExplosion(f"more than {cap} simple paths")
            out.append(Path(path))
        # paths may continue through B, but those continuations end at a
        # later B-hit and are recorded there; extending past a sink is
        # still a valid simple path search
        for y in g.adj[x]:
            if y not in on_path:
                walk(y)
        path.pop()
        on_path.remove(x)

    for a in sorted(src):
        walk(a)
    return out


def max_edge_disjoint_paths(g, A, B):
    """Maximum number of pairwise edge-disjoint A-B paths.

    Unit-capacity max flow between the contracted terminal sets; by the
    Menger duality this equals the minimum edge cut separating A from B.
    """
    src = _as_set(g, A)
    dst = _as_set(g, B)
    if src & dst:
        raise UnknownVertex("A and B must be disjoint")
    # residual capacities on directed arcs; undirected edge = two arcs
    cap = {}
    for u, v in g.edges:
        cap[(u, v)] = 1
        cap[(v, u)] = 1
    total = 0
    while True:
        # BFS for an augmenting path from src to dst
        parent = {v: None for v in src}
        queue = deque(sorted(src))
        reached = None
        while queue and reached is None:
            x = queue.popleft()
            for y in g.adj[x]:
                if y not in parent and cap[(x, y)] > 0:
                    parent[y] = x
                    if y in dst:
                        reached = y
                        break
                    queue.append(y)
        if reached is None:
            return total
        y = reached
        while parent[y] is not None:
            x = parent[y]
            cap[(x, y)] -= 1
            cap[(y, x)] += 1
            y = x
        total += 1


def dijkstra_distance(g, sources, weights, targets=None):
    """Shortest weighted path distance from a vertex set.

    `weights` maps canonical edge keys to nonnegative lengths.  Returns the
    distance map, or the minimum distance into `targets` when given.
    """
    src = _as_set(g, sources)
    dist = {}
    heap = [(0.0, v) for v in sorted(src)]
    target_set = _as_set(g, targets) if targets is not None else None
    while heap:
        d, x = heapq.heappop(heap)
        if x in dist:
            continue
        dist[x] = d
        if target_set is not None and x in target_set:
            return d
        for y in g.adj[x]:
            if y not in dist:
                heapq.heappush(heap, (d + weights[edge_key(x, y)], y))
    if target_set is not None:
        return math.inf
    return dist


def find_isomorphism(g1, g2, pinned=None):
    """Edge-preserving bijection g1 -> g2 extending `pinned`, or None.

    Backtracking with degree and distance-profile pruning; candidate lists
    are sorted, so the first isomorphism in that order is returned and the
    result is deterministic.
    """
    pinned = dict(pinned or {})
    n = len(g1.vertices)
    if n != len(g2.vertices) or len(g1.edges) != len(g2.edges):
        return None
    g1.check_vertices(pinned.keys())
    g2.check_vertices(pinned.values())
    if len(set(pinned.values())) != len(pinned):
        return None
    deg1 = {v: g1.degree(v) for v in g1.vertices}
    deg2 = {v: g2.degree(v) for v in g2.vertices}
    if sorted(deg1.values()) != sorted(deg2.values()):
        return None
    # neighbor-degree signatures
    sig1 = {v: tuple(sorted(deg1[w] for w in g1.adj[v])) for v in g1.vertices}
    sig2 = {v: tuple(sorted(deg2[w] for w in g2.adj[v])) for v in g2.vertices}
    # distance profiles to pinned vertices prune hard when pins exist
    pins1 = sorted(pinned.keys())
    prof1 = {}
    prof2 = {}
    if pins1:
        d1maps = {a: bfs_distances(g1, [a]) for a in pins1}
        d2maps = {pinned[a]: bfs_distances(g2, [pinned[a]]) for a in pins1}
        for v in g1.vertices:
            prof1[v] = tuple(d1maps[a].get(v, math.inf) for a in pins1)
        for v in g2.vertices:
            prof2[v] = tuple(d2maps[pinned[a]].get(v, math.inf) for a in pins1)

    def compatible(v, w):
        if deg1[v] != deg2[w] or sig1[v] != sig2[w]:
            return False
        if pins1 and prof1[v] != prof2[w]:
            return False
        return True

    for v, w in pinned.items():
        if not compatible(v, w):
            return None

    mapping = dict(pinned)
    reverse = {w: v for v, w in pinned.items()}
    used = set(pinned.values())
    # assign high-degree, constrained vertices first; pinned are fixed
    order = [v for v in g1.vertices if v not in mapping]
    order.sort(key=lambda v: (-deg1[v], v))

    adj1 = {v: set(g1.adj[v]) for v in g1.vertices}
    adj2 = {v: set(g2.adj[v]) for v in g2.vertices}

    def consistent(v, w):
        for u in g1.adj[v]:
            if u in mapping and mapping[u] not in adj2[w]:
                return False
        # preserve non-adjacency among assigned vertices
        for x in adj2[w]:
            if x in used and reverse[x] not in adj1[v]:
                return False
        return True

    def search(i):
        if i == len(order):
            return True
        v = order[i]
        for w in g2.vertices:
            if w in used or not compatible(v, w) or not consistent(v, w):
                continue
            mapping[v] = w
            reverse[w] = v
            used.add(w)
            if search(i + 1):
                return True
            del mapping[v]
            del reverse[w]
            used.remove(w)
        return False

    if search(0):
        return mapping
    return None
