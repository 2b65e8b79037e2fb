"""Towers of replacement graphs.

Level k+1 arises from level k by replacing every edge with a labeled copy
of the base graph and gluing neighboring copies along the images of the
gluing maps.  Vertices of level k+1 are equivalence classes of pairs
(z, e) with z a base vertex and e a level-k edge; the canonical class
representative is the lexicographically least pair, which fixes vertex
identity deterministically.
"""

import math
from collections import namedtuple
from fractions import Fraction

from .errors import (
    BudgetExceeded,
    InvalidEndpoints,
    LevelOutOfRange,
)
from .graphs import Graph, edge_key

# One edge of a tower level.  u < v are the canonical vertex ids; zu, zv
# are the base-graph endpoints of the edge's type aligned with u, v;
# parent is the level-(k-1) edge index (None at level 1); base is the
# index of the type edge in the base edge list.
EdgeRec = namedtuple("EdgeRec", "u v zu zv parent base")


class _Level:
    __slots__ = ("graph", "edges", "vproj", "pair_vid", "edge_index", "children")

    def __init__(self, graph, edges, vproj, pair_vid):
        self.graph = graph
        self.edges = edges
        self.vproj = vproj
        self.pair_vid = pair_vid
        self.edge_index = {(r.u, r.v): i for i, r in enumerate(edges)}
        self.children = None  # parent edge idx -> list of child idxs, set by builder


class Tower:
    """Eagerly built sequence of replacement graphs G_1..G_n."""

    def __init__(self, igs, budget_edges=10**6):
        self.igs = igs
        self.budget_edges = budget_edges
        base = igs.base
        recs = []
        for i, (u, v) in enumerate(base.edges):
            recs.append(EdgeRec(u, v, u, v, None, i))
        self._levels = [_Level(base, tuple(recs), None, None)]
        self._base_index = {e: i for i, e in enumerate(base.edges)}

    # -- building ------------------------------------------------------------

    @property
    def top_level(self):
        return len(self._levels)

    def build_to(self, level):
        while self.top_level < level:
            self._replace_once()
        return self

    def _replace_once(self):
        igs = self.igs
        base = igs.base
        prev = self._levels[-1]
        n_new_edges = len(base.edges) * len(prev.edges)
        if n_new_edges > self.budget_edges:
            raise BudgetExceeded(
                f"level {self.top_level + 1} needs {n_new_edges} edges, "
                f"budget is {self.budget_edges}"
            )

        # union-find over pairs (z, parent_edge_idx); roots are the
        # lexicographically least members of their class
        parent = {}

        def find(x):
            root = x
            while parent[root] != root:
                root = parent[root]
            while parent[x] != root:
                parent[x], x = root, parent[x]
            return root

        def union(a, b):
            ra, rb = find(a), find(b)
            if ra == rb:
                return
            lo, hi = (ra, rb) if ra <= rb else (rb, ra)
            parent[hi] = lo

        for j in range(len(prev.edges)):
            for z in base.vertices:
                parent[(z, j)] = (z, j)

        # incident edges glue along equal labels
        incident = {}
        for j, rec in enumerate(prev.edges):
            incident.setdefault(rec.u, []).append(j)
            incident.setdefault(rec.v, []).append(j)

        def glue_map(rec, x):
            zz = rec.zu if x == rec.u else rec.zv
            return igs.glue[(zz, edge_key(rec.zu, rec.zv))]

        for x, edge_idxs in incident.items():
            if len(edge_idxs) < 2:
                continue
            first = edge_idxs[0]
            mp0 = glue_map(prev.edges[first], x)
            for j in edge_idxs[1:]:
                mp = glue_map(prev.edges[j], x)
                for a in igs.gluing_set:
                    union((mp0[a], first), (mp[a], j))

        pair_vid = {p: find(p) for p in parent}
        vertices = sorted(set(pair_vid.values()))

        new_recs = []
        for j in range(len(prev.edges)):
            for bidx, (z1, z2) in enumerate(base.edges):
                a = pair_vid[(z1, j)]
                b = pair_vid[(z2, j)]
                if a <= b:
                    new_recs.append(EdgeRec(a, b, z1, z2, j, bidx))
                else:
                    new_recs.append(EdgeRec(b, a, z2, z1, j, bidx))
        new_recs.sort(key=lambda r: (r.u, r.v))
        graph = Graph(vertices, [(r.u, r.v) for r in new_recs])

        # projection of a class: the shared endpoint when the class
        # representative sits in a gluing image, else the parent edge
        vproj = {}
        for vid in vertices:
            z, j = vid
            rec = prev.edges[j]
            if z in igs.image_set(rec.zu, (rec.zu, rec.zv)):
                vproj[vid] = ("v", rec.u)
            elif z in igs.image_set(rec.zv, (rec.zu, rec.zv)):
                vproj[vid] = ("v", rec.v)
            else:
                vproj[vid] = ("e", j)

        level = _Level(graph, tuple(new_recs), vproj, pair_vid)
        children = {}
        for i, r in enumerate(new_recs):
            children.setdefault(r.parent, []).append(i)
        level.children = children
        self._levels.append(level)

    # -- access ----------------------------------------------------------------

    def _level(self, n):
        if not 1 <= n <= self.top_level:
            raise LevelOutOfRange(f"level {n} not built (top is {self.top_level})")
        return self._levels[n - 1]

    def graph(self, n):
        return self._level(n).graph

    def edge_recs(self, n):
        return self._level(n).edges

    def edge_count(self, n):
        return len(self._level(n).edges)

    def edge_index(self, n, u, v):
        return self._level(n).edge_index[edge_key(u, v)]

    def pair_vid(self, n, z, parent_edge_idx):
        """Vertex id of the class [z, e] at level n >= 2."""
        return self._level(n).pair_vid[(z, parent_edge_idx)]

    # -- projections -------------------------------------------------------------

    def project_edge(self, n, eidx, m):
        """pi_{n,m} on edges: follow parent pointers."""
        if m > n:
            raise LevelOutOfRange("target level above item level")
        self._level(n), self._level(m)
        for k in range(n, m, -1):
            eidx = self._levels[k - 1].edges[eidx].parent
        return eidx

    def project_vertex(self, n, vid, m):
        """pi_{n,m} on vertices: ('v', vid) or ('e', eidx) at level m."""
        if m > n:
            raise LevelOutOfRange("target level above item level")
        self._level(n), self._level(m)
        kind, cur = "v", vid
        for k in range(n, m, -1):
            level = self._levels[k - 1]
            if kind == "v":
                kind, cur = level.vproj[cur]
            else:
                cur = level.edges[cur].parent
        return (kind, cur)

    def project(self, item, target_level):
        """Project ('v', n, vid) or ('e', n, eidx) down to target_level."""
        kind, n, ref = item
        if target_level >= n:
            raise LevelOutOfRange("projection target must be a strictly lower level")
        if kind == "v":
            k, r = self.project_vertex(n, ref, target_level)
            return (k, target_level, r)
        out = self.project_edge(n, ref, target_level)
        return ("e", target_level, out)

    def vertex_fiber(self, n, m, vid):
        """All level-n ancestors of a level-m vertex."""
        self._level(n), self._level(m)
        current = {vid}
        for k in range(m + 1, n + 1):
            level = self._levels[k - 1]
            current = {
                v
                for v in level.graph.vertices
                if level.vproj[v][0] == "v" and level.vproj[v][1] in current
            }
        return sorted(current)

    def edge_fiber(self, n, m, eidx):
        """All level-n edge indices over a level-m edge."""
        self._level(n), self._level(m)
        current = [eidx]
        for k in range(m + 1, n + 1):
            children = self._levels[k - 1].children
            current = [c for j in current for c in children[j]]
        return sorted(current)

    # -- similarity embeddings -------------------------------------------------

    def sigma_embed(self, n, eidx, m):
        """The similarity map of edge e at level n into level n+m.

        Returns (vertex_map, edge_image): vertex_map sends every level-m
        vertex to its image in level n+m, and edge_image lists the image
        edge indices (the fiber of e).
        """
        if m < 1:
            raise LevelOutOfRange("m must be at least 1 for a similarity embedding")
        self._level(n + m)
        base = self.igs.base
        if not 0 <= eidx < len(self._level(n).edges):
            raise LevelOutOfRange(f"edge index {eidx} out of range at level {n}")
        vmap = {z: self.pair_vid(n + 1, z, eidx) for z in base.vertices}
        edge_image = list(self._level(n + 1).children[eidx])
        for k in range(1, m):
            src = self._level(k)
            # image of each level-k edge under the current vertex map
            eimg = {}
            for j, r in enumerate(src.edges):
                eimg[j] = self.edge_index(n + k, vmap[r.u], vmap[r.v])
            nxt = {}
            for vid in self._level(k + 1).graph.vertices:
                z, j = vid
                nxt[vid] = self.pair_vid(n + k + 1, z, eimg[j])
            vmap = nxt
            groups = [self._level(n + k + 1).children[j2] for j2 in eimg.values()]
            edge_image = [c for group in groups for c in group]
        return vmap, sorted(edge_image)

    def tile_vertices(self, n, eidx, m):
        """Vertex set of the copy e . G_m inside level n+m."""
        vmap, _ = self.sigma_embed(n, eidx, m)
        return sorted(vmap.values())

    # -- metrics ---------------------------------------------------------------

    def scaled_distance(self, n, a, b, l_star):
        """L_*^{-n} times the path distance; vertices or ('e', idx) items."""
        g = self.graph(n)

        def as_set(x):
            if isinstance(x, tuple) and len(x) == 2 and x[0] == "e":
                rec = self._level(n).edges[x[1]]
                return {rec.u, rec.v}
            return {x}

        from .graphs import path_distance

        d = path_distance(g, as_set(a), as_set(b))
        if math.isinf(d):
            return math.inf
        return Fraction(int(d), l_star ** n)

    # -- path decomposition -------------------------------------------------------

    def decompose_path(self, n, m, path_vertices, A, B):
        """Split a level-(n+m) path into a coarse level-n path plus sub-paths.

        The path must start in the ancestor fiber of A and end in the fiber
        of B (vertex sets at level n).  Returns (coarse, pieces) where
        coarse is a level-n vertex path and pieces[i] = (start, stop, eidx)
        delimits the sub-path crossing the copy of the level-n edge eidx
        between the fibers of coarse[i] and coarse[i+1].
        """
        A, B = set(A), set(B)
        g_top = self.graph(n + m)
        verts = list(path_vertices)
        for x, y in zip(verts, verts[1:]):
            if y not in g_top.adj[x]:
                raise InvalidEndpoints("not a path at the top level")
        proj = [self.project_vertex(n + m, v, n) for v in verts]
        if proj[0][0] != "v" or proj[0][1] not in A:
            raise InvalidEndpoints("path does not start in the fiber of A")
        if proj[-1][0] != "v" or proj[-1][1] not in B:
            raise InvalidEndpoints("path does not end in the fiber of B")
        step_parent = [
            self.project_edge(n + m, self.edge_index(n + m, x, y), n)
            for x, y in zip(verts, verts[1:])
        ]
        coarse = [proj[0][1]]
        pieces = []
        pos = 0
        while True:
            u_cur = coarse[-1]
            j = None
            for i in range(pos + 1, len(verts)):
                if proj[i][0] == "v" and proj[i][1] != u_cur:
                    j = i
                    break
            if j is None:
                if u_cur in B:
                    break
                raise InvalidEndpoints("path ends before reaching the fiber of B")
            e_hat = step_parent[j - 1]
            l = j - 1
            while l > pos and step_parent[l - 1] == e_hat:
                l -= 1
            pieces.append((l, j, e_hat))
            coarse.append(proj[j][1])
            pos = j
            if proj[j][1] in B:
                break
        return coarse, pieces


def build_tower(igs, levels, budget_edges=10**6):
    """Convenience constructor: an IGS tower built to the given level."""
    return Tower(igs, budget_edges=budget_edges).build_to(levels)


def embed_subtower(full, sub):
    """Vertex/edge embeddings of a sub-IGS tower into the full tower.

    The sub-IGS must have been obtained from the full IGS by deleting
    edges (and possibly isolated endpoints): every sub-base edge must
    exist in the full base with the same gluing data.  Returns
    (vertex_maps, edge_maps): per level (1-indexed), dictionaries sending
    sub-tower vertex ids / edge indices into the full tower.
    """
    top = min(full.top_level, sub.top_level)
    vmaps = [{v: v for v in sub.graph(1).vertices}]
    emaps = []
    emap1 = {}
    for i, rec in enumerate(sub.edge_recs(1)):
        emap1[i] = full.edge_index(1, rec.u, rec.v)
    emaps.append(emap1)
    for k in range(2, top + 1):
        prev_emap = emaps[-1]
        vmap = {}
        for vid in sub.graph(k).vertices:
            z, j = vid
            vmap[vid] = full.pair_vid(k, z, prev_emap[j])
        emap = {}
        for i, rec in enumerate(sub.edge_recs(k)):
            fu, fv = vmap[rec.u], vmap[rec.v]
            emap[i] = full.edge_index(k, fu, fv)
        vmaps.append(vmap)
        emaps.append(emap)
    return vmaps, emaps
