"""Classification of edge neighborhoods up to label-preserving isomorphism.

Two edges (possibly at different levels) are in the same class when their
extended neighborhoods admit a graph isomorphism that carries one central
edge to the other and preserves the gluing-map label at every endpoint of
every edge.  Finiteness of the class list across levels is the
combinatorial backbone of approximate self-similarity.
"""

from collections import deque

from .graphs import edge_key


def _ball_around_edge(graph, u, v, radius):
    dist = {u: 0, v: 0}
    queue = deque([u, v])
    while queue:
        x = queue.popleft()
        if dist[x] == radius:
            continue
        for y in graph.adj[x]:
            if y not in dist:
                dist[y] = dist[x] + 1
                queue.append(y)
    return dist


def _edge_labels(igs, rec):
    """(label at u, label at v) of a tower edge, as gluing-image tuples."""
    e = edge_key(rec.zu, rec.zv)
    return igs.image(rec.zu, e), igs.image(rec.zv, e)


class _Patch:
    """Extended neighborhood of one edge: graph data plus labels."""

    __slots__ = ("vertices", "adj", "labels", "center", "dist", "degree")

    def __init__(self, tower, level, eidx, radius):
        igs = tower.igs
        graph = tower.graph(level)
        recs = tower.edge_recs(level)
        rec = recs[eidx]
        dist = _ball_around_edge(graph, rec.u, rec.v, radius)
        inside = set(dist)
        self.vertices = sorted(inside)
        self.adj = {x: tuple(y for y in graph.adj[x] if y in inside) for x in self.vertices}
        self.labels = {}
        for r in recs:
            if r.u in inside and r.v in inside:
                lu, lv = _edge_labels(igs, r)
                self.labels[(r.u, r.v)] = {r.u: lu, r.v: lv}
        self.center = (rec.u, rec.v)
        self.dist = dist
        self.degree = {x: len(self.adj[x]) for x in self.vertices}

    def label_at(self, x, y):
        return self.labels[edge_key(x, y)][x]

    def vertex_signature(self, x):
        incident = tuple(sorted(self.label_at(x, y) for y in self.adj[x]))
        return (self.dist[x], self.degree[x], incident)

    def certificate(self):
        sigs = sorted(self.vertex_signature(x) for x in self.vertices)
        cu, cv = self.center
        central = tuple(sorted((self.vertex_signature(cu), self.vertex_signature(cv))))
        n_edges = len(self.labels)
        return (len(self.vertices), n_edges, central, tuple(sigs))


def _patch_isomorphic(p1, p2):
    """Label-preserving isomorphism carrying center to center, or False."""
    if len(p1.vertices) != len(p2.vertices) or len(p1.labels) != len(p2.labels):
        return False
    sig2 = {}
    for x in p2.vertices:
        sig2.setdefault(p2.vertex_signature(x), []).append(x)

    def attempt(pin_pairs):
        mapping = {}
        used = set()
        for a, b in pin_pairs:
            if p1.vertex_signature(a) != p2.vertex_signature(b):
                return None
            mapping[a] = b
            used.add(b)
        order = [x for x in p1.vertices if x not in mapping]
        order.sort(key=lambda x: (-p1.degree[x], p1.dist[x], x))
        adj2 = {x: set(p2.adj[x]) for x in p2.vertices}

        def consistent(x, y):
            for w in p1.adj[x]:
                if w in mapping:
                    if mapping[w] not in adj2[y]:
                        return False
                    if p1.label_at(x, w) != p2.label_at(y, mapping[w]):
                        return False
                    if p1.label_at(w, x) != p2.label_at(mapping[w], y):
                        return False
            mapped_neighbors = {mapping[w] for w in p1.adj[x] if w in mapping}
            for y2 in adj2[y]:
                if y2 in used and y2 not in mapped_neighbors:
                    return False
            return True

        def search(i):
            if i == len(order):
                return True
            x = order[i]
            for y in sig2.get(p1.vertex_signature(x), ()):
                if y in used or not consistent(x, y):
                    continue
                mapping[x] = y
                used.add(y)
                if search(i + 1):
                    return True
                del mapping[x]
                used.remove(y)
            return False

        # the pinned center must itself be label-consistent
        for a, b in pin_pairs:
            if not consistent(a, b):
                return None
        if search(0):
            return mapping
        return None

    (a1, b1), (a2, b2) = p1.center, p2.center
    return attempt([(a1, a2), (b1, b2)]) or attempt([(a1, b2), (b1, a2)]) or False


def neighborhood_classes(tower, up_to_level, radius_factor=10):
    """Classify every edge's neighborhood at levels 1..up_to_level.

    The neighborhood radius is radius_factor * diam(G_1).  Returns a dict
    with per-level class counts, the cumulative count after each level,
    and the class index assigned to every edge.
    """
    tower.build_to(up_to_level)
    radius = radius_factor * tower.igs.diameter_constant
    classes = []  # list of (certificate, patch, id)
    by_cert = {}
    edge_class = {}
    per_level = {}
    cumulative = {}
    for level in range(1, up_to_level + 1):
        seen_here = set()
        for eidx in range(tower.edge_count(level)):
            patch = _Patch(tower, level, eidx, radius)
            cert = patch.certificate()
            assigned = None
            for cid in by_cert.get(cert, ()):
                if _patch_isomorphic(patch, classes[cid][1]):
                    assigned = cid
                    break
            if assigned is None:
                assigned = len(classes)
                classes.append((cert, patch, assigned))
                by_cert.setdefault(cert, []).append(assigned)
            edge_class[(level, eidx)] = assigned
            seen_here.add(assigned)
        per_level[level] = len(seen_here)
        cumulative[level] = len(classes)
    return {
        "per_level": per_level,
        "cumulative": cumulative,
        "edge_class": edge_class,
        "n_classes": len(classes),
    }
