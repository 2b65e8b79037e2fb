"""Iterated graph systems: a base graph plus gluing rules.

An IGS consists of a finite simple connected graph together with a gluing
set I and, for every edge e = {v,u} and endpoint v, an injection from I
into the vertices whose image is independent and disjoint from the image
at the other endpoint.  Replacing every edge of a graph by a labeled copy
of the base, glued along these images, is the recursion implemented in
:mod:`igs.tower`.
"""

import math

from . import graphs
from .errors import (
    DisconnectedBase,
    NotOriented,
    ValidationError,
)
from .graphs import Graph, edge_key, find_isomorphism


class IGS:
    """Base graph plus gluing rules.

    Parameters
    ----------
    base : Graph
        The level-1 graph.
    gluing_set : sequence
        Ordered labels of the gluing set I.
    glue : mapping
        (vertex, edge_key) -> mapping label -> vertex.  One entry per
        endpoint of every edge.
    oriented : optional pair (phi_minus, phi_plus)
        The two global maps when the system is oriented; stored as
        label -> vertex mappings.
    name : str, optional
    """

    def __init__(self, base, gluing_set, glue, oriented=None, name=""):
        self.base = base
        self.gluing_set = tuple(gluing_set)
        self.glue = {
            (v, edge_key(*e)): dict(mp) for (v, e), mp in glue.items()
        }
        self.oriented = None
        if oriented is not None:
            self.oriented = (dict(oriented[0]), dict(oriented[1]))
        self.name = name
        self._cache = {}

    # -- gluing data ---------------------------------------------------------

    def image(self, v, e):
        """Image tuple of the injection at endpoint v of edge e, in gluing
        set order."""
        mp = self.glue[(v, edge_key(*e))]
        return tuple(mp[a] for a in self.gluing_set)

    def image_set(self, v, e):
        return frozenset(self.glue[(v, edge_key(*e))].values())

    def gluing_vertices(self):
        """All vertices lying in some gluing image."""
        out = set()
        for (v, e), mp in self.glue.items():
            out.update(mp.values())
        return out

    def label_pairs(self):
        """Sorted list of (image_at_u, image_at_v) tuples over edges, with
        u, v the canonical edge orientation."""
        pairs = []
        for (u, v) in self.base.edges:
            pairs.append((self.image(u, (u, v)), self.image(v, (u, v))))
        return pairs

    # -- structural constants --------------------------------------------------

    @property
    def diameter_constant(self):
        """diam(G_1) in the path metric; finite for valid (connected) bases."""
        if "diam" not in self._cache:
            self._cache["diam"] = graphs.diameter(self.base)
        return self._cache["diam"]

    @property
    def degree_constant(self):
        return self.base.max_degree()

    def neighbor_map(self):
        """z -> its unique neighbor, for every gluing-image vertex z.

        Only meaningful for doubling systems; raises KeyError-free dict for
        the vertices that do have degree one.
        """
        out = {}
        for z in sorted(self.gluing_vertices()):
            if self.base.degree(z) == 1:
                out[z] = self.base.adj[z][0]
        return out

    def __eq__(self, other):
        return (
            isinstance(other, IGS)
            and self.base == other.base
            and self.gluing_set == other.gluing_set
            and self.glue == other.glue
        )

    def __repr__(self):
        return (
            f"IGS({self.name or 'unnamed'}: |V|={len(self.base.vertices)}, "
            f"|E|={len(self.base.edges)}, |I|={len(self.gluing_set)})"
        )


def validate_igs(candidate):
    """Check every clause of the definition; returns the violation list.

    An empty list means the candidate is valid.  Each violation is a dict
    with a `clause` tag and a human-readable `message`.
    """
    violations = []
    base = candidate.base
    eset = set(base.edges)

    def bad(clause, message):
        violations.append({"clause": clause, "message": message})

    # every endpoint of every edge must carry an injection
    for (u, v) in base.edges:
        for x in (u, v):
            if (x, (u, v)) not in candidate.glue:
                bad("coverage", f"no gluing map at vertex {x!r} of edge {{{u!r},{v!r}}}")
    for (v, e), mp in candidate.glue.items():
        if e not in eset:
            bad("coverage", f"gluing map on unknown edge {e!r}")
            continue
        if v not in e:
            bad("coverage", f"gluing map at {v!r} which is not an endpoint of {e!r}")
            continue
        if set(mp.keys()) != set(candidate.gluing_set):
            bad("injectivity", f"map at ({v!r},{e!r}) is not defined on the whole gluing set")
            continue
        images = list(mp.values())
        for z in images:
            if z not in base:
                bad("injectivity", f"map at ({v!r},{e!r}) hits unknown vertex {z!r}")
        if len(set(images)) != len(images):
            bad("injectivity", f"map at ({v!r},{e!r}) is not injective")
        for i, a in enumerate(images):
            for b in images[i + 1:]:
                if a in base and b in base and b in base.adj[a]:
                    bad(
                        "independence",
                        f"image of ({v!r},{e!r}) contains the edge {{{a!r},{b!r}}}",
                    )
    for (u, v) in base.edges:
        ku, kv = (u, (u, v)), (v, (u, v))
        if ku in candidate.glue and kv in candidate.glue:
            shared = set(candidate.glue[ku].values()) & set(candidate.glue[kv].values())
            if shared:
                bad(
                    "disjointness",
                    f"images at the two endpoints of {{{u!r},{v!r}}} share {sorted(shared)!r}",
                )
    if not base.is_connected():
        bad("connectivity", "base graph is not connected")
    return violations


def orient_from_order(base, gluing_set, phi_minus, phi_plus, name=""):
    """Oriented IGS: the lesser endpoint of each edge gets phi_minus.

    phi_minus / phi_plus map gluing labels to vertices.
    """
    glue = {}
    for (u, v) in base.edges:
        glue[(u, (u, v))] = dict(phi_minus)
        glue[(v, (u, v))] = dict(phi_plus)
    igs = IGS(base, gluing_set, glue, oriented=(phi_minus, phi_plus), name=name)
    violations = validate_igs(igs)
    if violations:
        raise ValidationError(violations)
    return igs


def from_glue_table(base, gluing_set, table, name=""):
    """General IGS from an explicit per-(vertex, edge) table."""
    igs = IGS(base, gluing_set, table, name=name)
    violations = validate_igs(igs)
    if violations:
        raise ValidationError(violations)
    igs.oriented = _detect_orientation(igs)
    return igs


def _detect_orientation(igs):
    """Recover a global (phi_minus, phi_plus) pair if one exists."""
    maps = {}
    for (u, v) in igs.base.edges:
        for x in (u, v):
            maps[igs.image(x, (u, v))] = dict(igs.glue[(x, (u, v))])
    if len(maps) != 2:
        return None
    (im_a, mp_a), (im_b, mp_b) = sorted(maps.items())
    for (u, v) in igs.base.edges:
        pair = {igs.image(u, (u, v)), igs.image(v, (u, v))}
        if pair != {im_a, im_b}:
            return None
    return (mp_a, mp_b)


def make_subdivided_lines(n_lines, length, identifications, name=""):
    """Parallel subdivided segments glued at interior positions.

    Takes `n_lines` copies of a segment subdivided into `length` arcs and
    identifies interior subdivision points according to `identifications`,
    a mapping position -> list of groups (each group a list of copy
    indices in 1..n_lines).  Positions run 1..length-1.  Copies not named
    in any group stay separate.  The result is the oriented system whose
    gluing set is {1..n_lines} marking the left and right segment ends.
    """
    if n_lines < 2:
        raise ValueError("need at least two segment copies")
    if length < 2:
        raise ValueError("need at least two arcs per segment")
    # union-find over (position, copy) for interior positions
    parent = {}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for k in range(1, length):
        for i in range(1, n_lines + 1):
            parent[(k, i)] = (k, i)
    for k, groups in (identifications or {}).items():
        if not 1 <= k <= length - 1:
            raise ValueError(f"identification position {k} out of range")
        for group in groups:
            group = sorted(group)
            for i in group[1:]:
                ra, rb = find((k, group[0])), find((k, i))
                if ra != rb:
                    parent[max(ra, rb)] = min(ra, rb)

    # class ids ordered by position, then least copy index
    classes = sorted({find((k, i)) for k in range(1, length) for i in range(1, n_lines + 1)})
    class_id = {}
    next_id = n_lines
    for rep in classes:
        next_id += 1
        class_id[rep] = next_id
    total = next_id + n_lines

    def vertex_at(k, i):
        if k == 0:
            return i
        if k == length:
            return total - n_lines + i
        return class_id[find((k, i))]

    vertices = list(range(1, n_lines + 1)) + [class_id[c] for c in classes] + [
        total - n_lines + i for i in range(1, n_lines + 1)
    ]
    edges = []
    for i in range(1, n_lines + 1):
        for k in range(length):
            edges.append((vertex_at(k, i), vertex_at(k + 1, i)))
    base = Graph(vertices, edges)
    if not base.is_connected():
        raise DisconnectedBase("identifications leave the base graph disconnected")
    labels = list(range(1, n_lines + 1))
    phi_minus = {i: i for i in labels}
    phi_plus = {i: total - n_lines + i for i in labels}
    return orient_from_order(base, labels, phi_minus, phi_plus, name=name)


def check_uniform_scaling(igs):
    """The common distance between opposite gluing images, or None.

    Returns L when d(x, y) = L >= 2 for every edge e = {v,u} and every
    x in the image at v, y in the image at u; otherwise None.
    """
    L = None
    for (u, v) in igs.base.edges:
        iu = igs.image_set(u, (u, v))
        iv = igs.image_set(v, (u, v))
        for x in sorted(iu):
            for y in sorted(iv):
                d = graphs.path_distance(igs.base, x, y)
                if L is None:
                    L = d
                elif d != L:
                    return None
    if L is None or math.isinf(L) or L < 2:
        return None
    return int(L)


def check_doubling(igs):
    """True when every gluing-image vertex has degree one."""
    return all(igs.base.degree(z) == 1 for z in igs.gluing_vertices())


def detect_symmetry(igs, extra_pins=None):
    """Automorphism eta of the base with eta(phi_-) = phi_+ and back.

    Only defined for oriented systems; raises NotOriented otherwise.  The
    search is deterministic, so repeated calls return the same map.  Extra
    pins constrain the automorphism further (used by the removable-edge
    certificate, which needs eta to fix both endpoints of a candidate).
    """
    pair = igs.oriented if igs.oriented is not None else _detect_orientation(igs)
    if pair is None:
        raise NotOriented("no global (phi_minus, phi_plus) pair")
    phi_minus, phi_plus = pair
    pins = {}
    for a in igs.gluing_set:
        pins[phi_minus[a]] = phi_plus[a]
        pins[phi_plus[a]] = phi_minus[a]
    for v, w in (extra_pins or {}).items():
        if v in pins and pins[v] != w:
            return None
        pins[v] = w
    return find_isomorphism(igs.base, igs.base, pins)
