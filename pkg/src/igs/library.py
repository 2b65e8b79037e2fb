"""The bundled example systems.

Each constructor returns a fresh validated IGS.  The same systems ship as
spec files under ``igs/data`` for the parser and the command line; the
test suite pins the two representations against each other.
"""

from .graphs import build_graph
from .system import from_glue_table, make_subdivided_lines, orient_from_order


def laakso_diamond():
    """Six-vertex diamond with a single gluing point at each end."""
    base = build_graph(
        [1, 2, 3, 4, 5, 6],
        [(1, 2), (2, 3), (2, 4), (4, 5), (3, 5), (5, 6)],
    )
    return orient_from_order(base, ["a"], {"a": 1}, {"a": 6}, name="laakso_diamond")


def laakso_space():
    """Four-edge star: two left and two right gluing points joined at a hub."""
    base = build_graph([1, 2, 3, 4, 5], [(1, 3), (2, 3), (3, 4), (3, 5)])
    return orient_from_order(
        base, ["a", "b"], {"a": 1, "b": 2}, {"a": 4, "b": 5}, name="laakso_space"
    )


def laakso_n2_l4():
    """Two subdivided segments glued at the quarter points; 8 edges."""
    return make_subdivided_lines(
        2, 4, {1: [[1, 2]], 3: [[1, 2]]}, name="laakso_n2_l4"
    )


def counterexample():
    """The 9-edge system: two glued segments plus the central edge {4,5}."""
    base = build_graph(
        [1, 2, 3, 4, 5, 6, 7, 8],
        [
            (1, 3), (3, 4), (4, 6), (6, 7),
            (2, 3), (3, 5), (5, 6), (6, 8),
            (4, 5),
        ],
    )
    return orient_from_order(
        base, ["a", "b"], {"a": 1, "b": 2}, {"a": 7, "b": 8}, name="counterexample"
    )


def nonsym_n3_l4():
    """Three subdivided segments with asymmetric identifications; 12 edges."""
    return make_subdivided_lines(
        3, 4, {1: [[1, 2]], 3: [[1, 2, 3]]}, name="nonsym_n3_l4"
    )


def nonsym_n3_l4_removable():
    """The previous system plus the vertical edge {4,5}; 13 edges."""
    sys0 = nonsym_n3_l4()
    base = build_graph(sys0.base.vertices, list(sys0.base.edges) + [(4, 5)])
    phi_minus, phi_plus = sys0.oriented
    return orient_from_order(
        base, sys0.gluing_set, phi_minus, phi_plus, name="nonsym_n3_l4_removable"
    )


def probably_loewner():
    """Ten-edge system with a three-point gluing set and no removable edge.

    The extra edges {3,9} and {6,10} are oriented against the vertex
    order, so the system is given by a full glue table.
    """
    base = build_graph(
        [1, 2, 3, 4, 5, 6, 7, 8, 9, 10],
        [
            (1, 3), (3, 4), (4, 6), (6, 7),
            (2, 3), (3, 5), (5, 6), (6, 8),
            (3, 9), (6, 10),
        ],
    )
    phi_minus = {"a": 1, "b": 2, "c": 9}
    phi_plus = {"a": 7, "b": 8, "c": 10}
    table = {}
    for (u, v) in base.edges:
        table[(u, (u, v))] = dict(phi_minus)
        table[(v, (u, v))] = dict(phi_plus)
    # the pendant edges run outward: 9 and 10 carry the boundary maps
    table[(9, (3, 9))] = dict(phi_minus)
    table[(3, (3, 9))] = dict(phi_plus)
    table[(6, (6, 10))] = dict(phi_minus)
    table[(10, (6, 10))] = dict(phi_plus)
    return from_glue_table(base, ["a", "b", "c"], table, name="probably_loewner")


def smallest_counterexample():
    """The four-edge star plus a pendant edge fixed by the reflection."""
    base = build_graph([1, 2, 3, 4, 5, 6], [(1, 3), (2, 3), (3, 4), (3, 5), (3, 6)])
    return orient_from_order(
        base, ["a", "b"], {"a": 1, "b": 2}, {"a": 5, "b": 6}, name="smallest_counterexample"
    )


BUILTIN = {
    "laakso_diamond": laakso_diamond,
    "laakso_space": laakso_space,
    "laakso_n2_l4": laakso_n2_l4,
    "counterexample": counterexample,
    "nonsym_n3_l4": nonsym_n3_l4,
    "nonsym_n3_l4_removable": nonsym_n3_l4_removable,
    "probably_loewner": probably_loewner,
    "smallest_counterexample": smallest_counterexample,
}


def load_builtin(name):
    try:
        return BUILTIN[name]()
    except KeyError:
        raise KeyError(
            f"unknown builtin {name!r}; choose from {sorted(BUILTIN)}"
        ) from None
