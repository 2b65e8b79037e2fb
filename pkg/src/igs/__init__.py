"""Iterated graph systems: edge-replacement towers, discrete p-modulus,
and conformal-dimension reports on the resulting graph sequences."""

from .analysis import (
    clp_assumption_report,
    conformal_dimension,
    counterexample_report,
    hausdorff_dimension,
    loewner_evidence,
    porosity_witness,
    removable_edge_check,
    remove_edge_subigs,
    walk_dimension,
)
from .graphs import (
    Graph,
    Path,
    build_graph,
    enumerate_simple_paths,
    find_isomorphism,
    max_edge_disjoint_paths,
    path_distance,
)
from .library import BUILTIN, load_builtin
from .modulus import (
    Density,
    Flow,
    Potential,
    SolveReport,
    brute_force_modulus,
    check_conductive_uniformity,
    duality_residual,
    level_modulus_check,
    p_capacity_solve,
    replacement_density,
    replacement_flow,
    vertex_modulus,
)
from .neighborhoods import neighborhood_classes
from .system import (
    IGS,
    check_doubling,
    check_uniform_scaling,
    detect_symmetry,
    from_glue_table,
    make_subdivided_lines,
    orient_from_order,
    validate_igs,
)
from .tower import Tower, build_tower, embed_subtower

__version__ = "0.1.0"

__all__ = [
    "BUILTIN",
    "Density",
    "Flow",
    "Graph",
    "IGS",
    "Path",
    "Potential",
    "SolveReport",
    "Tower",
    "build_graph",
    "build_tower",
    "brute_force_modulus",
    "check_conductive_uniformity",
    "check_doubling",
    "check_uniform_scaling",
    "clp_assumption_report",
    "conformal_dimension",
    "counterexample_report",
    "detect_symmetry",
    "duality_residual",
    "embed_subtower",
    "enumerate_simple_paths",
    "find_isomorphism",
    "from_glue_table",
    "hausdorff_dimension",
    "level_modulus_check",
    "load_builtin",
    "loewner_evidence",
    "make_subdivided_lines",
    "max_edge_disjoint_paths",
    "neighborhood_classes",
    "orient_from_order",
    "p_capacity_solve",
    "path_distance",
    "porosity_witness",
    "removable_edge_check",
    "remove_edge_subigs",
    "replacement_density",
    "replacement_flow",
    "validate_igs",
    "vertex_modulus",
    "walk_dimension",
]
