"""Dimension computations, removable edges, porosity, and the end-to-end
non-attainment report.

The conformal dimension of a conductively uniform system is the exponent
where the common gluing-problem modulus crosses 1; a removable edge with a
matching sub-system dimension plus a porosity witness is the finite-level
evidence that the limit space cannot attain that dimension.
"""

import math
from collections import deque
from fractions import Fraction

from . import modulus as _mod
from .errors import (
    AssumptionFailure,
    BudgetExceeded,
    NotDoubling,
    NotOriented,
    NotRemovableStructure,
    NotUniformScaling,
    UnknownEdge,
    ValidationError,
)
from .graphs import Graph, bfs_distances, edge_key, max_edge_disjoint_paths
from .system import IGS, check_doubling, check_uniform_scaling, detect_symmetry, validate_igs
from .tower import Tower, embed_subtower

DEFAULT_P_GRID = (1.1, 1.25, 1.5, 2.0, 3.0, 4.0)


class _ProblemCache:
    """Memoizes gluing-problem solves per (terminals, p)."""

    def __init__(self, igs, solver_tol=_mod.DEFAULT_TOL):
        self.igs = igs
        self.solver_tol = solver_tol
        self._store = {}

    def solve(self, a_img, b_img, p):
        key = (tuple(a_img), tuple(b_img), p)
        if key not in self._store:
            self._store[key] = _mod.p_capacity_solve(
                self.igs.base, set(a_img), set(b_img), p, tol=self.solver_tol
            )
        return self._store[key]

    def modulus(self, p):
        problems = sorted(_mod.gluing_problems(self.igs))
        a, b = problems[0]
        return self.solve(a, b, p).value


def hausdorff_dimension(igs):
    """log |E_1| / log L_*; needs uniform scaling and doubling."""
    l_star = check_uniform_scaling(igs)
    if l_star is None:
        raise NotUniformScaling("no common gluing distance")
    if not check_doubling(igs):
        raise NotDoubling("a gluing-image vertex has degree above 1")
    return math.log(len(igs.base.edges)) / math.log(l_star)


def clp_assumption_report(igs, p_grid=(1.25, 1.5, 2.0, 3.0), tol=1e-8):
    """The four structural clauses, each with its evidence."""
    l_star = check_uniform_scaling(igs)
    doubling = check_doubling(igs)
    uniformity = None
    symmetry = None
    if doubling:
        uniformity = _mod.check_conductive_uniformity(igs, p_grid, tol=tol)
        try:
            symmetry = detect_symmetry(igs)
        except NotOriented:
            symmetry = None
    two_paths = False
    witness = None
    for (a, b), pairs in sorted(_mod.gluing_problems(igs).items()):
        if max_edge_disjoint_paths(igs.base, set(a), set(b)) >= 2:
            two_paths = True
            witness = pairs[0]
            break
    return {
        "uniform_scaling": l_star is not None,
        "l_star": l_star,
        "doubling": doubling,
        "conductively_uniform": bool(uniformity and uniformity["uniform"]),
        "uniformity": uniformity,
        "uniformity_certificate": "symmetry" if symmetry else "empirical-grid",
        "two_disjoint_paths": two_paths,
        "disjoint_paths_witness": witness,
        "all_hold": bool(
            l_star is not None
            and doubling
            and uniformity
            and uniformity["uniform"]
            and two_paths
        ),
    }


def _require_assumptions(igs, clauses=("1", "2", "3", "4*"), p_grid=(1.25, 1.5, 2.0, 3.0)):
    report = clp_assumption_report(igs, p_grid=p_grid)
    named = {
        "1": ("uniform_scaling", "uniform scaling fails"),
        "2": ("doubling", "doubling fails"),
        "3": ("conductively_uniform", "conductive uniformity fails"),
        "4*": ("two_disjoint_paths", "no two edge-disjoint connecting paths"),
    }
    for clause in clauses:
        key, msg = named[clause]
        if not report[key]:
            raise AssumptionFailure(clause, msg)
    return report


def conformal_dimension(igs, tol=1e-9, solver_tol=_mod.DEFAULT_TOL, details=False):
    """The exponent where the gluing-problem modulus equals 1.

    Bisection over p; the bracket is expanded upward until the modulus
    dips below 1, which the admissibility of the constant density
    guarantees to happen.  Stops when |modulus - 1| <= tol.
    """
    _require_assumptions(igs)
    cache = _ProblemCache(igs, solver_tol=solver_tol)
    evals = [0]

    def f(p):
        evals[0] += 1
        return cache.modulus(p)

    lo = 1.0 + 1e-6
    if f(lo) <= 1.0:
        raise AssumptionFailure("4*", "modulus does not exceed 1 near p = 1")
    hi = 4.0
    while f(hi) >= 1.0:
        hi *= 2.0
        if hi > 2.0 ** 20:
            raise AssumptionFailure("1", "modulus never drops below 1")
    q_star = None
    value = None
    while True:
        mid = 0.5 * (lo + hi)
        value = f(mid)
        if abs(value - 1.0) <= tol or hi - lo < 1e-14:
            q_star = mid
            break
        if value > 1.0:
            lo = mid
        else:
            hi = mid
    result = {
        "q_star": q_star,
        "modulus_at_q_star": value,
        "bracket": (lo, hi),
        "tolerance": tol,
        "solver_evaluations": evals[0],
    }
    return result if details else result["q_star"]


def walk_dimension(igs, p, tol=1e-9, solver_tol=_mod.DEFAULT_TOL):
    """log(|E_1| / modulus) / log L_* plus the constant-density flag.

    The flag is true exactly when the solved optimal density of the
    gluing problem is the constant 1/L_* on every edge, in which case the
    walk dimension equals p.
    """
    _require_assumptions(igs, clauses=("1", "2", "3"), p_grid=(p,))
    l_star = check_uniform_scaling(igs)
    cache = _ProblemCache(igs, solver_tol=solver_tol)
    problems = sorted(_mod.gluing_problems(igs))
    value = cache.solve(*problems[0], p).value
    dim = math.log(len(igs.base.edges) / value) / math.log(l_star)
    constant = 1.0 / l_star
    flat = True
    for (a, b) in problems:
        dens = cache.solve(a, b, p).density
        if any(abs(v - constant) > tol for v in dens.values.values()):
            flat = False
            break
    return {"walk_dimension": dim, "p": p, "constant_density": flat, "modulus": value}


def remove_edge_subigs(igs, estar):
    """The sub-system left by deleting a structurally removable edge."""
    estar = edge_key(*estar)
    if estar not in set(igs.base.edges):
        raise UnknownEdge(f"edge {estar!r} not in the base graph")
    gluing = igs.gluing_vertices()
    if estar[0] in gluing or estar[1] in gluing:
        raise NotRemovableStructure("the edge touches a gluing image")
    l_star = check_uniform_scaling(igs)
    keep_edges = [e for e in igs.base.edges if e != estar]
    drop = {v for v in estar if igs.base.degree(v) == 1}
    vertices = [v for v in igs.base.vertices if v not in drop]
    base = Graph(vertices, keep_edges)
    if not base.is_connected():
        raise NotRemovableStructure("deletion disconnects the base graph")
    glue = {
        key: dict(mp)
        for key, mp in igs.glue.items()
        if key[1] != estar
    }
    sub = IGS(
        base,
        igs.gluing_set,
        glue,
        oriented=igs.oriented,
        name=f"{igs.name}-minus-{estar[0]}-{estar[1]}" if igs.name else "",
    )
    violations = validate_igs(sub)
    if violations:
        raise ValidationError(violations)
    sub_l = check_uniform_scaling(sub)
    if l_star is not None and sub_l != l_star:
        raise NotRemovableStructure(
            f"deletion changes the scaling constant from {l_star} to {sub_l}"
        )
    return sub


def removable_edge_check(igs, estar, p_grid=DEFAULT_P_GRID, tol=1e-9, cache=None):
    """All three removability clauses with their evidence.

    Clause 3 is certified exactly through a label-swapping symmetry fixing
    both endpoints when one exists; otherwise it is checked numerically
    over the exponent grid and tagged as empirical.
    """
    estar = edge_key(*estar)
    if estar not in set(igs.base.edges):
        raise UnknownEdge(f"edge {estar!r} not in the base graph")
    cache = cache or _ProblemCache(igs)
    gluing = igs.gluing_vertices()
    clause1 = estar[0] not in gluing and estar[1] not in gluing
    clause2 = False
    clause2_detail = ""
    if clause1:
        try:
            remove_edge_subigs(igs, estar)
            clause2 = True
        except (NotRemovableStructure, ValidationError) as exc:
            clause2_detail = str(exc)
    certificate = None
    clause3 = False
    grid_evidence = {}
    if clause1 and clause2:
        eta = None
        try:
            eta = detect_symmetry(igs, extra_pins={estar[0]: estar[0], estar[1]: estar[1]})
        except NotOriented:
            eta = None
        if eta is not None:
            certificate = "symmetry"
            clause3 = True
        # numeric evidence is recorded either way; it cross-validates the
        # symmetry certificate and is the sole evidence otherwise
        worst = 0.0
        for p in p_grid:
            for (a, b) in sorted(_mod.gluing_problems(igs)):
                rep = cache.solve(a, b, p)
                rho = rep.density.values[estar]
                fl = rep.flow.magnitude(estar)
                worst = max(worst, rho, fl)
            grid_evidence[p] = worst
        if certificate is None:
            clause3 = worst <= tol
            certificate = "empirical" if clause3 else None
    return {
        "edge": estar,
        "clause1_no_gluing_vertex": clause1,
        "clause2_structure": clause2,
        "clause2_detail": clause2_detail,
        "clause3_zero_density": clause3,
        "certificate": certificate,
        "grid_evidence": grid_evidence,
        "p_grid": list(p_grid),
        "tol": tol,
        "removable": clause1 and clause2 and clause3,
    }


# ---------------------------------------------------------------------------
# porosity


def porosity_witness(full_tower, sub_tower, levels):
    """Finite-level empty-ball witnesses around the embedded sub-space.

    For every scale band m in `levels` and every embedded vertex, a
    witness vertex is produced by descending through copies of the
    removable edge; the witness stays within the band's proximity bound
    of the embedded vertex while keeping a quantified distance from the
    whole embedded set.  Both distances are checked exhaustively at level
    m + 3, one level deeper than the crossing where the witness edge
    first separates from the embedded tower.  Reports the verified
    porosity constant alongside the closed-form target.
    """
    igs = full_tower.igs
    sub = sub_tower.igs
    levels = sorted(set(int(m) for m in levels))
    if not levels or levels[0] < 1:
        raise ValueError("scale bands must be positive integers")
    missing = set(igs.base.edges) - set(sub.base.edges)
    if not missing:
        return {
            "verified": False,
            "failure": "no removed edge: the embedded set is everything",
            "bands": {},
        }
    if len(missing) != 1:
        raise NotRemovableStructure("sub-system must differ by exactly one edge")
    estar = missing.pop()
    l_star = check_uniform_scaling(igs)
    if l_star is None:
        raise NotUniformScaling("porosity scales need uniform scaling")
    c_diam = max(igs.diameter_constant, sub.diameter_constant)
    need = max(levels) + 3
    if full_tower.top_level < need or sub_tower.top_level < need:
        raise BudgetExceeded(
            f"towers must be built to level {need} for bands {levels}"
        )
    vmaps, emaps = embed_subtower(full_tower, sub_tower)

    def removable_child(level, parent_idx):
        for child in full_tower._level(level).children[parent_idx]:
            rec = full_tower.edge_recs(level)[child]
            if edge_key(rec.zu, rec.zv) == estar:
                return child
        raise NotRemovableStructure("no copy of the removed edge inside the tile")

    bands = {}
    verified = True
    c_formula = 1.0 / (4.0 * c_diam * l_star ** 2)
    c_corrected = 1.0 / (4.0 * c_diam * l_star ** 3)
    c_measured = math.inf
    for m in levels:
        n = m + 3
        g_n = full_tower.graph(n)
        embedded = sorted(vmaps[n - 1].values())
        sep_dist = bfs_distances(g_n, embedded)
        proximity_bound = 2 * c_diam * l_star ** (n - m - 1)
        separation_bound = l_star ** (n - m - 3)  # unscaled form of L^{-(m+3)}
        band_rows = []
        band_ok = True
        worst_prox = 0
        worst_sep = math.inf
        for sub_eidx in range(sub_tower.edge_count(m + 1)):
            full_eidx = emaps[m][sub_eidx]
            # witness cascade through copies of the removed edge
            cur = removable_child(m + 2, full_eidx)
            for k in range(m + 3, n + 1):
                cur = removable_child(k, cur)
            rec = full_tower.edge_recs(n)[cur]
            y = rec.u if rec.zu == estar[0] else rec.v
            sep = sep_dist.get(y, math.inf)
            # embedded vertices of this tile, via the sub-tower tile
            svmap, _ = sub_tower.sigma_embed(m + 1, sub_eidx, n - m - 1)
            tile_sub = sorted(set(svmap.values()))
            tile_emb = [vmaps[n - 1][x] for x in tile_sub]
            full_tile = set(full_tower.tile_vertices(m + 1, full_eidx, n - m - 1))
            # distances within the tile bound the true ones from above
            dist_y = _restricted_bfs(g_n, y, full_tile)
            prox = max(dist_y[x] for x in tile_emb)
            ok = prox <= proximity_bound and sep >= separation_bound
            band_ok = band_ok and ok
            worst_prox = max(worst_prox, prox)
            worst_sep = min(worst_sep, sep)
            band_rows.append(
                {
                    "tile": sub_eidx,
                    "witness": str(y),
                    "separation_steps": None if math.isinf(sep) else int(sep),
                    "max_proximity_steps": int(prox),
                }
            )
        r_hi = 3 * c_diam * Fraction(1, l_star ** m)
        band_c = float(Fraction(int(worst_sep), l_star ** n) / r_hi) if not math.isinf(worst_sep) else 0.0
        c_measured = min(c_measured, band_c, 1.0 / 3.0)
        verified = verified and band_ok
        bands[m] = {
            "check_level": n,
            "verified": band_ok,
            "max_proximity_steps": worst_prox,
            "proximity_bound_steps": proximity_bound,
            "min_separation_steps": None if math.isinf(worst_sep) else int(worst_sep),
            "separation_bound_steps": separation_bound,
            "tiles": band_rows,
        }
    return {
        "verified": verified,
        "removed_edge": estar,
        "constant_formula": c_formula,
        "constant_corrected": c_corrected,
        "constant_verified": c_measured if verified else 0.0,
        "bands": bands,
        "diameter_constant": c_diam,
        "l_star": l_star,
    }


def _restricted_bfs(g, start, allowed):
    dist = {start: 0}
    queue = deque([start])
    while queue:
        x = queue.popleft()
        for y in g.adj[x]:
            if y in allowed and y not in dist:
                dist[y] = dist[x] + 1
                queue.append(y)
    return dist


# ---------------------------------------------------------------------------
# scale-invariance evidence


def annulus_pair(tower, level, v, radius=3):
    """A vertex against everything at path distance >= radius from it."""
    g = tower.graph(level)
    dist = bfs_distances(g, [v])
    far = sorted(x for x in g.vertices if dist.get(x, math.inf) >= radius)
    return ({v}, set(far))


def loewner_evidence(tower, pairs, level, p, m_max, solver_tol=_mod.DEFAULT_TOL):
    """Solved modulus across levels against the multiplicative prediction.

    For each terminal pair at the given level, lifts the terminals through
    m replacement steps and reports solved modulus / (common modulus)^m.
    Bounded ratio bands across m are the finite-level shadow of scale
    invariance; the table records them without asserting a verdict.
    """
    igs = tower.igs
    report = _mod.check_conductive_uniformity(igs, [p])
    if not report["uniform"]:
        raise AssumptionFailure("3", "conductive uniformity fails")
    m_p = report["per_p"][p]["modulus"]
    tower.build_to(level + m_max)
    rows = []
    for A, B in pairs:
        base_rep = _mod.p_capacity_solve(tower.graph(level), set(A), set(B), p, tol=solver_tol)
        ratios = {}
        for m in range(1, m_max + 1):
            lifted_a = {x for a in A for x in tower.vertex_fiber(level + m, level, a)}
            lifted_b = {x for b in B for x in tower.vertex_fiber(level + m, level, b)}
            rep = _mod.p_capacity_solve(
                tower.graph(level + m), lifted_a, lifted_b, p, tol=solver_tol
            )
            ratios[m] = rep.value / m_p ** m
        values = [base_rep.value] + [ratios[m] for m in sorted(ratios)]
        rows.append(
            {
                "pair": (sorted(str(a) for a in A), sorted(str(b) for b in B)),
                "base_value": base_rep.value,
                "ratios": ratios,
                "band": (min(values), max(values)),
            }
        )
    return {"p": p, "modulus_constant": m_p, "level": level, "rows": rows}


# ---------------------------------------------------------------------------
# the end-to-end report


def counterexample_report(
    igs,
    tol=1e-9,
    p_grid=DEFAULT_P_GRID,
    porosity_levels=(1,),
    budget_edges=10**6,
):
    """Assumptions, dimensions, removable-edge scan, sub-system dimension
    agreement, and the porosity witness, with a single verdict.

    The verdict is positive exactly when the structural assumptions hold
    and some removable edge leaves a sub-system with the same conformal
    dimension; the porosity witness then certifies the embedded copy is
    porous at the tested scales.
    """
    assumptions = clp_assumption_report(igs)
    cache = _ProblemCache(igs)
    result = {
        "name": igs.name,
        "assumptions": assumptions,
        "verdict": False,
        "verdict_reason": "",
    }
    if assumptions["uniform_scaling"] and assumptions["doubling"]:
        result["hausdorff_dimension"] = hausdorff_dimension(igs)
    walk = {}
    if assumptions["uniform_scaling"] and assumptions["doubling"] and assumptions["conductively_uniform"]:
        for p in p_grid:
            walk[p] = walk_dimension(igs, p)
        result["walk_dimensions"] = {
            str(p): {"value": walk[p]["walk_dimension"], "equals_p": walk[p]["constant_density"]}
            for p in p_grid
        }
        result["walk_dimension_strict"] = all(
            walk[p]["walk_dimension"] > p + 1e-12 for p in p_grid
        )
    if not assumptions["all_hold"]:
        result["verdict_reason"] = "structural assumptions fail"
        return result
    confdim = conformal_dimension(igs, tol=tol, details=True)
    result["conformal_dimension"] = confdim["q_star"]
    result["conformal_dimension_details"] = confdim

    scan = {}
    removable = []
    for e in igs.base.edges:
        record = removable_edge_check(igs, e, p_grid=p_grid, cache=cache)
        scan[f"{e[0]},{e[1]}"] = record
        if record["removable"]:
            removable.append(record)
    result["removable_scan"] = {
        k: {kk: vv for kk, vv in rec.items() if kk != "grid_evidence"}
        for k, rec in scan.items()
    }
    if not removable:
        result["verdict_reason"] = "no removable edge"
        return result

    chosen = removable[0]
    estar = chosen["edge"]
    sub = remove_edge_subigs(igs, estar)
    sub_conf = conformal_dimension(sub, tol=tol, details=True)
    agreement = abs(confdim["q_star"] - sub_conf["q_star"])
    result["removable_edge"] = {"edge": estar, "certificate": chosen["certificate"]}
    result["sub_system"] = {
        "name": sub.name,
        "conformal_dimension": sub_conf["q_star"],
        "dimension_gap": agreement,
        "dimensions_agree": agreement <= 2 * tol,
    }

    need = max(porosity_levels) + 3
    full_tower = Tower(igs, budget_edges=budget_edges).build_to(need)
    sub_tower = Tower(sub, budget_edges=budget_edges).build_to(need)
    porosity = porosity_witness(full_tower, sub_tower, porosity_levels)
    result["porosity"] = {
        "verified": porosity["verified"],
        "constant_formula": porosity["constant_formula"],
        "constant_corrected": porosity["constant_corrected"],
        "constant_verified": porosity["constant_verified"],
        "bands": {
            str(m): {k: v for k, v in band.items() if k != "tiles"}
            for m, band in porosity["bands"].items()
        },
    }

    positive = (
        assumptions["all_hold"]
        and result["sub_system"]["dimensions_agree"]
        and porosity["verified"]
    )
    result["verdict"] = positive
    result["verdict_reason"] = (
        "non-attainment counterexample" if positive else "dimension or porosity mismatch"
    )
    return result
