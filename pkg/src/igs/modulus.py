"""Discrete p-modulus, p-capacity, optimal densities and unit flows.

The connecting modulus between two vertex sets is computed as a p-capacity:
minimize the p-Dirichlet energy over potentials pinned to 0 on A and 1 on
B.  The optimal density is the potential's edge increment and the optimal
unit flow follows from the same potential, which yields a duality
certificate checked on every solve.  An independent brute-force solver
over explicitly enumerated path families backs the capacity path in tests.
"""

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from . import graphs as _graphs
from .errors import (
    BadExponent,
    Disconnected,
    EmptyFamily,
    NonConvergence,
    NotAdmissible,
    NotDoubling,
    NotUniform,
    NotUnitFlow,
    TooManyPaths,
)
from .graphs import edge_key

EPS_STAGES = (1e-2, 1e-4, 1e-6, 1e-8, 1e-10, 1e-12)
DEFAULT_TOL = 1e-10
MAX_ITER_PER_STAGE = 10_000


def dual_exponent(p):
    if p <= 1:
        raise BadExponent(f"p must exceed 1, got {p}")
    return p / (p - 1.0)


# ---------------------------------------------------------------------------
# value objects


@dataclass
class Potential:
    """Vertex potential pinned to fixed values on two terminal sets."""

    graph: object
    values: dict
    source: frozenset
    sink: frozenset

    def increment(self, x, y):
        return self.values[y] - self.values[x]


@dataclass
class Density:
    """Nonnegative edge weights, optionally tied to a connecting family."""

    graph: object
    values: dict
    terminals: tuple = None  # (A, B) when admissible for Theta(A, B)

    def mass(self, p):
        return float(sum(v ** p for v in self.values.values()))

    def length_of(self, path_vertices):
        return float(
            sum(self.values[edge_key(a, b)] for a, b in zip(path_vertices, path_vertices[1:]))
        )

    def min_connecting_length(self):
        A, B = self.terminals
        return _graphs.dijkstra_distance(self.graph, A, self.values, targets=B)

    def scaled(self, c):
        return Density(self.graph, {e: c * v for e, v in self.values.items()}, self.terminals)


@dataclass
class Flow:
    """Antisymmetric edge function stored on the canonical orientation.

    values[(u, v)] with u < v is the flow from u to v; the reverse value
    is definitional and never stored.
    """

    graph: object
    values: dict
    source: frozenset
    sink: frozenset

    def at(self, x, y):
        if x <= y:
            return self.values.get((x, y), 0.0)
        return -self.values.get((y, x), 0.0)

    def magnitude(self, e):
        return abs(self.values.get(edge_key(*e), 0.0))

    def divergence(self, x):
        return float(sum(self.at(x, y) for y in self.graph.adj[x]))

    def total(self):
        return float(sum(self.divergence(x) for x in sorted(self.source)))

    def energy(self, q):
        return float(sum(abs(v) ** q for v in self.values.values()))

    def check_unit(self, slack=1e-7):
        interior = set(self.graph.vertices) - set(self.source) - set(self.sink)
        bad_div = max((abs(self.divergence(x)) for x in interior), default=0.0)
        if bad_div > slack:
            raise NotUnitFlow(f"interior divergence {bad_div:.3e} exceeds {slack:.1e}")
        tot = self.total()
        if abs(tot - 1.0) > slack:
            raise NotUnitFlow(f"total flow {tot:.12g} is not 1")
        return True

    def scaled(self, c):
        return Flow(self.graph, {e: c * v for e, v in self.values.items()}, self.source, self.sink)


@dataclass
class SolveReport:
    p: float
    value: float
    potential: Potential
    density: Density
    flow: Flow
    duality_residual: float
    iterations: int
    tolerance: float
    harmonicity_residual: float = 0.0
    extras: dict = field(default_factory=dict)


# ---------------------------------------------------------------------------
# capacity solver


def _check_terminals(g, A, B):
    A = frozenset(A) if isinstance(A, (set, frozenset, list, tuple)) else frozenset([A])
    B = frozenset(B) if isinstance(B, (set, frozenset, list, tuple)) else frozenset([B])
    g.check_vertices(A)
    g.check_vertices(B)
    if not A or not B:
        raise EmptyFamily("terminal sets must be nonempty")
    if A & B:
        raise EmptyFamily("terminal sets must be disjoint")
    return A, B


def _linear_potential(n, edges_i, edges_j, interior_idx, u_fixed):
    """Exact p=2 minimizer: solve the graph Laplacian on the interior."""
    n_int = len(interior_idx)
    if n_int == 0:
        return u_fixed.copy()
    pos = -np.ones(n, dtype=int)
    pos[interior_idx] = np.arange(n_int)
    rows, cols, vals = [], [], []
    rhs = np.zeros(n_int)
    diag = np.zeros(n_int)
    for i, j in zip(edges_i, edges_j):
        pi, pj = pos[i], pos[j]
        if pi >= 0:
            diag[pi] += 1.0
        if pj >= 0:
            diag[pj] += 1.0
        if pi >= 0 and pj >= 0:
            rows.append(pi)
            cols.append(pj)
            vals.append(-1.0)
            rows.append(pj)
            cols.append(pi)
            vals.append(-1.0)
        elif pi >= 0:
            rhs[pi] += u_fixed[j]
        elif pj >= 0:
            rhs[pj] += u_fixed[i]
    L = sp.csr_matrix(
        (np.concatenate([vals, diag]), (np.concatenate([rows, np.arange(n_int)]).astype(int),
                                        np.concatenate([cols, np.arange(n_int)]).astype(int))),
        shape=(n_int, n_int),
    )
    sol = spla.spsolve(L.tocsc(), rhs)
    out = u_fixed.copy()
    out[interior_idx] = sol
    return out


def capacity_p2_exact(g, A, B, boundary=(0.0, 1.0)):
    """Quadratic capacity by one direct linear solve (regression anchor)."""
    A, B = _check_terminals(g, A, B)
    if not g.is_connected():
        raise Disconnected("capacity requires a connected graph")
    verts = list(g.vertices)
    index = {v: k for k, v in enumerate(verts)}
    ei = np.array([index[u] for u, v in g.edges], dtype=int)
    ej = np.array([index[v] for u, v in g.edges], dtype=int)
    u_fixed = np.zeros(len(verts))
    for v in A:
        u_fixed[index[v]] = boundary[0]
    for v in B:
        u_fixed[index[v]] = boundary[1]
    interior = np.array([k for k, v in enumerate(verts) if v not in A and v not in B], dtype=int)
    u = _linear_potential(len(verts), ei, ej, interior, u_fixed)
    d = u[ei] - u[ej]
    return float(np.sum(d * d)), {v: float(u[index[v]]) for v in verts}


def _newton_stage(u, ei, ej, interior, p, eps, stage_tol, max_iter):
    """Damped Newton with diagonal regularization on the smoothed energy."""
    n = len(u)
    n_int = len(interior)
    pos = -np.ones(n, dtype=int)
    pos[interior] = np.arange(n_int)

    def energy(vec):
        d = vec[ei] - vec[ej]
        return float(np.sum((d * d + eps * eps) ** (p / 2.0)))

    def gradient(vec):
        d = vec[ei] - vec[ej]
        ge = p * d * (d * d + eps * eps) ** ((p - 2.0) / 2.0)
        out = np.zeros(n)
        np.add.at(out, ei, ge)
        np.add.at(out, ej, -ge)
        return out

    iters = 0
    while True:
        grad = gradient(u)
        gnorm = float(np.max(np.abs(grad[interior]))) if n_int else 0.0
        if gnorm <= stage_tol or n_int == 0:
            return u, iters, gnorm
        if iters >= max_iter:
            raise NonConvergence(
                f"stage eps={eps:g} stuck at gradient norm {gnorm:.3e} after {iters} iterations"
            )
        d = u[ei] - u[ej]
        s = d * d + eps * eps
        w = p * s ** ((p - 4.0) / 2.0) * ((p - 1.0) * d * d + eps * eps)
        pi, pj = pos[ei], pos[ej]
        both = (pi >= 0) & (pj >= 0)
        diag = np.zeros(n_int)
        np.add.at(diag, pi[pi >= 0], w[pi >= 0])
        np.add.at(diag, pj[pj >= 0], w[pj >= 0])
        rows = pi[both]
        cols = pj[both]
        vals = -w[both]
        lam = 0.0
        lam_floor = max(float(np.max(diag)), 1.0) * 1e-12
        g_int = grad[interior]
        e0 = energy(u)
        for _ in range(60):
            H = sp.csr_matrix(
                (
                    np.concatenate([vals, vals, diag + lam]),
                    (
                        np.concatenate([rows, cols, np.arange(n_int)]),
                        np.concatenate([cols, rows, np.arange(n_int)]),
                    ),
                ),
                shape=(n_int, n_int),
            )
            try:
                delta = spla.spsolve(H.tocsc(), -g_int)
            except Exception:
                delta = None
            if delta is not None and np.all(np.isfinite(delta)):
                slope = float(g_int @ delta)
                if slope < 0:
                    t = 1.0
                    accepted = False
                    for _ in range(60):
                        trial = u.copy()
                        trial[interior] += t * delta
                        if energy(trial) <= e0 + 1e-4 * t * slope:
                            u = trial
                            accepted = True
                            break
                        t *= 0.5
                    if accepted:
                        break
            lam = lam_floor if lam == 0.0 else lam * 100.0
        else:
            raise NonConvergence(f"no descent step found at eps={eps:g}")
        iters += 1


def p_capacity_solve(g, A, B, p, tol=DEFAULT_TOL, boundary=(0.0, 1.0), slack=1e-7):
    """Connecting p-modulus via energy minimization.

    Minimizes the p-Dirichlet energy over potentials pinned to the
    boundary values on A and B, then reads off the optimal density and
    unit flow and certifies them against each other.  The smoothed energy
    is driven through a fixed continuation schedule so the non-smooth
    p < 2 case converges with the same Newton iteration.
    """
    if p <= 1:
        raise BadExponent(f"p must exceed 1, got {p}")
    if tol <= 0:
        raise ValueError("tol must be positive")
    A, B = _check_terminals(g, A, B)
    if not g.is_connected():
        raise Disconnected("capacity requires a connected graph")

    verts = list(g.vertices)
    index = {v: k for k, v in enumerate(verts)}
    ei = np.array([index[u] for u, v in g.edges], dtype=int)
    ej = np.array([index[v] for u, v in g.edges], dtype=int)
    u_fixed = np.zeros(len(verts))
    for v in A:
        u_fixed[index[v]] = boundary[0]
    for v in B:
        u_fixed[index[v]] = boundary[1]
    interior = np.array([k for k, v in enumerate(verts) if v not in A and v not in B], dtype=int)

    u = _linear_potential(len(verts), ei, ej, interior, u_fixed)
    total_iters = 0
    gnorm = 0.0
    for eps in EPS_STAGES:
        stage_tol = tol if eps == EPS_STAGES[-1] else max(tol, eps)
        u, iters, gnorm = _newton_stage(u, ei, ej, interior, p, eps, stage_tol, MAX_ITER_PER_STAGE)
        total_iters += iters

    d = u[ei] - u[ej]
    value = float(np.sum(np.abs(d) ** p))
    q = dual_exponent(p)
    potential = Potential(g, {v: float(u[index[v]]) for v in verts}, A, B)
    dens_vals = {}
    flow_vals = {}
    for k, (x, y) in enumerate(g.edges):
        drop = float(u[index[y]] - u[index[x]])
        dens_vals[(x, y)] = abs(drop)
        flow_vals[(x, y)] = math.copysign(abs(drop) ** (p - 1.0), drop) / value if value > 0 else 0.0
    density = Density(g, dens_vals, (A, B))
    flow = Flow(g, flow_vals, A, B)

    gap = abs(boundary[1] - boundary[0])
    if gap > 0:
        # certificate is stated for the unit boundary gap
        residual = abs(
            (value / gap ** p) ** (1.0 / p) * (flow.energy(q) * gap ** q) ** (1.0 / q) - 1.0
        )
    else:
        residual = 0.0
    sgn_res = 0.0
    for x in verts:
        if x in A or x in B:
            continue
        acc = 0.0
        for y in g.adj[x]:
            drop = u[index[x]] - u[index[y]]
            acc += math.copysign(abs(drop) ** (p - 1.0), drop)
        sgn_res = max(sgn_res, abs(acc))
    return SolveReport(
        p=p,
        value=value,
        potential=potential,
        density=density,
        flow=flow,
        duality_residual=residual,
        iterations=total_iters,
        tolerance=tol,
        harmonicity_residual=sgn_res,
    )


def duality_residual(density, flow, p, slack=1e-7):
    """|M_p(rho)^{1/p} * E_q(F)^{1/q} - 1|; zero certifies joint optimality."""
    q = dual_exponent(p)
    if density.terminals is None:
        raise NotAdmissible("density carries no connecting family")
    A, B = density.terminals
    if frozenset(A) != frozenset(flow.source) or frozenset(B) != frozenset(flow.sink):
        raise NotAdmissible("density and flow terminals disagree")
    shortest = density.min_connecting_length()
    if shortest < 1.0 - slack:
        raise NotAdmissible(f"a connecting path has weighted length {shortest:.12g} < 1")
    flow.check_unit(slack=slack)
    return abs(density.mass(p) ** (1.0 / p) * flow.energy(q) ** (1.0 / q) - 1.0)


# ---------------------------------------------------------------------------
# brute force over explicit path families


def _incidence(items_per_path):
    """Rows: paths; columns: sorted support items; entries 0/1."""
    support = sorted({x for items in items_per_path for x in items})
    col = {x: k for k, x in enumerate(support)}
    M = np.zeros((len(items_per_path), len(support)))
    for r, items in enumerate(items_per_path):
        for x in items:
            M[r, col[x]] = 1.0
    return M, support


def brute_force_modulus(g, paths, p, mode="edge", rel_tol=1e-9, max_paths=10_000, max_iter=400_000):
    """Modulus of an explicitly enumerated family, independent of the
    capacity path.

    For p > 1 the dual of the constrained program is maximized by an
    accelerated projected-gradient loop; the iteration stops when the
    rescaled primal candidate and the dual bound agree to `rel_tol`, so
    the returned value carries its own optimality certificate.  For p = 1
    the program is a plain linear program.
    """
    paths = list(paths)
    if not paths:
        raise EmptyFamily("no paths in the family")
    if len(paths) > max_paths:
        raise TooManyPaths(f"{len(paths)} paths exceed the cap {max_paths}")
    if p < 1:
        raise BadExponent(f"p must be at least 1, got {p}")
    if mode not in ("edge", "vertex"):
        raise ValueError("mode must be 'edge' or 'vertex'")

    items_per_path = []
    for path in paths:
        vs = list(path)
        if mode == "edge":
            if len(vs) < 2:
                raise EmptyFamily("constant path in an edge-mode family")
            items_per_path.append(sorted({edge_key(a, b) for a, b in zip(vs, vs[1:])}))
        else:
            items_per_path.append(sorted(set(vs)))
    M, support = _incidence(items_per_path)

    if p == 1:
        from scipy.optimize import linprog

        res = linprog(
            c=np.ones(M.shape[1]),
            A_ub=-M,
            b_ub=-np.ones(M.shape[0]),
            bounds=[(0, None)] * M.shape[1],
            method="highs",
        )
        if not res.success:
            raise NonConvergence(f"linear program failed: {res.message}")
        return {"value": float(res.fun), "density": None, "support": support, "gap": 0.0}

    q = dual_exponent(p)
    n_paths = M.shape[0]

    def dual_value(lam):
        s = M.T @ lam
        return float(lam.sum() - (p - 1.0) * p ** (-q) * np.sum(s ** q))

    def rho_of(lam):
        s = M.T @ lam
        return (s / p) ** (q - 1.0)

    def grad(lam):
        return 1.0 - M @ rho_of(lam)

    lam = np.ones(n_paths)
    # scale so that the initial density is roughly admissible
    lens = M @ rho_of(lam)
    lam *= float(np.min(lens)) ** -(p - 1.0) if np.min(lens) > 0 else 1.0

    best_primal = math.inf
    best_rho = None
    step = 1.0
    y = lam.copy()
    t_acc = 1.0
    f_prev = dual_value(lam)
    for it in range(max_iter):
        g_y = grad(y)
        # backtracking on the dual ascent step from the extrapolated point
        while True:
            cand = np.maximum(y + step * g_y, 0.0)
            diff = cand - y
            lhs = dual_value(cand)
            rhs = dual_value(y) + float(g_y @ diff) - float(diff @ diff) / (2.0 * step)
            if lhs >= rhs - 1e-18 or step < 1e-18:
                break
            step *= 0.5
        t_next = (1.0 + math.sqrt(1.0 + 4.0 * t_acc * t_acc)) / 2.0
        y = cand + ((t_acc - 1.0) / t_next) * (cand - lam)
        y = np.maximum(y, 0.0)
        f_new = dual_value(cand)
        if f_new < f_prev:  # restart acceleration on non-monotone progress
            y = cand.copy()
            t_next = 1.0
        f_prev = max(f_prev, f_new)
        lam = cand
        t_acc = t_next

        rho = rho_of(lam)
        lens = M @ rho
        lmin = float(np.min(lens))
        if lmin > 0:
            primal = float(np.sum(rho ** p)) / lmin ** p
            if primal < best_primal:
                best_primal = primal
                best_rho = rho / lmin
        dual = dual_value(lam)
        if best_primal < math.inf and best_primal - dual <= rel_tol * max(best_primal, 1e-300):
            break
        if it % 50 == 49:
            step *= 2.0  # probe a larger step now and then
    else:
        raise NonConvergence(
            f"brute-force gap {best_primal - dual_value(lam):.3e} above {rel_tol:.1e}"
        )
    values = {support[k]: float(best_rho[k]) for k in range(len(support))}
    return {
        "value": best_primal,
        "density": values,
        "support": support,
        "gap": best_primal - dual_value(lam),
    }


def vertex_modulus(g, A, B, p, cap=10_000):
    """Vertex-density modulus over the enumerated connecting family."""
    A, B = _check_terminals(g, A, B)
    paths = _graphs.enumerate_simple_paths(g, A, B, cap=cap)
    if not paths:
        raise EmptyFamily("no connecting paths")
    return brute_force_modulus(g, [list(path) for path in paths], p, mode="vertex")["value"]


# ---------------------------------------------------------------------------
# conductive uniformity and replacement rules


def gluing_problems(igs):
    """Distinct ordered gluing problems (A, B) with their (v, e) witnesses."""
    problems = {}
    for (u, v) in igs.base.edges:
        for x, other in ((u, v), (v, u)):
            a = igs.image(x, (u, v))
            b = igs.image(other, (u, v))
            problems.setdefault((a, b), []).append((x, (u, v)))
    return problems


def check_conductive_uniformity(igs, p_grid, tol=1e-8, solver_tol=DEFAULT_TOL):
    """Crossing resistance and boundary flow spread over every (v, e).

    For each exponent in the grid, solves the gluing problem of every
    oriented edge, and reports whether the crossing energy and the
    per-label boundary flow values agree across all of them.
    """
    if not igs.gluing_vertices() or not all(
        igs.base.degree(z) == 1 for z in igs.gluing_vertices()
    ):
        raise NotDoubling("conductive uniformity needs every gluing vertex to have degree 1")
    neighbor = igs.neighbor_map()
    problems = gluing_problems(igs)
    per_p = {}
    uniform = True
    for p in p_grid:
        q = dual_exponent(p)
        solved = {}
        for (a, b) in sorted(problems):
            solved[(a, b)] = p_capacity_solve(igs.base, set(a), set(b), p, tol=solver_tol)
        r_values = []
        f_values = {lab: [] for lab in igs.gluing_set}
        m_values = []
        for (a, b), witnesses in sorted(problems.items()):
            rep = solved[(a, b)]
            r_values.append(rep.flow.energy(q))
            m_values.append(rep.value)
            for k, lab in enumerate(igs.gluing_set):
                z = a[k]
                f_values[lab].append(rep.flow.at(z, neighbor[z]))
        r_spread = max(r_values) - min(r_values)
        f_spread = max(
            (max(vals) - min(vals)) for vals in f_values.values()
        )
        m_p = float(np.mean(m_values))
        r_p = float(np.mean(r_values))
        certificate = abs(m_p ** (1.0 / p) * r_p ** (1.0 / q) - 1.0)
        ok = r_spread <= tol and f_spread <= tol
        uniform = uniform and ok
        per_p[p] = {
            "modulus": m_p,
            "resistance": r_p,
            "resistance_spread": r_spread,
            "boundary_flow": {str(lab): float(np.mean(v)) for lab, v in f_values.items()},
            "boundary_flow_spread": f_spread,
            "duality_check": certificate,
            "uniform": ok,
        }
    return {"uniform": uniform, "per_p": per_p, "p_grid": list(p_grid), "tol": tol}


def modulus_constant(igs, p, solver_tol=DEFAULT_TOL):
    """The common gluing-problem modulus of a conductively uniform system."""
    problems = sorted(gluing_problems(igs))
    a, b = problems[0]
    return p_capacity_solve(igs.base, set(a), set(b), p, tol=solver_tol).value


def _base_solutions(igs, p, solver_tol=DEFAULT_TOL):
    """Optimal density and flow of every ordered gluing problem."""
    out = {}
    for (a, b) in sorted(gluing_problems(igs)):
        rep = p_capacity_solve(igs.base, set(a), set(b), p, tol=solver_tol)
        out[(a, b)] = rep
    return out


def _require_uniform(igs, p, tol=1e-8):
    report = check_conductive_uniformity(igs, [p], tol=tol)
    if not report["uniform"]:
        raise NotUniform(f"system is not conductively uniform at p={p}")
    return report


def replacement_density(tower, level, density, p, m, verify_uniform=True):
    """Push a level-n density through m replacement steps.

    The lifted density multiplies the parent edge's weight by the optimal
    base density of the parent's gluing problem; its mass gains the factor
    (common modulus)^m and its support stays over the parent support.
    """
    if m == 0:
        return density
    igs = tower.igs
    if verify_uniform:
        _require_uniform(igs, p)
    tower.build_to(level + m)
    base_named = _base_solutions(igs, p)

    def base_density(pair, zedge):
        return base_named[pair].density.values[edge_key(*zedge)]

    vals = dict(density.values)
    terminals = density.terminals
    for k in range(m):
        src_recs = tower.edge_recs(level + k)
        dst_recs = tower.edge_recs(level + k + 1)
        nxt = {}
        for rec in dst_recs:
            parent = src_recs[rec.parent]
            pair = (
                igs.image(parent.zu, (parent.zu, parent.zv)),
                igs.image(parent.zv, (parent.zu, parent.zv)),
            )
            nxt[(rec.u, rec.v)] = vals[(parent.u, parent.v)] * base_density(pair, (rec.zu, rec.zv))
        vals = nxt
        if terminals is not None:
            A, B = terminals
            A = {x for a in A for x in tower.vertex_fiber(level + k + 1, level + k, a)}
            B = {x for b in B for x in tower.vertex_fiber(level + k + 1, level + k, b)}
            terminals = (frozenset(A), frozenset(B))
    return Density(tower.graph(level + m), vals, terminals)


def replacement_flow(tower, level, flow, q, m, verify_uniform=True):
    """Push a level-n unit flow through m replacement steps.

    Each parent edge's flow is spread over its copy by the optimal base
    flow of the parent's gluing problem; the result is re-verified to be a
    unit flow by a full divergence scan.
    """
    if m == 0:
        return flow
    igs = tower.igs
    p = q / (q - 1.0)
    if verify_uniform:
        _require_uniform(igs, p)
    flow.check_unit()
    tower.build_to(level + m)
    base_named = _base_solutions(igs, p)

    vals = dict(flow.values)
    source, sink = flow.source, flow.sink
    for k in range(m):
        src_recs = tower.edge_recs(level + k)
        dst_recs = tower.edge_recs(level + k + 1)
        nxt = {}
        for rec in dst_recs:
            parent = src_recs[rec.parent]
            pair = (
                igs.image(parent.zu, (parent.zu, parent.zv)),
                igs.image(parent.zv, (parent.zu, parent.zv)),
            )
            base_flow = base_named[pair].flow
            parent_val = vals.get((parent.u, parent.v), 0.0)
            nxt[(rec.u, rec.v)] = parent_val * base_flow.at(rec.zu, rec.zv)
        vals = nxt
        source = frozenset(
            x for a in source for x in tower.vertex_fiber(level + k + 1, level + k, a)
        )
        sink = frozenset(
            x for b in sink for x in tower.vertex_fiber(level + k + 1, level + k, b)
        )
    lifted = Flow(tower.graph(level + m), vals, source, sink)
    lifted.check_unit()
    return lifted


def level_modulus_check(tower, n, eidx, p, m, tol=1e-6, solver_tol=DEFAULT_TOL):
    """Direct solve of the gluing-fiber problem on G_m against the
    multiplicative prediction.

    Solves the connecting problem between the level-m ancestor fibers of
    the edge's gluing images and reports the relative deviation from
    (common modulus)^m.
    """
    igs = tower.igs
    tower.build_to(max(m, n))
    rec = tower.edge_recs(n)[eidx]
    a_img = igs.image(rec.zu, (rec.zu, rec.zv))
    b_img = igs.image(rec.zv, (rec.zu, rec.zv))
    A = {x for z in a_img for x in tower.vertex_fiber(m, 1, z)}
    B = {x for z in b_img for x in tower.vertex_fiber(m, 1, z)}
    direct = p_capacity_solve(tower.graph(m), A, B, p, tol=solver_tol)
    m_p = modulus_constant(igs, p, solver_tol=solver_tol)
    predicted = m_p ** m
    rel = abs(direct.value - predicted) / predicted
    return {
        "direct": direct.value,
        "predicted": predicted,
        "relative_error": rel,
        "within_tol": rel <= tol,
        "p": p,
        "m": m,
        "duality_residual": direct.duality_residual,
    }
