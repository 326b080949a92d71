"""Norms, interpolation, diagnostics, and convergence studies.

Fields are either discrete (DOF coefficients over a mesh) or analytic
(derivative evaluators).  Derivatives are handled as distinct components
per order with Frobenius multiplicities, matching the element module.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field as dc_field

import numpy as np

from .assembly import assemble_stiffness, build_dofmap, local_to_global
from .element import DERIV_COMPS, DERIV_MULT, build_all_bases
from .errors import LevelMismatch
from .mesh import (
    Mesh,
    build_unit_square_mesh,
    distance_to_rect_boundary,
    edge_normals,
    embed_curve,
    locate_triangle,
)
from .quadrature import duffy_rule, segment_rule, triangle_rule
from .solver import solve
from .source import CurveDensity, curve_load, manufactured_case, polynomial_evaluator, volume_load

NORM_DEGREE = 14
ERROR_DEGREE = 20  # manufactured data is degree 12; keep error integrals exact


class DiscreteField:
    """Piecewise-polynomial field given by global DOF coefficients."""

    def __init__(self, mesh: Mesh, bases, coeffs: np.ndarray):
        self.mesh = mesh
        self.bases = bases
        c = np.asarray(coeffs, dtype=float)
        if c.ndim == 1:
            c = c[:, None]
        self.coeffs = c
        self.dofmap = build_dofmap(mesh)
        self._l2g = np.stack(
            [local_to_global(mesh, self.dofmap, t) for t in range(mesh.num_triangles)]
        )

    @property
    def d(self) -> int:
        return self.coeffs.shape[1]

    def local_coeffs(self, t: int) -> np.ndarray:
        return self.coeffs[self._l2g[t]]  # (15, d)

    def eval_tri(self, t: int, points: np.ndarray, order: int) -> np.ndarray:
        """Derivative components on one triangle: (P, d, ncomp)."""
        tab = self.bases[t].tabulate(points, order)[order]  # (P, 15, ncomp)
        return np.einsum("pkc,kd->pdc", tab, self.local_coeffs(t))

    def eval(self, points: np.ndarray, order: int) -> np.ndarray:
        """Evaluate at arbitrary points by structured point location."""
        pts = np.atleast_2d(points)
        tris = np.array([locate_triangle(self.mesh, p) for p in pts])
        out = np.empty((len(pts), self.d, len(DERIV_COMPS[order])))
        for t in np.unique(tris):
            sel = tris == t
            out[sel] = self.eval_tri(int(t), pts[sel], order)
        return out


class AnalyticField:
    """Field defined by per-component derivative evaluators."""

    def __init__(self, evaluators):
        self.evaluators = list(evaluators)

    @property
    def d(self) -> int:
        return len(self.evaluators)

    def eval(self, points: np.ndarray, order: int) -> np.ndarray:
        vals = [ev(points, order) for ev in self.evaluators]
        return np.stack(vals, axis=1)  # (P, d, ncomp)


def _tri_quadrature(basis, rule):
    """Physical points and weights of a rule on one triangle."""
    pts = rule.points @ basis.frame.verts
    w = rule.weights * (2.0 * basis.frame.area)
    return pts, w


def broken_norm(
    field,
    k: int,
    mesh: Mesh | None = None,
    bases=None,
    triangles=None,
    seminorm: bool = False,
    rule_degree: int = NORM_DEGREE,
) -> float:
    """Elementwise Sobolev (semi)norm of order k, summed over components."""
    if isinstance(field, DiscreteField):
        mesh, bases = field.mesh, field.bases
    if mesh is None or bases is None:
        raise ValueError("analytic fields require mesh and bases")
    rule = duffy_rule(rule_degree)
    tris = range(mesh.num_triangles) if triangles is None else triangles
    orders = [k] if seminorm else list(range(k + 1))
    total = 0.0
    for t in tris:
        pts, w = _tri_quadrature(bases[t], rule)
        for j in orders:
            if isinstance(field, DiscreteField):
                vals = field.eval_tri(t, pts, j)
            else:
                vals = field.eval(pts, j)
            total += float(np.einsum("q,qdc,c->", w, vals ** 2, DERIV_MULT[j]))
    return float(np.sqrt(total))


def _iter_error_diffs(fine: DiscreteField, other, orders, triangles, rule_degree):
    """Yield (weights, {order: diff components}) over the fine mesh.

    ``other`` may be analytic or a discrete field on a coarser nested mesh;
    the coarse side is evaluated by locating each fine triangle's centroid.
    """
    mesh = fine.mesh
    rule = duffy_rule(rule_degree)
    tris = np.arange(mesh.num_triangles) if triangles is None else np.asarray(triangles)

    if isinstance(other, DiscreteField) and other.mesh is not mesh:
        groups: dict = {}
        cent = mesh.centroids()
        for t in tris:
            tc = locate_triangle(other.mesh, cent[t])
            groups.setdefault(tc, []).append(int(t))
        for tc, fine_ts in groups.items():
            pts_list, w_list, vals_fine = [], [], {j: [] for j in orders}
            for t in fine_ts:
                pts, w = _tri_quadrature(fine.bases[t], rule)
                pts_list.append(pts)
                w_list.append(w)
                for j in orders:
                    vals_fine[j].append(fine.eval_tri(t, pts, j))
            pts_all = np.concatenate(pts_list)
            w_all = np.concatenate(w_list)
            diffs = {
                j: np.concatenate(vals_fine[j]) - other.eval_tri(tc, pts_all, j)
                for j in orders
            }
            yield w_all, diffs
    else:
        for t in tris:
            pts, w = _tri_quadrature(fine.bases[int(t)], rule)
            diffs = {
                j: fine.eval_tri(int(t), pts, j) - other.eval(pts, j) for j in orders
            }
            yield w, diffs


def error_seminorms(
    fine: DiscreteField,
    other,
    orders=(0, 1, 2, 3),
    triangles=None,
    rule_degree: int = NORM_DEGREE,
) -> np.ndarray:
    """Per-order Sobolev seminorm errors |fine - other|_j on fine's mesh."""
    acc = np.zeros(len(orders))
    for w, diffs in _iter_error_diffs(fine, other, list(orders), triangles, rule_degree):
        for idx, j in enumerate(orders):
            acc[idx] += float(np.einsum("q,qdc,c->", w, diffs[j] ** 2, DERIV_MULT[j]))
    return np.sqrt(acc)


def error_norms(
    fine: DiscreteField,
    other,
    b: float,
    triangles=None,
    rule_degree: int = NORM_DEGREE,
) -> dict:
    """Error measures for convergence reports, in one quadrature sweep.

    Returns L2/H1/H2 broken norms, the broken H3 seminorm, and the energy
    error built from the operator's alternating derivative chain
    (value, gradient, Laplacian, grad Laplacian) with binomial weights.
    """
    std = np.zeros(4)
    op = np.zeros(2)  # Laplacian, grad(Laplacian) squared errors
    for w, diffs in _iter_error_diffs(fine, other, [0, 1, 2, 3], triangles, rule_degree):
        for j in range(4):
            std[j] += float(np.einsum("q,qdc,c->", w, diffs[j] ** 2, DERIV_MULT[j]))
        lap = diffs[2][..., 0] + diffs[2][..., 2]
        op[0] += float(np.einsum("q,qd->", w, lap ** 2))
        glx = diffs[3][..., 0] + diffs[3][..., 2]
        gly = diffs[3][..., 1] + diffs[3][..., 3]
        op[1] += float(np.einsum("q,qd->", w, glx ** 2 + gly ** 2))
    energy2 = std[0] + 3.0 * b * std[1] + 3.0 * b * b * op[0] + b ** 3 * op[1]
    return {
        "l2": float(np.sqrt(std[0])),
        "h1": float(np.sqrt(std[0] + std[1])),
        "h2": float(np.sqrt(std[0] + std[1] + std[2])),
        "h3": float(np.sqrt(std[3])),
        "energy": float(np.sqrt(energy2)),
    }


def interpolate(mesh: Mesh, bases, evaluators) -> DiscreteField:
    """Canonical interpolation: every global DOF set from the analytic field.

    ``evaluators`` is one callable (points, order) -> (P, ncomp) per
    component, defined at least to order 2.
    """
    if callable(evaluators):
        evaluators = [evaluators]
    dofmap = build_dofmap(mesh)
    normals = edge_normals(mesh)
    rule = segment_rule(7)
    d = len(evaluators)
    coeffs = np.zeros((dofmap.total, d))
    verts = mesh.vertices
    p0 = verts[mesh.edges[:, 0]]
    p1 = verts[mesh.edges[:, 1]]
    # Edge Gauss points for all edges at once: (E, Q, 2) flattened.
    epts = p0[:, None, :] + rule.points[None, :, None] * (p1 - p0)[:, None, :]
    E, Q = len(mesh.edges), len(rule.points)
    epts_flat = epts.reshape(E * Q, 2)
    for c, ev in enumerate(evaluators):
        coeffs[0 : 3 * mesh.num_vertices : 3, c] = ev(verts, 0)[:, 0]
        grads = ev(verts, 1)
        coeffs[1 : 3 * mesh.num_vertices : 3, c] = grads[:, 0]
        coeffs[2 : 3 * mesh.num_vertices : 3, c] = grads[:, 1]
        g1 = ev(epts_flat, 1).reshape(E, Q, 2)
        g2 = ev(epts_flat, 2).reshape(E, Q, 3)
        dn = g1[:, :, 0] * normals[:, None, 0] + g1[:, :, 1] * normals[:, None, 1]
        dnn = (
            g2[:, :, 0] * normals[:, None, 0] ** 2
            + 2.0 * g2[:, :, 1] * normals[:, None, 0] * normals[:, None, 1]
            + g2[:, :, 2] * normals[:, None, 1] ** 2
        )
        coeffs[3 * mesh.num_vertices :: 2, c] = dn @ rule.weights
        coeffs[3 * mesh.num_vertices + 1 :: 2, c] = dnn @ rule.weights
    return DiscreteField(mesh, bases, coeffs)


@dataclass
class WeakContinuityReport:
    max_interior_violation: float
    max_boundary_violation: float
    worst_edge: int

    @property
    def max_violation(self) -> float:
        return max(self.max_interior_violation, self.max_boundary_violation)


_MOMENT_ALPHAS = [(1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]


def _edge_moments(mesh: Mesh, bases, t: int, e: int) -> np.ndarray:
    """Edge integrals of the five derivative moments for all 15 basis fns."""
    rule = segment_rule(7)
    p0, p1 = mesh.vertices[mesh.edges[e]]
    length = float(np.linalg.norm(p1 - p0))
    pts = p0 + np.outer(rule.points, p1 - p0)
    tab = bases[t].tabulate(pts, 2)
    out = np.empty((15, len(_MOMENT_ALPHAS)))
    for a, (ax, ay) in enumerate(_MOMENT_ALPHAS):
        comps = tab[ax + ay]  # (Q, 15, ncomp), comp index = #y-derivatives
        out[:, a] = length * (rule.weights @ comps[:, :, ay])
    return out


def weak_continuity_check(mesh: Mesh, bases, dofmap=None) -> WeakContinuityReport:
    """Max mismatch of first/second derivative edge moments across edges."""
    if dofmap is None:
        dofmap = build_dofmap(mesh)
    worst_int, worst_bnd, worst_edge = 0.0, 0.0, -1
    l2g = [local_to_global(mesh, dofmap, t) for t in range(mesh.num_triangles)]
    for e in range(mesh.num_edges):
        tK, tKp = mesh.edge_tris[e]
        M_K = _edge_moments(mesh, bases, tK, e)
        if tKp >= 0:
            M_Kp = _edge_moments(mesh, bases, tKp, e)
            rows = {g: M_K[i] for i, g in enumerate(l2g[tK])}
            for i, g in enumerate(l2g[tKp]):
                ref = rows.pop(g, None)
                other = M_Kp[i]
                dev = np.abs(other - ref).max() if ref is not None else np.abs(other).max()
                if dev > worst_int:
                    worst_int, worst_edge = dev, e
            for g, ref in rows.items():  # DOFs present only in K
                dev = np.abs(ref).max()
                if dev > worst_int:
                    worst_int, worst_edge = dev, e
        else:
            for i, g in enumerate(l2g[tK]):
                if dofmap.constrained[g]:
                    continue
                dev = np.abs(M_K[i]).max()
                if dev > worst_bnd:
                    worst_bnd, worst_edge = dev, e
    return WeakContinuityReport(worst_int, worst_bnd, worst_edge)


def c0_trace_check(mesh: Mesh, bases, dofmap=None, points_per_edge: int = 10) -> float:
    """Max inter-element trace jump of global basis functions."""
    if dofmap is None:
        dofmap = build_dofmap(mesh)
    s = np.linspace(0.0, 1.0, points_per_edge + 2)[1:-1]
    l2g = [local_to_global(mesh, dofmap, t) for t in range(mesh.num_triangles)]
    worst = 0.0
    for e in range(mesh.num_edges):
        tK, tKp = mesh.edge_tris[e]
        if tKp < 0:
            continue
        p0, p1 = mesh.vertices[mesh.edges[e]]
        pts = p0 + np.outer(s, p1 - p0)
        vK = bases[tK].tabulate(pts, 0)[0][:, :, 0]
        vKp = bases[tKp].tabulate(pts, 0)[0][:, :, 0]
        rows = {g: vK[:, i] for i, g in enumerate(l2g[tK])}
        for i, g in enumerate(l2g[tKp]):
            ref = rows.pop(g, None)
            jump = vKp[:, i] - (ref if ref is not None else 0.0)
            worst = max(worst, float(np.abs(jump).max()))
        for g, ref in rows.items():
            worst = max(worst, float(np.abs(ref).max()))
    return worst


def patch_test(mesh: Mesh, bases, psi, v: DiscreteField, alpha, axis: int) -> float:
    """Boundary-functional consistency test T(psi, v) for one multi-index.

    Sums per-triangle boundary integrals of psi * d^alpha(v) * eta_i over
    all element edges, including those on the domain boundary.
    """
    ax, ay = alpha
    order = ax + ay
    rule = segment_rule(11)
    total = 0.0
    for t in range(mesh.num_triangles):
        verts = bases[t].frame.verts
        for k in range(3):
            p0, p1 = verts[k], verts[(k + 1) % 3]
            evec = p1 - p0
            length = float(np.linalg.norm(evec))
            eta = np.array([evec[1], -evec[0]]) / length  # outward for CCW
            pts = p0 + np.outer(rule.points, evec)
            dv = v.eval_tri(t, pts, order)[:, 0, ay]
            total += length * float(np.sum(rule.weights * psi(pts) * dv)) * eta[axis]
    return total


def poincare_ratio(mesh: Mesh, bases, dofmap=None, trials: int = 100, seed: int = 0) -> float:
    """Max of ||v||_3 / (||v||_0 + |v|_3) over random constrained fields.

    All trials are stacked as components of one field so each triangle is
    tabulated once.
    """
    if dofmap is None:
        dofmap = build_dofmap(mesh)
    rng = np.random.default_rng(seed)
    full = np.zeros((dofmap.total, trials))
    full[dofmap.free_dofs] = rng.uniform(-1.0, 1.0, (trials, dofmap.num_free)).T
    v = DiscreteField(mesh, bases, full)
    rule = duffy_rule(NORM_DEGREE)
    acc = np.zeros((4, trials))
    for t in range(mesh.num_triangles):
        pts, w = _tri_quadrature(bases[t], rule)
        for j in range(4):
            vals = v.eval_tri(t, pts, j)
            acc[j] += np.einsum("q,qdc,c->d", w, vals ** 2, DERIV_MULT[j])
    n0 = np.sqrt(acc[0])
    s3 = np.sqrt(acc[3])
    n3 = np.sqrt(acc.sum(axis=0))
    return float(np.max(n3 / (n0 + s3)))


@dataclass
class JumpReport:
    lhs: float
    rhs_partial: float
    residual: float
    patch_deviation: float
    max_d3_jump: float


def _grad_lap(vals3: np.ndarray) -> np.ndarray:
    """grad(Laplacian) from order-3 components: (P, d, 4) -> (P, d, 2)."""
    gx = vals3[..., 0] + vals3[..., 2]
    gy = vals3[..., 1] + vals3[..., 3]
    return np.stack([gx, gy], axis=-1)


def jump_residual(
    mesh: Mesh,
    curve,
    bases,
    u: DiscreteField,
    density: CurveDensity,
    b: float,
    probe: DiscreteField,
) -> JumpReport:
    """Diagnostic for the curve-source jump identity.

    Only the third-derivative jump terms are computable in the discrete
    space; the fourth/fifth-order jump terms of the exact identity are
    approximated by zero.  Also reports how far grad(Lap u) deviates from
    its two-triangle patch mean along the curve.
    """
    inside = set(curve.inside_triangles.tolist())
    rule = segment_rule(7)
    vol_rule = triangle_rule(NORM_DEGREE)

    lhs = 0.0
    for s in range(curve.num_segments):
        t0, t1 = curve.theta_spans[s]
        theta = t0 + rule.points * (t1 - t0)
        pts = curve.point_at(mesh, s, theta)
        adj = mesh.edge_tris[curve.segments[s]]
        tin = adj[0] if adj[0] in inside else adj[1]
        pv = probe.eval_tri(int(tin), pts, 0)[:, :, 0]  # (Q, d)
        fv = density(theta)
        lhs += (t1 - t0) * float(np.sum(rule.weights[:, None] * fv * pv))

    rhs = 0.0
    deviation = 0.0
    max_jump = 0.0
    for s in range(curve.num_segments):
        e = int(curve.segments[s])
        adj = mesh.edge_tris[e]
        tin = int(adj[0]) if adj[0] in inside else int(adj[1])
        tout = int(adj[1]) if tin == adj[0] else int(adj[0])
        p0, p1 = mesh.vertices[mesh.edges[e]]
        length = float(np.linalg.norm(p1 - p0))
        pts = p0 + np.outer(rule.points, p1 - p0)
        # Outward normal of the inside triangle on this edge.
        cen = mesh.vertices[mesh.triangles[tin]].mean(axis=0)
        evec = p1 - p0
        eta = np.array([evec[1], -evec[0]]) / length
        if np.dot(eta, cen - 0.5 * (p0 + p1)) > 0:
            eta = -eta
        g_in = _grad_lap(u.eval_tri(tin, pts, 3))  # (Q, d, 2)
        g_out = _grad_lap(u.eval_tri(tout, pts, 3))
        jump_vec = g_in - g_out
        max_jump = max(max_jump, float(np.abs(jump_vec).max()))
        j3 = jump_vec @ eta  # (Q, d)
        pv = probe.eval_tri(tin, pts, 0)[:, :, 0]
        ph = probe.eval_tri(tin, pts, 2)
        plap = ph[:, :, 0] + ph[:, :, 2]
        integrand = (3.0 * b ** 2 * pv - b ** 3 * plap) * j3
        rhs += length * float(np.sum(rule.weights[:, None] * integrand))

        # Patch-mean projection of grad(Lap u) over the two triangles.
        num = np.zeros((u.d, 2))
        den = 0.0
        for t in (tin, tout):
            qpts, qw = _tri_quadrature(bases[t], vol_rule)
            num += np.einsum("q,qdc->dc", qw, _grad_lap(u.eval_tri(t, qpts, 3)))
            den += bases[t].frame.area
        proj = num / den
        for t in (tin, tout):
            gl = _grad_lap(u.eval_tri(t, pts, 3))
            dev2 = length * float(rule.weights @ np.sum((gl - proj) ** 2, axis=(1, 2)))
            deviation += float(np.sqrt(max(dev2, 0.0)))

    return JumpReport(
        lhs=lhs,
        rhs_partial=rhs,
        residual=abs(lhs - rhs),
        patch_deviation=deviation,
        max_d3_jump=max_jump,
    )


@dataclass
class LevelRow:
    n: int
    h: float
    dofs: int
    errors: dict  # keys: l2, h1, h2, h3, energy, energy_away


@dataclass
class ConvergenceReport:
    case: str
    b: float
    delta: float
    rows: list
    metadata: dict = dc_field(default_factory=dict)

    ERROR_KEYS = ("l2", "h1", "h2", "h3", "energy", "energy_away")

    def eocs(self) -> list:
        """Pairwise EOC dicts; entry k compares rows k-1 and k."""
        out = [dict.fromkeys(self.ERROR_KEYS, float("nan"))]
        for prev, cur in zip(self.rows, self.rows[1:]):
            ratio = np.log(prev.h / cur.h)
            eoc = {}
            for key in self.ERROR_KEYS:
                e0, e1 = prev.errors[key], cur.errors[key]
                eoc[key] = float(np.log(e0 / e1) / ratio) if e0 > 0 and e1 > 0 else float("nan")
            out.append(eoc)
        return out

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(
            "n,h,dofs,err_l2,err_h1,err_h2,err_h3_broken,err_energy,err_energy_away,"
            "eoc_l2,eoc_h1,eoc_h2,eoc_h3,eoc_energy,eoc_energy_away\n"
        )
        eocs = self.eocs()
        for row, eoc in zip(self.rows, eocs):
            cells = [str(row.n), f"{row.h:.17e}", str(row.dofs)]
            cells += [f"{row.errors[k]:.17e}" for k in self.ERROR_KEYS]
            cells += [
                "" if np.isnan(eoc[k]) else f"{eoc[k]:.17e}" for k in self.ERROR_KEYS
            ]
            buf.write(",".join(cells) + "\n")
        return buf.getvalue()


def solve_manufactured(n: int, b: float):
    """Assemble and solve the manufactured-solution problem at level n."""
    mesh = build_unit_square_mesh(n)
    bases = build_all_bases(mesh)
    system = assemble_stiffness(mesh, bases, b)
    _, fstar, _ = manufactured_case(b)
    fvals = polynomial_evaluator(fstar, 0)

    def f(points):
        v = fvals(points, 0)[:, 0]
        return np.column_stack([v, v])

    load = volume_load(mesh, bases, f, rule_degree=ERROR_DEGREE)
    rhs = system.dofmap.restrict(load)
    x, report = solve(system, rhs)
    coeffs = system.dofmap.extend(x)
    return DiscreteField(mesh, bases, coeffs), system, report


def solve_curve_case(n: int, b: float, rect, density: CurveDensity):
    """Assemble and solve the embedded-curve problem at level n."""
    mesh = build_unit_square_mesh(n)
    bases = build_all_bases(mesh)
    curve = embed_curve(mesh, rect)
    system = assemble_stiffness(mesh, bases, b)
    load = curve_load(mesh, curve, bases, density)
    rhs = system.dofmap.restrict(load)
    x, report = solve(system, rhs)
    coeffs = system.dofmap.extend(x)
    return DiscreteField(mesh, bases, coeffs), curve, system, report


def run_convergence_study(
    levels,
    case: str = "manufactured",
    b: float = 1.0,
    delta: float = 0.125,
    rect=(0.25, 0.75),
    density: CurveDensity | None = None,
    reference: int | None = None,
) -> ConvergenceReport:
    """Measured orders of convergence across refinement levels.

    The manufactured case compares against the exact solution; the curve
    case self-converges against the finest-level discrete reference.
    """
    levels = list(levels)
    if sorted(levels) != levels or len(set(levels)) != len(levels):
        raise LevelMismatch("levels must be strictly increasing")
    rows = []
    meta = {}

    if case == "manufactured":
        _, _, ueval = manufactured_case(b)
        exact = AnalyticField([ueval, ueval])
        for n in levels:
            uh, system, _ = solve_manufactured(n, b)
            errs = error_norms(uh, exact, b, rule_degree=ERROR_DEGREE)
            errs["energy_away"] = errs["energy"]
            rows.append(
                LevelRow(n=n, h=uh.mesh.h, dofs=system.dofmap.num_free, errors=errs)
            )
    elif case == "curve":
        density = density or CurveDensity.constant(1.0, 1.0)
        n_ref = reference or 2 * levels[-1]
        if any(n_ref % n != 0 for n in levels):
            raise LevelMismatch("reference level must be divisible by every level")
        ref_field, ref_curve, _, _ = solve_curve_case(n_ref, b, rect, density)
        cent = ref_field.mesh.centroids()
        away = np.flatnonzero(distance_to_rect_boundary(cent, rect) > delta)
        meta["reference"] = n_ref
        for n in levels:
            uh, _, system, _ = solve_curve_case(n, b, rect, density)
            errs = error_norms(ref_field, uh, b)
            errs["energy_away"] = error_norms(ref_field, uh, b, triangles=away)["energy"]
            rows.append(
                LevelRow(n=n, h=uh.mesh.h, dofs=system.dofmap.num_free, errors=errs)
            )
    else:
        raise ValueError(f"unknown case {case!r}")

    meta.update({"rect": rect})
    return ConvergenceReport(case=case, b=b, delta=delta, rows=rows, metadata=meta)
