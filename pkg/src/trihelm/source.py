"""Right-hand-side assembly: curve functional, volume loads, manufactured case.

The singular source integrates a density over the embedded closed curve
against the trace of the test function.  The manufactured path applies
the tri-Helmholtz operator to a polynomial exactly, so loads and error
norms contain no quadrature error.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import GeometryError
from .mesh import EmbeddedCurve, Mesh
from .poly import Polynomial2D
from .quadrature import duffy_rule, segment_rule

LOAD_DEGREE = 20  # degree-12 manufactured data against degree-7 test functions


@dataclass
class CurveDensity:
    """Density on the parameter circle [0, 2pi], vector valued."""

    evaluator: Callable[[np.ndarray], np.ndarray]  # (P,) -> (P, 2)

    @classmethod
    def constant(cls, fx: float, fy: float) -> "CurveDensity":
        def f(theta):
            theta = np.asarray(theta, dtype=float)
            out = np.empty(theta.shape + (2,))
            out[..., 0] = fx
            out[..., 1] = fy
            return out

        return cls(f)

    @classmethod
    def sin_theta(cls) -> "CurveDensity":
        def f(theta):
            theta = np.asarray(theta, dtype=float)
            out = np.zeros(theta.shape + (2,))
            out[..., 0] = np.sin(theta)
            return out

        return cls(f)

    def __call__(self, theta):
        return self.evaluator(theta)


def curve_load(
    mesh: Mesh,
    curve: EmbeddedCurve,
    bases,
    density: CurveDensity,
    side: str = "inside",
) -> np.ndarray:
    """Load vector (total DOFs, 2) of v -> integral of density . v(g(theta)).

    Traces are evaluated from the designated side; the space embeds into
    C^0 so the choice does not affect the result.
    """
    inside = set(curve.inside_triangles.tolist())
    rule = segment_rule(7)
    load = np.zeros((3 * mesh.num_vertices + 2 * mesh.num_edges, 2))
    from .assembly import build_dofmap, local_to_global

    dofmap = build_dofmap(mesh)
    for s in range(curve.num_segments):
        e = curve.segments[s]
        t0, t1 = curve.theta_spans[s]
        adj = [t for t in mesh.edge_tris[e] if t >= 0]
        if len(adj) != 2:
            raise GeometryError(f"curve edge {e} lacks two adjacent triangles")
        if side == "inside":
            tri = next(t for t in adj if t in inside)
        else:
            tri = next(t for t in adj if t not in inside)
        theta = t0 + rule.points * (t1 - t0)
        pts = curve.point_at(mesh, s, theta)
        vals = bases[tri].tabulate(pts, 0)[0][:, :, 0]  # (Q, 15)
        f = density(theta)  # (Q, 2)
        g = local_to_global(mesh, dofmap, tri)
        contrib = (t1 - t0) * np.einsum("q,qk,qc->kc", rule.weights, vals, f)
        load[g] += contrib
    return load


def volume_load(mesh: Mesh, bases, f: Callable, rule_degree: int = LOAD_DEGREE) -> np.ndarray:
    """Standard load vector (total DOFs, 2) for a pointwise source f(x)."""
    from .assembly import build_dofmap, local_to_global

    dofmap = build_dofmap(mesh)
    rule = duffy_rule(rule_degree)
    load = np.zeros((dofmap.total, 2))
    val_cache: dict = {}
    for t, basis in enumerate(bases):
        key = id(basis.data)
        vals = val_cache.get(key)
        if vals is None:
            pts_local = rule.points @ basis.frame.lverts
            vals = basis.tabulate_local(pts_local, 0)[0][:, :, 0]
            val_cache[key] = vals
        pts = rule.points @ basis.frame.verts
        fv = np.asarray(f(pts), dtype=float)  # (Q, 2)
        w = rule.weights * (2.0 * basis.frame.area)
        g = local_to_global(mesh, dofmap, t)
        load[g] += np.einsum("q,qk,qc->kc", w, vals, fv)
    return load


def apply_B(u: Polynomial2D, b: float) -> Polynomial2D:
    """(id - b Laplacian)^3 u via exact polynomial calculus."""
    lap1 = u.laplacian()
    lap2 = lap1.laplacian()
    lap3 = lap2.laplacian()
    return u - 3.0 * b * lap1 + 3.0 * b * b * lap2 - b ** 3 * lap3


def manufactured_case(b: float):
    """Exact solution u* = [x(1-x)y(1-y)]^3 (both components) and f* = B u*.

    u*, its gradient, and its Hessian vanish on the boundary of the unit
    square, so u* is admissible for the homogeneous problem.
    """
    if b <= 0:
        raise ValueError("operator parameter b must be positive")
    t3 = Polynomial2D([0.0, 0.0, 0.0, 1.0, -3.0, 3.0, -1.0])  # (t(1-t))^3 coeffs
    ustar = Polynomial2D(np.outer(t3.coeffs.ravel(), t3.coeffs.ravel()))
    fstar = apply_B(ustar, b)
    return ustar, fstar, polynomial_evaluator(ustar)


def polynomial_evaluator(p: Polynomial2D, max_order: int = 3):
    """Analytic derivative evaluator in the shared field convention.

    Returns a callable (points, order) -> (P, ncomp) of distinct
    derivative components.
    """
    from .element import DERIV_COMPS

    derivs = {
        order: [p.diff(dx, dy) for dx, dy in DERIV_COMPS[order]]
        for order in range(max_order + 1)
    }

    def evaluate(points: np.ndarray, order: int) -> np.ndarray:
        pts = np.atleast_2d(points)
        return np.column_stack([d(pts[:, 0], pts[:, 1]) for d in derivs[order]])

    return evaluate
