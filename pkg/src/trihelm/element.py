"""The 15-DOF nonconforming triangular element.

Per physical triangle K the local shape space is spanned by the ten cubic
monomials together with q*xi1, q*xi2, q^2, q^2*xi1, q^2*xi2, where q is
the cubic bubble normalized to peak value 1 and xi are centered-scaled
local coordinates.  The nodal basis is dual to 15 functionals: vertex
values, vertex gradients, and length-normalized edge means of first and
second normal derivatives taken along one fixed global normal per edge.

Bases are built directly on the physical triangle; normal-derivative
DOFs are not preserved by affine pullback, so there is no reference
element.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateTriangle, UnisolvencyError
from .mesh import Mesh, edge_normals, triangle_geometry
from .poly import Polynomial2D, poly_diff, poly_pad
from .quadrature import segment_rule

NUM_DOFS = 15
CONDITION_LIMIT = 1e12

# Distinct derivative components per order and their Frobenius multiplicities.
DERIV_COMPS = {
    0: [(0, 0)],
    1: [(1, 0), (0, 1)],
    2: [(2, 0), (1, 1), (0, 2)],
    3: [(3, 0), (2, 1), (1, 2), (0, 3)],
}
DERIV_MULT = {
    0: np.array([1.0]),
    1: np.array([1.0, 1.0]),
    2: np.array([1.0, 2.0, 1.0]),
    3: np.array([1.0, 3.0, 3.0, 1.0]),
}

_P3_EXPONENTS = [
    (0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2),
    (3, 0), (2, 1), (1, 2), (0, 3),
]

_EDGE_GAUSS = segment_rule(7)


@dataclass
class ElementFrame:
    """Local geometry of one triangle: centered-scaled coordinates."""

    verts: np.ndarray  # (3, 2) physical
    centroid: np.ndarray
    scale: float  # triangle diameter
    lverts: np.ndarray  # (3, 2) local vertex coordinates
    area: float
    normals: np.ndarray  # (3, 2) global unit normal per local edge

    def to_local(self, points: np.ndarray) -> np.ndarray:
        return (np.atleast_2d(points) - self.centroid) / self.scale


def make_frame(verts: np.ndarray, normals: np.ndarray) -> ElementFrame:
    verts = np.asarray(verts, dtype=float)
    v0, v1, v2 = verts
    e1, e2 = v1 - v0, v2 - v0
    area = 0.5 * float(e1[0] * e2[1] - e1[1] * e2[0])
    if area <= 0.0:
        raise DegenerateTriangle(f"triangle has signed area {area}")
    diam = max(
        np.linalg.norm(v1 - v0), np.linalg.norm(v2 - v1), np.linalg.norm(v0 - v2)
    )
    centroid = verts.mean(axis=0)
    return ElementFrame(
        verts=verts,
        centroid=centroid,
        scale=float(diam),
        lverts=(verts - centroid) / diam,
        area=area,
        normals=np.asarray(normals, dtype=float),
    )


def barycentric_polys(frame: ElementFrame):
    """The three barycentric coordinates as affine polynomials in xi."""
    A = np.column_stack([np.ones(3), frame.lverts])
    coef = np.linalg.inv(A)  # column i holds (const, xi1, xi2) of lambda_i
    lams = []
    for i in range(3):
        c = np.zeros((2, 2))
        c[0, 0], c[1, 0], c[0, 1] = coef[0, i], coef[1, i], coef[2, i]
        lams.append(Polynomial2D(c))
    return lams


def bubble_poly(frame: ElementFrame) -> Polynomial2D:
    """Normalized cubic bubble q = 27 l0 l1 l2 in local coordinates."""
    l0, l1, l2 = barycentric_polys(frame)
    return 27.0 * (l0 * l1 * l2)


def bubble(verts: np.ndarray, points: np.ndarray, max_order: int = 0):
    """Bubble value (and physical derivatives up to ``max_order``).

    Returns a dict order -> (P, ncomp) array of distinct derivative
    components in the convention of DERIV_COMPS.
    """
    frame = make_frame(verts, np.zeros((3, 2)))
    q = bubble_poly(frame)
    xi = frame.to_local(points)
    out = {}
    for order in range(max_order + 1):
        comps = []
        for dx, dy in DERIV_COMPS[order]:
            c = q.diff(dx, dy)
            comps.append(c(xi[:, 0], xi[:, 1]) / frame.scale ** order)
        out[order] = np.column_stack(comps)
    return out


def shape_generators(frame: ElementFrame) -> np.ndarray:
    """Stack of 15 generator polynomials in local coordinates, (15, 8, 8).

    The cubic monomials span P3 exactly; q itself (a cubic) is deliberately
    excluded so the 10 + 2 + 3 generators are independent.
    """
    q = bubble_poly(frame)
    x = Polynomial2D.monomial(1, 0)
    y = Polynomial2D.monomial(0, 1)
    gens = [Polynomial2D.monomial(p, r) for p, r in _P3_EXPONENTS]
    gens += [q * x, q * y]
    q2 = q * q
    gens += [q2, q2 * x, q2 * y]
    return np.stack([poly_pad(g.coeffs, 8, 8) for g in gens])


@dataclass
class DofFunctional:
    """One of the 15 local degrees of freedom."""

    kind: str  # vertex_value | vertex_gradient_x | vertex_gradient_y |
    #            edge_normal_mean | edge_second_normal_mean
    anchor: int  # local vertex or edge index
    global_anchor: int  # mesh vertex or edge index
    order: int  # derivative order of the functional
    normal: np.ndarray | None = None


def build_dof_functionals(mesh: Mesh, t: int, global_normals: np.ndarray):
    """Canonically ordered functionals: 3 values, 6 gradients, 3+3 edge means."""
    tri = mesh.triangles[t]
    funcs = [
        DofFunctional("vertex_value", k, int(tri[k]), 0) for k in range(3)
    ]
    for k in range(3):
        funcs.append(DofFunctional("vertex_gradient_x", k, int(tri[k]), 1))
        funcs.append(DofFunctional("vertex_gradient_y", k, int(tri[k]), 1))
    for kind, order in (("edge_normal_mean", 1), ("edge_second_normal_mean", 2)):
        for k in range(3):
            e = int(mesh.tri_edges[t, k])
            funcs.append(DofFunctional(kind, k, e, order, global_normals[e].copy()))
    return funcs


def _eval_stack(cstack: np.ndarray, xi: np.ndarray) -> np.ndarray:
    """Evaluate a stack of coefficient grids: (F, D, D) at (P, 2) -> (P, F)."""
    px = np.power.outer(xi[:, 0], np.arange(cstack.shape[1]))
    py = np.power.outer(xi[:, 1], np.arange(cstack.shape[2]))
    return np.einsum("pa,pb,fab->pf", px, py, cstack)


def _diff_stack(cstack: np.ndarray, dx: int, dy: int) -> np.ndarray:
    return np.stack([poly_pad(poly_diff(c, dx, dy), cstack.shape[1], cstack.shape[2]) for c in cstack])


class BasisData:
    """Nodal basis coefficients shared across congruent triangles."""

    def __init__(self, coeffs: np.ndarray, scale: float, cond: float):
        self.coeffs = coeffs  # (15, 8, 8) in local coordinates
        self.scale = scale
        self.cond = cond
        self._dcache: dict = {(0, 0): coeffs}

    def deriv_coeffs(self, dx: int, dy: int) -> np.ndarray:
        key = (dx, dy)
        if key not in self._dcache:
            self._dcache[key] = _diff_stack(self.coeffs, dx, dy)
        return self._dcache[key]

    def eval_local(self, xi: np.ndarray, dx: int, dy: int) -> np.ndarray:
        return _eval_stack(self.deriv_coeffs(dx, dy), xi)


@dataclass
class ElementBasis:
    """Nodal basis of one triangle with derivative evaluation to order 3."""

    tri: int
    frame: ElementFrame
    data: BasisData

    @property
    def cond(self) -> float:
        return self.data.cond

    def tabulate(self, points: np.ndarray, max_order: int):
        """Physical derivatives at physical points.

        Returns dict order -> (P, 15, ncomp) of distinct components.
        """
        xi = self.frame.to_local(points)
        out = {}
        for order in range(max_order + 1):
            comps = [
                self.data.eval_local(xi, dx, dy) / self.frame.scale ** order
                for dx, dy in DERIV_COMPS[order]
            ]
            out[order] = np.stack(comps, axis=-1)
        return out

    def tabulate_local(self, xi: np.ndarray, max_order: int):
        """Like tabulate but for precomputed local coordinates."""
        out = {}
        for order in range(max_order + 1):
            comps = [
                self.data.eval_local(xi, dx, dy) / self.frame.scale ** order
                for dx, dy in DERIV_COMPS[order]
            ]
            out[order] = np.stack(comps, axis=-1)
        return out


def _scaled_vandermonde(frame: ElementFrame, gens: np.ndarray) -> np.ndarray:
    """Vandermonde in local-derivative units; rows ordered canonically.

    Row i is the i-th functional applied to each generator, with vertex
    gradients and edge means expressed in xi-derivatives so the matrix
    condition is independent of triangle size.
    """
    V = np.empty((NUM_DOFS, NUM_DOFS))
    V[0:3] = _eval_stack(gens, frame.lverts)
    gx = _eval_stack(_diff_stack(gens, 1, 0), frame.lverts)  # (3, 15)
    gy = _eval_stack(_diff_stack(gens, 0, 1), frame.lverts)
    for k in range(3):
        V[3 + 2 * k] = gx[k]
        V[4 + 2 * k] = gy[k]
    s, w = _EDGE_GAUSS.points, _EDGE_GAUSS.weights
    d10 = _diff_stack(gens, 1, 0)
    d01 = _diff_stack(gens, 0, 1)
    d20 = _diff_stack(gens, 2, 0)
    d11 = _diff_stack(gens, 1, 1)
    d02 = _diff_stack(gens, 0, 2)
    for k in range(3):
        p0, p1 = frame.lverts[k], frame.lverts[(k + 1) % 3]
        pts = p0 + np.outer(s, p1 - p0)
        nu = frame.normals[k]
        dn = nu[0] * _eval_stack(d10, pts) + nu[1] * _eval_stack(d01, pts)
        V[9 + k] = w @ dn  # weights sum to 1: length-normalized mean
        dnn = (
            nu[0] * nu[0] * _eval_stack(d20, pts)
            + 2.0 * nu[0] * nu[1] * _eval_stack(d11, pts)
            + nu[1] * nu[1] * _eval_stack(d02, pts)
        )
        V[12 + k] = w @ dnn
    return V


_DOF_ORDERS = np.array([0] * 3 + [1] * 6 + [1] * 3 + [2] * 3)


def build_nodal_basis(mesh: Mesh, t: int, functionals=None, *, frame: ElementFrame | None = None) -> ElementBasis:
    """Solve the 15x15 duality system for one triangle's nodal basis."""
    if frame is None:
        if functionals is not None:
            normals = np.stack([
                functionals[9 + k].normal for k in range(3)
            ])
        else:
            normals = edge_normals(mesh)[mesh.tri_edges[t]]
        frame = make_frame(mesh.triangle_vertices(t), normals)
    gens = shape_generators(frame)
    V = _scaled_vandermonde(frame, gens)
    cond = float(np.linalg.cond(V))
    if not np.isfinite(cond) or cond > CONDITION_LIMIT:
        raise UnisolvencyError(f"triangle {t}: Vandermonde condition {cond:.2e}")
    # Physical functional i = scale^{-order_i} * local row i, so the nodal
    # coefficients are Vt^{-1} with column k rescaled by scale^{order_k}.
    C = np.linalg.solve(V, np.eye(NUM_DOFS)) * frame.scale ** _DOF_ORDERS[None, :]
    coeffs = np.einsum("gk,gab->kab", C, gens)
    return ElementBasis(tri=t, frame=frame, data=BasisData(coeffs, frame.scale, cond))


def build_all_bases(mesh: Mesh, normals: np.ndarray | None = None):
    """Nodal bases for every triangle, cached across congruence classes."""
    if normals is None:
        normals = edge_normals(mesh)
    bases = []
    cache: dict = {}
    for t in range(mesh.num_triangles):
        frame = make_frame(mesh.triangle_vertices(t), normals[mesh.tri_edges[t]])
        key = np.round(
            np.concatenate([frame.lverts.ravel(), frame.normals.ravel(), [frame.scale]]),
            12,
        ).tobytes()
        data = cache.get(key)
        if data is None:
            basis = build_nodal_basis(mesh, t, frame=frame)
            cache[key] = basis.data
            bases.append(basis)
        else:
            bases.append(ElementBasis(tri=t, frame=frame, data=data))
    return bases


def outward_edge_normals(verts: np.ndarray) -> np.ndarray:
    """Unit outward normals of edges (v_k, v_{k+1}) of a CCW triangle."""
    e = np.roll(verts, -1, axis=0) - verts
    normals = np.column_stack([e[:, 1], -e[:, 0]])
    return normals / np.linalg.norm(normals, axis=1)[:, None]


def unisolvency_deviation(verts: np.ndarray):
    """Duality defect and Vandermonde condition for a standalone triangle.

    Builds the nodal basis of the 15-DOF space on the given CCW triangle and
    returns (max |L_i(phi_j) - delta_ij|, condition number).
    """
    frame = make_frame(np.asarray(verts, dtype=float), outward_edge_normals(verts))
    gens = shape_generators(frame)
    V = _scaled_vandermonde(frame, gens)
    cond = float(np.linalg.cond(V))
    defect = float(np.abs(V @ np.linalg.solve(V, np.eye(NUM_DOFS)) - np.eye(NUM_DOFS)).max())
    return defect, cond


def random_shape_regular_triangle(rng, max_ratio: float = 4.0) -> np.ndarray:
    """Random CCW triangle in the unit square with diameter/inradius <= max_ratio."""
    while True:
        verts = rng.uniform(0.0, 1.0, (3, 2))
        area, diam, rho = triangle_geometry(verts)
        if area < 0:
            verts = verts[::-1].copy()
            area, diam, rho = triangle_geometry(verts)
        if area > 1e-6 and diam / rho <= max_ratio:
            return verts


def eval_basis(basis: ElementBasis, points: np.ndarray, max_order: int = 3):
    """Full value/gradient/Hessian/third-tensor arrays at given points."""
    tab = basis.tabulate(np.atleast_2d(points), max_order)
    out = {"value": tab[0][:, :, 0]}
    if max_order >= 1:
        out["gradient"] = tab[1]
    if max_order >= 2:
        h = tab[2]
        hess = np.empty(h.shape[:2] + (2, 2))
        hess[..., 0, 0] = h[..., 0]
        hess[..., 0, 1] = hess[..., 1, 0] = h[..., 1]
        hess[..., 1, 1] = h[..., 2]
        out["hessian"] = hess
    if max_order >= 3:
        t3 = tab[3]
        third = np.empty(t3.shape[:2] + (2, 2, 2))
        for i in range(2):
            for j in range(2):
                for k in range(2):
                    third[..., i, j, k] = t3[..., i + j + k]
        out["third"] = third
    return out
