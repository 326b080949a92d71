"""Global DOF numbering and assembly of the broken bilinear form.

The form pairs the alternating gradient/divergence derivative chain with
binomial weights (1, 3b, 3b^2, b^3): values, gradients, Laplacians, and
gradients of Laplacians.  This is the elementwise sum that integrates by
parts to the tri-Helmholtz operator and is the pairing under which the
discrete solution converges at first order in the induced energy norm.
Homogeneous boundary conditions are imposed by symmetric elimination into
a reduced system.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

import numpy as np
import scipy.sparse as sp

from .errors import DimensionMismatch
from .mesh import Mesh
from .quadrature import triangle_rule

ASSEMBLY_DEGREE = 14


@dataclass
class DofMap:
    """Global numbering: 3 DOFs per vertex then 2 per edge."""

    num_vertices: int
    num_edges: int
    constrained: np.ndarray  # (total,) bool
    free_dofs: np.ndarray  # indices of unconstrained DOFs
    free_index: np.ndarray  # (total,) position among free DOFs, -1 if constrained

    @property
    def total(self) -> int:
        return 3 * self.num_vertices + 2 * self.num_edges

    @property
    def num_free(self) -> int:
        return len(self.free_dofs)

    def vertex_dofs(self, v) -> np.ndarray:
        return 3 * np.asarray(v)[..., None] + np.arange(3)

    def edge_dofs(self, e) -> np.ndarray:
        return 3 * self.num_vertices + 2 * np.asarray(e)[..., None] + np.arange(2)

    def restrict(self, full: np.ndarray) -> np.ndarray:
        return full[self.free_dofs]

    def extend(self, reduced: np.ndarray) -> np.ndarray:
        """Embed a free-DOF vector into the full numbering with zeros."""
        shape = (self.total,) + reduced.shape[1:]
        full = np.zeros(shape)
        full[self.free_dofs] = reduced
        return full


def build_dofmap(mesh: Mesh) -> DofMap:
    total = 3 * mesh.num_vertices + 2 * mesh.num_edges
    constrained = np.zeros(total, dtype=bool)
    bv = np.flatnonzero(mesh.boundary_vertex)
    constrained[(3 * bv[:, None] + np.arange(3)).ravel()] = True
    be = np.flatnonzero(mesh.boundary_edge)
    constrained[(3 * mesh.num_vertices + 2 * be[:, None] + np.arange(2)).ravel()] = True
    free = np.flatnonzero(~constrained)
    free_index = -np.ones(total, dtype=int)
    free_index[free] = np.arange(len(free))
    return DofMap(
        num_vertices=mesh.num_vertices,
        num_edges=mesh.num_edges,
        constrained=constrained,
        free_dofs=free,
        free_index=free_index,
    )


def local_to_global(mesh: Mesh, dofmap: DofMap, t: int) -> np.ndarray:
    """Global DOF indices in the canonical local order (15,)."""
    tri = mesh.triangles[t]
    g = np.empty(15, dtype=int)
    g[0:3] = 3 * tri
    g[3:9:2] = 3 * tri + 1
    g[4:9:2] = 3 * tri + 2
    g[9:12] = 3 * dofmap.num_vertices + 2 * mesh.tri_edges[t]
    g[12:15] = 3 * dofmap.num_vertices + 2 * mesh.tri_edges[t] + 1
    return g


@dataclass
class LinearSystem:
    """Reduced SPD operator for one scalar component of the vector problem.

    The two vector components decouple into identical blocks, so one
    matrix serves both solves.
    """

    matrix: sp.csr_matrix  # free x free
    full_matrix: sp.csr_matrix  # total x total (before elimination)
    dofmap: DofMap
    b: float
    d: int = 2


def operator_derivatives(tab) -> list:
    """The alternating derivative chain from tabulated components.

    Returns [value, gradient, Laplacian, grad(Laplacian)] with shapes
    (..., 1), (..., 2), (..., 1), (..., 2) given tabulate output to order 3.
    """
    lap = tab[2][..., 0:1] + tab[2][..., 2:3]
    grad_lap = np.stack(
        [tab[3][..., 0] + tab[3][..., 2], tab[3][..., 1] + tab[3][..., 3]], axis=-1
    )
    return [tab[0], tab[1], lap, grad_lap]


def _local_matrix(basis, weights_phys: np.ndarray, points_local: np.ndarray, b: float) -> np.ndarray:
    tab = basis.tabulate_local(points_local, 3)
    chain = operator_derivatives(tab)
    M = np.zeros((15, 15))
    for j, dj in enumerate(chain):
        wj = b ** j * comb(3, j)
        M += wj * np.einsum("q,qkc,qlc->kl", weights_phys, dj, dj)
    return M


def assemble_stiffness(mesh: Mesh, bases, b: float) -> LinearSystem:
    """Assemble a_h over all triangles and eliminate constrained DOFs."""
    if b <= 0:
        raise ValueError("operator parameter b must be positive")
    dofmap = build_dofmap(mesh)
    rule = triangle_rule(ASSEMBLY_DEGREE)

    cache: dict = {}
    rows, cols, vals = [], [], []
    for t, basis in enumerate(bases):
        key = id(basis.data)
        M = cache.get(key)
        if M is None:
            # Quadrature points in class-local coordinates; congruent
            # triangles share the same local matrix.
            pts_local = rule.points @ basis.frame.lverts
            w_phys = rule.weights * (2.0 * basis.frame.area)
            M = _local_matrix(basis, w_phys, pts_local, b)
            cache[key] = M
        g = local_to_global(mesh, dofmap, t)
        rows.append(np.repeat(g, 15))
        cols.append(np.tile(g, 15))
        vals.append(M.ravel())
    total = dofmap.total
    A_full = sp.coo_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
        shape=(total, total),
    ).tocsr()
    free = dofmap.free_dofs
    A = A_full[free][:, free].tocsr()
    return LinearSystem(matrix=A, full_matrix=A_full, dofmap=dofmap, b=b)


def energy_norm(system: LinearSystem, coeffs: np.ndarray) -> float:
    """sqrt of a_h(v, v), summed over components, for free-DOF vectors."""
    v = np.asarray(coeffs, dtype=float)
    if v.ndim == 1:
        v = v[:, None]
    if v.shape[0] != system.matrix.shape[0]:
        raise DimensionMismatch(
            f"expected {system.matrix.shape[0]} free DOFs, got {v.shape[0]}"
        )
    return float(np.sqrt(max(np.sum(v * (system.matrix @ v)), 0.0)))


def dump_matrix_market(system: LinearSystem, path) -> None:
    from scipy.io import mmwrite

    mmwrite(str(path), system.matrix.tocoo())
