"""Shared fixtures; expensive solves are session-scoped."""

import numpy as np
import pytest

from trihelm.analysis import error_seminorms, interpolate, run_convergence_study
from trihelm.element import build_all_bases
from trihelm.mesh import Mesh, build_unit_square_mesh
from trihelm.source import manufactured_case, polynomial_evaluator


@pytest.fixture(scope="session")
def grid():
    """Cached (mesh, bases) pairs keyed by resolution."""
    cache = {}

    def get(n):
        if n not in cache:
            mesh = build_unit_square_mesh(n)
            cache[n] = (mesh, build_all_bases(mesh))
        return cache[n]

    return get


@pytest.fixture(scope="session")
def manufactured_study():
    return run_convergence_study([8, 16, 32], case="manufactured", b=1.0)


@pytest.fixture(scope="session")
def curve_study():
    return run_convergence_study(
        [8, 16, 32], case="curve", b=1.0, delta=0.125, rect=(0.25, 0.75)
    )


@pytest.fixture(scope="session")
def interpolation_errors(grid):
    """Seminorm errors |u* - interp(u*)|_j for j = 0..3 at n = 8, 16, 32."""
    _, _, ueval = manufactured_case(1.0)
    out = {}
    for n in (8, 16, 32):
        mesh, bases = grid(n)
        field = interpolate(mesh, bases, [ueval])

        class Exact:
            d = 1

            def eval(self, points, order):
                return ueval(points, order)[:, None, :]

        out[n] = error_seminorms(field, Exact(), rule_degree=20)
    return out


def reference_triangle_mesh() -> Mesh:
    """A one-triangle mesh over the reference triangle (0,0),(1,0),(0,1)."""
    vertices = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
    triangles = np.array([[0, 1, 2]])
    edges = np.array([[0, 1], [1, 2], [0, 2]])
    return Mesh(
        n=1,
        vertices=vertices,
        triangles=triangles,
        edges=edges,
        edge_tris=np.array([[0, -1], [0, -1], [0, -1]]),
        tri_edges=np.array([[0, 1, 2]]),
        boundary_vertex=np.ones(3, dtype=bool),
        boundary_edge=np.ones(3, dtype=bool),
        h=float(np.sqrt(2.0)),
    )


@pytest.fixture()
def ref_mesh():
    return reference_triangle_mesh()


@pytest.fixture(scope="session")
def ustar_evaluator():
    ustar, _, ueval = manufactured_case(1.0)
    return ustar, ueval
