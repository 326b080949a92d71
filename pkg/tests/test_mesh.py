"""Structured meshes, embedded curves, and validation."""

import numpy as np
import pytest

from trihelm.errors import AlignmentError, GeometryError
from trihelm.mesh import (
    build_unit_square_mesh,
    distance_to_rect_boundary,
    edge_normals,
    embed_curve,
    locate_triangle,
    triangle_geometry,
    validate_mesh,
)


def test_counts_n2():
    mesh = build_unit_square_mesh(2)
    assert mesh.num_vertices == 9
    assert mesh.num_triangles == 8
    assert mesh.num_edges == 16
    assert mesh.num_vertices - mesh.num_edges + mesh.num_triangles == 1


def test_counts_n1():
    mesh = build_unit_square_mesh(1)
    assert (mesh.num_vertices, mesh.num_triangles, mesh.num_edges) == (4, 2, 5)


def test_h_is_max_diameter_n8():
    mesh = build_unit_square_mesh(8)
    diams = [
        triangle_geometry(mesh.triangle_vertices(t))[1]
        for t in range(mesh.num_triangles)
    ]
    assert mesh.h == pytest.approx(np.sqrt(2.0) / 8.0, rel=1e-15)
    assert max(diams) == pytest.approx(mesh.h, rel=1e-15)


def test_edge_adjacency_and_orientation():
    mesh = build_unit_square_mesh(4)
    for e in range(mesh.num_edges):
        t0, t1 = mesh.edge_tris[e]
        assert t0 >= 0
        assert (t1 >= 0) == (not mesh.boundary_edge[e])
    for t in range(mesh.num_triangles):
        area, _, _ = triangle_geometry(mesh.triangle_vertices(t))
        assert area > 0


def test_shape_ratio_uniform_across_triangles():
    mesh = build_unit_square_mesh(4)
    ratios = {
        round(triangle_geometry(mesh.triangle_vertices(t))[1]
              / triangle_geometry(mesh.triangle_vertices(t))[2], 12)
        for t in range(mesh.num_triangles)
    }
    assert len(ratios) == 1


def test_edge_normals_unit_and_consistent():
    mesh = build_unit_square_mesh(2)
    normals = edge_normals(mesh)
    assert np.allclose(np.linalg.norm(normals, axis=1), 1.0)
    vecs = mesh.vertices[mesh.edges[:, 1]] - mesh.vertices[mesh.edges[:, 0]]
    assert np.allclose(np.einsum("ij,ij->i", normals, vecs), 0.0)


def test_embed_curve_n8():
    mesh = build_unit_square_mesh(8)
    curve = embed_curve(mesh, (0.25, 0.75))
    assert curve.num_segments == 16
    assert curve.epsilon_g == pytest.approx(0.25)
    # Every segment is an interior skeleton edge.
    assert not mesh.boundary_edge[curve.segments].any()
    # Single closed loop: consecutive segments share one vertex.
    for s in range(curve.num_segments):
        e_cur = set(mesh.edges[curve.segments[s]])
        e_next = set(mesh.edges[curve.segments[(s + 1) % curve.num_segments]])
        assert len(e_cur & e_next) == 1
    # theta spans partition [0, 2pi] proportionally to arc length.
    spans = curve.theta_spans
    assert spans[0, 0] == 0.0
    assert spans[-1, 1] == pytest.approx(2 * np.pi)
    assert np.allclose(spans[1:, 0], spans[:-1, 1])
    widths = spans[:, 1] - spans[:, 0]
    assert np.allclose(widths, 2 * np.pi / 16)
    # Every inside/outside triangle is classified, exclusively.
    assert len(curve.inside_triangles) + len(curve.outside_triangles) == mesh.num_triangles


def test_validation_passes_n8_rect():
    mesh = build_unit_square_mesh(8)
    curve = embed_curve(mesh, (0.25, 0.75))
    report = validate_mesh(mesh, curve)
    assert report.passed
    assert report.curve_ok
    assert mesh.h < curve.epsilon_g


def test_validation_fails_n4_rect():
    mesh = build_unit_square_mesh(4)
    curve = embed_curve(mesh, (0.25, 0.75))  # embedding itself succeeds
    report = validate_mesh(mesh, curve)
    assert not report.passed
    assert not report.curve_ok


def test_misaligned_rect_raises():
    mesh = build_unit_square_mesh(8)
    with pytest.raises(AlignmentError):
        embed_curve(mesh, (1.0 / 3.0, 2.0 / 3.0))


def test_embed_curve_rejects_bad_rect():
    mesh = build_unit_square_mesh(8)
    with pytest.raises((AlignmentError, GeometryError)):
        embed_curve(mesh, (0.75, 0.25))


def test_locate_triangle_roundtrip():
    mesh = build_unit_square_mesh(4)
    for t, c in enumerate(mesh.centroids()):
        assert locate_triangle(mesh, c) == t


def test_distance_to_rect_boundary():
    rect = (0.25, 0.75)
    pts = np.array([[0.5, 0.5], [0.25, 0.5], [0.0, 0.5], [0.5, 0.9]])
    d = distance_to_rect_boundary(pts, rect)
    assert d == pytest.approx([0.25, 0.0, 0.25, 0.15])


def test_curve_point_at_traces_perimeter():
    mesh = build_unit_square_mesh(8)
    curve = embed_curve(mesh, (0.25, 0.75))
    p0 = curve.point_at(mesh, 0, np.array([curve.theta_spans[0, 0]]))[0]
    assert p0 == pytest.approx([0.25, 0.25])
    for s in range(curve.num_segments):
        t0, t1 = curve.theta_spans[s]
        pts = curve.point_at(mesh, s, np.linspace(t0, t1, 5))
        assert distance_to_rect_boundary(pts, (0.25, 0.75)) == pytest.approx(0.0, abs=1e-14)
