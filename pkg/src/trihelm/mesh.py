"""Structured triangulations of the unit square with embedded curves.

The mesh splits every grid cell along its bottom-left-to-top-right
diagonal, so all triangles are congruent right triangles and refinement
is nested.  Embedded curves are grid-aligned axis-parallel rectangles
traced along the mesh skeleton.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import AlignmentError, GeometryError


@dataclass
class Mesh:
    """Triangulation of the unit square at resolution n (cells per side)."""

    n: int
    vertices: np.ndarray  # (V, 2)
    triangles: np.ndarray  # (T, 3) CCW vertex indices
    edges: np.ndarray  # (E, 2) with lo < hi
    edge_tris: np.ndarray  # (E, 2), second entry -1 on boundary edges
    tri_edges: np.ndarray  # (T, 3), local edge k = (v_k, v_{k+1})
    boundary_vertex: np.ndarray  # (V,) bool
    boundary_edge: np.ndarray  # (E,) bool
    h: float

    @property
    def num_vertices(self) -> int:
        return len(self.vertices)

    @property
    def num_triangles(self) -> int:
        return len(self.triangles)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def triangle_vertices(self, t: int) -> np.ndarray:
        return self.vertices[self.triangles[t]]

    def centroids(self) -> np.ndarray:
        return self.vertices[self.triangles].mean(axis=1)


@dataclass
class EmbeddedCurve:
    """Closed polyline over skeleton edges tracing a rectangle perimeter."""

    rect: tuple  # (a, b): the square [a, b] x [a, b]
    segments: np.ndarray  # (S,) edge indices in walk order
    seg_start: np.ndarray  # (S,) vertex index where each segment starts
    theta_spans: np.ndarray  # (S, 2) sub-intervals of [0, 2pi]
    inside_triangles: np.ndarray
    outside_triangles: np.ndarray
    epsilon_g: float

    @property
    def num_segments(self) -> int:
        return len(self.segments)

    def point_at(self, mesh: Mesh, seg: int, theta: np.ndarray) -> np.ndarray:
        """Map parameter values inside segment ``seg`` to physical points."""
        t0, t1 = self.theta_spans[seg]
        a = self.seg_start[seg]
        e = mesh.edges[self.segments[seg]]
        b = e[1] if e[0] == a else e[0]
        s = (np.asarray(theta) - t0) / (t1 - t0)
        return mesh.vertices[a] + np.outer(s, mesh.vertices[b] - mesh.vertices[a])


@dataclass
class ValidationReport:
    shape_ratio_max: float
    h_min: float
    h_max: float
    quasi_uniformity: float
    passed: bool
    curve_checked: bool = False
    curve_ok: bool = True
    epsilon_g: float = field(default=float("nan"))
    messages: list = field(default_factory=list)


def build_unit_square_mesh(n: int) -> Mesh:
    """Uniform right-triangle mesh of [0,1]^2 with 2 n^2 triangles."""
    if n < 1:
        raise GeometryError("resolution n must be >= 1")
    xs = np.linspace(0.0, 1.0, n + 1)
    X, Y = np.meshgrid(xs, xs, indexing="xy")
    vertices = np.column_stack([X.ravel(), Y.ravel()])

    def vid(i, j):
        return j * (n + 1) + i

    tris = []
    for j in range(n):
        for i in range(n):
            a, b = vid(i, j), vid(i + 1, j)
            c, d = vid(i + 1, j + 1), vid(i, j + 1)
            tris.append((a, b, c))  # lower: below the a-c diagonal
            tris.append((a, c, d))  # upper
    triangles = np.array(tris, dtype=int)

    edge_index: dict = {}
    edges = []
    edge_tris = []
    tri_edges = np.empty((len(triangles), 3), dtype=int)
    for t, (v0, v1, v2) in enumerate(triangles):
        for k, (p, q) in enumerate(((v0, v1), (v1, v2), (v2, v0))):
            key = (p, q) if p < q else (q, p)
            e = edge_index.get(key)
            if e is None:
                e = len(edges)
                edge_index[key] = e
                edges.append(key)
                edge_tris.append([t, -1])
            else:
                edge_tris[e][1] = t
            tri_edges[t, k] = e
    edges = np.array(edges, dtype=int)
    edge_tris = np.array(edge_tris, dtype=int)

    boundary_edge = edge_tris[:, 1] < 0
    boundary_vertex = np.zeros(len(vertices), dtype=bool)
    boundary_vertex[edges[boundary_edge].ravel()] = True

    h = float(np.sqrt(2.0) / n)
    return Mesh(
        n=n,
        vertices=vertices,
        triangles=triangles,
        edges=edges,
        edge_tris=edge_tris,
        tri_edges=tri_edges,
        boundary_vertex=boundary_vertex,
        boundary_edge=boundary_edge,
        h=h,
    )


def edge_normals(mesh: Mesh) -> np.ndarray:
    """One fixed unit normal per edge (shared by both adjacent triangles).

    Convention: rotate the lower-to-higher-index edge vector by +90 degrees.
    """
    vec = mesh.vertices[mesh.edges[:, 1]] - mesh.vertices[mesh.edges[:, 0]]
    vec = vec / np.linalg.norm(vec, axis=1, keepdims=True)
    return np.column_stack([-vec[:, 1], vec[:, 0]])


def embed_curve(mesh: Mesh, rect) -> EmbeddedCurve:
    """Trace the perimeter of the square [a,b]^2 along skeleton edges."""
    a, b = float(rect[0]), float(rect[1])
    if a >= b:
        raise GeometryError(f"rectangle requires a < b, got [{a}, {b}]")
    if not (0.0 < a and b < 1.0):
        raise GeometryError(f"rectangle [{a}, {b}]^2 must lie strictly inside the unit square")
    n = mesh.n
    ia, ib = a * n, b * n
    if abs(ia - round(ia)) > 1e-12 or abs(ib - round(ib)) > 1e-12:
        raise AlignmentError(f"rectangle bounds [{a}, {b}] are not multiples of 1/{n}")
    ia, ib = int(round(ia)), int(round(ib))

    def vid(i, j):
        return j * (n + 1) + i

    # Walk the perimeter counterclockwise starting at (a, a).
    corners = []
    corners += [vid(i, ia) for i in range(ia, ib)]  # bottom, left to right
    corners += [vid(ib, j) for j in range(ia, ib)]  # right, bottom to top
    corners += [vid(i, ib) for i in range(ib, ia, -1)]  # top, right to left
    corners += [vid(ia, j) for j in range(ib, ia, -1)]  # left, top to bottom

    edge_index = {tuple(e): k for k, e in enumerate(mesh.edges)}
    segs = []
    for k in range(len(corners)):
        p, q = corners[k], corners[(k + 1) % len(corners)]
        key = (p, q) if p < q else (q, p)
        e = edge_index.get(key)
        if e is None or mesh.boundary_edge[e]:
            raise AlignmentError("curve segment is not an interior skeleton edge")
        segs.append(e)
    segments = np.array(segs, dtype=int)
    seg_start = np.array(corners, dtype=int)

    # All segments have equal length 1/n, so spans are uniform.
    breaks = np.linspace(0.0, 2.0 * np.pi, len(segments) + 1)
    theta_spans = np.column_stack([breaks[:-1], breaks[1:]])

    cent = mesh.centroids()
    inside = (
        (cent[:, 0] > a) & (cent[:, 0] < b) & (cent[:, 1] > a) & (cent[:, 1] < b)
    )
    return EmbeddedCurve(
        rect=(a, b),
        segments=segments,
        seg_start=seg_start,
        theta_spans=theta_spans,
        inside_triangles=np.flatnonzero(inside),
        outside_triangles=np.flatnonzero(~inside),
        epsilon_g=min(a, 1.0 - b),
    )


def triangle_geometry(verts: np.ndarray):
    """Return (signed area, diameter, inradius) for one triangle."""
    v0, v1, v2 = verts
    e1, e2 = v1 - v0, v2 - v0
    area = 0.5 * float(e1[0] * e2[1] - e1[1] * e2[0])
    lens = [np.linalg.norm(v1 - v0), np.linalg.norm(v2 - v1), np.linalg.norm(v0 - v2)]
    diam = float(max(lens))
    rho = 2.0 * area / float(sum(lens)) if area > 0 else 0.0
    return area, diam, rho


def validate_mesh(mesh: Mesh, curve: EmbeddedCurve | None = None, c0: float = 5.0) -> ValidationReport:
    """Check shape-regularity, quasi-uniformity, and curve separation."""
    ratios = []
    diams = []
    messages = []
    for t in range(mesh.num_triangles):
        area, diam, rho = triangle_geometry(mesh.triangle_vertices(t))
        if area <= 0:
            messages.append(f"triangle {t} has non-positive area")
            continue
        ratios.append(diam / rho)
        diams.append(diam)
    ratio_max = float(max(ratios))
    h_min, h_max = float(min(diams)), float(max(diams))
    passed = ratio_max <= c0 and not messages
    if ratio_max > c0:
        messages.append(f"shape-regularity ratio {ratio_max:.3f} exceeds c0={c0}")

    report = ValidationReport(
        shape_ratio_max=ratio_max,
        h_min=h_min,
        h_max=h_max,
        quasi_uniformity=h_max / h_min,
        passed=passed,
    )
    if curve is not None:
        report.curve_checked = True
        report.epsilon_g = curve.epsilon_g
        report.curve_ok = mesh.h < curve.epsilon_g
        if not report.curve_ok:
            messages.append(
                f"mesh size h={mesh.h:.4f} is not below the curve-boundary distance "
                f"epsilon_g={curve.epsilon_g:.4f}"
            )
            report.passed = False
    report.messages = messages
    return report


def locate_triangle(mesh: Mesh, point) -> int:
    """Index of the structured-mesh triangle containing ``point``."""
    n = mesh.n
    x, y = float(point[0]), float(point[1])
    i = min(max(int(np.floor(x * n)), 0), n - 1)
    j = min(max(int(np.floor(y * n)), 0), n - 1)
    lower = (x - i / n) >= (y - j / n)
    return (j * n + i) * 2 + (0 if lower else 1)


def distance_to_rect_boundary(points: np.ndarray, rect) -> np.ndarray:
    """Distance from points to the perimeter of the square [a,b]^2."""
    a, b = rect
    pts = np.atleast_2d(points)
    x, y = pts[:, 0], pts[:, 1]
    dx_out = np.maximum(np.maximum(a - x, x - b), 0.0)
    dy_out = np.maximum(np.maximum(a - y, y - b), 0.0)
    outside = np.hypot(dx_out, dy_out)
    inside = np.minimum(np.minimum(x - a, b - x), np.minimum(y - a, b - y))
    return np.where(outside > 0.0, outside, np.maximum(inside, 0.0))
