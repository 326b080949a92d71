"""Legacy ASCII VTK output for meshes, curve markers, and solution fields."""

from __future__ import annotations

import numpy as np


def _format_floats(rows) -> str:
    return "\n".join(" ".join(f"{v:.17e}" for v in row) for row in rows)


def write_vtk(
    path,
    mesh,
    point_data: dict | None = None,
    cell_data: dict | None = None,
) -> None:
    """Write a legacy ASCII VTK unstructured grid.

    ``point_data`` maps names to per-vertex arrays (scalars); ``cell_data``
    maps names to per-triangle arrays.  Triangles are VTK cell type 5.
    """
    nv = mesh.num_vertices
    nt = mesh.num_triangles
    lines = [
        "# vtk DataFile Version 3.0",
        "tri-Helmholtz solution",
        "ASCII",
        "DATASET UNSTRUCTURED_GRID",
        f"POINTS {nv} double",
        _format_floats(np.column_stack([mesh.vertices, np.zeros(nv)])),
        f"CELLS {nt} {4 * nt}",
        "\n".join("3 " + " ".join(str(v) for v in tri) for tri in mesh.triangles),
        f"CELL_TYPES {nt}",
        "\n".join(["5"] * nt),
    ]
    if cell_data:
        lines.append(f"CELL_DATA {nt}")
        for name, values in cell_data.items():
            values = np.asarray(values)
            lines.append(f"SCALARS {name} double 1")
            lines.append("LOOKUP_TABLE default")
            lines.append("\n".join(f"{v:.17e}" for v in values.astype(float)))
    if point_data:
        lines.append(f"POINT_DATA {nv}")
        for name, values in point_data.items():
            values = np.asarray(values, dtype=float)
            lines.append(f"SCALARS {name} double 1")
            lines.append("LOOKUP_TABLE default")
            lines.append("\n".join(f"{v:.17e}" for v in values))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def region_markers(mesh, curve=None) -> np.ndarray:
    """Per-triangle markers: 1 inside the embedded curve, 0 outside."""
    markers = np.zeros(mesh.num_triangles)
    if curve is not None:
        markers[curve.inside_triangles] = 1.0
    return markers


def vertex_samples(field) -> list:
    """Vertex values of each solution component, averaged over incident DOFs.

    Vertex values are single-valued by construction; they are read directly
    from the value DOFs.
    """
    nv = field.mesh.num_vertices
    return [np.asarray(field.coeffs[3 * np.arange(nv), d]) for d in range(field.d)]


def field_to_vtk(path, field, curve=None) -> None:
    """Write a solved field with per-component vertex data and region markers."""
    point_data = {
        f"u{d}": values for d, values in enumerate(vertex_samples(field))
    }
    write_vtk(
        path,
        field.mesh,
        point_data=point_data,
        cell_data={"region": region_markers(field.mesh, curve)},
    )
