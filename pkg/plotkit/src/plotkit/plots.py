"""Log-log convergence plots and triangulated field heatmaps."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np
from matplotlib.tri import Triangulation

from .csvio import ConvergenceTable
from .vtkio import VtkGrid, region_rectangle


def least_squares_slope(h: np.ndarray, err: np.ndarray) -> float:
    """Slope of log(err) vs log(h); exact two-point ratio for two points."""
    mask = np.isfinite(h) & np.isfinite(err) & (h > 0) & (err > 0)
    x, y = np.log(h[mask]), np.log(err[mask])
    if len(x) < 2:
        raise ValueError("need at least two positive data points to fit a slope")
    return float(np.polyfit(x, y, 1)[0])


def plot_convergence(table: ConvergenceTable, out_path, cols=None) -> dict:
    """Write a log-log error plot; returns fitted slope per plotted column."""
    names = list(cols) if cols else table.error_columns
    h = table.column("h")
    slopes = {}
    fig, ax = plt.subplots(figsize=(6.0, 4.5))
    for name in names:
        err = table.column(name)
        slopes[name] = least_squares_slope(h, err)
        ax.loglog(h, err, "o-", label=f"{name} (slope {slopes[name]:.2f})")
    # Slope-1 reference through the first point of the first series.
    e0 = table.column(names[0])
    ref = e0[0] * (h / h[0])
    ax.loglog(h, ref, "k--", linewidth=0.8, label="slope 1")
    ax.set_xlabel("h")
    ax.set_ylabel("error")
    ax.legend(fontsize=8)
    ax.grid(True, which="both", linewidth=0.3)
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)
    return slopes


def plot_field(grid: VtkGrid, component: int, out_path) -> dict:
    """Write a heatmap of one solution component; returns plot metadata.

    The returned dict reports the value range and, when the grid carries a
    marked region, the overlay rectangle ``(x0, y0, x1, y1)``.
    """
    name = f"u{component}"
    if name not in grid.point_data:
        available = ", ".join(sorted(grid.point_data)) or "none"
        raise KeyError(f"point array {name!r} not found; available: {available}")
    values = grid.point_data[name]
    tri = Triangulation(grid.points[:, 0], grid.points[:, 1], grid.triangles)

    fig, ax = plt.subplots(figsize=(5.2, 4.5))
    vmin, vmax = float(values.min()), float(values.max())
    if vmin == vmax:
        # Degenerate range (e.g. zero field): pin a symmetric window so the
        # color mapping stays defined.
        pad = max(abs(vmin), 1.0) * 1e-12
        mesh = ax.tripcolor(tri, values, shading="gouraud",
                            vmin=vmin - pad, vmax=vmax + pad)
    else:
        mesh = ax.tripcolor(tri, values, shading="gouraud")
    fig.colorbar(mesh, ax=ax, label=name)

    rect = region_rectangle(grid)
    if rect is not None:
        x0, y0, x1, y1 = rect
        ax.plot([x0, x1, x1, x0, x0], [y0, y0, y1, y1, y0], "w-", linewidth=1.2)
    ax.set_aspect("equal")
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)
    return {"vmin": vmin, "vmax": vmax, "rect": rect}
