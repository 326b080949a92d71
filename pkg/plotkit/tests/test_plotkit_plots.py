"""Slope fitting and figure generation."""

from pathlib import Path

import numpy as np
import pytest

from plotkit.csvio import ConvergenceTable, read_convergence_csv
from plotkit.plots import least_squares_slope, plot_convergence, plot_field
from plotkit.vtkio import VtkGrid, read_vtk

DATA = Path(__file__).parent / "data"

CSV_HEADER = (
    "n,h,dofs,err_l2,err_h1,err_h2,err_h3_broken,err_energy,err_energy_away,"
    "eoc_l2,eoc_h1,eoc_h2,eoc_h3,eoc_energy,eoc_energy_away"
)


def synthetic_table(p: float) -> ConvergenceTable:
    """Three-level table with every error column exactly proportional to h^p."""
    h = np.array([0.25, 0.125, 0.0625])
    cols = {"n": np.array([4.0, 8.0, 16.0]), "h": h, "dofs": np.array([1.0, 2.0, 3.0])}
    header = CSV_HEADER.split(",")
    for name in header[3:9]:
        cols[name] = 3.0 * h ** p
    for name in header[9:]:
        cols[name] = np.array([np.nan, p, p])
    return ConvergenceTable(header=header, columns=cols)


def test_two_point_slope_is_exact_log_ratio():
    h = np.array([0.2, 0.1])
    err = np.array([0.06, 0.015])
    expected = np.log(0.06 / 0.015) / np.log(0.2 / 0.1)
    assert least_squares_slope(h, err) == pytest.approx(expected, abs=1e-14)


def test_slope_ignores_nan_rows():
    h = np.array([np.nan, 0.2, 0.1])
    err = np.array([1.0, 0.4, 0.2])
    assert least_squares_slope(h, err) == pytest.approx(1.0, abs=1e-12)


def test_slope_needs_two_points():
    with pytest.raises(ValueError, match="two positive data points"):
        least_squares_slope(np.array([0.5]), np.array([1.0]))


@pytest.mark.parametrize("p", [1, 2])
def test_synthetic_slopes_match_order(tmp_path, p):
    slopes = plot_convergence(synthetic_table(float(p)), tmp_path / "conv.png")
    assert (tmp_path / "conv.png").stat().st_size > 0
    for name, slope in slopes.items():
        assert abs(slope - p) <= 0.01, (name, slope)


def test_real_csv_slopes_match_its_eoc_columns(tmp_path):
    table = read_convergence_csv(DATA / "manufactured.csv")
    slopes = plot_convergence(table, tmp_path / "conv.png")
    for name in table.error_columns:
        eocs = table.column("eoc" + name[len("err"):].replace("_broken", ""))
        mean_eoc = np.nanmean(eocs)
        assert abs(slopes[name] - mean_eoc) <= 0.05, (name, slopes[name], mean_eoc)


def test_plot_convergence_selected_columns(tmp_path):
    table = read_convergence_csv(DATA / "manufactured.csv")
    slopes = plot_convergence(
        table, tmp_path / "conv.png", cols=["err_energy", "err_l2"]
    )
    assert set(slopes) == {"err_energy", "err_l2"}


def test_zero_field_uniform_color(tmp_path):
    grid = read_vtk(DATA / "manufactured_n8.vtk")
    grid.point_data["u0"][:] = 0.0
    info = plot_field(grid, 0, tmp_path / "zero.png")
    assert info["vmin"] == info["vmax"] == 0.0
    assert (tmp_path / "zero.png").stat().st_size > 0


def test_manufactured_max_at_domain_center(tmp_path):
    grid = read_vtk(DATA / "manufactured_n8.vtk")
    plot_field(grid, 0, tmp_path / "u0.png")
    peak = grid.points[np.argmax(grid.point_data["u0"])]
    h = np.sqrt(2.0) / 8.0
    assert np.linalg.norm(peak - np.array([0.5, 0.5])) <= h


def test_curve_field_reports_overlay_rect(tmp_path):
    grid = read_vtk(DATA / "curve_n8.vtk")
    info = plot_field(grid, 1, tmp_path / "u1.png")
    assert info["rect"] == (0.25, 0.25, 0.75, 0.75)


def test_missing_component_named(tmp_path):
    grid = VtkGrid(
        points=np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]),
        triangles=np.array([[0, 1, 2]]),
        point_data={"u0": np.zeros(3)},
    )
    with pytest.raises(KeyError, match="u1"):
        plot_field(grid, 1, tmp_path / "x.png")
