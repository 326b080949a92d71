"""Readers for the convergence CSV schema and legacy ASCII VTK files."""

from pathlib import Path

import numpy as np
import pytest

from plotkit.csvio import MissingColumn, read_convergence_csv
from plotkit.vtkio import VtkParseError, read_vtk, region_rectangle

DATA = Path(__file__).parent / "data"


def write_csv(path, text):
    path.write_text(text)
    return path


def test_csv_reader_parses_real_run():
    table = read_convergence_csv(DATA / "manufactured.csv")
    assert table.column("n").tolist() == [8.0, 16.0, 32.0]
    assert np.isnan(table.column("eoc_l2")[0])
    assert np.isfinite(table.column("eoc_l2")[1:]).all()
    assert table.error_columns == [
        "err_l2", "err_h1", "err_h2", "err_h3_broken",
        "err_energy", "err_energy_away",
    ]


def test_csv_missing_column_is_named(tmp_path):
    path = write_csv(tmp_path / "t.csv", "h,err_l2\n0.5,1.0\n")
    table = read_convergence_csv(path)
    with pytest.raises(MissingColumn, match="err_energy"):
        table.column("err_energy")


def test_csv_ragged_row_rejected(tmp_path):
    path = write_csv(tmp_path / "t.csv", "h,err_l2\n0.5\n")
    with pytest.raises(ValueError, match="line 2"):
        read_convergence_csv(path)


def test_csv_empty_file_rejected(tmp_path):
    with pytest.raises(ValueError, match="empty"):
        read_convergence_csv(write_csv(tmp_path / "t.csv", ""))


def test_vtk_reader_roundtrips_solution():
    grid = read_vtk(DATA / "manufactured_n8.vtk")
    assert grid.points.shape == (81, 2)
    assert grid.triangles.shape == (128, 3)
    assert set(grid.point_data) == {"u0", "u1"}
    assert set(grid.cell_data) == {"region"}
    assert grid.points.min() == 0.0 and grid.points.max() == 1.0
    # Both components of the manufactured solution coincide.
    assert np.allclose(grid.point_data["u0"], grid.point_data["u1"])


def test_vtk_parse_error_reports_byte_offset(tmp_path):
    raw = (DATA / "manufactured_n8.vtk").read_bytes()
    broken = raw.replace(b"CELL_TYPES 128", b"CELL_TYPES oops", 1)
    path = tmp_path / "broken.vtk"
    path.write_bytes(broken)
    with pytest.raises(VtkParseError, match=r"byte offset \d+") as err:
        read_vtk(path)
    assert err.value.offset == raw.index(b"CELL_TYPES")


def test_vtk_rejects_non_vtk_file(tmp_path):
    path = tmp_path / "junk.vtk"
    path.write_bytes(b"hello\nworld\n")
    with pytest.raises(VtkParseError, match="byte offset 0"):
        read_vtk(path)


def test_vtk_truncated_points_rejected(tmp_path):
    text = (
        "# vtk DataFile Version 3.0\nt\nASCII\nDATASET UNSTRUCTURED_GRID\n"
        "POINTS 2 double\n0 0 0\n"
    )
    path = tmp_path / "short.vtk"
    path.write_text(text)
    with pytest.raises(VtkParseError, match="POINTS"):
        read_vtk(path)


def test_region_rectangle_matches_curve_config():
    grid = read_vtk(DATA / "curve_n8.vtk")
    assert region_rectangle(grid) == (0.25, 0.25, 0.75, 0.75)


def test_region_rectangle_none_without_marked_cells():
    grid = read_vtk(DATA / "manufactured_n8.vtk")
    assert region_rectangle(grid) is None
