"""End-to-end CLI behaviour: exit codes, error wording, artifacts on disk."""

from pathlib import Path

from plotkit.cli import main

DATA = Path(__file__).parent / "data"


def test_conv_writes_image_and_prints_slopes(tmp_path, capsys):
    out = tmp_path / "conv.png"
    rc = main(["conv", str(DATA / "manufactured.csv"), "--out", str(out)])
    assert rc == 0
    assert out.stat().st_size > 0
    stdout = capsys.readouterr().out
    assert "err_energy: slope" in stdout
    assert f"wrote {out}" in stdout


def test_conv_missing_column_exit_code_names_it(tmp_path, capsys):
    rc = main([
        "conv", str(DATA / "manufactured.csv"),
        "--out", str(tmp_path / "x.png"), "--cols", "err_bogus",
    ])
    assert rc == 2
    assert "err_bogus" in capsys.readouterr().err


def test_conv_missing_file(tmp_path, capsys):
    rc = main(["conv", str(tmp_path / "nope.csv"), "--out", str(tmp_path / "x.png")])
    assert rc == 1
    assert "nope.csv" in capsys.readouterr().err


def test_field_writes_image(tmp_path, capsys):
    out = tmp_path / "field.png"
    rc = main([
        "field", str(DATA / "curve_n8.vtk"), "--component", "0", "--out", str(out),
    ])
    assert rc == 0
    assert out.stat().st_size > 0
    assert "u0: range" in capsys.readouterr().out


def test_field_parse_error_reports_offset(tmp_path, capsys):
    bad = tmp_path / "bad.vtk"
    bad.write_bytes(b"not a vtk file\n")
    rc = main(["field", str(bad), "--component", "0", "--out", str(tmp_path / "x.png")])
    assert rc == 2
    assert "byte offset" in capsys.readouterr().err
