"""Config handling, subcommands, exit codes, and file outputs."""

import numpy as np
import pytest

import trihelm.cli as cli
from trihelm.cli import (
    RunConfig,
    apply_setting,
    parse_config,
    serialize_config,
)
from trihelm.errors import ConfigError


def test_config_roundtrip():
    config = RunConfig(
        n=16,
        levels=[4, 8, 16],
        b=2.5,
        delta=0.25,
        seed=7,
        output="runs/a",
        source_kind="curve",
        source_ftilde="sin",
        curve_rect=(0.125, 0.875),
        emit_vtk=False,
        emit_matrix=True,
    )
    text = serialize_config(config)
    assert parse_config(text) == config
    assert serialize_config(parse_config(text)) == text


def test_unknown_key_is_named():
    with pytest.raises(ConfigError, match="jitter"):
        parse_config("jitter = 1\n")
    with pytest.raises(ConfigError, match="jitter"):
        apply_setting(RunConfig(), "jitter", "1")


def test_invalid_values_rejected():
    with pytest.raises(ConfigError, match="'b'"):
        parse_config("b = -2\n")
    with pytest.raises(ConfigError, match="'n'"):
        apply_setting(RunConfig(), "n", "four")
    with pytest.raises(ConfigError, match="ftilde"):
        parse_config("source.ftilde = gaussian\n")
    with pytest.raises(ConfigError):
        parse_config("just a line without equals\n")


def test_comments_and_blanks_ignored():
    config = parse_config("# a comment\n\nn = 4  # trailing comment\n")
    assert config.n == 4


def test_solve_smoke(tmp_path):
    out = tmp_path / "run"
    rc = cli.main(["solve", "--set", "n=4", "--output", str(out)])
    assert rc == 0
    assert (out / "solution.vtk").is_file()
    assert (out / "solve.log").is_file()


def test_solve_misaligned_rect_exit3(tmp_path, capsys):
    rc = cli.main(
        [
            "solve",
            "--set", "n=8",
            "--set", "source.kind=curve",
            "--set", "curve.rect=[0.333333333, 0.666666667]",
            "--output", str(tmp_path / "x"),
        ]
    )
    assert rc == 3
    assert "alignment" in capsys.readouterr().err.lower()


def test_solve_coarse_curve_fails_validation(tmp_path):
    rc = cli.main(
        [
            "solve",
            "--set", "n=4",
            "--set", "source.kind=curve",
            "--output", str(tmp_path / "x"),
        ]
    )
    assert rc == 3


def test_solve_zero_density_zero_solution(tmp_path):
    out = tmp_path / "zero"
    rc = cli.main(
        [
            "solve",
            "--set", "n=8",
            "--set", "source.kind=curve",
            "--set", "source.ftilde=const 0 0",
            "--output", str(out),
        ]
    )
    assert rc == 0
    log = (out / "solve.log").read_text()
    line = next(l for l in log.splitlines() if l.startswith("max_abs_coefficient"))
    assert float(line.split("=")[1]) <= 1e-12


def test_bad_config_exit2(tmp_path):
    assert cli.main(["solve", "--set", "nope=1"]) == 2
    assert cli.main(["solve", "--set", "b=-1"]) == 2
    assert cli.main(["solve", "--config", str(tmp_path / "missing.cfg")]) == 2


def test_config_file_loaded(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("n = 2\nemit.vtk = false\n")
    out = tmp_path / "out"
    rc = cli.main(["solve", "--config", str(cfg), "--output", str(out)])
    assert rc == 0
    assert not (out / "solution.vtk").exists()
    assert (out / "solve.log").is_file()


def test_convergence_writes_csv(tmp_path):
    out = tmp_path / "conv"
    rc = cli.main(
        ["convergence", "--set", "levels=[2, 4]", "--output", str(out)]
    )
    assert rc == 0
    lines = (out / "convergence.csv").read_text().strip().split("\n")
    assert len(lines) == 3
    assert lines[0].startswith("n,h,dofs,err_l2")


def test_convergence_deterministic(tmp_path):
    texts = []
    for tag in ("a", "b"):
        out = tmp_path / tag
        rc = cli.main(
            ["convergence", "--set", "levels=[2, 4]", "--set", "seed=3",
             "--output", str(out)]
        )
        assert rc == 0
        texts.append((out / "convergence.csv").read_bytes())
    assert texts[0] == texts[1]


def test_check_passes_default_n4():
    assert cli.main(["check", "--set", "n=4"]) == 0


def test_check_runs_on_smallest_mesh():
    assert cli.main(["check", "--set", "n=1"]) == 0


def test_check_fault_injection(monkeypatch, capsys):
    from trihelm.mesh import build_unit_square_mesh

    mesh = build_unit_square_mesh(2)
    interior = next(e for e in range(mesh.num_edges) if mesh.edge_tris[e][1] >= 0)
    monkeypatch.setattr(cli, "_FAULT_FLIP_EDGE", interior)
    rc = cli.main(["check", "--set", "n=2"])
    assert rc == 1
    assert "FAIL weak-continuity" in capsys.readouterr().out


def test_vtk_output_structure(tmp_path):
    out = tmp_path / "vtk"
    rc = cli.main(
        ["solve", "--set", "n=4", "--set", "source.kind=manufactured",
         "--output", str(out)]
    )
    assert rc == 0
    text = (out / "solution.vtk").read_text()
    assert text.startswith("# vtk DataFile Version 3.0")
    assert "DATASET UNSTRUCTURED_GRID" in text
    assert "POINTS 25 double" in text
    assert "CELL_TYPES 32" in text
    assert "SCALARS u0 double 1" in text
    assert "SCALARS u1 double 1" in text
    assert "SCALARS region double 1" in text
