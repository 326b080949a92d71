"""Command-line driver for solve, convergence, and check workflows."""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field as dc_field, replace
from pathlib import Path

import numpy as np

from .analysis import (
    DiscreteField,
    c0_trace_check,
    interpolate,
    patch_test,
    poincare_ratio,
    run_convergence_study,
    weak_continuity_check,
)
from .assembly import assemble_stiffness, build_dofmap, dump_matrix_market
from .element import (
    build_all_bases,
    build_nodal_basis,
    make_frame,
    random_shape_regular_triangle,
    unisolvency_deviation,
)
from .errors import (
    AlignmentError,
    ConfigError,
    GeometryError,
    LevelMismatch,
    NotConverged,
    NotSPD,
    TrihelmError,
)
from .mesh import build_unit_square_mesh, edge_normals, embed_curve, validate_mesh
from .quadrature import segment_rule, triangle_monomial_integral, triangle_rule
from .solver import solve
from .source import (
    CurveDensity,
    curve_load,
    manufactured_case,
    polynomial_evaluator,
    volume_load,
)

# Test hook: when set to an interior edge index, cmd_check rebuilds one
# adjacent triangle with that edge's normal flipped, so the weak-continuity
# check must fail.
_FAULT_FLIP_EDGE: int | None = None


@dataclass
class RunConfig:
    """Flat key=value run configuration with dotted section names."""

    n: int = 8
    levels: list = dc_field(default_factory=lambda: [8, 16, 32])
    b: float = 1.0
    delta: float = 0.125
    seed: int = 0
    output: str = "out"
    source_kind: str = "manufactured"
    source_ftilde: str = "const 1 1"
    curve_rect: tuple = (0.25, 0.75)
    emit_vtk: bool = True
    emit_csv: bool = True
    emit_matrix: bool = False


def _parse_bool(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ("true", "1", "yes", "on"):
        return True
    if lowered in ("false", "0", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _parse_list(text: str, item):
    inner = text.strip()
    if inner.startswith("[") and inner.endswith("]"):
        inner = inner[1:-1]
    return [item(tok) for tok in inner.replace(",", " ").split()]


_KEYS = {
    "n": ("n", int, str),
    "levels": (
        "levels",
        lambda s: _parse_list(s, int),
        lambda v: "[" + ", ".join(str(x) for x in v) + "]",
    ),
    "b": ("b", float, repr),
    "delta": ("delta", float, repr),
    "seed": ("seed", int, str),
    "output": ("output", str.strip, str),
    "source.kind": ("source_kind", str.strip, str),
    "source.ftilde": ("source_ftilde", str.strip, str),
    "curve.rect": (
        "curve_rect",
        lambda s: tuple(_parse_list(s, float)),
        lambda v: "[" + ", ".join(repr(x) for x in v) + "]",
    ),
    "emit.vtk": ("emit_vtk", _parse_bool, lambda v: str(v).lower()),
    "emit.csv": ("emit_csv", _parse_bool, lambda v: str(v).lower()),
    "emit.matrix": ("emit_matrix", _parse_bool, lambda v: str(v).lower()),
}


def apply_setting(config: RunConfig, key: str, value: str) -> RunConfig:
    """One key=value assignment, with validation errors naming the key."""
    spec = _KEYS.get(key)
    if spec is None:
        raise ConfigError(f"unknown config key {key!r}")
    attr, parse, _ = spec
    try:
        parsed = parse(value)
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"invalid value for {key!r}: {exc}") from exc
    return replace(config, **{attr: parsed})


def validate_config(config: RunConfig) -> RunConfig:
    if config.b <= 0:
        raise ConfigError("config key 'b' must be positive")
    if config.n < 1:
        raise ConfigError("config key 'n' must be at least 1")
    if config.delta <= 0:
        raise ConfigError("config key 'delta' must be positive")
    if config.source_kind not in ("manufactured", "curve"):
        raise ConfigError(
            f"config key 'source.kind' must be 'manufactured' or 'curve', got {config.source_kind!r}"
        )
    if len(config.curve_rect) != 2 or not config.curve_rect[0] < config.curve_rect[1]:
        raise ConfigError("config key 'curve.rect' must be [a, b] with a < b")
    density_from_spec(config.source_ftilde)  # raises ConfigError when malformed
    return config


def parse_config(text: str) -> RunConfig:
    """Parse the flat key=value format; '#' starts a comment."""
    config = RunConfig()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value, got {raw.strip()!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        config = apply_setting(config, key, value)
    return validate_config(config)


def serialize_config(config: RunConfig) -> str:
    lines = []
    for key, (attr, _, fmt) in _KEYS.items():
        lines.append(f"{key} = {fmt(getattr(config, attr))}")
    return "\n".join(lines) + "\n"


def density_from_spec(spec: str) -> CurveDensity:
    tokens = spec.split()
    if tokens and tokens[0] == "sin":
        return CurveDensity.sin_theta()
    if len(tokens) == 3 and tokens[0] == "const":
        try:
            return CurveDensity.constant(float(tokens[1]), float(tokens[2]))
        except ValueError as exc:
            raise ConfigError(f"invalid 'source.ftilde' components: {exc}") from exc
    raise ConfigError(
        f"config key 'source.ftilde' must be 'const fx fy' or 'sin', got {spec!r}"
    )


def _write_log(outdir: Path, name: str, lines) -> None:
    (outdir / name).write_text("\n".join(str(line) for line in lines) + "\n")


def cmd_solve(config: RunConfig) -> int:
    """Assemble and solve one problem; write VTK, log, optional matrix dump."""
    from .vtkio import field_to_vtk

    outdir = Path(config.output)
    outdir.mkdir(parents=True, exist_ok=True)
    mesh = build_unit_square_mesh(config.n)
    bases = build_all_bases(mesh)
    curve = None
    if config.source_kind == "curve":
        try:
            curve = embed_curve(mesh, config.curve_rect)
        except (AlignmentError, GeometryError) as exc:
            print(f"error: curve alignment failed: {exc}", file=sys.stderr)
            return 3
    validation = validate_mesh(mesh, curve)
    if not validation.passed:
        for msg in validation.messages:
            print(f"error: validation: {msg}", file=sys.stderr)
        return 3

    system = assemble_stiffness(mesh, bases, config.b)
    if config.source_kind == "curve":
        load = curve_load(mesh, curve, bases, density_from_spec(config.source_ftilde))
    else:
        _, fstar, _ = manufactured_case(config.b)
        fvals = polynomial_evaluator(fstar, 0)

        def f(points):
            v = fvals(points, 0)[:, 0]
            return np.column_stack([v, v])

        load = volume_load(mesh, bases, f)
    rhs = system.dofmap.restrict(load)
    try:
        x, report = solve(system, rhs)
    except (NotConverged, NotSPD) as exc:
        print(f"error: solver failed: {exc}", file=sys.stderr)
        return 4
    coeffs = system.dofmap.extend(x)
    solution = DiscreteField(mesh, bases, coeffs)

    if config.emit_vtk:
        field_to_vtk(outdir / "solution.vtk", solution, curve)
    if config.emit_matrix:
        dump_matrix_market(system, outdir / "matrix.mtx")
    _write_log(
        outdir,
        "solve.log",
        [
            "# solve run",
            serialize_config(config).rstrip(),
            f"free_dofs = {system.dofmap.num_free}",
            f"method = {report.method}",
            f"iterations = {report.iterations}",
            f"rel_residual = {report.rel_residual:.6e}",
            f"wall_time = {report.wall_time:.3f}",
            f"max_abs_coefficient = {np.abs(coeffs).max():.6e}",
            f"shape_ratio_max = {validation.shape_ratio_max:.6f}",
            f"quasi_uniformity = {validation.quasi_uniformity:.6f}",
        ],
    )
    print(f"solved n={config.n} ({system.dofmap.num_free} free DOFs), "
          f"residual {report.rel_residual:.2e}, output in {outdir}")
    return 0


def cmd_convergence(config: RunConfig) -> int:
    """Run the refinement study and write the CSV error/EOC table."""
    outdir = Path(config.output)
    outdir.mkdir(parents=True, exist_ok=True)
    try:
        report = run_convergence_study(
            config.levels,
            case=config.source_kind,
            b=config.b,
            delta=config.delta,
            rect=config.curve_rect,
            density=density_from_spec(config.source_ftilde),
        )
    except LevelMismatch as exc:
        print(f"error: invalid levels: {exc}", file=sys.stderr)
        return 2
    except (AlignmentError, GeometryError) as exc:
        print(f"error: curve alignment failed: {exc}", file=sys.stderr)
        return 3
    except (NotConverged, NotSPD) as exc:
        print(f"error: solver failed: {exc}", file=sys.stderr)
        return 4

    csv_text = report.to_csv()
    if config.emit_csv:
        (outdir / "convergence.csv").write_text(csv_text)
    header = f"{'n':>4} {'h':>12} " + " ".join(f"{k:>12}" for k in report.ERROR_KEYS)
    print(header)
    for row, eoc in zip(report.rows, report.eocs()):
        print(
            f"{row.n:>4} {row.h:>12.4e} "
            + " ".join(f"{row.errors[k]:>12.4e}" for k in report.ERROR_KEYS)
        )
        if not np.isnan(eoc["l2"]):
            print(
                f"{'eoc':>4} {'':>12} "
                + " ".join(f"{eoc[k]:>12.3f}" for k in report.ERROR_KEYS)
            )
    _write_log(
        outdir,
        "convergence.log",
        ["# convergence run", serialize_config(config).rstrip(), csv_text.rstrip()],
    )
    return 0


def _check_unisolvency(config: RunConfig):
    rng = np.random.default_rng(config.seed)
    worst = 0.0
    for _ in range(100):
        defect, _ = unisolvency_deviation(random_shape_regular_triangle(rng))
        worst = max(worst, defect)
    for n in (4, 8):
        mesh = build_unit_square_mesh(n)
        for t in range(mesh.num_triangles):
            defect, _ = unisolvency_deviation(mesh.triangle_vertices(t))
            worst = max(worst, defect)
    return worst <= 1e-9, f"max duality defect {worst:.3e}"


def _check_quadrature():
    worst = 0.0
    rule = triangle_rule(14)
    for p in range(15):
        for q in range(15 - p):
            exact = triangle_monomial_integral(p, q)
            approx = float(rule.weights @ (rule.points[:, 0] ** p * rule.points[:, 1] ** q))
            worst = max(worst, abs(approx - exact) / abs(exact))
    seg = segment_rule(7)
    for p in range(8):
        approx = float(seg.weights @ seg.points ** p)
        worst = max(worst, abs(approx - 1.0 / (p + 1)) * (p + 1))
    return worst <= 1e-12, f"max relative quadrature error {worst:.3e}"


def _check_spd(system, rng):
    A = system.matrix
    sym = abs(A - A.T).max() / abs(A).max()
    positive = True
    for _ in range(100):
        x = rng.standard_normal(A.shape[0])
        if float(x @ (A @ x)) <= 0.0:
            positive = False
    ok = sym <= 1e-12 and positive
    return ok, f"symmetry defect {sym:.3e}, quadratic form positive: {positive}"


def _check_patch_decay(config: RunConfig):
    _, _, ueval = manufactured_case(config.b)

    def psi(points):
        return np.cos(np.pi * points[:, 0]) * np.cos(np.pi * points[:, 1])

    def psi_one(points):
        return np.ones(len(points))

    alphas = [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]
    values = {}
    for n in (8, 16):
        mesh = build_unit_square_mesh(n)
        bases = build_all_bases(mesh)
        v = interpolate(mesh, bases, [ueval])
        values[n] = {a: abs(patch_test(mesh, bases, psi, v, a, 0)) for a in alphas}
        const_val = max(
            abs(patch_test(mesh, bases, psi_one, v, a, 0)) for a in alphas
        )
    floor = 1e-12
    decay_ok = all(
        values[16][a] <= max(values[8][a] / 1.5, floor) for a in alphas
    )
    ok = decay_ok and const_val <= 1e-9
    return ok, (
        f"decay ok: {decay_ok}, psi=1 functional {const_val:.3e}, "
        f"worst level-16 value {max(values[16].values()):.3e}"
    )


def cmd_check(config: RunConfig) -> int:
    """Self-diagnostics: element, quadrature, assembly, and consistency checks."""
    mesh = build_unit_square_mesh(config.n)
    normals = edge_normals(mesh)
    bases = build_all_bases(mesh, normals)
    if _FAULT_FLIP_EDGE is not None:
        e = int(_FAULT_FLIP_EDGE)
        t = int(mesh.edge_tris[e][0])
        local = list(mesh.tri_edges[t]).index(e)
        flipped = normals[mesh.tri_edges[t]].copy()
        flipped[local] *= -1.0
        frame = make_frame(mesh.triangle_vertices(t), flipped)
        bases[t] = build_nodal_basis(mesh, t, frame=frame)
    dofmap = build_dofmap(mesh)
    rng = np.random.default_rng(config.seed)

    results = []
    ok, detail = _check_unisolvency(config)
    results.append(("unisolvency", ok, detail))

    ok, detail = _check_quadrature()
    results.append(("quadrature-exactness", ok, detail))

    trace = c0_trace_check(mesh, bases, dofmap)
    results.append(("c0-trace", trace <= 1e-9, f"max trace jump {trace:.3e}"))

    weak = weak_continuity_check(mesh, bases, dofmap)
    results.append(
        (
            "weak-continuity",
            weak.max_violation <= 1e-9,
            f"max moment mismatch {weak.max_violation:.3e} (edge {weak.worst_edge})",
        )
    )

    system = assemble_stiffness(mesh, bases, config.b)
    ok, detail = _check_spd(system, rng)
    results.append(("spd", ok, detail))

    ratio = poincare_ratio(mesh, bases, dofmap, seed=config.seed)
    results.append(
        ("poincare-ratio", np.isfinite(ratio) and ratio < 10.0, f"max ratio {ratio:.4f}")
    )

    ok, detail = _check_patch_decay(config)
    results.append(("patch-test-decay", ok, detail))

    failed = 0
    for name, ok, detail in results:
        status = "PASS" if ok else "FAIL"
        failed += 0 if ok else 1
        print(f"{status} {name}: {detail}")
    if failed:
        print(f"{failed} check(s) failed", file=sys.stderr)
        return 1
    print("all checks passed")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="trihelm",
        description="Nonconforming FEM solver for the vector tri-Helmholtz equation",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, doc in (
        ("solve", "solve one problem and write field output"),
        ("convergence", "run a refinement study and write the error CSV"),
        ("check", "run self-diagnostics"),
    ):
        p = sub.add_parser(name, help=doc)
        p.add_argument("--config", help="path to a key=value config file")
        p.add_argument(
            "--set",
            dest="overrides",
            action="append",
            default=[],
            metavar="key=value",
            help="override one config key (repeatable)",
        )
        p.add_argument("--output", help="output directory (overrides config)")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.config:
            path = Path(args.config)
            if not path.is_file():
                raise ConfigError(f"config file not found: {path}")
            config = parse_config(path.read_text())
        else:
            config = RunConfig()
        for override in args.overrides:
            if "=" not in override:
                raise ConfigError(f"--set expects key=value, got {override!r}")
            key, value = override.split("=", 1)
            config = apply_setting(config, key.strip(), value)
        if args.output:
            config = replace(config, output=args.output)
        config = validate_config(config)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    try:
        if args.command == "solve":
            return cmd_solve(config)
        if args.command == "convergence":
            return cmd_convergence(config)
        return cmd_check(config)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (AlignmentError, GeometryError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (NotConverged, NotSPD) as exc:
        print(f"error: solver failed: {exc}", file=sys.stderr)
        return 4
    except TrihelmError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
