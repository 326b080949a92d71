"""Command-line interface: ``plotkit conv`` and ``plotkit field``."""

from __future__ import annotations

import argparse
import sys

from .csvio import MissingColumn, read_convergence_csv
from .plots import plot_convergence, plot_field
from .vtkio import VtkParseError, read_vtk


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plotkit",
        description="Plot trihelm convergence CSVs and VTK solution fields.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    conv = sub.add_parser("conv", help="log-log convergence plot from a CSV")
    conv.add_argument("csv", help="convergence CSV path")
    conv.add_argument("--out", required=True, help="output image path")
    conv.add_argument(
        "--cols", nargs="+", default=None,
        help="error columns to plot (default: all err_* columns)",
    )

    field = sub.add_parser("field", help="heatmap of a solution component")
    field.add_argument("vtk", help="legacy ASCII VTK path")
    field.add_argument(
        "--component", type=int, choices=(0, 1), required=True,
        help="solution component to plot",
    )
    field.add_argument("--out", required=True, help="output image path")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "conv":
            table = read_convergence_csv(args.csv)
            slopes = plot_convergence(table, args.out, cols=args.cols)
            for name, slope in slopes.items():
                print(f"{name}: slope {slope:.4f}")
        else:
            grid = read_vtk(args.vtk)
            info = plot_field(grid, args.component, args.out)
            print(
                f"u{args.component}: range [{info['vmin']:.6e}, {info['vmax']:.6e}]"
            )
        print(f"wrote {args.out}")
    except MissingColumn as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except VtkParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (OSError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
