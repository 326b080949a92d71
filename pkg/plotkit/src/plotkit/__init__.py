"""Plotting companion for trihelm output files.

Consumes only the documented on-disk formats: the convergence CSV schema
and legacy ASCII VTK solution files.
"""

from .csvio import ConvergenceTable, MissingColumn, read_convergence_csv
from .plots import least_squares_slope, plot_convergence, plot_field
from .vtkio import VtkGrid, VtkParseError, read_vtk

__all__ = [
    "ConvergenceTable",
    "MissingColumn",
    "read_convergence_csv",
    "VtkGrid",
    "VtkParseError",
    "read_vtk",
    "least_squares_slope",
    "plot_convergence",
    "plot_field",
]

__version__ = "0.1.0"
