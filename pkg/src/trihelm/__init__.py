"""Nonconforming finite elements for the vector tri-Helmholtz equation.

Solves (id - b*Laplacian)^3 u = f componentwise on the unit square with a
15-DOF nonconforming triangular element, for smooth volume sources and for
singular line sources supported on a mesh-aligned embedded closed curve.
"""

from .errors import (
    AlignmentError,
    ConfigError,
    DegenerateTriangle,
    DimensionMismatch,
    GeometryError,
    LevelMismatch,
    NotConverged,
    NotSPD,
    TrihelmError,
    UnisolvencyError,
    UnsupportedDegree,
)

__version__ = "1.0.0"

__all__ = [
    "AlignmentError",
    "ConfigError",
    "DegenerateTriangle",
    "DimensionMismatch",
    "GeometryError",
    "LevelMismatch",
    "NotConverged",
    "NotSPD",
    "TrihelmError",
    "UnisolvencyError",
    "UnsupportedDegree",
    "__version__",
]
