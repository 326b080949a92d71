"""Exception types shared across the library."""


class TrihelmError(Exception):
    """Base class for all library errors."""


class AlignmentError(TrihelmError):
    """Curve geometry is not aligned with the mesh skeleton."""


class GeometryError(TrihelmError):
    """Invalid or inconsistent geometric input."""


class DegenerateTriangle(TrihelmError):
    """Triangle with non-positive signed area."""


class UnisolvencyError(TrihelmError):
    """DOF/shape-function system is numerically singular."""


class UnsupportedDegree(TrihelmError):
    """Requested quadrature degree outside the supported range."""


class DimensionMismatch(TrihelmError):
    """Vector length does not match the expected DOF count."""


class NotConverged(TrihelmError):
    """Iterative solver exceeded its iteration cap."""


class NotSPD(TrihelmError):
    """Negative curvature direction encountered; matrix not SPD."""


class ConfigError(TrihelmError):
    """Invalid run configuration."""


class LevelMismatch(TrihelmError):
    """Refinement levels incompatible with the embedded curve."""
