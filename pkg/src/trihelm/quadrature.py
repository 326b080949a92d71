"""Quadrature rules on the reference triangle and the unit segment.

Triangle rules are tensorized Gauss-Legendre rules collapsed onto the
triangle with the Duffy transform, which gives positive weights and
guaranteed polynomial exactness at any degree.  Segment rules are plain
Gauss-Legendre mapped to [0, 1].
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.polynomial.legendre import leggauss

from .errors import UnsupportedDegree

MAX_TRIANGLE_DEGREE = 14
MAX_SEGMENT_DEGREE = 15


@dataclass(frozen=True)
class QuadratureRule:
    """Points/weights with a guaranteed polynomial exactness degree.

    Triangle rules store barycentric points of shape (Q, 3) with weights
    summing to 1/2 (reference triangle measure); segment rules store
    points of shape (Q,) in [0, 1] with weights summing to 1.
    """

    points: np.ndarray
    weights: np.ndarray
    exact_degree: int


def _gauss01(npts: int):
    x, w = leggauss(npts)
    return 0.5 * (x + 1.0), 0.5 * w


def duffy_rule(min_degree: int) -> QuadratureRule:
    """Collapsed-square rule on the reference triangle, any degree.

    Under x = u(1-v), y = uv the integrand of a degree-d polynomial has
    degree d+1 in u and d in v, so n = ceil((d+2)/2) Gauss points per
    direction integrate degree 2n-2 exactly.
    """
    n = (min_degree + 3) // 2
    u, wu = _gauss01(n)
    v, wv = _gauss01(n)
    U, V = np.meshgrid(u, v, indexing="ij")
    WU, WV = np.meshgrid(wu, wv, indexing="ij")
    x = (U * (1.0 - V)).ravel()
    y = (U * V).ravel()
    w = (WU * WV * U).ravel()  # Jacobian of the Duffy map is u
    bary = np.column_stack([1.0 - x - y, x, y])
    return QuadratureRule(points=bary, weights=w, exact_degree=2 * n - 2)


def triangle_rule(min_degree: int) -> QuadratureRule:
    """Positive-weight triangle rule exact at least to ``min_degree``."""
    if min_degree > MAX_TRIANGLE_DEGREE:
        raise UnsupportedDegree(f"triangle rules supported up to degree {MAX_TRIANGLE_DEGREE}")
    return duffy_rule(min_degree)


def segment_rule(min_degree: int) -> QuadratureRule:
    """Gauss-Legendre rule on [0, 1] exact at least to ``min_degree``."""
    if min_degree > MAX_SEGMENT_DEGREE:
        raise UnsupportedDegree(f"segment rules supported up to degree {MAX_SEGMENT_DEGREE}")
    k = (min_degree + 2) // 2
    x, w = _gauss01(k)
    return QuadratureRule(points=x, weights=w, exact_degree=2 * k - 1)


def triangle_monomial_integral(p: int, q: int) -> float:
    """Exact ∫ x^p y^q over the reference triangle: p! q! / (p+q+2)!."""
    from math import factorial

    return factorial(p) * factorial(q) / factorial(p + q + 2)
