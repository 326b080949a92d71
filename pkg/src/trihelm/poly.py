"""Dense bivariate polynomials with exact coefficient arithmetic.

Coefficients are stored as a 2D array ``c`` with ``c[i, j]`` multiplying
``x**i * y**j``.  Used both for local shape-function algebra and for
manufactured-solution calculus.
"""

from __future__ import annotations

import numpy as np


def poly_eval(c: np.ndarray, x, y) -> np.ndarray:
    """Evaluate a coefficient grid at points (vectorized over x, y)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    px = np.power.outer(x, np.arange(c.shape[0]))
    py = np.power.outer(y, np.arange(c.shape[1]))
    return np.einsum("...a,...b,ab->...", px, py, c)


def poly_diff(c: np.ndarray, dx: int, dy: int) -> np.ndarray:
    """Differentiate the coefficient grid dx times in x, dy times in y."""
    out = c
    for _ in range(dx):
        if out.shape[0] == 1:
            return np.zeros((1, 1))
        out = out[1:, :] * np.arange(1, out.shape[0])[:, None]
    for _ in range(dy):
        if out.shape[1] == 1:
            return np.zeros((1, 1))
        out = out[:, 1:] * np.arange(1, out.shape[1])[None, :]
    return out


def poly_mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    out = np.zeros((a.shape[0] + b.shape[0] - 1, a.shape[1] + b.shape[1] - 1))
    for i in range(a.shape[0]):
        for j in range(a.shape[1]):
            if a[i, j] != 0.0:
                out[i : i + b.shape[0], j : j + b.shape[1]] += a[i, j] * b
    return out


def poly_pad(c: np.ndarray, nx: int, ny: int) -> np.ndarray:
    out = np.zeros((nx, ny))
    out[: c.shape[0], : c.shape[1]] = c
    return out


class Polynomial2D:
    """Bivariate polynomial Σ c[p, q] x^p y^q."""

    def __init__(self, coeffs):
        c = np.atleast_2d(np.asarray(coeffs, dtype=float))
        self.coeffs = c

    @classmethod
    def zero(cls) -> "Polynomial2D":
        return cls([[0.0]])

    @classmethod
    def monomial(cls, p: int, q: int, coeff: float = 1.0) -> "Polynomial2D":
        c = np.zeros((p + 1, q + 1))
        c[p, q] = coeff
        return cls(c)

    @property
    def degree(self) -> int:
        nz = np.argwhere(self.coeffs != 0.0)
        if nz.size == 0:
            return 0
        return int((nz[:, 0] + nz[:, 1]).max())

    def __add__(self, other: "Polynomial2D") -> "Polynomial2D":
        nx = max(self.coeffs.shape[0], other.coeffs.shape[0])
        ny = max(self.coeffs.shape[1], other.coeffs.shape[1])
        return Polynomial2D(poly_pad(self.coeffs, nx, ny) + poly_pad(other.coeffs, nx, ny))

    def __sub__(self, other: "Polynomial2D") -> "Polynomial2D":
        return self + (other * -1.0)

    def __mul__(self, other):
        if isinstance(other, Polynomial2D):
            return Polynomial2D(poly_mul(self.coeffs, other.coeffs))
        return Polynomial2D(self.coeffs * float(other))

    __rmul__ = __mul__

    def diff(self, dx: int, dy: int) -> "Polynomial2D":
        return Polynomial2D(poly_diff(self.coeffs, dx, dy))

    def laplacian(self) -> "Polynomial2D":
        return self.diff(2, 0) + self.diff(0, 2)

    def __call__(self, x, y):
        return poly_eval(self.coeffs, x, y)
