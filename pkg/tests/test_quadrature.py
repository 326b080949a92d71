"""Quadrature rules against closed-form monomial integrals."""

import numpy as np
import pytest

from trihelm.errors import UnsupportedDegree
from trihelm.quadrature import (
    duffy_rule,
    segment_rule,
    triangle_monomial_integral,
    triangle_rule,
)


REF_VERTS = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])


def triangle_integrate(rule, p, q):
    xy = rule.points @ REF_VERTS  # barycentric -> reference coordinates
    return float(rule.weights @ (xy[:, 0] ** p * xy[:, 1] ** q))


def test_triangle_weights_positive_and_sum_to_area():
    for deg in (2, 7, 14):
        rule = triangle_rule(deg)
        assert np.all(rule.weights > 0)
        assert abs(rule.weights.sum() - 0.5) < 1e-14


def test_segment_weights_sum_to_one():
    for deg in (0, 3, 7):
        rule = segment_rule(deg)
        assert abs(rule.weights.sum() - 1.0) < 1e-14
        assert np.all((rule.points > 0) & (rule.points < 1))


def test_triangle_constant():
    assert abs(triangle_integrate(triangle_rule(2), 0, 0) - 0.5) < 1e-15


def test_triangle_x10_y4_oracle():
    import math

    exact = math.factorial(10) * math.factorial(4) / math.factorial(16)
    assert triangle_monomial_integral(10, 4) == pytest.approx(exact, rel=1e-15)
    approx = triangle_integrate(triangle_rule(14), 10, 4)
    assert approx == pytest.approx(exact, rel=1e-12)


def test_triangle_x7_y7_degree_14():
    exact = triangle_monomial_integral(7, 7)
    assert triangle_integrate(triangle_rule(14), 7, 7) == pytest.approx(exact, rel=1e-12)


def test_triangle_exactness_sweep_to_degree_14():
    rule = triangle_rule(14)
    worst = 0.0
    for p in range(15):
        for q in range(15 - p):
            exact = triangle_monomial_integral(p, q)
            worst = max(worst, abs(triangle_integrate(rule, p, q) - exact) / exact)
    assert worst <= 1e-12


def test_triangle_rule_rejects_high_degree():
    with pytest.raises(UnsupportedDegree):
        triangle_rule(15)


def test_duffy_rule_handles_degree_20():
    rule = duffy_rule(20)
    exact = triangle_monomial_integral(12, 8)
    assert triangle_integrate(rule, 12, 8) == pytest.approx(exact, rel=1e-12)


def test_segment_four_point_exact_on_x7():
    rule = segment_rule(7)
    assert len(rule.points) == 4
    assert float(rule.weights @ rule.points ** 7) == pytest.approx(1.0 / 8.0, abs=1e-14)


def test_segment_one_point_exact_on_constants():
    rule = segment_rule(0)
    assert float(rule.weights @ np.ones_like(rule.points)) == pytest.approx(1.0)


def test_segment_four_point_not_exact_on_x8():
    # Negative control: a 4-point Gauss rule is exact only to degree 7.
    rule = segment_rule(7)
    err = abs(float(rule.weights @ rule.points ** 8) - 1.0 / 9.0)
    assert err > 1e-12


def test_segment_exactness_sweep_to_degree_7():
    rule = segment_rule(7)
    worst = 0.0
    for p in range(8):
        approx = float(rule.weights @ rule.points ** p)
        worst = max(worst, abs(approx - 1.0 / (p + 1)) * (p + 1))
    assert worst <= 1e-12
