#!/usr/bin/env python3
"""
Test two-point Taylor coefficients, partial sums, the A/B form and its confluent limit
"""

import math
import sys

import numpy as np
import pytest
from numpy.polynomial import polynomial as P

from modules.errors import CoincidentPointsError, PoleAtExpansionPointError, UsageError
from modules.expressions import FunctionModel
from modules.two_point_taylor import (
    ab_confluent,
    ab_evaluate,
    coeff_a,
    evaluate,
    expand,
    hermite_residuals,
    remainder,
    to_ab,
)


def _model(text):
    return FunctionModel.from_text(text)


def test_square_coefficients():
    f = _model("z^2")
    assert abs(coeff_a(f, 0, 1, 0) - 1) < 1e-15
    assert abs(coeff_a(f, 1, 0, 0)) < 1e-15
    assert abs(coeff_a(f, 0, 1, 1) - 1) < 1e-14
    assert abs(coeff_a(f, 1, 0, 1) + 1) < 1e-14
    assert abs(evaluate(expand(f, 0, 1, 1), 0.5) - 0.5) < 1e-15


def test_constant_function():
    e = expand(_model("1"), -1, 1, 1)
    fwd, rev = e.pairs[0]
    assert abs(fwd - 0.5) < 1e-15
    assert abs(rev + 0.5) < 1e-15
    A, B = to_ab(e).terms[0]
    assert abs(A - 1) < 1e-15
    assert abs(B) < 1e-15


def test_ab_form_of_square():
    ab = to_ab(expand(_model("z^2"), 0, 1, 2))
    for (A, B), (A0, B0) in zip(ab.terms, [(0, 1), (1, 0)]):
        assert abs(A - A0) < 1e-14 and abs(B - B0) < 1e-14


def test_interpolates_at_expansion_points():
    f = _model("exp(z)/(z+3)")
    e = expand(f, -1, 1 + 0.5j, 1)
    for point in (-1, 1 + 0.5j):
        assert abs(evaluate(e, point) - f.evaluate(point)) < 1e-14


def test_exp_converges():
    f = _model("exp(z)")
    e = expand(f, -1, 1, 20)
    assert abs(evaluate(e, 0.5) - math.exp(0.5)) < 1e-12


def test_polynomial_reproduced_exactly():
    rng = np.random.default_rng(3)
    coeffs = rng.uniform(-1, 1, 10)
    text = " + ".join(f"({c!r})*z^{k}" for k, c in enumerate(coeffs))
    e = expand(_model(text), -1, 1, 5)
    zs = 10 * rng.uniform(0, 1, 30) * np.exp(2j * np.pi * rng.uniform(0, 1, 30))
    scale = P.polyval(np.abs(zs), np.abs(coeffs))
    error = np.abs(evaluate(e, zs) - P.polyval(zs, coeffs))
    assert np.all(error <= 1e-10 * scale)


def test_symmetry():
    f = _model("exp(z)/(z-3)")
    forward = expand(f, -1, 1, 6)
    backward = expand(f, 1, -1, 6)
    for (a, b), (c, d) in zip(forward.swapped().pairs, backward.pairs):
        assert abs(a - c) < 1e-14 * max(1.0, abs(c))
        assert abs(b - d) < 1e-14 * max(1.0, abs(d))
    for z in (0.2, 0.1 + 0.4j, -0.7j):
        assert abs(evaluate(forward, z) - evaluate(backward, z)) < 1e-12


def test_ab_form_matches_pair_form():
    e = expand(_model("exp(z)"), -1, 1, 8)
    ab = to_ab(e)
    zs = np.array([0.3, -0.5 + 0.2j, 1.2j, 1.1])
    np.testing.assert_allclose(ab_evaluate(ab, zs), evaluate(e, zs), rtol=1e-12)


def test_remainder_order_near_expansion_point():
    f = _model("exp(z)")
    N = 2
    e = expand(f, 0, 1, N)
    r_small = abs(remainder(f, e, 1e-4))
    r_large = abs(remainder(f, e, 1e-2))
    slope = (math.log(r_large) - math.log(r_small)) / (math.log(1e-2) - math.log(1e-4))
    assert slope > N - 0.1


def test_remainder_closed_form_for_rational():
    # for 1/(1+z^2) at -1, 1 the remainder is f(z) ((1 - z^2)/2)^N
    f = _model("1/(1+z^2)")
    for z in (math.sqrt(1.5), 0.5 + 0.5j):
        q = (1 - z * z) / 2
        for N in range(4, 13):
            r = remainder(f, expand(f, -1, 1, N), z)
            exact = f.evaluate(z) * q ** N
            assert abs(r - exact) <= 1e-6 * abs(exact), (z, N)


def test_diverges_outside_oval():
    f = _model("1/(1+z^2)")
    z = 2.0
    assert abs(evaluate(expand(f, -1, 1, 40), z)) > abs(evaluate(expand(f, -1, 1, 20), z))


def test_hermite_residuals():
    assert max(hermite_residuals(_model("exp(z)"), expand(_model("exp(z)"), -1, 1, 5))) < 1e-10
    g = _model("1/(1+z^2)")
    assert max(hermite_residuals(g, expand(g, -0.5, 0.5, 4))) < 1e-9


def test_confluent_limit_from_jets():
    ab = ab_confluent(_model("exp(z)"), 0, 5)
    for n, (A, B) in enumerate(ab.terms):
        assert abs(A - 1 / math.factorial(2 * n)) < 1e-15
        assert abs(B - 1 / math.factorial(2 * n + 1)) < 1e-15
    for A, B in ab_confluent(_model("1/(1-z)"), 0, 4).terms:
        assert abs(A - 1) < 1e-14 and abs(B - 1) < 1e-14


def test_confluent_limit_from_contour():
    f = _model("exp(z)")
    by_jets = ab_confluent(f, 0, 6)
    by_contour = ab_confluent(f, 0, 6, method='contour')
    for (A1, B1), (A2, B2) in zip(by_jets.terms, by_contour.terms):
        assert abs(A1 - A2) <= 1e-10 * abs(A1)
        assert abs(B1 - B2) <= 1e-10 * abs(B1)


def test_errors():
    with pytest.raises(PoleAtExpansionPointError):
        expand(_model("1/z"), 0, 1, 3)
    with pytest.raises(CoincidentPointsError):
        expand(_model("exp(z)"), 1, 1 + 1e-9, 3)
    with pytest.raises(UsageError):
        expand(_model("exp(z)"), -1, 1, 0)


def test_remainder_decay_rate_matches_cassini_ratio():
    f = _model("1/(1+z^2)")
    orders = np.arange(4, 17)
    expansions = [expand(f, -1, 1, int(N)) for N in orders]
    for rho in (0.5, 1.0, 1.5):
        z = math.sqrt(1 + rho)
        logs = [math.log(abs(remainder(f, e, z))) for e in expansions]
        slope = np.polyfit(orders, logs, 1)[0]
        expected = math.log(rho / 2)
        assert abs(slope - expected) <= 0.1 * abs(expected)


if __name__ == "__main__":
    from modules.console import run_test_functions
    sys.exit(run_test_functions(dict(globals())))
