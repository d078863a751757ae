#!/usr/bin/env python3
"""
Test the contour-integral oracle against the explicit coefficient formulas
"""

import cmath
import math
import sys

import numpy as np
import pytest

from modules.contour_oracle import (
    Contour,
    build_contour,
    cauchy,
    enclosed_poles,
    integrate,
    laurent_with_inner_poles,
    oracle_a,
    oracle_AB,
    oracle_b,
    oracle_c,
    oracle_d,
    oracle_e,
    oracle_remainder,
    taylor_laurent_with_inner_poles,
    winding_number,
)
from modules.errors import NoValidContourError, PoleAtExpansionPointError, PoleSpecError, UsageError
from modules.expressions import FunctionModel
from modules.two_point_laurent import evaluate_laurent, laurent_expand, taylor_laurent_expand
from modules.two_point_taylor import evaluate, expand, to_ab
from modules.verification import agrees


def _model(text):
    return FunctionModel.from_text(text)


def test_basic_integrals():
    unit = Contour.circle(0, 1)
    assert abs(integrate(lambda w: 1 / w, unit) - 2j * math.pi) < 1e-13
    assert abs(integrate(lambda w: w, unit)) < 1e-13
    assert abs(cauchy(lambda w: np.exp(w) / w ** 2, unit) - 1) < 1e-13


def test_contour_independence():
    fn = lambda w: np.exp(w) / (w * (w - 1))
    small = cauchy(fn, Contour.circle(0, 1.5))
    large = cauchy(fn, Contour.circle(0, 2.5))
    assert abs(small - large) < 1e-11
    assert abs(small - (math.e - 1)) < 1e-11


def test_single_circle_when_poles_are_far():
    contour = build_contour([-1, 1], [3j, -3j])
    assert contour.kind == 'single-circle'
    assert abs(winding_number(contour, 0.5) - 1) < 1e-8
    assert abs(winding_number(contour, 3j)) < 1e-8


def test_two_circles_when_poles_separate_the_points():
    contour = build_contour([-1, 1], [1j, -1j])
    assert contour.kind == 'two-circles'
    for p in (-1, 1):
        assert abs(winding_number(contour, p) - 1) < 1e-8
    for q in (1j, -1j, 0):
        assert abs(winding_number(contour, q)) < 1e-8


def test_no_valid_contour():
    with pytest.raises(NoValidContourError):
        build_contour([0], [0])
    with pytest.raises(UsageError):
        build_contour([], [1])


def test_taylor_coefficients_match_oracle():
    f = _model("exp(z)")
    assert abs(oracle_a(f, 0, 1, 0) - math.e) < 1e-11 * math.e
    e = expand(f, -1, 1, 9)
    for n, (fwd, rev) in enumerate(e.pairs):
        assert agrees(fwd, oracle_a(f, -1, 1, n), 1e-10), n
        assert agrees(rev, oracle_a(f, 1, -1, n), 1e-10), n


def test_taylor_coefficients_with_poles_between_points():
    f = _model("1/(1+z^2)")
    e = expand(f, -1, 1, 9)
    for n, (fwd, rev) in enumerate(e.pairs):
        assert agrees(fwd, oracle_a(f, -1, 1, n), 1e-10), n
        assert agrees(rev, oracle_a(f, 1, -1, n), 1e-10), n


def test_ab_coefficients_match_oracle():
    f = _model("exp(z)/(z-3)")
    ab = to_ab(expand(f, -1, 1, 6))
    for n, (A, B) in enumerate(ab.terms):
        oracle_A, oracle_B = oracle_AB(f, -1, 1, n)
        assert agrees(A, oracle_A, 1e-10), n
        assert agrees(B, oracle_B, 1e-10), n


def test_laurent_coefficients_match_oracle():
    f = _model("1/((z+1)*(z-1))")
    assert abs(oracle_c(f, -1, 1, 0) - 0.5) < 1e-12
    g = _model("exp(z)/((z+1)^2*(z-1))")
    e = laurent_expand(g, -1, 1, None, 7)
    for n, (fwd, rev) in enumerate(e.b_pairs):
        assert agrees(fwd, oracle_b(g, -1, 1, n), 1e-10), n
        assert agrees(rev, oracle_b(g, 1, -1, n), 1e-10), n
    for n, (fwd, rev) in enumerate(e.c_pairs[:e.spec.M]):
        assert agrees(fwd, oracle_c(g, -1, 1, n), 1e-10), n
        assert agrees(rev, oracle_c(g, 1, -1, n), 1e-10), n


def test_taylor_laurent_coefficients_match_oracle():
    f = _model("exp(z)/(z+1)")
    e = taylor_laurent_expand(f, -1, 1, None, 7)
    assert abs(oracle_e(f, -1, 1, 0) - math.exp(-1)) < 1e-12
    for n, (fwd, rev) in enumerate(e.d_pairs):
        assert agrees(fwd, oracle_d(f, -1, 1, n), 1e-10), n
        assert agrees(rev, oracle_d(f, 1, -1, n), 1e-10), n
    assert agrees(e.e_terms[0], oracle_e(f, -1, 1, 0), 1e-10)


def test_oracle_refuses_pole_at_expansion_point():
    with pytest.raises(PoleAtExpansionPointError):
        oracle_a(_model("1/z"), 0, 1, 0)


def test_taylor_remainder():
    f = _model("exp(z)")
    z = 0.3
    for N in (2, 5, 10):
        value = oracle_remainder('taylor', f, -1, 1, N, z)
        direct = cmath.exp(z) - evaluate(expand(f, -1, 1, N), z)
        assert abs(value - direct) < 1e-9


def test_laurent_and_taylor_laurent_remainders():
    # oracle_remainder raises OracleMismatchError if the cross-check fails
    f = _model("1/((z^2-1)*(z^2-4))")
    for N in (2, 5):
        oracle_remainder('laurent', f, -1, 1, N, 1.5 + 0.2j)
    g = _model("exp(z)/(z+1)")
    for N in (2, 5):
        oracle_remainder('taylor-laurent', g, -1, 1, N, 0.4 - 0.3j)


def test_unknown_remainder_kind():
    with pytest.raises(UsageError):
        oracle_remainder('fourier', _model("exp(z)"), -1, 1, 3, 0.2)


def test_laurent_with_enclosed_pole_converges():
    f = _model("1/(z*(z^2-4))")
    e = laurent_with_inner_poles(f, -1, 1, None, 24, [0])
    for z in (1.6, -1.6, 1.5 + 0.3j):
        assert abs(evaluate_laurent(e, z) - f.evaluate(z)) <= 1e-3 * abs(f.evaluate(z))
    # the singular part of the pole at 0 does not terminate
    assert all(abs(fwd) + abs(rev) > 1e-3 for fwd, rev in e.c_pairs[2:])


def test_laurent_without_extra_poles_uses_closed_forms():
    f = _model("1/((z+1)*(z-1)*(z-3))")
    closed = laurent_expand(f, -1, 1, None, 4)
    assert laurent_with_inner_poles(f, -1, 1, None, 4, None) == closed
    assert enclosed_poles(f, -1, 1, [1]) == []


def test_inner_pole_must_be_a_pole():
    with pytest.raises(PoleSpecError):
        laurent_with_inner_poles(_model("1/(z*(z^2-4))"), -1, 1, None, 4, [0.5])


def test_taylor_laurent_with_enclosed_pole():
    f = _model("1/(z*(z+1)*(z-3))")
    e = taylor_laurent_with_inner_poles(f, -1, 1, None, 6, [0])
    assert e.m == 1
    assert abs(e.e_terms[3]) > 1e-6
    for n in range(6):
        assert agrees(e.d_pairs[n][0], oracle_d(f, -1, 1, n, [0]), 1e-12)
    with pytest.raises(PoleAtExpansionPointError):
        taylor_laurent_with_inner_poles(_model("1/(z*(z-1))"), -1, 1, None, 3, [0])


if __name__ == "__main__":
    from modules.console import run_test_functions
    sys.exit(run_test_functions(dict(globals())))
