#!/usr/bin/env python3
"""
Test two-point Laurent and Taylor-Laurent expansions and regularization
"""

import math
import sys

import numpy as np
import pytest

from modules.errors import PoleAtExpansionPointError, PoleSpecError
from modules.expressions import FunctionModel
from modules.jets import jet_of
from modules.two_point_laurent import (
    PoleSpec,
    coeff_b,
    coeff_c,
    coeff_d,
    coeff_e,
    evaluate_laurent,
    evaluate_tl,
    laurent_expand,
    pochhammer,
    regularize,
    remainder_laurent,
    remainder_tl,
    taylor_laurent_expand,
)
from modules.two_point_taylor import coeff_a, evaluate, expand


def _model(text):
    return FunctionModel.from_text(text)


def _sample_points(rng, count, avoid, radius=2.0):
    points = []
    while len(points) < count:
        z = complex(rng.uniform(-radius, radius), rng.uniform(-radius, radius))
        if all(abs(z - a) > 0.1 for a in avoid):
            points.append(z)
    return np.array(points)


def test_pochhammer():
    assert pochhammer(3, 2) == 12
    assert pochhammer(5, 0) == 1
    assert pochhammer(0, 3) == 0


def test_simple_poles_at_both_points():
    f = _model("1/((z+1)*(z-1))")
    spec = PoleSpec(1, 1)
    assert abs(coeff_c(f, -1, 1, spec, 0) - 0.5) < 1e-15
    assert abs(coeff_c(f, 1, -1, spec.mirrored(), 0) + 0.5) < 1e-15
    for n in range(6):
        assert abs(coeff_b(f, -1, 1, spec, n)) < 1e-12
        assert abs(coeff_b(f, 1, -1, spec, n)) < 1e-12
    for n in range(1, 4):
        assert coeff_c(f, -1, 1, spec, n) == 0


def test_partial_sum_reproduces_rational():
    f = _model("1/((z+1)*(z-1))")
    e = laurent_expand(f, -1, 1, None, 3)
    zs = _sample_points(np.random.default_rng(1), 50, (-1, 1))
    np.testing.assert_allclose(evaluate_laurent(e, zs), f.evaluate(zs), rtol=1e-13)


def test_higher_order_pole_rational_is_exact():
    # (z+3)/((z+1)^2 (z-1)) is a pure singular part for m1=2, m2=1
    f = _model("(z+3)/((z+1)^2*(z-1))")
    e = laurent_expand(f, -1, 1, None, 2)
    assert e.spec == PoleSpec(2, 1)
    for fwd, rev in e.b_pairs:
        assert abs(fwd) < 1e-12 and abs(rev) < 1e-12
    zs = _sample_points(np.random.default_rng(2), 30, (-1, 1))
    np.testing.assert_allclose(evaluate_laurent(e, zs), f.evaluate(zs), rtol=1e-12)


def test_entire_function_has_no_singular_part():
    e = laurent_expand(_model("exp(z)"), -1, 1, PoleSpec(0, 0), 4)
    assert all(fwd == 0 and rev == 0 for fwd, rev in e.c_pairs)
    taylor = expand(_model("exp(z)"), -1, 1, 4)
    for (b1, b2), (a1, a2) in zip(e.b_pairs, taylor.pairs):
        assert abs(b1 - a1) < 1e-14 and abs(b2 - a2) < 1e-14


def test_exp_over_quadratic_converges():
    f = _model("exp(z)/(z^2-1)")
    e = laurent_expand(f, -1, 1, None, 12)
    for z in (math.sqrt(2), math.sqrt(5), 1j * math.sqrt(3)):
        assert abs(evaluate_laurent(e, z) - f.evaluate(z)) <= 1e-9 * abs(f.evaluate(z))


def test_annulus_convergence_and_divergence():
    f = _model("1/((z^2-1)*(z^2-4))")
    inside = math.sqrt(2.5)
    err_10 = abs(remainder_laurent(f, laurent_expand(f, -1, 1, None, 10), inside))
    err_30 = abs(remainder_laurent(f, laurent_expand(f, -1, 1, None, 30), inside))
    assert err_30 < 1e-6
    assert err_30 < err_10
    outside = math.sqrt(5)
    s_20 = evaluate_laurent(laurent_expand(f, -1, 1, None, 20), outside)
    s_40 = evaluate_laurent(laurent_expand(f, -1, 1, None, 40), outside)
    assert abs(s_40) > abs(s_20)


def test_pole_spec_too_small():
    with pytest.raises(PoleSpecError):
        laurent_expand(_model("1/(z+1)^2"), -1, 1, PoleSpec(1, 0), 3)
    with pytest.raises(PoleSpecError):
        PoleSpec(-1, 0)


def test_taylor_laurent_simple_pole():
    f = _model("1/(z+1)")
    fwd, rev = coeff_d(f, -1, 1, 1, 0)
    assert abs(fwd) < 1e-15 and abs(rev) < 1e-15
    assert abs(coeff_e(f, -1, 1, 1, 0) - 1) < 1e-15
    assert coeff_e(f, -1, 1, 1, 1) == 0
    e = taylor_laurent_expand(f, -1, 1, None, 2)
    for z in (0.5, 2j, -3.0):
        assert abs(evaluate_tl(e, z) - f.evaluate(z)) < 1e-14


def test_taylor_laurent_converges_for_exp_over_pole():
    f = _model("exp(z)/(z+1)")
    e = taylor_laurent_expand(f, -1, 1, None, 15)
    for z in (0.5, 0.5j, -0.3 + 0.4j, 1.2):
        assert abs(evaluate_tl(e, z) - f.evaluate(z)) <= 1e-9 * abs(f.evaluate(z))


def test_taylor_laurent_reduces_to_taylor():
    f = _model("exp(z)")
    for n in range(6):
        fwd, rev = coeff_d(f, -1, 1, 0, n)
        a_fwd = coeff_a(f, -1, 1, n)
        a_rev = coeff_a(f, 1, -1, n)
        assert abs(fwd - a_fwd) <= 1e-13 * max(1.0, abs(a_fwd))
        assert abs(rev - a_rev) <= 1e-13 * max(1.0, abs(a_rev))


def test_taylor_laurent_matches_laurent_for_simple_pole():
    f = _model("exp(z)/(z+1)")
    tl = taylor_laurent_expand(f, -1, 1, 1, 6)
    laurent = laurent_expand(f, -1, 1, PoleSpec(1, 0), 6)
    for (d1, d2), (b1, b2) in zip(tl.d_pairs, laurent.b_pairs):
        assert abs(d1 - b1) <= 1e-12 * max(1.0, abs(b1))
        assert abs(d2 - b2) <= 1e-12 * max(1.0, abs(b2))
    c_fwd, c_rev = laurent.c_pairs[0]
    assert abs(c_fwd) < 1e-15
    assert abs(c_rev - tl.e_terms[0]) < 1e-14


def test_taylor_laurent_needs_regular_second_point():
    with pytest.raises(PoleAtExpansionPointError):
        taylor_laurent_expand(_model("1/((z+1)*(z-1))"), -1, 1, None, 3)


def test_regularize_laurent_leaves_nothing():
    f = _model("1/((z+1)*(z-1))")
    g = regularize(f, -1, 1)
    for z in (0.3, 2.0, 0.5j):
        assert abs(g.evaluate(z)) < 1e-13


def test_regularize_taylor_laurent():
    f = _model("1/(z+1)^2")
    g = regularize(f, -1, 1, 2, family='taylor-laurent')
    assert jet_of(g.expr, -1, 0).regular

    f = _model("exp(z)/(z+1)")
    g = regularize(f, -1, 1, family='taylor-laurent')
    assert g.entire
    e = expand(g, -1, 1, 20)
    assert abs(evaluate(e, 0) - g.evaluate(0)) < 1e-10
    assert abs(g.evaluate(0) - (1 - math.exp(-1))) < 1e-14


def test_taylor_laurent_decay_rate_matches_cassini_ratio():
    # the pole at 3 bounds the oval at |(z+1)(z-1)| = 8
    f = _model("1/((z+1)*(z-3))")
    orders = np.arange(4, 17)
    expansions = [taylor_laurent_expand(f, -1, 1, None, int(N)) for N in orders]
    for rho in (2.0, 4.0, 6.0):
        z = math.sqrt(1 + rho)
        logs = [math.log(abs(remainder_tl(f, e, z))) for e in expansions]
        slope = np.polyfit(orders, logs, 1)[0]
        expected = math.log(rho / 8)
        assert abs(slope - expected) <= 0.1 * abs(expected)


if __name__ == "__main__":
    from modules.console import run_test_functions
    sys.exit(run_test_functions(dict(globals())))
