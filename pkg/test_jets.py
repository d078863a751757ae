#!/usr/bin/env python3
"""
Test truncated Taylor/Laurent jets and the derivatives read from them
"""

import math
import sys

import numpy as np
import pytest

from modules.errors import EssentialSingularityError, UsageError, ZeroDivisorError
from modules.expressions import evaluate, multiply_by_power, parse
from modules.jets import derivative, derivatives, jet_of


def test_exp_jet():
    jet = jet_of("exp(z)", 0, 3)
    assert jet.min_exponent == 0
    np.testing.assert_allclose(jet.coefficients, [1, 1, 1 / 2, 1 / 6], rtol=1e-15)


def test_simple_pole_jet():
    jet = jet_of("1/z", 0, 1)
    assert jet.min_exponent == -1
    assert jet.pole_order == 1
    np.testing.assert_allclose(jet.coefficients, [1, 0, 0], atol=1e-15)


def test_double_pole_order():
    assert jet_of("1/((z-1)^2*(z+2))", 1, 0).min_exponent == -2


def test_removable_singularity_is_regular():
    jet = jet_of("(z-1)*(1/(z-1))", 1, 2)
    assert jet.regular
    np.testing.assert_allclose(jet.coefficients, [1, 0, 0], atol=1e-14)


def test_multiply_by_power_cancels_poles():
    jet = jet_of(multiply_by_power(parse("1/(z-1)"), 1, 1), 1, 2)
    assert jet.regular
    assert abs(jet.coefficient(0) - 1) < 1e-14
    assert jet_of(multiply_by_power(parse("1/((z-1)^2)"), 1, 1), 1, 2).min_exponent == -1


def test_derivatives():
    assert abs(derivative("sin(z)", 0, 3) + 1) < 1e-14
    assert abs(derivative("z^2", 1, 1) - 2) < 1e-14
    # exp(z)/(1-z) has Taylor coefficients sum_{k<=n} 1/k!
    assert abs(derivative("exp(z)/(1-z)", 0, 4) - 65) < 1e-11
    values = derivatives("exp(2*z)", 0, 5)
    np.testing.assert_allclose(values, [2.0 ** k for k in range(6)], rtol=1e-14)


def test_first_derivative_matches_central_difference():
    h = 1e-5
    for text, z0 in (("exp(z)/(z+1)", 0.5), ("1/(1+z^2)", 0.3 + 0.2j), ("sin(z)*cos(z)", 1.0)):
        expr = parse(text)
        estimate = (evaluate(expr, z0 + h) - evaluate(expr, z0 - h)) / (2 * h)
        assert abs(derivative(expr, z0, 1) - estimate) < 1e-8, text


def test_truncation_is_exact():
    long = jet_of("exp(z)/(z+3)", 0.5, 10)
    short = jet_of("exp(z)/(z+3)", 0.5, 4)
    np.testing.assert_array_equal(long.truncate(4).coefficients, short.coefficients)


def test_product_of_jets():
    a = jet_of("exp(z)", 0.2, 10)
    b = jet_of("1/(z-2)", 0.2, 10)
    product = jet_of("exp(z)/(z-2)", 0.2, 10)
    np.testing.assert_allclose((a * b).coefficients, product.coefficients, rtol=1e-13, atol=1e-15)


def test_jet_evaluate_matches_function():
    jet = jet_of("exp(z)", 0, 30)
    assert abs(jet.evaluate(0.5) - math.exp(0.5)) < 1e-15


def test_jet_errors():
    with pytest.raises(EssentialSingularityError):
        jet_of("exp(1/z)", 0, 2)
    with pytest.raises(ZeroDivisorError):
        jet_of("1/(z-z)", 0, 2)
    with pytest.raises(UsageError):
        jet_of("z", 0, -1)


if __name__ == "__main__":
    from modules.console import run_test_functions
    sys.exit(run_test_functions(dict(globals())))
