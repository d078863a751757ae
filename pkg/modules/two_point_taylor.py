#!/usr/bin/env python
"""
Two-Point Taylor Expansion Module

This module expands a function analytic at two points z1 != z2 as

    f(z) = sum_n [a_n(z1,z2) (z - z1) + a_n(z2,z1) (z - z2)] ((z - z1)(z - z2))^n

with the coefficients computed from derivatives at both points, the
symmetric A/B form, its confluent limit z1 = z2 = z0, and the Hermite
interpolation residuals of the partial sums.
"""

import logging
from dataclasses import dataclass
from typing import List, Tuple, Union

import numpy as np

from . import settings
from .errors import CoincidentPointsError, PoleAtExpansionPointError, UsageError
from .expressions import VAR, Expr, FunctionModel, add, const, mul, power, sub
from .jets import derivatives, jet_of

logger = logging.getLogger('two_point_taylor')

Number = Union[complex, np.ndarray]


@dataclass(frozen=True)
class TwoPointExpansion:
    """pairs[n] = (a_n(z1,z2), a_n(z2,z1))."""
    z1: complex
    z2: complex
    pairs: Tuple[Tuple[complex, complex], ...]

    @property
    def N(self) -> int:
        return len(self.pairs)

    def swapped(self) -> 'TwoPointExpansion':
        return TwoPointExpansion(self.z2, self.z1, tuple((rev, fwd) for fwd, rev in self.pairs))

    def to_expr(self) -> Expr:
        """The partial-sum polynomial of degree 2N-1 as an expression tree."""
        left = sub(VAR, const(self.z1))
        right = sub(VAR, const(self.z2))
        product = mul(left, right)
        total = None
        for n, (fwd, rev) in enumerate(self.pairs):
            term = add(mul(const(fwd), left), mul(const(rev), right))
            if n > 0:
                term = mul(term, power(product, n))
            total = term if total is None else add(total, term)
        return total


@dataclass(frozen=True)
class ABExpansion:
    """terms[n] = (A_n, B_n); z1 may equal z2 (confluent form)."""
    z1: complex
    z2: complex
    terms: Tuple[Tuple[complex, complex], ...]

    @property
    def N(self) -> int:
        return len(self.terms)


def check_points(z1: complex, z2: complex):
    """Refuse nearly confluent expansion points."""
    scale = max(1.0, abs(z1), abs(z2))
    if abs(z1 - z2) < settings.CONFLUENCE_REL * scale:
        raise CoincidentPointsError(
            f"expansion points {z1} and {z2} coincide to within {settings.CONFLUENCE_REL:g}; "
            f"use the confluent A/B form instead")


def taylor_coefficients(f: FunctionModel, z0: complex, order: int) -> np.ndarray:
    """Taylor coefficients c_0..c_order of f at a regular point z0."""
    if f.pole_order_at(z0) > 0:
        raise PoleAtExpansionPointError(f"{f.text} has a pole at the expansion point {z0}")
    jet = jet_of(f.expr, z0, order)
    if not jet.regular:
        raise PoleAtExpansionPointError(f"{f.text} has a pole of order {jet.pole_order} at {z0}")
    return np.array(jet.coefficients)


def coefficient_from_taylor(c1: np.ndarray, c2: np.ndarray, z1: complex, z2: complex, n: int) -> complex:
    """
    a_n(z1, z2) from the Taylor coefficients c1 (at z1) and c2 (at z2).

    Uses f^(j)(z)/j! directly, so the factorial weights reduce to
    t_k = (n+k-1)!/(k! n!), updated as t_{k+1} = t_k (n+k)/(k+1).
    """
    if n == 0:
        return complex(c2[0] / (z2 - z1))
    h = z1 - z2
    inv = 1 / h
    inv_power = inv ** (n + 1)
    t = 1.0 / n
    sign_n = -1 if n % 2 == 0 else 1
    total = 0j
    for k in range(n + 1):
        sign_k = 1 if k % 2 == 0 else -1
        bracket = sign_n * n * c2[n - k] + sign_k * k * c1[n - k]
        total += t * bracket * inv_power
        inv_power *= inv
        t *= (n + k) / (k + 1)
    return total


def coeff_a(f: FunctionModel, z1: complex, z2: complex, n: int) -> complex:
    """
    Coefficient a_n(z1, z2) of the two-point Taylor expansion.

    Raises:
        CoincidentPointsError: z1 and z2 (nearly) coincide
        PoleAtExpansionPointError: f has a pole at z1 or z2
    """
    z1, z2 = complex(z1), complex(z2)
    if n < 0:
        raise UsageError(f"coefficient index must be nonnegative, got {n}")
    check_points(z1, z2)
    c1 = taylor_coefficients(f, z1, n)
    c2 = taylor_coefficients(f, z2, n)
    return coefficient_from_taylor(c1, c2, z1, z2, n)


def expand(f: FunctionModel, z1: complex, z2: complex, N: int) -> TwoPointExpansion:
    """Coefficient pairs for n = 0..N-1 from one jet at each point."""
    z1, z2 = complex(z1), complex(z2)
    if N < 1:
        raise UsageError(f"expansion order must be at least 1, got {N}")
    check_points(z1, z2)
    c1 = taylor_coefficients(f, z1, N - 1)
    c2 = taylor_coefficients(f, z2, N - 1)
    pairs = tuple(
        (coefficient_from_taylor(c1, c2, z1, z2, n), coefficient_from_taylor(c2, c1, z2, z1, n))
        for n in range(N)
    )
    logger.debug(f"Expanded {f.text} at ({z1}, {z2}) to order {N}")
    return TwoPointExpansion(z1, z2, pairs)


def evaluate(e: TwoPointExpansion, z: Number) -> Number:
    """Partial sum at z with a running power of (z - z1)(z - z2)."""
    scalar = not isinstance(z, np.ndarray)
    z = complex(z) if scalar else z.astype(complex)
    left = z - e.z1
    right = z - e.z2
    product = left * right
    running = 1 + 0j if scalar else np.ones_like(z)
    total = 0j if scalar else np.zeros_like(z)
    for fwd, rev in e.pairs:
        total = total + (fwd * left + rev * right) * running
        running = running * product
    return total


def remainder(f: FunctionModel, e: TwoPointExpansion, z: Number) -> Number:
    """f(z) minus the partial sum."""
    return f.evaluate(z) - evaluate(e, z)


def to_ab(e: TwoPointExpansion) -> ABExpansion:
    terms = tuple((-e.z1 * fwd - e.z2 * rev, fwd + rev) for fwd, rev in e.pairs)
    return ABExpansion(e.z1, e.z2, terms)


def ab_evaluate(ab: ABExpansion, z: Number) -> Number:
    """sum_n (A_n + B_n z) ((z - z1)(z - z2))^n."""
    scalar = not isinstance(z, np.ndarray)
    z = complex(z) if scalar else z.astype(complex)
    product = (z - ab.z1) * (z - ab.z2)
    running = 1 + 0j if scalar else np.ones_like(z)
    total = 0j if scalar else np.zeros_like(z)
    for A, B in ab.terms:
        total = total + (A + B * z) * running
        running = running * product
    return total


def ab_confluent(f: FunctionModel, z0: complex, N: int, method: str = 'jets') -> ABExpansion:
    """
    The z1 = z2 = z0 limit of the A/B form.

    With c_k the Taylor coefficients at z0, f = sum (A_n + B_n z)(z - z0)^(2n)
    gives B_n = c_{2n+1} and A_n = c_{2n} - z0 c_{2n+1}. The 'contour' method
    evaluates the defining contour integrals instead.
    """
    z0 = complex(z0)
    if N < 1:
        raise UsageError(f"expansion order must be at least 1, got {N}")
    if method == 'jets':
        c = taylor_coefficients(f, z0, 2 * N - 1)
        terms = tuple((complex(c[2 * n] - z0 * c[2 * n + 1]), complex(c[2 * n + 1])) for n in range(N))
    elif method == 'contour':
        if f.pole_order_at(z0) > 0:
            raise PoleAtExpansionPointError(f"{f.text} has a pole at the expansion point {z0}")
        from .contour_oracle import oracle_AB
        terms = tuple(oracle_AB(f, z0, z0, n) for n in range(N))
    else:
        raise UsageError(f"unknown confluence method '{method}'")
    return ABExpansion(z0, z0, terms)


def hermite_residuals(f: FunctionModel, e: TwoPointExpansion) -> List[float]:
    """
    |P^(k)(z_i) - f^(k)(z_i)| for z_i in (z1, z2) and k = 0..N-1, where P
    is the partial-sum polynomial.
    """
    P = e.to_expr()
    residuals: List[float] = []
    for point in (e.z1, e.z2):
        dp = derivatives(P, point, e.N - 1)
        df = derivatives(f.expr, point, e.N - 1)
        residuals.extend(float(abs(x - y)) for x, y in zip(dp, df))
    return residuals
