#!/usr/bin/env python
"""
Two-Point Laurent and Taylor-Laurent Expansion Module

This module handles functions with poles at the expansion points:

    Laurent:        sum [b_fwd (z-z1) + b_rev (z-z2)] P^n  +  sum [c_fwd (z-z1) + c_rev (z-z2)] P^(-n-1)
    Taylor-Laurent: sum [d_fwd (z-z1) + d_rev (z-z2)] P^n  +  sum e_n (z-z2)^n / (z-z1)^(n+1)

with P = (z-z1)(z-z2). Coefficients come from the Taylor coefficients of
the regularized functions g1 = (z-z1)^m1 f at z1 and g2 = (z-z2)^m2 f at z2,
which are read straight off the Laurent jets of f.
"""

import logging
from dataclasses import dataclass
from math import comb
from typing import Optional, Tuple, Union

import numpy as np

from .errors import PoleAtExpansionPointError, PoleEvaluationError, PoleSpecError, UsageError
from .expressions import VAR, Expr, FunctionModel, add, const, mul, power, sub
from .jets import jet_of
from .two_point_taylor import check_points

logger = logging.getLogger('two_point_laurent')

Number = Union[complex, np.ndarray]


@dataclass(frozen=True)
class PoleSpec:
    """Pole order bounds at z1 and z2."""
    m1: int
    m2: int

    def __post_init__(self):
        if self.m1 < 0 or self.m2 < 0:
            raise PoleSpecError(f"pole orders must be nonnegative, got m1={self.m1}, m2={self.m2}")

    @property
    def M(self) -> int:
        return max(self.m1, self.m2)

    def mirrored(self) -> 'PoleSpec':
        return PoleSpec(self.m2, self.m1)


@dataclass(frozen=True)
class TwoPointLaurentExpansion:
    z1: complex
    z2: complex
    spec: PoleSpec
    b_pairs: Tuple[Tuple[complex, complex], ...]
    c_pairs: Tuple[Tuple[complex, complex], ...]

    @property
    def N(self) -> int:
        return len(self.b_pairs)


@dataclass(frozen=True)
class TaylorLaurentExpansion:
    z1: complex
    z2: complex
    m: int
    d_pairs: Tuple[Tuple[complex, complex], ...]
    e_terms: Tuple[complex, ...]

    @property
    def N(self) -> int:
        return len(self.d_pairs)


def pochhammer(x: float, k: int) -> float:
    """Rising factorial (x)_k with (x)_0 = 1."""
    result = 1.0
    for j in range(k):
        result *= x + j
    return result


def regular_coefficients(f: FunctionModel, z0: complex, m: int, order: int) -> np.ndarray:
    """
    Taylor coefficients G_0..G_{order+m} of g = (z - z0)^m f at z0.

    Raises:
        PoleSpecError: f has a pole of order greater than m at z0
    """
    jet = jet_of(f.expr, z0, order)
    if jet.pole_order > m:
        raise PoleSpecError(
            f"{f.text} has a pole of order {jet.pole_order} at {z0}, more than the declared {m}")
    return np.array([jet.coefficient(j - m) for j in range(order + m + 1)], dtype=complex)


def default_spec(f: FunctionModel, z1: complex, z2: complex) -> PoleSpec:
    return PoleSpec(f.pole_order_at(z1), f.pole_order_at(z2))


# ------------------------------------------------------------------------
# Laurent coefficients
# ------------------------------------------------------------------------

def _b_from_regular(G1: np.ndarray, G2: np.ndarray, z1: complex, z2: complex, m1: int, m2: int, n: int) -> complex:
    total = 0j
    # first sum: k = 0..n+m1-1, weight (n+1)_k / k!
    upper = n + m1 - 1
    if upper >= 0:
        inv = 1 / (z1 - z2)
        inv_power = inv ** (n + 2)
        w = 1.0
        for k in range(upper + 1):
            sign = -1 if k % 2 == 0 else 1
            total += sign * w * G1[upper - k] * inv_power
            inv_power *= inv
            w *= (n + 1 + k) / (k + 1)
    # second sum: k = 0..n+m2, weight (n)_k / k!
    upper = n + m2
    inv = 1 / (z2 - z1)
    inv_power = inv ** (n + 1)
    w = 1.0
    for k in range(upper + 1):
        sign = 1 if k % 2 == 0 else -1
        total += sign * w * G2[upper - k] * inv_power
        inv_power *= inv
        w *= (n + k) / (k + 1)
    return total


def _c_from_regular(G1: np.ndarray, G2: np.ndarray, z1: complex, z2: complex, m1: int, m2: int, n: int) -> complex:
    total = 0j
    upper = m1 - n - 2
    h = z1 - z2
    for k in range(min(upper, n) + 1):
        total -= comb(n, k) * h ** (n - k - 1) * G1[upper - k]
    upper = m2 - n - 1
    h = z2 - z1
    for k in range(min(upper, n + 1) + 1):
        total += comb(n + 1, k) * h ** (n - k) * G2[upper - k]
    return total


def _laurent_regulars(f: FunctionModel, z1: complex, z2: complex, spec: PoleSpec, order: int):
    G1 = regular_coefficients(f, z1, spec.m1, order)
    G2 = regular_coefficients(f, z2, spec.m2, order)
    return G1, G2


def _prepare(f, z1, z2, n):
    z1, z2 = complex(z1), complex(z2)
    if n < 0:
        raise UsageError(f"coefficient index must be nonnegative, got {n}")
    check_points(z1, z2)
    return z1, z2


def coeff_b(f: FunctionModel, z1: complex, z2: complex, spec: Optional[PoleSpec], n: int) -> complex:
    """
    b_n(z1, z2). The mirrored b_n(z2, z1) is coeff_b(f, z2, z1, spec.mirrored(), n).

    Raises:
        PoleSpecError: declared pole orders do not regularize f
    """
    z1, z2 = _prepare(f, z1, z2, n)
    spec = spec or default_spec(f, z1, z2)
    G1, G2 = _laurent_regulars(f, z1, z2, spec, n)
    return _b_from_regular(G1, G2, z1, z2, spec.m1, spec.m2, n)


def coeff_c(f: FunctionModel, z1: complex, z2: complex, spec: Optional[PoleSpec], n: int) -> complex:
    """c_n(z1, z2); zero once n >= max(m1, m2)."""
    z1, z2 = _prepare(f, z1, z2, n)
    spec = spec or default_spec(f, z1, z2)
    G1, G2 = _laurent_regulars(f, z1, z2, spec, 0)
    return _c_from_regular(G1, G2, z1, z2, spec.m1, spec.m2, n)


def laurent_expand(f: FunctionModel, z1: complex, z2: complex, spec: Optional[PoleSpec], N: int) -> TwoPointLaurentExpansion:
    z1, z2 = complex(z1), complex(z2)
    if N < 1:
        raise UsageError(f"expansion order must be at least 1, got {N}")
    check_points(z1, z2)
    spec = spec or default_spec(f, z1, z2)
    G1, G2 = _laurent_regulars(f, z1, z2, spec, N - 1)
    b_pairs = tuple(
        (_b_from_regular(G1, G2, z1, z2, spec.m1, spec.m2, n),
         _b_from_regular(G2, G1, z2, z1, spec.m2, spec.m1, n))
        for n in range(N)
    )
    c_pairs = tuple(
        (_c_from_regular(G1, G2, z1, z2, spec.m1, spec.m2, n),
         _c_from_regular(G2, G1, z2, z1, spec.m2, spec.m1, n))
        for n in range(N)
    )
    logger.debug(f"Laurent expansion of {f.text} at ({z1}, {z2}) with m1={spec.m1}, m2={spec.m2}, N={N}")
    return TwoPointLaurentExpansion(z1, z2, spec, b_pairs, c_pairs)


def _regular_sum(z, z1, z2, pairs, scalar):
    left = z - z1
    right = z - z2
    product = left * right
    running = 1 + 0j if scalar else np.ones_like(z)
    total = 0j if scalar else np.zeros_like(z)
    for fwd, rev in pairs:
        total = total + (fwd * left + rev * right) * running
        running = running * product
    return total


def _as_complex(z):
    scalar = not isinstance(z, np.ndarray)
    return (complex(z) if scalar else z.astype(complex)), scalar


def evaluate_laurent(e: TwoPointLaurentExpansion, z: Number) -> Number:
    """
    Partial sum; negative powers of (z-z1)(z-z2) by repeated division.

    Raises:
        PoleEvaluationError: z is an expansion point and some c-term is nonzero
    """
    z, scalar = _as_complex(z)
    total = _regular_sum(z, e.z1, e.z2, e.b_pairs, scalar)
    singular = [(fwd, rev) for fwd, rev in e.c_pairs]
    if not any(fwd != 0 or rev != 0 for fwd, rev in singular):
        return total
    left = z - e.z1
    right = z - e.z2
    product = left * right
    if np.any(product == 0):
        raise PoleEvaluationError(f"Laurent partial sum is singular at the expansion points {e.z1}, {e.z2}")
    running = 1 / product
    for fwd, rev in singular:
        total = total + (fwd * left + rev * right) * running
        running = running / product
    return total


def remainder_laurent(f: FunctionModel, e: TwoPointLaurentExpansion, z: Number) -> Number:
    return f.evaluate(z) - evaluate_laurent(e, z)


# ------------------------------------------------------------------------
# Taylor-Laurent coefficients
# ------------------------------------------------------------------------

def _d_forward(G: np.ndarray, F2: np.ndarray, z1: complex, z2: complex, m: int, n: int) -> complex:
    if n == 0:
        total = F2[0] / (z2 - z1)
        inv = 1 / (z2 - z1)
        inv_power = inv ** 2
        for k in range(m):
            total -= G[m - k - 1] * inv_power
            inv_power *= inv
        return total
    total = 0j
    inv = 1 / (z2 - z1)
    inv_power = inv ** (n + 2)
    for k in range(m + n):
        total += comb(n + k, k) * G[m + n - k - 1] * inv_power
        inv_power *= inv
    inv = 1 / (z1 - z2)
    inv_power = inv ** (n + 1)
    for k in range(n + 1):
        total += comb(n + k - 1, k) * F2[n - k] * inv_power
        inv_power *= inv
    return -total if n % 2 == 0 else total


def _d_reverse(G: np.ndarray, F2: np.ndarray, z1: complex, z2: complex, m: int, n: int) -> complex:
    if n == 0:
        return G[m] / (z1 - z2)
    total = 0j
    inv = 1 / (z2 - z1)
    inv_power = inv ** (n + 1)
    for k in range(m + n + 1):
        total += comb(n + k - 1, k) * G[m + n - k] * inv_power
        inv_power *= inv
    inv = 1 / (z1 - z2)
    inv_power = inv ** (n + 2)
    for k in range(n):
        total += comb(n + k, k) * F2[n - k - 1] * inv_power
        inv_power *= inv
    return -total if n % 2 == 0 else total


def _e_from_regular(G: np.ndarray, z1: complex, z2: complex, m: int, n: int) -> complex:
    total = 0j
    h = z2 - z1
    for k in range(m - n):
        total += comb(n + k, k) * G[m - n - k - 1] / h ** (n + k)
    return total if n % 2 == 0 else -total


def _tl_regulars(f: FunctionModel, z1: complex, z2: complex, m: int, order: int):
    G = regular_coefficients(f, z1, m, order)
    jet = jet_of(f.expr, z2, order)
    if not jet.regular:
        raise PoleAtExpansionPointError(f"{f.text} has a pole at {z2}; the Taylor-Laurent form needs f regular there")
    return G, np.array(jet.coefficients)


def _default_m(f: FunctionModel, z1: complex, m: Optional[int]) -> int:
    m = f.pole_order_at(z1) if m is None else m
    if m < 0:
        raise PoleSpecError(f"pole order must be nonnegative, got {m}")
    return m


def coeff_d(f: FunctionModel, z1: complex, z2: complex, m: Optional[int], n: int) -> Tuple[complex, complex]:
    """
    The pair (d_n(z1, z2), d_n(z2, z1)) for f with a pole of order at most m
    at z1 and regular at z2.
    """
    z1, z2 = _prepare(f, z1, z2, n)
    m = _default_m(f, z1, m)
    G, F2 = _tl_regulars(f, z1, z2, m, n)
    return _d_forward(G, F2, z1, z2, m, n), _d_reverse(G, F2, z1, z2, m, n)


def coeff_e(f: FunctionModel, z1: complex, z2: complex, m: Optional[int], n: int) -> complex:
    """e_n(z1, z2); zero once n >= m."""
    z1, z2 = _prepare(f, z1, z2, n)
    m = _default_m(f, z1, m)
    G, _ = _tl_regulars(f, z1, z2, m, 0)
    return _e_from_regular(G, z1, z2, m, n)


def taylor_laurent_expand(f: FunctionModel, z1: complex, z2: complex, m: Optional[int], N: int) -> TaylorLaurentExpansion:
    z1, z2 = complex(z1), complex(z2)
    if N < 1:
        raise UsageError(f"expansion order must be at least 1, got {N}")
    check_points(z1, z2)
    m = _default_m(f, z1, m)
    G, F2 = _tl_regulars(f, z1, z2, m, N - 1)
    d_pairs = tuple((_d_forward(G, F2, z1, z2, m, n), _d_reverse(G, F2, z1, z2, m, n)) for n in range(N))
    e_terms = tuple(_e_from_regular(G, z1, z2, m, n) for n in range(N))
    logger.debug(f"Taylor-Laurent expansion of {f.text} at ({z1}, {z2}) with m={m}, N={N}")
    return TaylorLaurentExpansion(z1, z2, m, d_pairs, e_terms)


def evaluate_tl(e: TaylorLaurentExpansion, z: Number) -> Number:
    """
    Partial sum; each singular term is built from the factors
    (z-z2)/(z-z1) and 1/(z-z1), never a combined power.
    """
    z, scalar = _as_complex(z)
    total = _regular_sum(z, e.z1, e.z2, e.d_pairs, scalar)
    if not any(c != 0 for c in e.e_terms):
        return total
    left = z - e.z1
    if np.any(left == 0):
        raise PoleEvaluationError(f"Taylor-Laurent partial sum is singular at {e.z1}")
    ratio = (z - e.z2) / left
    running = 1 / left
    for c in e.e_terms:
        total = total + c * running
        running = running * ratio
    return total


def remainder_tl(f: FunctionModel, e: TaylorLaurentExpansion, z: Number) -> Number:
    return f.evaluate(z) - evaluate_tl(e, z)


# ------------------------------------------------------------------------
# Regularization
# ------------------------------------------------------------------------

def _laurent_singular_part(z1: complex, z2: complex, c_pairs) -> Optional[Expr]:
    left = sub(VAR, const(z1))
    right = sub(VAR, const(z2))
    product = mul(left, right)
    total = None
    for n, (fwd, rev) in enumerate(c_pairs):
        if fwd == 0 and rev == 0:
            continue
        term = mul(add(mul(const(fwd), left), mul(const(rev), right)), power(product, -(n + 1)))
        total = term if total is None else add(total, term)
    return total


def _tl_singular_part(z1: complex, z2: complex, e_terms) -> Optional[Expr]:
    left = sub(VAR, const(z1))
    right = sub(VAR, const(z2))
    total = None
    for n, c in enumerate(e_terms):
        if c == 0:
            continue
        term = mul(const(c), power(left, -(n + 1)))
        if n > 0:
            term = mul(term, power(right, n))
        total = term if total is None else add(total, term)
    return total


def regularize(f: FunctionModel, z1: complex, z2: complex, spec_or_m: Union[PoleSpec, int, None] = None,
               family: str = 'laurent') -> FunctionModel:
    """
    f minus its two-point singular part, as a new FunctionModel.

    family 'laurent' subtracts the M c-type terms; 'taylor-laurent'
    subtracts the m e-type terms of the pole at z1. The result is checked
    for regularity at the expansion points through jets.

    Raises:
        PoleSpecError: the subtraction leaves a principal part behind
    """
    z1, z2 = complex(z1), complex(z2)
    check_points(z1, z2)
    if family == 'laurent':
        spec = spec_or_m if isinstance(spec_or_m, PoleSpec) else default_spec(f, z1, z2)
        G1, G2 = _laurent_regulars(f, z1, z2, spec, 0)
        c_pairs = [(_c_from_regular(G1, G2, z1, z2, spec.m1, spec.m2, n),
                    _c_from_regular(G2, G1, z2, z1, spec.m2, spec.m1, n)) for n in range(spec.M)]
        singular = _laurent_singular_part(z1, z2, c_pairs)
        removed = (z1, z2)
    elif family == 'taylor-laurent':
        m = spec_or_m if isinstance(spec_or_m, int) else None
        m = _default_m(f, z1, m)
        G, _ = _tl_regulars(f, z1, z2, m, 0)
        singular = _tl_singular_part(z1, z2, [_e_from_regular(G, z1, z2, m, n) for n in range(m)])
        removed = (z1,)
    else:
        raise UsageError(f"unknown regularization family '{family}'")

    remaining = [(p.location, p.order) for p in f.poles
                 if all(abs(p.location - r) > 1e-9 * max(1.0, abs(r)) for r in removed)]
    expr = f.expr if singular is None else sub(f.expr, singular)
    g = FunctionModel.from_expr(expr, poles=remaining, text=f"regularized({f.text})")

    for point in removed:
        jet = jet_of(g.expr, point, 0)
        if not jet.regular:
            raise PoleSpecError(f"regularized function still has a pole of order {jet.pole_order} at {point}")
    return g
