#!/usr/bin/env python
"""
Jet Arithmetic Module

Truncated Taylor/Laurent series ("jets") of expressions at a point, used
to supply the high-order derivatives that the explicit coefficient
formulas need. Principal parts are kept, so jets at a pole report the
pole order through min_exponent.
"""

import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Union

import numpy as np

from . import settings
from .errors import (
    EssentialSingularityError,
    PoleAtExpansionPointError,
    UsageError,
    ZeroDivisorError,
)
from .expressions import Expr, FunctionModel, parse

logger = logging.getLogger('jets')

_WINDOW = 8
_PADDING = 16


@dataclass(frozen=True, eq=False)
class Jet:
    """
    Truncated series sum_k coefficients[k] * (z - base_point)^(min_exponent + k).

    Exponents above `order` are unknown. A regular jet has min_exponent 0
    and keeps leading zero coefficients (zeros of the function).
    """
    base_point: complex
    min_exponent: int
    coefficients: np.ndarray
    order: int

    def __post_init__(self):
        coeffs = np.array(self.coefficients, dtype=complex)
        coeffs.setflags(write=False)
        object.__setattr__(self, 'coefficients', coeffs)
        if coeffs.size != self.order - self.min_exponent + 1:
            raise ValueError("coefficient count does not match the exponent range")

    @property
    def regular(self) -> bool:
        return self.min_exponent >= 0

    @property
    def pole_order(self) -> int:
        return max(0, -self.min_exponent)

    def coefficient(self, exponent: int) -> complex:
        """Coefficient of (z - base_point)^exponent; zero below min_exponent."""
        if exponent > self.order:
            raise ValueError(f"exponent {exponent} beyond jet order {self.order}")
        if exponent < self.min_exponent:
            return 0j
        return complex(self.coefficients[exponent - self.min_exponent])

    def truncate(self, order: int) -> 'Jet':
        if order > self.order:
            raise ValueError(f"cannot extend a jet of order {self.order} to {order}")
        return Jet(self.base_point, self.min_exponent,
                   self.coefficients[:order - self.min_exponent + 1], order)

    def principal_part(self) -> np.ndarray:
        """Coefficients of exponents min_exponent..-1."""
        return np.array(self.coefficients[:self.pole_order])

    def regular_part(self) -> 'Jet':
        start = self.pole_order
        return Jet(self.base_point, 0, self.coefficients[start:], self.order)

    def derivatives(self) -> np.ndarray:
        """k! * c_k for k = 0..order (regular jets only)."""
        if not self.regular:
            raise PoleAtExpansionPointError(f"pole of order {self.pole_order} at {self.base_point}")
        factorials = np.array([float(math.factorial(k)) for k in range(self.order + 1)])
        return self.coefficients * factorials

    def evaluate(self, z: complex) -> complex:
        """Sum of the retained terms at z (z != base_point when there is a principal part)."""
        h = complex(z) - self.base_point
        total = 0j
        for c in self.coefficients[::-1]:
            total = total * h + c
        return total * h ** self.min_exponent if self.min_exponent else total

    def _check_compatible(self, other: 'Jet'):
        if self.base_point != other.base_point:
            raise ValueError("jets at different base points")

    def __add__(self, other: 'Jet') -> 'Jet':
        self._check_compatible(other)
        return _combine(self, other, 1)

    def __sub__(self, other: 'Jet') -> 'Jet':
        self._check_compatible(other)
        return _combine(self, other, -1)

    def __neg__(self) -> 'Jet':
        return Jet(self.base_point, self.min_exponent, -self.coefficients, self.order)

    def __mul__(self, other: 'Jet') -> 'Jet':
        self._check_compatible(other)
        v = self.min_exponent + other.min_exponent
        order = min(self.order + other.min_exponent, other.order + self.min_exponent)
        coeffs = np.convolve(self.coefficients, other.coefficients)[:order - v + 1]
        return _normalize(self.base_point, v, coeffs, order)

    def __truediv__(self, other: 'Jet') -> 'Jet':
        self._check_compatible(other)
        return self * other.reciprocal()

    def reciprocal(self) -> 'Jet':
        """1/self by series long division; leading ~zero coefficients shift the exponent."""
        c = self.coefficients
        if c.size == 0 or np.max(np.abs(c)) <= settings.ZERO_DIVISOR_TOL:
            raise ZeroDivisorError(f"division by a vanishing jet at {self.base_point}")
        scale = _window_scale(c, self.min_exponent)
        nonzero = np.nonzero(np.abs(c) > settings.JET_ZERO_TOL * scale)[0]
        s = int(nonzero[0])
        u = c[s:]
        shift = self.min_exponent + s
        r = np.zeros(u.size, dtype=complex)
        r[0] = 1 / u[0]
        for k in range(1, u.size):
            r[k] = -np.dot(u[1:k + 1], r[k - 1::-1]) / u[0]
        order = self.order - 2 * shift
        return _normalize(self.base_point, -shift, r, order)

    def __pow__(self, k: int) -> 'Jet':
        if k < 0:
            return (self ** (-k)).reciprocal()
        result = constant_jet(self.base_point, 1.0, self.order - self.min_exponent)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result


def _window_scale(c: np.ndarray, v: int) -> float:
    window = np.abs(c[:abs(v) + _WINDOW])
    scale = float(np.max(window)) if window.size else 0.0
    if scale == 0.0 and c.size:
        scale = float(np.max(np.abs(c)))
    return scale


def _normalize(z0: complex, v: int, coeffs: np.ndarray, order: int, scale: float = None) -> Jet:
    """Strip ~zero leading terms of a principal part; pad regular jets down to exponent 0."""
    coeffs = np.asarray(coeffs, dtype=complex)
    if scale is None:
        scale = _window_scale(coeffs, v)
    start = 0
    while v + start < 0 and start < coeffs.size and abs(coeffs[start]) <= settings.JET_ZERO_TOL * scale:
        start += 1
    v += start
    coeffs = coeffs[start:]
    if v > 0:
        coeffs = np.concatenate([np.zeros(v, dtype=complex), coeffs])
        v = 0
    length = order - v + 1
    if length <= 0:
        raise ZeroDivisorError(f"jet at {z0} lost all reliable terms")
    if coeffs.size < length:
        coeffs = np.concatenate([coeffs, np.zeros(length - coeffs.size, dtype=complex)])
    return Jet(z0, v, coeffs[:length], order)


def _combine(a: Jet, b: Jet, sign: int) -> Jet:
    v = min(a.min_exponent, b.min_exponent)
    order = min(a.order, b.order)
    length = order - v + 1
    coeffs = np.zeros(length, dtype=complex)
    ia = a.min_exponent - v
    ib = b.min_exponent - v
    coeffs[ia:] += a.coefficients[:length - ia]
    coeffs[ib:] += sign * b.coefficients[:length - ib]
    scale = max(_window_scale(a.coefficients, a.min_exponent),
                _window_scale(b.coefficients, b.min_exponent))
    return _normalize(a.base_point, v, coeffs, order, scale)


def constant_jet(z0: complex, c, order: int) -> Jet:
    coeffs = np.zeros(order + 1, dtype=complex)
    coeffs[0] = c
    return Jet(complex(z0), 0, coeffs, order)


def variable_jet(z0: complex, order: int) -> Jet:
    coeffs = np.zeros(order + 1, dtype=complex)
    coeffs[0] = z0
    if order >= 1:
        coeffs[1] = 1
    return Jet(complex(z0), 0, coeffs, order)


def _require_regular(a: Jet, name: str):
    if not a.regular:
        raise EssentialSingularityError(f"{name} of a principal part (pole of order {a.pole_order} at {a.base_point})")


def jet_exp(a: Jet) -> Jet:
    _require_regular(a, 'exp')
    c = a.coefficients
    n = c.size
    b = np.zeros(n, dtype=complex)
    b[0] = np.exp(c[0])
    weighted = c * np.arange(n)
    for k in range(1, n):
        b[k] = np.dot(weighted[1:k + 1], b[k - 1::-1]) / k
    return Jet(a.base_point, 0, b, a.order)


def _sin_cos(a: Jet):
    c = a.coefficients
    n = c.size
    s = np.zeros(n, dtype=complex)
    co = np.zeros(n, dtype=complex)
    s[0] = np.sin(c[0])
    co[0] = np.cos(c[0])
    weighted = c * np.arange(n)
    for k in range(1, n):
        s[k] = np.dot(weighted[1:k + 1], co[k - 1::-1]) / k
        co[k] = -np.dot(weighted[1:k + 1], s[k - 1::-1]) / k
    return Jet(a.base_point, 0, s, a.order), Jet(a.base_point, 0, co, a.order)


def jet_sin(a: Jet) -> Jet:
    _require_regular(a, 'sin')
    return _sin_cos(a)[0]


def jet_cos(a: Jet) -> Jet:
    _require_regular(a, 'cos')
    return _sin_cos(a)[1]


def _build(expr: Expr, z0: complex, width: int) -> Jet:
    op = expr.op
    if op == 'const':
        return constant_jet(z0, expr.value, width)
    if op == 'var':
        return variable_jet(z0, width)
    if op == 'neg':
        return -_build(expr.args[0], z0, width)
    if op in ('add', 'sub', 'mul', 'div'):
        a = _build(expr.args[0], z0, width)
        b = _build(expr.args[1], z0, width)
        if op == 'add':
            return a + b
        if op == 'sub':
            return a - b
        if op == 'mul':
            return a * b
        return a / b
    if op == 'pow':
        return _build(expr.args[0], z0, width) ** expr.value
    if op == 'exp':
        return jet_exp(_build(expr.args[0], z0, width))
    if op == 'sin':
        return jet_sin(_build(expr.args[0], z0, width))
    if op == 'cos':
        return jet_cos(_build(expr.args[0], z0, width))
    raise ValueError(f"unknown node {op}")


@lru_cache(maxsize=512)
def _working_jet(expr: Expr, z0: complex, width: int) -> Jet:
    return _build(expr, z0, width)


def _as_expr(f: Union[Expr, FunctionModel, str]) -> Expr:
    if isinstance(f, FunctionModel):
        return f.expr
    if isinstance(f, str):
        return parse(f)
    return f


def jet_of(f: Union[Expr, FunctionModel, str], z0: complex, order: int) -> Jet:
    """
    Truncated Laurent/Taylor series of f at z0 through exponent `order`.

    The series is always built at a fixed working width (grown only when
    quotients eat too many terms), so truncations of a longer jet agree
    exactly with shorter requests.

    Raises:
        EssentialSingularityError: exp/sin/cos applied to a principal part
        ZeroDivisorError: division by an identically vanishing jet
    """
    if order < 0:
        raise UsageError(f"jet order must be nonnegative, got {order}")
    if order > settings.JET_MAX_ORDER:
        raise UsageError(f"jet order {order} exceeds the maximum {settings.JET_MAX_ORDER}")
    expr = _as_expr(f)
    z0 = complex(z0)
    width = settings.JET_MAX_ORDER + _PADDING
    for _ in range(6):
        jet = _working_jet(expr, z0, width)
        if jet.order >= order:
            return jet.truncate(order)
        logger.debug(f"Jet at {z0} reached order {jet.order} < {order} at width {width}, widening")
        width += (order - jet.order) + _PADDING
    raise ZeroDivisorError(f"could not reach jet order {order} at {z0}")


def derivatives(f: Union[Expr, FunctionModel, str], z0: complex, k: int) -> np.ndarray:
    """f(z0), f'(z0), ..., f^(k)(z0)."""
    return jet_of(f, z0, k).derivatives()


def derivative(f: Union[Expr, FunctionModel, str], z0: complex, k: int) -> complex:
    """k-th derivative at a regular point."""
    jet = jet_of(f, z0, k)
    if not jet.regular:
        raise PoleAtExpansionPointError(f"pole of order {jet.pole_order} at {z0}")
    return complex(jet.coefficients[k] * math.factorial(k))
