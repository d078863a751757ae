#!/usr/bin/env python
"""
Expression Core Module for the two-point expansion toolkit

Parses function expressions in z into an immutable tree, evaluates them
(scalars or numpy arrays), prints them back, and locates the finite pole
set that bounds the analyticity domain of the function.

Grammar: + - * / ^(integer), unary minus, exp/sin/cos, the variable z and
complex literals (2, 2.5, 3i, i). Precedence ^ > unary- > * / > + -;
^ is right-associative, everything else left-associative.
"""

import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from numpy.polynomial import polynomial as P
from lark import Lark, Transformer, v_args
from lark.exceptions import UnexpectedCharacters, UnexpectedEOF, UnexpectedInput, UnexpectedToken, VisitError

from . import settings
from .errors import (
    EssentialSingularityError,
    ExpressionSyntaxError,
    NonIntegerExponentError,
    NonPolynomialDenominatorError,
    PoleEvaluationError,
    PoleSpecError,
    TwoPointError,
    ZeroDivisorError,
)
from .polynomial_roots import find_roots, trim_coefficients

logger = logging.getLogger('expressions')

BINARY_OPS = ('add', 'sub', 'mul', 'div')
FUNCTIONS = ('exp', 'sin', 'cos')

Number = Union[complex, np.ndarray]


@dataclass(frozen=True)
class Expr:
    """
    Node of an expression tree.

    op is one of const, var, neg, add, sub, mul, div, pow, exp, sin, cos.
    const nodes keep their complex value in `value`; pow nodes keep the
    integer exponent in `value` and the base as their single argument.
    """
    op: str
    args: Tuple['Expr', ...] = ()
    value: Optional[Union[complex, int]] = None

    def __add__(self, other):
        return add(self, _lift(other))

    def __radd__(self, other):
        return add(_lift(other), self)

    def __sub__(self, other):
        return sub(self, _lift(other))

    def __rsub__(self, other):
        return sub(_lift(other), self)

    def __mul__(self, other):
        return mul(self, _lift(other))

    def __rmul__(self, other):
        return mul(_lift(other), self)

    def __truediv__(self, other):
        return div(self, _lift(other))

    def __rtruediv__(self, other):
        return div(_lift(other), self)

    def __neg__(self):
        return neg(self)

    def __pow__(self, k: int):
        return power(self, k)

    def __str__(self):
        return pretty(self)


def const(c) -> Expr:
    return Expr('const', (), complex(c))


VAR = Expr('var')


def neg(a: Expr) -> Expr:
    return Expr('neg', (a,))


def add(a: Expr, b: Expr) -> Expr:
    return Expr('add', (a, b))


def sub(a: Expr, b: Expr) -> Expr:
    return Expr('sub', (a, b))


def mul(a: Expr, b: Expr) -> Expr:
    return Expr('mul', (a, b))


def div(a: Expr, b: Expr) -> Expr:
    return Expr('div', (a, b))


def power(a: Expr, k: int) -> Expr:
    return Expr('pow', (a,), int(k))


def call(name: str, a: Expr) -> Expr:
    if name not in FUNCTIONS:
        raise ExpressionSyntaxError(f"unknown function '{name}'")
    return Expr(name, (a,))


def _lift(x) -> Expr:
    return x if isinstance(x, Expr) else const(x)


def contains_var(expr: Expr) -> bool:
    if expr.op == 'var':
        return True
    return any(contains_var(a) for a in expr.args)


# ------------------------------------------------------------------------
# Parsing
# ------------------------------------------------------------------------

_GRAMMAR = r"""
    ?start: sum

    ?sum: product
        | sum "+" product   -> add
        | sum "-" product   -> sub

    ?product: unary
        | product "*" unary -> mul
        | product "/" unary -> div

    ?unary: power
        | "-" unary         -> neg

    ?power: atom
        | atom "^" unary    -> pow

    ?atom: NUMBER           -> number
         | IMAG             -> imag
         | "i"              -> unit
         | "z"              -> var
         | FUNC "(" sum ")" -> call
         | "(" sum ")"

    FUNC: "exp" | "sin" | "cos"
    IMAG.2: /(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?i/
    NUMBER: /(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?/

    %import common.WS_INLINE
    %ignore WS_INLINE
"""

_parser = Lark(_GRAMMAR, parser='lalr')


def _integer_exponent(node: Expr) -> int:
    if contains_var(node):
        raise NonIntegerExponentError("exponent depends on z")
    value = complex(evaluate(node, 0j))
    if not np.isfinite(value.real) or value.imag != 0 or value.real != round(value.real):
        raise NonIntegerExponentError(f"exponent {value} is not an integer")
    return int(round(value.real))


@v_args(inline=True)
class _TreeBuilder(Transformer):
    def number(self, tok):
        return const(float(tok))

    def imag(self, tok):
        return const(complex(0.0, float(str(tok)[:-1])))

    def unit(self):
        return const(1j)

    def var(self):
        return VAR

    def neg(self, a):
        return neg(a)

    def add(self, a, b):
        return add(a, b)

    def sub(self, a, b):
        return sub(a, b)

    def mul(self, a, b):
        return mul(a, b)

    def div(self, a, b):
        return div(a, b)

    def pow(self, base, exponent):
        return power(base, _integer_exponent(exponent))

    def call(self, name, arg):
        return call(str(name), arg)


def _error_position(text: str, err: UnexpectedInput) -> int:
    if isinstance(err, UnexpectedEOF):
        return len(text)
    if isinstance(err, UnexpectedToken):
        tok = err.token
        if tok.type == '$END':
            return len(text)
        pos = getattr(tok, 'start_pos', None)
        return pos if pos is not None else getattr(err, 'pos_in_stream', len(text))
    if isinstance(err, UnexpectedCharacters):
        return err.pos_in_stream
    pos = getattr(err, 'pos_in_stream', None)
    return pos if pos is not None else len(text)


def parse(text: str) -> Expr:
    """
    Parse an expression over z.

    Raises:
        ExpressionSyntaxError: with the 0-based offending position
        NonIntegerExponentError: exponent is not a constant integer
    """
    try:
        tree = _parser.parse(text)
    except UnexpectedInput as e:
        position = _error_position(text, e)
        raise ExpressionSyntaxError(f"syntax error in {text!r}", position) from None
    try:
        return _TreeBuilder().transform(tree)
    except VisitError as e:
        if isinstance(e.orig_exc, TwoPointError):
            raise e.orig_exc from None
        raise


# ------------------------------------------------------------------------
# Printing
# ------------------------------------------------------------------------

def _format_real(x: float) -> str:
    return repr(float(x))


def _format_const(c: complex) -> str:
    if c.imag == 0:
        s = _format_real(c.real)
        return f"({s})" if c.real < 0 or s.startswith('-') else s
    if c.real == 0:
        if c.imag < 0:
            return f"(-{_format_real(-c.imag)}i)"
        return f"{_format_real(c.imag)}i"
    sign = '+' if c.imag >= 0 else '-'
    re_part = _format_real(c.real)
    if c.real < 0:
        re_part = f"-{_format_real(-c.real)}"
    return f"({re_part} {sign} {_format_real(abs(c.imag))}i)"


_SYMBOLS = {'add': '+', 'sub': '-', 'mul': '*', 'div': '/'}


def pretty(expr: Expr) -> str:
    """
    Fully parenthesized text that parses back to the same tree.

    Constants with a negative or mixed real/imaginary part print as a sign
    or a sum and come back as equivalent neg/add nodes.
    """
    op = expr.op
    if op == 'const':
        return _format_const(expr.value)
    if op == 'var':
        return 'z'
    if op == 'neg':
        return f"(-{pretty(expr.args[0])})"
    if op in BINARY_OPS:
        a, b = expr.args
        return f"({pretty(a)} {_SYMBOLS[op]} {pretty(b)})"
    if op == 'pow':
        base = expr.args[0]
        base_text = pretty(base)
        if base.op == 'pow':
            base_text = f"({base_text})"
        k = expr.value
        return f"{base_text}^{k}" if k >= 0 else f"{base_text}^({k})"
    if op in FUNCTIONS:
        return f"{op}({pretty(expr.args[0])})"
    raise ValueError(f"unknown node {op}")


# ------------------------------------------------------------------------
# Evaluation
# ------------------------------------------------------------------------

def int_power(x, k: int):
    """x**k by repeated squaring (exact for small Gaussian integers, unlike pow via log)."""
    if k < 0:
        return 1 / int_power(x, -k)
    result = np.ones_like(x) if isinstance(x, np.ndarray) else 1 + 0j
    base = x
    while k:
        if k & 1:
            result = result * base
        k >>= 1
        if k:
            base = base * base
    return result


def _check_denominator(den, eps: float):
    if np.any(np.abs(den) < eps):
        raise PoleEvaluationError("evaluation at a pole (denominator vanishes)")


def _eval(expr: Expr, z, eps: float):
    op = expr.op
    if op == 'const':
        return expr.value if not isinstance(z, np.ndarray) else np.full(z.shape, expr.value, dtype=complex)
    if op == 'var':
        return z
    if op == 'neg':
        return -_eval(expr.args[0], z, eps)
    if op in BINARY_OPS:
        a = _eval(expr.args[0], z, eps)
        b = _eval(expr.args[1], z, eps)
        if op == 'add':
            return a + b
        if op == 'sub':
            return a - b
        if op == 'mul':
            return a * b
        _check_denominator(b, eps)
        return a / b
    if op == 'pow':
        base = _eval(expr.args[0], z, eps)
        if expr.value < 0:
            _check_denominator(base, eps)
        return int_power(base, expr.value)
    if op == 'exp':
        return np.exp(_eval(expr.args[0], z, eps))
    if op == 'sin':
        return np.sin(_eval(expr.args[0], z, eps))
    if op == 'cos':
        return np.cos(_eval(expr.args[0], z, eps))
    raise ValueError(f"unknown node {op}")


def evaluate(expr: Expr, z: Number, eps: Optional[float] = None) -> Number:
    """
    Evaluate at a complex scalar or elementwise on a numpy array.

    Raises:
        PoleEvaluationError: some denominator magnitude fell below eps
    """
    eps = settings.EVAL_POLE_EPS if eps is None else eps
    if isinstance(z, np.ndarray):
        with np.errstate(over='ignore', invalid='ignore'):
            return _eval(expr, z.astype(complex), eps)
    return complex(_eval(expr, complex(z), eps))


def multiply_by_power(expr: Expr, z0: complex, m: int) -> Expr:
    """(z - z0)^m * expr; evaluate at z0 through jets, never pointwise."""
    if m < 0:
        raise PoleSpecError(f"pole order multiplier must be nonnegative, got {m}")
    if m == 0:
        return expr
    return mul(power(sub(VAR, const(z0)), m), expr)


# ------------------------------------------------------------------------
# Singularities
# ------------------------------------------------------------------------

def _rational(expr: Expr) -> Tuple[np.ndarray, np.ndarray]:
    """Numerator and denominator polynomials (ascending) of a rational subtree."""
    op = expr.op
    if op == 'const':
        return np.array([expr.value], dtype=complex), np.array([1], dtype=complex)
    if op == 'var':
        return np.array([0, 1], dtype=complex), np.array([1], dtype=complex)
    if op == 'neg':
        n, d = _rational(expr.args[0])
        return -n, d
    if op in BINARY_OPS:
        n1, d1 = _rational(expr.args[0])
        n2, d2 = _rational(expr.args[1])
        if op == 'add':
            return P.polyadd(P.polymul(n1, d2), P.polymul(n2, d1)), P.polymul(d1, d2)
        if op == 'sub':
            return P.polysub(P.polymul(n1, d2), P.polymul(n2, d1)), P.polymul(d1, d2)
        if op == 'mul':
            return P.polymul(n1, n2), P.polymul(d1, d2)
        return P.polymul(n1, d2), P.polymul(d1, n2)
    if op == 'pow':
        n, d = _rational(expr.args[0])
        k = expr.value
        if k < 0:
            n, d, k = d, n, -k
        if k * (len(n) - 1) > settings.MAX_DENOMINATOR_DEGREE * 4:
            raise NonPolynomialDenominatorError("denominator degree exceeds the configured maximum")
        return P.polypow(n, k), P.polypow(d, k)
    raise NonPolynomialDenominatorError(f"transcendental function '{op}' inside a denominator")


def _polynomial_zeros(expr: Expr) -> List[Tuple[complex, int]]:
    num, _ = _rational(expr)
    num = trim_coefficients(num)
    if num.size == 1:
        if num[0] == 0:
            raise ZeroDivisorError(f"denominator {pretty(expr)} is identically zero")
        return []
    degree = num.size - 1
    if degree > settings.MAX_DENOMINATOR_DEGREE:
        raise NonPolynomialDenominatorError(
            f"denominator degree {degree} exceeds the maximum {settings.MAX_DENOMINATOR_DEGREE}")
    return find_roots(num)


def _scaled(items: List[Tuple[complex, int]], k: int) -> List[Tuple[complex, int]]:
    return [(loc, order * k) for loc, order in items]


def _zeros(expr: Expr) -> List[Tuple[complex, int]]:
    """Zeros of an expression that sits in a denominator, keeping product structure."""
    op = expr.op
    if op == 'const':
        if expr.value == 0:
            raise ZeroDivisorError("division by the constant zero")
        return []
    if op == 'var':
        return [(0j, 1)]
    if op == 'neg':
        return _zeros(expr.args[0])
    if op == 'mul':
        return _zeros(expr.args[0]) + _zeros(expr.args[1])
    if op == 'div':
        return _zeros(expr.args[0])
    if op == 'pow':
        k = expr.value
        if k > 0:
            return _scaled(_zeros(expr.args[0]), k)
        if k < 0:
            return _scaled(_poles(expr.args[0]), -k)
        return []
    if op in FUNCTIONS:
        raise NonPolynomialDenominatorError(f"transcendental function '{op}' inside a denominator")
    return _polynomial_zeros(expr)


def _poles(expr: Expr) -> List[Tuple[complex, int]]:
    op = expr.op
    if op in ('const', 'var'):
        return []
    if op == 'neg':
        return _poles(expr.args[0])
    if op in ('add', 'sub', 'mul'):
        return _poles(expr.args[0]) + _poles(expr.args[1])
    if op == 'div':
        return _poles(expr.args[0]) + _zeros(expr.args[1])
    if op == 'pow':
        k = expr.value
        if k > 0:
            return _scaled(_poles(expr.args[0]), k)
        if k < 0:
            return _scaled(_zeros(expr.args[0]), -k)
        return []
    if op in FUNCTIONS:
        if _poles(expr.args[0]):
            raise EssentialSingularityError(f"{op} of an expression with poles has an essential singularity")
        return []
    raise ValueError(f"unknown node {op}")


def cluster_poles(items: Sequence[Tuple[complex, int]], tol: Optional[float] = None) -> List[Tuple[complex, int]]:
    """Merge locations closer than tol (absolute) and sum their orders."""
    tol = settings.CLUSTER_TOL if tol is None else tol
    merged: List[List] = []
    for loc, order in items:
        for entry in merged:
            if abs(entry[0] - loc) <= tol:
                entry[1] += order
                break
        else:
            merged.append([complex(loc), int(order)])
    merged.sort(key=lambda e: (round(e[0].real, 12), round(e[0].imag, 12)))
    return [(loc, order) for loc, order in merged]


def find_singularities(expr: Expr) -> List[Tuple[complex, int]]:
    """
    Poles of expr with orders accumulated across nested quotients.

    Raises:
        NonPolynomialDenominatorError, RootFindingError, EssentialSingularityError
    """
    return cluster_poles(_poles(expr))


# ------------------------------------------------------------------------
# Function model
# ------------------------------------------------------------------------

@dataclass(frozen=True)
class Pole:
    location: complex
    order: int


@dataclass(frozen=True)
class FunctionModel:
    """A parsed meromorphic function together with its finite pole set."""
    text: str
    expr: Expr
    poles: Tuple[Pole, ...]

    @property
    def entire(self) -> bool:
        return len(self.poles) == 0

    @property
    def pole_locations(self) -> List[complex]:
        return [p.location for p in self.poles]

    @classmethod
    def from_text(cls, text: str, poles: Optional[Sequence[Tuple[complex, int]]] = None) -> 'FunctionModel':
        """
        Parse text and attach its poles.

        Args:
            text: expression over z
            poles: optional override list of (location, order); replaces detection entirely
        """
        expr = parse(text)
        return cls.from_expr(expr, poles=poles, text=text)

    @classmethod
    def from_expr(cls, expr: Expr, poles=None, text: Optional[str] = None) -> 'FunctionModel':
        text = text if text is not None else pretty(expr)
        if poles is not None:
            checked = cluster_poles([(complex(loc), int(order)) for loc, order in poles])
            for loc, order in checked:
                if order < 1:
                    raise PoleSpecError(f"pole order at {loc} must be positive")
            return cls(text, expr, tuple(Pole(loc, order) for loc, order in checked))
        candidates = find_singularities(expr)
        return cls(text, expr, tuple(_confirm_poles(expr, candidates)))

    def evaluate(self, z: Number) -> Number:
        return evaluate(self.expr, z)

    def pole_order_at(self, z0: complex, tol: Optional[float] = None) -> int:
        tol = settings.CLUSTER_TOL if tol is None else tol
        for p in self.poles:
            if abs(p.location - z0) <= tol * max(1.0, abs(z0)):
                return p.order
        return 0

    def nearest_pole_distance(self, z0: complex) -> float:
        if self.entire:
            return float('inf')
        return min(abs(p.location - z0) for p in self.poles)


def _confirm_poles(expr: Expr, candidates: List[Tuple[complex, int]]) -> List[Pole]:
    """Replace detected orders by the jet valuation; drop removable candidates."""
    from .jets import jet_of

    confirmed: List[Pole] = []
    for loc, order in candidates:
        try:
            jet = jet_of(expr, loc, 0)
        except TwoPointError as e:
            logger.warning(f"Could not confirm pole at {loc}: {e}; keeping detected order {order}")
            confirmed.append(Pole(loc, order))
            continue
        actual = -jet.min_exponent
        if actual <= 0:
            logger.debug(f"Candidate pole at {loc} is removable, dropped")
            continue
        if actual != order:
            logger.debug(f"Pole at {loc}: detected order {order}, confirmed order {actual}")
        confirmed.append(Pole(loc, actual))
    return confirmed
