#!/usr/bin/env python
"""
Contour Oracle Module

Independent evaluation of every expansion coefficient and remainder as a
Cauchy integral, computed with the trapezoidal rule on circles. Contours
are built automatically from the set of points that must be enclosed and
the set that must stay outside: a single circle when one fits, otherwise
one small circle per cluster of enclosed points (the residue sum is the
same). All oracle values use the normalized integral (1/2 pi i) of the
contour integral.
"""

import logging
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from . import settings
from .errors import (
    NoValidContourError,
    OracleMismatchError,
    PoleAtExpansionPointError,
    PoleSpecError,
    QuadratureError,
    UsageError,
)
from .expressions import FunctionModel
from . import two_point_laurent, two_point_taylor

logger = logging.getLogger('contour_oracle')

Integrand = Callable[[np.ndarray], np.ndarray]

_SCAN_STEP = 1.5
_CLUSTER_REL = 1e-3


@dataclass(frozen=True)
class Circle:
    center: complex
    radius: float


@dataclass(frozen=True)
class Contour:
    """Union of positively oriented, pairwise disjoint circles."""
    circles: Tuple[Circle, ...]
    nodes: int = field(default_factory=lambda: settings.QUAD_MIN_NODES)
    inside: Tuple[complex, ...] = ()
    outside: Tuple[complex, ...] = ()

    @property
    def kind(self) -> str:
        if len(self.circles) == 1:
            return 'single-circle'
        if len(self.circles) == 2:
            return 'two-circles'
        return 'multi-circle'

    @property
    def centers(self) -> List[complex]:
        return [c.center for c in self.circles]

    @property
    def radii(self) -> List[float]:
        return [c.radius for c in self.circles]

    @classmethod
    def circle(cls, center: complex, radius: float) -> 'Contour':
        return cls((Circle(complex(center), float(radius)),))


@dataclass(frozen=True)
class QuadratureResult:
    value: complex
    nodes: int
    error_estimate: float


# ------------------------------------------------------------------------
# Quadrature
# ------------------------------------------------------------------------

def _evaluate_nodes(fn: Integrand, center: complex, radius: float, theta: np.ndarray) -> np.ndarray:
    e = np.exp(1j * theta)
    with np.errstate(over='ignore', invalid='ignore', divide='ignore'):
        values = np.asarray(fn(center + radius * e), dtype=complex) * e
    if not np.all(np.isfinite(values)):
        raise QuadratureError(f"integrand is not finite on the circle |w - {center}| = {radius:g}")
    return values


def _circle_integral(fn: Integrand, circle: Circle, tol: float, start_nodes: int) -> QuadratureResult:
    """Raw contour integral over one circle, doubling the node count until it settles."""
    n = start_nodes
    theta = 2 * np.pi * np.arange(n) / n
    values = _evaluate_nodes(fn, circle.center, circle.radius, theta)
    total = values.sum()
    magnitude = np.abs(values).sum()
    factor = 2j * np.pi * circle.radius
    estimate = factor * total / n
    while n < settings.QUAD_MAX_NODES:
        theta = 2 * np.pi * (np.arange(n) + 0.5) / n
        values = _evaluate_nodes(fn, circle.center, circle.radius, theta)
        total += values.sum()
        magnitude += np.abs(values).sum()
        n *= 2
        refined = factor * total / n
        scale = max(abs(refined), 2 * np.pi * circle.radius * magnitude / n)
        error = abs(refined - estimate)
        if error <= tol * scale:
            return QuadratureResult(complex(refined), n, float(error))
        estimate = refined
    raise QuadratureError(
        f"trapezoidal rule did not converge on |w - {circle.center}| = {circle.radius:g} "
        f"within {settings.QUAD_MAX_NODES} nodes")


def integrate_with_info(fn: Integrand, contour: Contour, tol: Optional[float] = None) -> QuadratureResult:
    tol = settings.QUAD_TOL if tol is None else tol
    value = 0j
    nodes = 0
    error = 0.0
    for circle in contour.circles:
        result = _circle_integral(fn, circle, tol, contour.nodes)
        value += result.value
        nodes = max(nodes, result.nodes)
        error += result.error_estimate
    logger.debug(f"Integrated over {contour.kind} contour with up to {nodes} nodes per circle")
    return QuadratureResult(value, nodes, error)


def integrate(fn: Integrand, contour: Contour, tol: Optional[float] = None) -> complex:
    """The contour integral of fn (Jacobian i r e^(i theta) included)."""
    return integrate_with_info(fn, contour, tol).value


def cauchy(fn: Integrand, contour: Contour, tol: Optional[float] = None) -> complex:
    """(1 / 2 pi i) times the contour integral."""
    return integrate(fn, contour, tol) / (2j * np.pi)


# ------------------------------------------------------------------------
# Contour construction
# ------------------------------------------------------------------------

def _scan_radius(fn: Integrand, center: complex, r_min: float) -> float:
    """Radius minimizing max|fn| * r when nothing bounds the circle from outside."""
    base = r_min if r_min > 0 else 1.0
    exponents = range(1, 40) if r_min > 0 else range(-8, 40)
    theta = 2 * np.pi * np.arange(64) / 64
    best_r, best_metric = None, np.inf
    for k in exponents:
        r = base * _SCAN_STEP ** k
        with np.errstate(over='ignore', invalid='ignore', divide='ignore'):
            values = np.abs(np.asarray(fn(center + r * np.exp(1j * theta)), dtype=complex))
        metric = float(np.max(values)) * r if np.all(np.isfinite(values)) else np.inf
        if metric < best_metric:
            best_r, best_metric = r, metric
    if best_r is None:
        raise NoValidContourError(f"no radius around {center} keeps the integrand finite")
    logger.debug(f"Radius scan around {center} picked r={best_r:g}")
    return best_r


def _clusters(points: Sequence[complex], scale: float) -> List[List[complex]]:
    groups: List[List[complex]] = []
    for p in points:
        for g in groups:
            if min(abs(p - q) for q in g) <= _CLUSTER_REL * scale:
                g.append(p)
                break
        else:
            groups.append([p])
    return groups


def _unique(points: Sequence[complex]) -> List[complex]:
    result: List[complex] = []
    for p in points:
        if all(abs(p - q) > 1e-14 * max(1.0, abs(q)) for q in result):
            result.append(complex(p))
    return result


def build_contour(inside: Sequence[complex], outside: Sequence[complex],
                  center: Optional[complex] = None, integrand: Optional[Integrand] = None) -> Contour:
    """
    Circles enclosing every point of `inside` and none of `outside`.

    Raises:
        NoValidContourError: an enclosed and an excluded point coincide, or
        no circle family separates them
    """
    inside = _unique(inside)
    outside = _unique(outside)
    if not inside:
        raise UsageError("a contour needs at least one enclosed point")
    for q in outside:
        for p in inside:
            if abs(p - q) <= 1e-12 * max(1.0, abs(p)):
                raise NoValidContourError(f"point {p} must be both enclosed and excluded")
    center = complex(np.mean(inside)) if center is None else complex(center)

    r_in = max(abs(p - center) for p in inside)
    r_out = min((abs(q - center) for q in outside), default=np.inf)
    if np.isinf(r_out):
        if integrand is not None:
            radius = _scan_radius(integrand, center, r_in)
        else:
            radius = 2 * r_in if r_in > 0 else 1.0
        contour = Contour((Circle(center, radius),), inside=tuple(inside), outside=tuple(outside))
        return _checked(contour)
    if r_in < r_out * (1 - 1e-4):
        radius = np.sqrt(r_in * r_out) if r_in > 0 else r_out / 2
        contour = Contour((Circle(center, radius),), inside=tuple(inside), outside=tuple(outside))
        return _checked(contour)

    scale = max(1.0, max(abs(p - q) for p in inside for q in inside))
    groups = _clusters(inside, scale)
    if len(groups) == 1:
        raise NoValidContourError(
            f"excluded points lie between the enclosed points {inside}; no circle separates them")
    circles = []
    centers = [complex(np.mean(g)) for g in groups]
    for i, (g, c) in enumerate(zip(groups, centers)):
        spread = max(abs(p - c) for p in g)
        d_out = min((abs(q - c) for q in outside), default=np.inf)
        d_in = min(abs(c - other) for j, other in enumerate(centers) if j != i)
        limit = min(d_out, d_in / 2)
        if spread >= limit * (1 - 1e-4):
            raise NoValidContourError(f"cannot isolate the enclosed points {g} from the excluded set")
        radius = np.sqrt(spread * limit) if spread > 0 else limit / 2
        circles.append(Circle(c, float(radius)))
    contour = Contour(tuple(circles), inside=tuple(inside), outside=tuple(outside))
    logger.debug(f"Built {contour.kind} contour with centers {contour.centers} and radii {contour.radii}")
    return _checked(contour)


def winding_number(contour: Contour, p: complex) -> complex:
    return cauchy(lambda w: 1 / (w - p), contour, tol=1e-10)


def _checked(contour: Contour) -> Contour:
    """Distance and winding self-checks for every declared point."""
    for circle in contour.circles:
        for p in contour.inside + contour.outside:
            if abs(abs(p - circle.center) - circle.radius) < 1e-6 * circle.radius:
                raise NoValidContourError(f"point {p} lies on the circle around {circle.center}")
    for points, expected in ((contour.inside, 1), (contour.outside, 0)):
        for p in points:
            wn = winding_number(contour, p)
            if abs(wn - expected) > settings.WINDING_TOL:
                raise NoValidContourError(f"winding number {wn} around {p}, expected {expected}")
    return contour


# ------------------------------------------------------------------------
# Pole bookkeeping
# ------------------------------------------------------------------------

def _near(a: complex, b: complex) -> bool:
    return abs(a - b) <= 1e-9 * max(1.0, abs(b))


def split_poles(f: FunctionModel, points: Sequence[complex], inner_poles: Optional[Sequence[complex]] = None):
    """
    Separate f's poles into inner (declared, enclosed with the points) and
    outer (excluded). Poles sitting at one of `points` are neither.
    """
    inner: List[complex] = []
    for s in inner_poles or []:
        match = [p.location for p in f.poles if _near(p.location, complex(s))]
        if not match:
            raise PoleSpecError(f"{s} is not a pole of {f.text}")
        inner.append(match[0])
    outer = [p.location for p in f.poles
             if not any(_near(p.location, q) for q in inner) and not any(_near(p.location, q) for q in points)]
    return inner, outer


def _regular_points(f: FunctionModel, *points: complex):
    for z in points:
        if f.pole_order_at(z) > 0:
            raise PoleAtExpansionPointError(f"{f.text} has a pole at {z}")


def _oracle(fn: Integrand, inside, outside, center, tol=None) -> complex:
    contour = build_contour(inside, outside, center=center, integrand=fn)
    return cauchy(fn, contour, tol)


# ------------------------------------------------------------------------
# Coefficient oracles
# ------------------------------------------------------------------------

def oracle_a(f: FunctionModel, z1: complex, z2: complex, n: int) -> complex:
    """(1/(z2-z1)) * (1/2 pi i) integral of f / ((w-z1)^n (w-z2)^(n+1)) around z1, z2."""
    z1, z2 = complex(z1), complex(z2)
    _regular_points(f, z1, z2)
    fn = lambda w: f.evaluate(w) / ((w - z1) ** n * (w - z2) ** (n + 1))
    return _oracle(fn, [z1, z2], f.pole_locations, (z1 + z2) / 2) / (z2 - z1)


def oracle_AB(f: FunctionModel, z1: complex, z2: complex, n: int) -> Tuple[complex, complex]:
    """A_n and B_n from their contour integrals; valid for z1 == z2."""
    z1, z2 = complex(z1), complex(z2)
    _regular_points(f, z1, z2)
    fa = lambda w: (w - z1 - z2) * f.evaluate(w) / ((w - z1) * (w - z2)) ** (n + 1)
    fb = lambda w: f.evaluate(w) / ((w - z1) * (w - z2)) ** (n + 1)
    center = (z1 + z2) / 2
    return (_oracle(fa, [z1, z2], f.pole_locations, center),
            _oracle(fb, [z1, z2], f.pole_locations, center))


def oracle_b(f: FunctionModel, z1: complex, z2: complex, n: int,
             inner_poles: Optional[Sequence[complex]] = None) -> complex:
    z1, z2 = complex(z1), complex(z2)
    inner, outer = split_poles(f, [z1, z2], inner_poles)
    fn = lambda w: f.evaluate(w) / ((w - z1) ** n * (w - z2) ** (n + 1))
    return _oracle(fn, [z1, z2] + inner, outer, (z1 + z2) / 2) / (z2 - z1)


def oracle_c(f: FunctionModel, z1: complex, z2: complex, n: int,
             inner_poles: Optional[Sequence[complex]] = None) -> complex:
    z1, z2 = complex(z1), complex(z2)
    inner, outer = split_poles(f, [z1, z2], inner_poles)
    fn = lambda w: (w - z1) ** (n + 1) * (w - z2) ** n * f.evaluate(w)
    return _oracle(fn, [z1, z2] + inner, outer, (z1 + z2) / 2) / (z2 - z1)


def oracle_d(f: FunctionModel, z1: complex, z2: complex, n: int,
             inner_poles: Optional[Sequence[complex]] = None) -> complex:
    z1, z2 = complex(z1), complex(z2)
    # same integrand as b; the reverse coefficient swaps which point carries the pole
    inner, outer = split_poles(f, [z1, z2], inner_poles)
    fn = lambda w: f.evaluate(w) / ((w - z1) ** n * (w - z2) ** (n + 1))
    return _oracle(fn, [z1, z2] + inner, outer, (z1 + z2) / 2) / (z2 - z1)


def oracle_e(f: FunctionModel, z1: complex, z2: complex, n: int,
             inner_poles: Optional[Sequence[complex]] = None) -> complex:
    """(z1-z2) * (1/2 pi i) integral of (w-z1)^n f / (w-z2)^(n+1) around z1 only."""
    z1, z2 = complex(z1), complex(z2)
    _regular_points(f, z2)
    inner, outer = split_poles(f, [z1, z2], inner_poles)
    fn = lambda w: (w - z1) ** n * f.evaluate(w) / (w - z2) ** (n + 1)
    return (z1 - z2) * _oracle(fn, [z1] + inner, [z2] + outer, z1)


# ------------------------------------------------------------------------
# Expansions with poles enclosed away from the expansion points
# ------------------------------------------------------------------------

def enclosed_poles(f: FunctionModel, z1: complex, z2: complex,
                   inner_poles: Optional[Sequence[complex]] = None) -> List[complex]:
    """Declared inner poles other than z1 and z2."""
    z1, z2 = complex(z1), complex(z2)
    inner, _ = split_poles(f, [z1, z2], inner_poles)
    return [s for s in inner if not _near(s, z1) and not _near(s, z2)]


def _check_order(N: int):
    if N < 1:
        raise UsageError(f"expansion order must be at least 1, got {N}")


def laurent_with_inner_poles(f: FunctionModel, z1: complex, z2: complex,
                             spec: Optional['two_point_laurent.PoleSpec'], N: int,
                             inner_poles: Optional[Sequence[complex]] = None
                             ) -> 'two_point_laurent.TwoPointLaurentExpansion':
    """
    Two-point Laurent expansion around an inner set that may hold poles
    besides z1 and z2.

    The closed forms cover poles at the expansion points only. Once another
    pole is enclosed, every b_n and c_n comes from its contour integral and
    the singular part no longer terminates after max(m1, m2) terms.

    Raises:
        PoleSpecError: an inner pole is not a pole of f, or spec does not
        regularize f at the expansion points
    """
    z1, z2 = complex(z1), complex(z2)
    extra = enclosed_poles(f, z1, z2, inner_poles)
    if not extra:
        return two_point_laurent.laurent_expand(f, z1, z2, spec, N)
    _check_order(N)
    two_point_taylor.check_points(z1, z2)
    if spec is None:
        spec = two_point_laurent.default_spec(f, z1, z2)
    else:
        two_point_laurent.regular_coefficients(f, z1, spec.m1, 0)
        two_point_laurent.regular_coefficients(f, z2, spec.m2, 0)
    b_pairs = tuple((oracle_b(f, z1, z2, n, extra), oracle_b(f, z2, z1, n, extra)) for n in range(N))
    c_pairs = tuple((oracle_c(f, z1, z2, n, extra), oracle_c(f, z2, z1, n, extra)) for n in range(N))
    logger.info(f"Laurent coefficients of {f.text} from contour integrals, inner poles {extra}")
    return two_point_laurent.TwoPointLaurentExpansion(z1, z2, spec, b_pairs, c_pairs)


def taylor_laurent_with_inner_poles(f: FunctionModel, z1: complex, z2: complex, m: Optional[int], N: int,
                                    inner_poles: Optional[Sequence[complex]] = None
                                    ) -> 'two_point_laurent.TaylorLaurentExpansion':
    """
    Taylor-Laurent expansion with poles besides z1 enclosed; see
    laurent_with_inner_poles.

    Raises:
        PoleAtExpansionPointError: f has a pole at z2
        PoleSpecError: m does not regularize f at z1
    """
    z1, z2 = complex(z1), complex(z2)
    extra = enclosed_poles(f, z1, z2, inner_poles)
    if not extra:
        return two_point_laurent.taylor_laurent_expand(f, z1, z2, m, N)
    _check_order(N)
    two_point_taylor.check_points(z1, z2)
    _regular_points(f, z2)
    if m is None:
        m = f.pole_order_at(z1)
    else:
        two_point_laurent.regular_coefficients(f, z1, m, 0)
    d_pairs = tuple((oracle_d(f, z1, z2, n, extra), oracle_d(f, z2, z1, n, extra)) for n in range(N))
    e_terms = tuple(oracle_e(f, z1, z2, n, extra) for n in range(N))
    logger.info(f"Taylor-Laurent coefficients of {f.text} from contour integrals, inner poles {extra}")
    return two_point_laurent.TaylorLaurentExpansion(z1, z2, m, d_pairs, e_terms)


# ------------------------------------------------------------------------
# Remainders
# ------------------------------------------------------------------------

REMAINDER_KINDS = ('taylor', 'laurent', 'taylor-laurent')


def _outer_term(f, z1, z2, N, z, inside, outside):
    fn = lambda w: f.evaluate(w) / (((w - z1) * (w - z2)) ** N * (w - z))
    return _oracle(fn, inside, outside, (z1 + z2) / 2) * ((z - z1) * (z - z2)) ** N


def _partial_sum(kind: str, f: FunctionModel, z1, z2, N, z, inner) -> complex:
    """Partial sum used by the cross-check: explicit formulas, or oracle coefficients with inner poles."""
    if kind == 'taylor':
        return two_point_taylor.evaluate(two_point_taylor.expand(f, z1, z2, N), z)
    if kind == 'laurent':
        return two_point_laurent.evaluate_laurent(laurent_with_inner_poles(f, z1, z2, None, N, inner), z)
    return two_point_laurent.evaluate_tl(taylor_laurent_with_inner_poles(f, z1, z2, None, N, inner), z)


def oracle_remainder(kind: str, f: FunctionModel, z1: complex, z2: complex, N: int, z: complex, *,
                     inner_poles: Optional[Sequence[complex]] = None, check: bool = True) -> complex:
    """
    Remainder r_N(z) from its contour-integral representation.

    With check=True the value is compared with f(z) minus the partial sum.

    Raises:
        NoValidContourError: z cannot be separated as the topology requires
        OracleMismatchError: the cross-check fails
    """
    if kind not in REMAINDER_KINDS:
        raise UsageError(f"unknown remainder kind '{kind}'")
    z1, z2, z = complex(z1), complex(z2), complex(z)
    if N < 1:
        raise UsageError(f"expansion order must be at least 1, got {N}")
    _regular_points(f, z)

    if kind == 'taylor':
        _regular_points(f, z1, z2)
        inner, outer = [], f.pole_locations
        value = _outer_term(f, z1, z2, N, z, [z1, z2, z], outer)
    elif kind == 'laurent':
        inner, outer = split_poles(f, [z1, z2], inner_poles)
        value = _outer_term(f, z1, z2, N, z, [z1, z2, z] + inner, outer)
        fn = lambda w: ((w - z1) * (w - z2)) ** N * f.evaluate(w) / (w - z)
        value -= _oracle(fn, [z1, z2] + inner, [z] + outer, (z1 + z2) / 2) / ((z - z1) * (z - z2)) ** N
    else:
        _regular_points(f, z2)
        inner, outer = split_poles(f, [z1, z2], inner_poles)
        value = _outer_term(f, z1, z2, N, z, [z1, z2, z] + inner, outer)
        fn = lambda w: (w - z1) ** N * f.evaluate(w) / ((w - z2) ** N * (w - z))
        value -= _oracle(fn, [z1] + inner, [z2, z] + outer, z1) * ((z - z2) / (z - z1)) ** N

    if check:
        fz = f.evaluate(z)
        s = _partial_sum(kind, f, z1, z2, N, z, inner)
        direct = fz - s
        bound = settings.REMAINDER_CHECK_TOL * max(1.0, abs(fz), abs(s))
        if abs(value - direct) > bound:
            raise OracleMismatchError(
                f"{kind} remainder oracle {value} differs from f(z) - S_N(z) = {direct} at z={z}")
    return value
