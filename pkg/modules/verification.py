#!/usr/bin/env python
"""
Verification Suite Module

Runs the built-in invariant checks that tie the explicit coefficient
formulas to their contour-integral definitions, the partial sums to the
remainder integrals, and the regions to their defining curves. Each check
produces a row; the suite fails if any row fails.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from . import contour_oracle, regions, settings, two_point_laurent, two_point_taylor
from .errors import NoValidContourError, TwoPointError
from .expressions import FunctionModel
from .jets import derivatives

logger = logging.getLogger('verification')

CORPUS = (
    'exp(z)',
    'sin(z)',
    'z^5-3*z+1',
    '1/(1+z^2)',
    'exp(z)/(z+1)',
    '1/((z^2-1)*(z^2-4))',
    '1/((z-1)^2*(z+2))',
)

MAX_ORACLE_INDEX = 8
RECONSTRUCTION_ORDERS = (2, 5, 10)


@dataclass
class CheckResult:
    function: str
    family: str
    check: str
    passed: bool
    max_error: float
    detail: str = ''


@dataclass
class VerificationReport:
    results: List[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> int:
        return sum(1 for r in self.results if r.passed)

    @property
    def failed(self) -> int:
        return sum(1 for r in self.results if not r.passed)

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def add(self, result: CheckResult):
        level = logging.DEBUG if result.passed else logging.WARNING
        logger.log(level, f"{result.function} [{result.family}] {result.check}: "
                          f"{'pass' if result.passed else 'FAIL'} (max error {result.max_error:.3g})")
        self.results.append(result)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([r.__dict__ for r in self.results],
                            columns=['function', 'family', 'check', 'passed', 'max_error', 'detail'])

    def to_dict(self) -> Dict:
        return {
            'passed': self.passed,
            'failed': self.failed,
            'checks': [
                {'function': r.function, 'family': r.family, 'check': r.check,
                 'passed': r.passed, 'max_error': r.max_error, 'detail': r.detail}
                for r in self.results
            ],
        }


def relative_error(x: complex, y: complex) -> float:
    """|x - y| / max(|x|, |y|), with differences below the absolute floor counted as zero."""
    diff = abs(x - y)
    if diff <= settings.VERIFY_ABS_FLOOR:
        return 0.0
    return diff / max(abs(x), abs(y))


def agrees(x: complex, y: complex, tol: float) -> bool:
    return abs(x - y) <= tol * max(abs(x), abs(y)) + settings.VERIFY_ABS_FLOOR


# ------------------------------------------------------------------------
# Coefficient vs oracle tables (also used by --verify on the expand commands)
# ------------------------------------------------------------------------

def coefficient_errors(family: str, f: FunctionModel, z1: complex, z2: complex, N: int,
                       inner_poles: Optional[Sequence[complex]] = None) -> List[Dict]:
    """Per-coefficient oracle relative errors for n < min(N, 9)."""
    rows: List[Dict] = []
    top = min(N, MAX_ORACLE_INDEX + 1)
    if family == 'taylor':
        e = two_point_taylor.expand(f, z1, z2, top)
        for n, (fwd, rev) in enumerate(e.pairs):
            rows.append({'n': n, 'coefficient': 'a',
                         'fwd_error': relative_error(fwd, contour_oracle.oracle_a(f, z1, z2, n)),
                         'rev_error': relative_error(rev, contour_oracle.oracle_a(f, z2, z1, n))})
    elif family == 'laurent':
        e = two_point_laurent.laurent_expand(f, z1, z2, None, top)
        for n, (fwd, rev) in enumerate(e.b_pairs):
            rows.append({'n': n, 'coefficient': 'b',
                         'fwd_error': relative_error(fwd, contour_oracle.oracle_b(f, z1, z2, n, inner_poles)),
                         'rev_error': relative_error(rev, contour_oracle.oracle_b(f, z2, z1, n, inner_poles))})
        for n, (fwd, rev) in enumerate(e.c_pairs[:e.spec.M]):
            rows.append({'n': n, 'coefficient': 'c',
                         'fwd_error': relative_error(fwd, contour_oracle.oracle_c(f, z1, z2, n, inner_poles)),
                         'rev_error': relative_error(rev, contour_oracle.oracle_c(f, z2, z1, n, inner_poles))})
    elif family == 'taylor-laurent':
        e = two_point_laurent.taylor_laurent_expand(f, z1, z2, None, top)
        for n, (fwd, rev) in enumerate(e.d_pairs):
            rows.append({'n': n, 'coefficient': 'd',
                         'fwd_error': relative_error(fwd, contour_oracle.oracle_d(f, z1, z2, n, inner_poles)),
                         'rev_error': relative_error(rev, contour_oracle.oracle_d(f, z2, z1, n, inner_poles))})
        for n, value in enumerate(e.e_terms[:e.m]):
            rows.append({'n': n, 'coefficient': 'e',
                         'fwd_error': relative_error(value, contour_oracle.oracle_e(f, z1, z2, n, inner_poles)),
                         'rev_error': None})
    else:
        raise ValueError(f"unknown family {family}")
    return rows


# ------------------------------------------------------------------------
# Reconstruction against the remainder integral
# ------------------------------------------------------------------------

def reconstruction_errors(family: str, f: FunctionModel, z1: complex, z2: complex, N: int,
                          inner_poles: Optional[Sequence[complex]] = None, count: int = 8,
                          seed: int = 0) -> List[Dict]:
    """
    Relative gap between f(z) - S_N(z) and the remainder integral at
    interior points.

    This replaces the closed-form comparison when poles other than z1, z2
    are enclosed, because the coefficients then are contour integrals
    themselves. Points that no circle family can separate are passed over.

    Raises:
        NoValidContourError: no sampled point admits a remainder contour
    """
    z1, z2 = complex(z1), complex(z2)
    region = regions.region_for(family, f, z1, z2, inner_poles)
    if family == 'laurent':
        e = contour_oracle.laurent_with_inner_poles(f, z1, z2, None, N, inner_poles)
        partial = lambda z: two_point_laurent.evaluate_laurent(e, z)
    elif family == 'taylor-laurent':
        e = contour_oracle.taylor_laurent_with_inner_poles(f, z1, z2, None, N, inner_poles)
        partial = lambda z: two_point_laurent.evaluate_tl(e, z)
    else:
        e = two_point_taylor.expand(f, z1, z2, N)
        partial = lambda z: two_point_taylor.evaluate(e, z)
    rows: List[Dict] = []
    for z in regions.sample_interior(region, 4 * count, np.random.default_rng(seed)):
        try:
            r = contour_oracle.oracle_remainder(family, f, z1, z2, N, z, inner_poles=inner_poles, check=False)
        except NoValidContourError:
            logger.debug(f"No remainder contour for z={z}, skipping")
            continue
        fz = f.evaluate(z)
        s = partial(z)
        rows.append({'z': complex(z), 'error': abs(fz - s - r) / max(1.0, abs(fz), abs(s))})
        if len(rows) == count:
            break
    if not rows:
        raise NoValidContourError(f"no interior point of the {family} region admits a remainder contour")
    return rows


# ------------------------------------------------------------------------
# Suite
# ------------------------------------------------------------------------

def families_for(f: FunctionModel, z1: complex, z2: complex) -> List[Tuple[str, complex, complex]]:
    """Expansion families that apply, with the pole-carrying point first for Taylor-Laurent."""
    p1, p2 = f.pole_order_at(z1), f.pole_order_at(z2)
    if p1 == 0 and p2 == 0:
        return [('taylor', z1, z2)]
    families = [('laurent', z1, z2)]
    if p1 > 0 and p2 == 0:
        families.append(('taylor-laurent', z1, z2))
    elif p2 > 0 and p1 == 0:
        families.append(('taylor-laurent', z2, z1))
    return families


def _partial_sum(family: str, f: FunctionModel, z1, z2, N):
    if family == 'taylor':
        e = two_point_taylor.expand(f, z1, z2, N)
        return lambda z: two_point_taylor.evaluate(e, z)
    if family == 'laurent':
        e = two_point_laurent.laurent_expand(f, z1, z2, None, N)
        return lambda z: two_point_laurent.evaluate_laurent(e, z)
    e = two_point_laurent.taylor_laurent_expand(f, z1, z2, None, N)
    return lambda z: two_point_laurent.evaluate_tl(e, z)


def _guarded(report: VerificationReport, text: str, family: str, check: str, fn):
    try:
        fn()
    except TwoPointError as e:
        report.add(CheckResult(text, family, check, False, float('inf'), str(e)))


def _check_coefficients(report, text, family, f, z1, z2, N, tol):
    rows = coefficient_errors(family, f, z1, z2, N)
    errors = [err for row in rows for err in (row['fwd_error'], row['rev_error']) if err is not None]
    worst = max(errors, default=0.0)
    report.add(CheckResult(text, family, 'coefficients match contour integrals', worst <= tol, worst,
                           f"{len(rows)} coefficient rows"))


def _check_reconstruction(report, text, family, f, z1, z2, region, rng, points):
    samples = regions.sample_interior(region, points, rng)
    worst = 0.0
    for N in RECONSTRUCTION_ORDERS:
        partial = _partial_sum(family, f, z1, z2, N)
        for z in samples:
            fz = f.evaluate(z)
            s = partial(z)
            r = contour_oracle.oracle_remainder(family, f, z1, z2, N, z, check=False)
            worst = max(worst, abs(fz - s - r) / max(1.0, abs(fz), abs(s)))
    passed = worst <= settings.REMAINDER_CHECK_TOL
    report.add(CheckResult(text, family, 'f = partial sum + remainder integral', passed, worst,
                           f"{points} points, N in {list(RECONSTRUCTION_ORDERS)}"))


def _check_hermite(report, text, f, z1, z2, N, tol):
    e = two_point_taylor.expand(f, z1, z2, N)
    residuals = two_point_taylor.hermite_residuals(f, e)
    scales = np.concatenate([np.abs(derivatives(f.expr, p, N - 1)) for p in (z1, z2)])
    worst = float(np.max(np.array(residuals) / np.maximum(1.0, scales)))
    report.add(CheckResult(text, 'taylor', 'Hermite interpolation residuals', worst <= 100 * tol, worst))


def _check_symmetry(report, text, f, z1, z2, N, rng, region):
    forward = two_point_taylor.expand(f, z1, z2, N)
    backward = two_point_taylor.expand(f, z2, z1, N)
    samples = regions.sample_interior(region, 20, rng)
    a = two_point_taylor.evaluate(forward, samples)
    b = two_point_taylor.evaluate(backward, samples)
    worst = float(np.max(np.abs(a - b) / np.maximum(1.0, np.abs(a))))
    report.add(CheckResult(text, 'taylor', 'swapping z1 and z2 leaves the sum unchanged', worst <= 1e-12, worst))


def _check_confluent(report, text, f, z0, tol):
    jets = two_point_taylor.ab_confluent(f, z0, 6, method='jets')
    contour = two_point_taylor.ab_confluent(f, z0, 6, method='contour')
    worst = max(max(relative_error(x[0], y[0]), relative_error(x[1], y[1]))
                for x, y in zip(jets.terms, contour.terms))
    report.add(CheckResult(text, 'taylor', 'confluent A/B from jets matches contour integrals', worst <= tol, worst))


def _check_reduction(report, text, f, z1, z2, tol):
    """With no poles at the expansion points, Laurent and Taylor-Laurent coefficients reduce to Taylor ones."""
    worst = 0.0
    spec = two_point_laurent.PoleSpec(0, 0)
    for n in range(6):
        a = two_point_taylor.coeff_a(f, z1, z2, n)
        worst = max(worst,
                    relative_error(a, two_point_laurent.coeff_b(f, z1, z2, spec, n)),
                    relative_error(a, two_point_laurent.coeff_d(f, z1, z2, 0, n)[0]))
    report.add(CheckResult(text, 'taylor', 'Laurent coefficients reduce to Taylor ones', worst <= tol, worst))


def _check_regularized(report, text, family, f, z1, z2):
    g = two_point_laurent.regularize(f, z1, z2, None, family=family)
    report.add(CheckResult(text, family, 'regularized function is analytic at the expansion points', True, 0.0,
                           g.text))


def _check_boundary(report, text, family, region):
    worst = 0.0
    for label, _, z in regions.boundary_curves(region, 256):
        if label.startswith('apollonius') or label.startswith('bisector'):
            target = region.r2
            value = np.abs(z - region.z2) / np.abs(z - region.z1)
        else:
            target = region.r if isinstance(region, regions.CassiniOval) else (
                region.r2 if label.startswith('inner') else region.r1)
            value = regions.cassini_value(region.z1, region.z2, z)
        if z.size:
            worst = max(worst, float(np.max(np.abs(value - target) / max(1.0, target))))
    report.add(CheckResult(text, family, 'boundary samples lie on their curves', worst <= 1e-10, worst))


def run_suite(functions: Optional[Sequence[str]] = None, z1: complex = -1, z2: complex = 1, N: int = 8,
              seed: int = 0, tol: Optional[float] = None, points: int = 20) -> VerificationReport:
    """
    Run every applicable check for each function.

    Args:
        functions: expression texts, the built-in corpus by default
        z1, z2: expansion points
        N: expansion order for the coefficient checks
        seed: seed for the interior sample points
        tol: relative tolerance for coefficient agreement
        points: interior points per reconstruction check
    """
    tol = settings.VERIFY_TOL if tol is None else tol
    z1, z2 = complex(z1), complex(z2)
    report = VerificationReport()
    rng = np.random.default_rng(seed)
    for text in functions or CORPUS:
        try:
            f = FunctionModel.from_text(text)
        except TwoPointError as e:
            report.add(CheckResult(text, '-', 'parse and locate poles', False, float('inf'), str(e)))
            continue
        logger.info(f"Verifying {text} at ({z1}, {z2})")
        for family, a, b in families_for(f, z1, z2):
            region = regions.region_for(family, f, a, b)
            _guarded(report, text, family, 'coefficients match contour integrals',
                     lambda: _check_coefficients(report, text, family, f, a, b, N, tol))
            _guarded(report, text, family, 'f = partial sum + remainder integral',
                     lambda: _check_reconstruction(report, text, family, f, a, b, region, rng, points))
            _guarded(report, text, family, 'boundary samples lie on their curves',
                     lambda: _check_boundary(report, text, family, region))
            if family == 'taylor':
                _guarded(report, text, family, 'Hermite interpolation residuals',
                         lambda: _check_hermite(report, text, f, a, b, min(N, 6), tol))
                _guarded(report, text, family, 'swapping z1 and z2 leaves the sum unchanged',
                         lambda: _check_symmetry(report, text, f, a, b, N, rng, region))
                _guarded(report, text, family, 'confluent A/B from jets matches contour integrals',
                         lambda: _check_confluent(report, text, f, a, tol))
                _guarded(report, text, family, 'Laurent coefficients reduce to Taylor ones',
                         lambda: _check_reduction(report, text, f, a, b, tol))
            else:
                _guarded(report, text, family, 'regularized function is analytic at the expansion points',
                         lambda: _check_regularized(report, text, family, f, a, b))
    logger.info(f"Verification finished: {report.passed} passed, {report.failed} failed")
    return report
