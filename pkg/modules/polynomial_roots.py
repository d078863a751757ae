#!/usr/bin/env python
"""
Polynomial root finder for denominator singularities.

Simultaneous Aberth-Ehrlich iteration on all roots at once, with random
perturbation restarts, followed by a multiplicity pass that merges root
clusters and polishes each merged root with Newton steps on the derivative
of matching order. Coefficients are in ascending order, as in
numpy.polynomial.polynomial.
"""

import logging
from typing import List, Tuple

import numpy as np
from numpy.polynomial import polynomial as P

from . import settings
from .errors import RootFindingError

logger = logging.getLogger('polynomial_roots')


def trim_coefficients(coeffs) -> np.ndarray:
    """Drop vanishing leading (highest degree) coefficients."""
    c = np.asarray(coeffs, dtype=complex)
    if c.size == 0:
        return np.zeros(1, dtype=complex)
    scale = np.max(np.abs(c))
    if scale == 0:
        return np.zeros(1, dtype=complex)
    last = c.size - 1
    while last > 0 and abs(c[last]) <= 1e-14 * scale:
        last -= 1
    return c[:last + 1]


def _initial_guesses(c: np.ndarray, rng=None) -> np.ndarray:
    n = c.size - 1
    radius = abs(c[0] / c[-1]) ** (1.0 / n) if c[0] != 0 else 1.0
    radius = max(radius, 1e-3)
    offset = 0.4 if rng is None else rng.uniform(0, 2 * np.pi)
    angles = 2 * np.pi * np.arange(n) / n + offset
    guesses = radius * np.exp(1j * angles)
    if rng is not None:
        guesses *= 1 + 0.1 * rng.standard_normal(n)
    return guesses


def _backward_error(c: np.ndarray, z: np.ndarray) -> np.ndarray:
    """|p(z)| relative to the evaluation of |p| with absolute coefficients."""
    absc = np.abs(c)
    num = np.abs(P.polyval(z, c))
    den = P.polyval(np.abs(z), absc)
    return num / np.where(den > 0, den, 1.0)


def aberth(coeffs, max_iterations: int = None, rng=None) -> Tuple[np.ndarray, bool]:
    """
    Run the Aberth-Ehrlich iteration.

    Returns:
        (roots, converged)
    """
    c = trim_coefficients(coeffs)
    n = c.size - 1
    if n < 1:
        return np.zeros(0, dtype=complex), True
    if n == 1:
        return np.array([-c[0] / c[1]]), True

    max_iterations = max_iterations or settings.ROOT_MAX_ITERATIONS
    dc = P.polyder(c)
    z = _initial_guesses(c, rng)
    active = np.ones(n, dtype=bool)

    for _ in range(max_iterations):
        for k in np.nonzero(active)[0]:
            pk = P.polyval(z[k], c)
            dpk = P.polyval(z[k], dc)
            if pk == 0:
                active[k] = False
                continue
            ratio = pk / dpk if dpk != 0 else pk
            diff = z[k] - np.delete(z, k)
            if np.any(diff == 0):
                # two iterates collided, nudge this one
                z[k] += 1e-8 * (1 + abs(z[k]))
                continue
            s = np.sum(1.0 / diff)
            step = ratio / (1 - ratio * s)
            z[k] -= step
            if abs(step) <= 4 * np.finfo(float).eps * max(1.0, abs(z[k])):
                active[k] = False
        # roots already at the backward-error floor stop moving
        active &= _backward_error(c, z) > 8 * np.finfo(float).eps
        if not active.any():
            return z, True

    converged = bool(np.all(_backward_error(c, z) <= 1e-10))
    return z, converged


def _merge_clusters(roots: np.ndarray, tol: float, relative: bool) -> List[List[complex]]:
    """Single-linkage grouping of roots closer than tol."""
    groups: List[List[complex]] = []
    for r in sorted(roots, key=lambda x: (x.real, x.imag)):
        placed = False
        for g in groups:
            limit = tol * max(1.0, abs(r)) if relative else tol
            if min(abs(r - q) for q in g) <= limit:
                g.append(r)
                placed = True
                break
        if not placed:
            groups.append([r])
    return groups


def _polish_multiple(c: np.ndarray, guess: complex, multiplicity: int) -> Tuple[complex, bool]:
    """Newton on p^(k-1), then accept if p, ..., p^(k-1) all nearly vanish there."""
    target = P.polyder(c, multiplicity - 1)
    dtarget = P.polyder(target)
    z = complex(guess)
    for _ in range(20):
        d = P.polyval(z, dtarget)
        if d == 0:
            break
        step = P.polyval(z, target) / d
        z -= step
        if abs(step) <= 1e-15 * max(1.0, abs(z)):
            break
    deriv = c
    for _ in range(multiplicity):
        scale = P.polyval(max(1.0, abs(z)), np.abs(deriv))
        if abs(P.polyval(z, deriv)) > 1e-8 * max(scale, 1e-300):
            return complex(guess), False
        deriv = P.polyder(deriv)
    return z, True


def find_roots(coeffs) -> List[Tuple[complex, int]]:
    """
    All roots of a polynomial with multiplicities.

    Args:
        coeffs: ascending coefficients

    Returns:
        list of (root, multiplicity), sorted by real then imaginary part
    """
    c = trim_coefficients(coeffs)
    if c.size <= 1:
        return []

    z, converged = aberth(c)
    restart = 0
    while not converged and restart < settings.ROOT_RESTARTS:
        restart += 1
        logger.warning(f"Aberth iteration stalled on degree {c.size - 1} polynomial, restart {restart}")
        z, converged = aberth(c, rng=np.random.default_rng(restart))
    if not converged:
        raise RootFindingError(f"root finding failed to converge for degree {c.size - 1} polynomial")

    result: List[Tuple[complex, int]] = []
    for group in _merge_clusters(z, settings.MULTIPLICITY_TOL, relative=True):
        k = len(group)
        centroid = complex(np.mean(group))
        if k == 1:
            result.append((complex(group[0]), 1))
            continue
        polished, ok = _polish_multiple(c, centroid, k)
        if ok:
            result.append((polished, k))
        else:
            # genuinely distinct close roots
            result.extend((complex(r), 1) for r in group)

    merged: List[Tuple[complex, int]] = []
    for loc, order in result:
        for i, (other, other_order) in enumerate(merged):
            if abs(loc - other) <= settings.CLUSTER_TOL:
                merged[i] = (other, other_order + order)
                break
        else:
            merged.append((loc, order))
    merged.sort(key=lambda item: (round(item[0].real, 12), round(item[0].imag, 12)))
    return merged
