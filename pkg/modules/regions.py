#!/usr/bin/env python
"""
Convergence Regions Module

This module builds the convergence regions of the three expansion families
from the finite pole set of a function:
- the Cassini oval |(z-z1)(z-z2)| < r of the two-point Taylor expansion,
- the Cassini annulus r2 < |(z-z1)(z-z2)| < r1 of the two-point Laurent expansion,
- the oval intersected with the Apollonius set |z-z2| < r2 |z-z1| for the
  Taylor-Laurent expansion.

It also samples region boundaries for plotting and draws interior points.
"""

import logging
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from .errors import EmptyRegionError, PoleAtExpansionPointError, PoleSpecError, UsageError
from .expressions import FunctionModel

logger = logging.getLogger('regions')

TOPOLOGY_REL = 1e-12
POLE_MATCH = 1e-9


def _near(a: complex, b: complex) -> bool:
    return abs(a - b) <= POLE_MATCH * max(1.0, abs(b))


def cassini_value(z1: complex, z2: complex, z):
    return np.abs((z - z1) * (z - z2))


def cassini_topology(z1: complex, z2: complex, r: float) -> str:
    """one-lobe, lemniscate or two-lobes; unbounded for r = inf and empty for r = 0."""
    if math.isinf(r):
        return 'unbounded'
    if r <= 0:
        return 'empty'
    d2 = abs(z1 - z2) ** 2
    if abs(4 * r - d2) <= TOPOLOGY_REL * max(4 * r, d2):
        return 'lemniscate'
    return 'one-lobe' if 4 * r > d2 else 'two-lobes'


@dataclass(frozen=True)
class CassiniOval:
    z1: complex
    z2: complex
    r: float
    poles: Tuple[complex, ...] = ()

    @property
    def topology(self) -> str:
        return cassini_topology(self.z1, self.z2, self.r)

    @property
    def unbounded(self) -> bool:
        return math.isinf(self.r)

    def to_dict(self) -> Dict:
        return {'family': 'taylor', 'r': self.r, 'topology': self.topology}


@dataclass(frozen=True)
class CassiniAnnulus:
    z1: complex
    z2: complex
    r1: float
    r2: float
    poles: Tuple[complex, ...] = ()

    def to_dict(self) -> Dict:
        return {
            'family': 'laurent',
            'r1': self.r1,
            'r2': self.r2,
            'outer_topology': cassini_topology(self.z1, self.z2, self.r1),
            'inner_topology': cassini_topology(self.z1, self.z2, self.r2),
        }


@dataclass(frozen=True)
class TaylorLaurentRegion:
    """
    Oval |(z-z1)(z-z2)| < r1 intersected with |z-z2| < r2 |z-z1|.

    r2 = inf marks the vacuous Apollonius constraint (the only inner pole is z1).
    """
    z1: complex
    z2: complex
    r1: float
    r2: float
    poles: Tuple[complex, ...] = ()

    @property
    def vacuous(self) -> bool:
        return math.isinf(self.r2)

    @property
    def apollonius(self) -> Optional[Dict]:
        """Circle center/radius/side, a half-plane marker when r2 = 1, None when vacuous."""
        if self.vacuous:
            return None
        r2 = self.r2
        if abs(r2 - 1) <= TOPOLOGY_REL:
            return {'kind': 'half-plane', 'center': None, 'radius': None, 'side': 'closer-to-z2'}
        center = self.z1 + (self.z2 - self.z1) / (1 - r2 ** 2)
        radius = abs(self.z1 - self.z2) * r2 / abs(r2 ** 2 - 1)
        return {'kind': 'circle', 'center': center, 'radius': radius,
                'side': 'interior' if r2 < 1 else 'exterior'}

    def to_dict(self) -> Dict:
        return {
            'family': 'taylor-laurent',
            'r1': self.r1,
            'r2': self.r2,
            'topology': cassini_topology(self.z1, self.z2, self.r1),
            'vacuous_apollonius': self.vacuous,
            'apollonius': self.apollonius,
        }


Region = Union[CassiniOval, CassiniAnnulus, TaylorLaurentRegion]


# ------------------------------------------------------------------------
# Construction
# ------------------------------------------------------------------------

def taylor_region(f: FunctionModel, z1: complex, z2: complex) -> CassiniOval:
    """
    Raises:
        EmptyRegionError: a pole sits at an expansion point (r = 0)
    """
    z1, z2 = complex(z1), complex(z2)
    locations = f.pole_locations
    for s in locations:
        if _near(s, z1) or _near(s, z2):
            raise EmptyRegionError(
                f"pole at expansion point {s}: the Taylor region is empty, use a Laurent variant")
    r = min((float(abs((s - z1) * (s - z2))) for s in locations), default=math.inf)
    return CassiniOval(z1, z2, r, tuple(locations))


def _inner_outer(f: FunctionModel, inner_poles: Optional[Sequence[complex]], always_inner: Sequence[complex]):
    inner: List[complex] = []
    for s in inner_poles or []:
        match = [p for p in f.pole_locations if _near(p, complex(s))]
        if not match:
            raise PoleSpecError(f"{s} is not a pole of {f.text}")
        inner.append(match[0])
    for p in f.pole_locations:
        if any(_near(p, a) for a in always_inner) and not any(_near(p, q) for q in inner):
            inner.append(p)
    outer = [p for p in f.pole_locations if not any(_near(p, q) for q in inner)]
    return inner, outer


def laurent_region(f: FunctionModel, z1: complex, z2: complex,
                   inner_poles: Optional[Sequence[complex]] = None) -> CassiniAnnulus:
    """
    Raises:
        EmptyRegionError: r2 >= r1
    """
    z1, z2 = complex(z1), complex(z2)
    inner, outer = _inner_outer(f, inner_poles, (z1, z2))
    r1 = min((float(abs((s - z1) * (s - z2))) for s in outer), default=math.inf)
    r2 = max((float(abs((s - z1) * (s - z2))) for s in inner), default=0.0)
    if r2 >= r1:
        raise EmptyRegionError(f"empty Cassini annulus: r2 = {r2:g} >= r1 = {r1:g}")
    return CassiniAnnulus(z1, z2, r1, r2, tuple(f.pole_locations))


def taylor_laurent_region(f: FunctionModel, z1: complex, z2: complex,
                          inner_poles: Optional[Sequence[complex]] = None) -> TaylorLaurentRegion:
    z1, z2 = complex(z1), complex(z2)
    if f.pole_order_at(z2) > 0:
        raise PoleAtExpansionPointError(f"{f.text} has a pole at {z2}; the Taylor-Laurent form needs f regular there")
    inner, outer = _inner_outer(f, inner_poles, (z1,))
    if any(_near(s, z2) for s in inner):
        raise PoleSpecError(f"{z2} cannot be an inner pole")
    r1 = min((float(abs((s - z1) * (s - z2))) for s in outer), default=math.inf)
    ratios = [float(abs((s - z2) / (s - z1))) for s in inner if not _near(s, z1)]
    r2 = min(ratios, default=math.inf)
    if r1 <= 0 or r2 <= 0:
        raise EmptyRegionError("empty Taylor-Laurent region")
    if math.isinf(r2):
        logger.info("Only inner pole is z1, the Apollonius constraint is vacuous")
    return TaylorLaurentRegion(z1, z2, r1, r2, tuple(f.pole_locations))


def region_for(family: str, f: FunctionModel, z1: complex, z2: complex,
               inner_poles: Optional[Sequence[complex]] = None) -> Region:
    if family == 'taylor':
        return taylor_region(f, z1, z2)
    if family == 'laurent':
        return laurent_region(f, z1, z2, inner_poles)
    if family == 'taylor-laurent':
        return taylor_laurent_region(f, z1, z2, inner_poles)
    raise UsageError(f"unknown expansion family '{family}'")


# ------------------------------------------------------------------------
# Queries
# ------------------------------------------------------------------------

def _contains_array(region: Region, z: np.ndarray) -> np.ndarray:
    p = cassini_value(region.z1, region.z2, z)
    if isinstance(region, CassiniOval):
        inside = p < region.r
    elif isinstance(region, CassiniAnnulus):
        inside = (p > region.r2) & (p < region.r1)
    else:
        inside = p < region.r1
        if not region.vacuous:
            inside &= np.abs(z - region.z2) < region.r2 * np.abs(z - region.z1)
    for s in region.poles:
        inside &= np.abs(z - s) > 0
    return inside


def contains(region: Region, z: complex) -> bool:
    """Strict membership; pole points are never members."""
    return bool(_contains_array(region, np.array([complex(z)]))[0])


def describe(region: Region) -> Dict:
    """Region parameters plus the topology of every constituent curve."""
    info = region.to_dict()
    curves = []
    if isinstance(region, CassiniOval):
        curves.append(('oval', region.topology))
    elif isinstance(region, CassiniAnnulus):
        curves.append(('outer', cassini_topology(region.z1, region.z2, region.r1)))
        curves.append(('inner', cassini_topology(region.z1, region.z2, region.r2)))
    else:
        curves.append(('oval', cassini_topology(region.z1, region.z2, region.r1)))
        ap = region.apollonius
        curves.append(('apollonius', 'vacuous' if ap is None else ap['kind']))
    info['curves'] = [{'label': label, 'shape': shape} for label, shape in curves]
    return info


# ------------------------------------------------------------------------
# Boundaries
# ------------------------------------------------------------------------

def _ordered(points: np.ndarray, pivot: complex) -> Tuple[np.ndarray, np.ndarray]:
    angles = np.angle(points - pivot)
    order = np.argsort(angles, kind='stable')
    return angles[order], points[order]


def _dedupe(points: np.ndarray) -> np.ndarray:
    kept: List[complex] = []
    for p in points:
        if all(abs(p - q) > 1e-12 * max(1.0, abs(q)) for q in kept):
            kept.append(p)
    return np.array(kept, dtype=complex)


def cassini_curve(z1: complex, z2: complex, r: float, count: int, label: str = 'oval'):
    """
    Points of |(z-z1)(z-z2)| = r as labeled, angularly ordered pieces.

    Both roots of (z-z1)(z-z2) = r e^(i theta) are taken for count/2 values
    of theta; the grid starts where the discriminant has phase pi, so the
    lemniscate sample hits the center.
    """
    if count < 8:
        raise UsageError(f"boundary sample count must be at least 8, got {count}")
    if math.isinf(r) or r <= 0:
        return []
    s = z1 + z2
    d = z1 - z2
    half = count // 2
    theta0 = float(np.angle(-d * d)) if d != 0 else 0.0
    theta = theta0 + 2 * np.pi * np.arange(half) / half
    target = r * np.exp(1j * theta)
    root = np.sqrt(d * d + 4 * target)
    # larger root first, the other from the product of the roots
    plus = np.where(np.abs(s + root) >= np.abs(s - root), s + root, s - root) / 2
    product = z1 * z2 - target
    safe = np.where(plus == 0, 1, plus)
    minus = np.where(plus == 0, (s - root) / 2, product / safe)
    points = _dedupe(np.concatenate([plus, minus]))

    topology = cassini_topology(z1, z2, r)
    center = s / 2
    if topology == 'one-lobe':
        angles, ordered = _ordered(points, center)
        return [(label, angles, ordered)]
    near_first = np.abs(points - z1) <= np.abs(points - z2)
    pieces = []
    for mask, focus, suffix in ((near_first, z1, 'z1'), (~near_first, z2, 'z2')):
        lobe = points[mask]
        if lobe.size == 0:
            continue
        pivot = focus if topology == 'lemniscate' else complex(np.mean(lobe))
        angles, ordered = _ordered(lobe, pivot)
        pieces.append((f"{label}_lobe_{suffix}", angles, ordered))
    return pieces


def _apollonius_curve(region: TaylorLaurentRegion, count: int):
    ap = region.apollonius
    if ap is None:
        return []
    if ap['kind'] == 'circle':
        theta = 2 * np.pi * np.arange(count) / count
        return [('apollonius', theta, ap['center'] + ap['radius'] * np.exp(1j * theta))]
    mid = (region.z1 + region.z2) / 2
    direction = 1j * (region.z2 - region.z1) / abs(region.z2 - region.z1)
    extent = 2 * max(abs(region.z1 - region.z2), math.sqrt(region.r1) if not math.isinf(region.r1) else 0.0)
    t = np.linspace(-extent, extent, count)
    return [('bisector', t, mid + t * direction)]


def boundary_curves(region: Region, count: int):
    if isinstance(region, CassiniOval):
        return cassini_curve(region.z1, region.z2, region.r, count, 'oval')
    if isinstance(region, CassiniAnnulus):
        return (cassini_curve(region.z1, region.z2, region.r1, count, 'outer')
                + cassini_curve(region.z1, region.z2, region.r2, count, 'inner'))
    return cassini_curve(region.z1, region.z2, region.r1, count, 'oval') + _apollonius_curve(region, count)


def boundary(region: Region, count: int) -> List[complex]:
    """All boundary sample points, curve by curve."""
    points: List[complex] = []
    for _, _, z in boundary_curves(region, count):
        points.extend(complex(p) for p in z)
    return points


def boundary_frame(region: Region, count: int) -> pd.DataFrame:
    """Boundary samples as rows of curve_label, theta, re, im."""
    frames = [
        pd.DataFrame({'curve_label': label, 'theta': theta, 're': z.real, 'im': z.imag})
        for label, theta, z in boundary_curves(region, count)
    ]
    if not frames:
        return pd.DataFrame(columns=['curve_label', 'theta', 're', 'im'])
    return pd.concat(frames, ignore_index=True)


# ------------------------------------------------------------------------
# Interior sampling
# ------------------------------------------------------------------------

def unbounded_sampling_radius(z1: complex, z2: complex) -> float:
    d = abs(complex(z1) - complex(z2))
    return d * d / 4 + 1.0


def _shrunk(region: Region, margin: float) -> Region:
    if isinstance(region, CassiniOval):
        return CassiniOval(region.z1, region.z2, region.r * (1 - margin), region.poles)
    if isinstance(region, CassiniAnnulus):
        return CassiniAnnulus(region.z1, region.z2, region.r1 * (1 - margin), region.r2 * (1 + margin), region.poles)
    r2 = region.r2 if region.vacuous else region.r2 * (1 - margin)
    return TaylorLaurentRegion(region.z1, region.z2, region.r1 * (1 - margin), r2, region.poles)


def sample_interior(region: Region, count: int, rng=None, margin: float = 0.05,
                    max_attempts: int = 200) -> np.ndarray:
    """
    `count` points strictly inside the region, kept a relative margin away
    from every boundary curve and from the poles.

    Unbounded regions are sampled inside the oval |(z-z1)(z-z2)| < d^2/4 + 1,
    d = |z1 - z2|. Far out the terms of a partial sum grow like
    |(z-z1)(z-z2)|^n and cancel, so double precision cannot resolve them.

    Raises:
        EmptyRegionError: rejection sampling found too few points
    """
    rng = rng if rng is not None else np.random.default_rng(0)
    inner = _shrunk(region, margin)
    z1, z2 = region.z1, region.z2
    outer_r = region.r if isinstance(region, CassiniOval) else region.r1
    d = abs(z1 - z2)
    cap = unbounded_sampling_radius(z1, z2) if math.isinf(outer_r) else math.inf
    radius = math.sqrt(min(outer_r, cap) + d * d / 4)
    center = (z1 + z2) / 2
    accepted: List[complex] = []
    for _ in range(max_attempts):
        u = rng.uniform(-radius, radius, size=(4 * count, 2))
        candidates = center + u[:, 0] + 1j * u[:, 1]
        keep = _contains_array(inner, candidates)
        keep &= cassini_value(z1, z2, candidates) < cap
        for s in region.poles:
            keep &= np.abs(candidates - s) > margin * max(1.0, d)
        accepted.extend(candidates[keep].tolist())
        if len(accepted) >= count:
            return np.array(accepted[:count], dtype=complex)
    raise EmptyRegionError(f"could not sample {count} interior points")
