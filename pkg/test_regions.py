#!/usr/bin/env python3
"""
Test Cassini ovals, annuli, Taylor-Laurent regions and their boundary samples
"""

import cmath
import math
import sys

import numpy as np
import pytest

from modules.errors import EmptyRegionError, PoleSpecError, UsageError
from modules.expressions import FunctionModel
from modules.regions import (
    CassiniAnnulus,
    CassiniOval,
    TaylorLaurentRegion,
    boundary,
    boundary_curves,
    boundary_frame,
    cassini_topology,
    contains,
    describe,
    laurent_region,
    region_for,
    sample_interior,
    taylor_laurent_region,
    taylor_region,
    unbounded_sampling_radius,
)
from modules.two_point_laurent import laurent_expand, remainder_laurent, remainder_tl, taylor_laurent_expand
from modules.two_point_taylor import expand, remainder


def _model(text):
    return FunctionModel.from_text(text)


def test_taylor_region_radius_and_topology():
    region = taylor_region(_model("1/(1+z^2)"), -1, 1)
    assert abs(region.r - 2) < 1e-12
    assert region.topology == 'one-lobe'

    region = taylor_region(_model("1/(z^2-1/4)"), -1, 1)
    assert abs(region.r - 0.75) < 1e-12
    assert region.topology == 'two-lobes'
    assert not contains(region, 0)
    assert contains(region, 0.8)


def test_entire_function_region_is_unbounded():
    region = taylor_region(_model("exp(z)"), -1, 1)
    assert math.isinf(region.r)
    assert region.topology == 'unbounded'
    assert contains(region, 1e6 + 1e6j)
    assert boundary(region, 64) == []
    frame = boundary_frame(region, 64)
    assert list(frame.columns) == ['curve_label', 'theta', 're', 'im']
    assert len(frame) == 0


def test_pole_at_expansion_point_empties_taylor_region():
    with pytest.raises(EmptyRegionError):
        taylor_region(_model("1/z"), 0, 1)


def test_topology_classification():
    assert cassini_topology(-1, 1, 1.0) == 'lemniscate'
    assert cassini_topology(-1, 1, 2.0) == 'one-lobe'
    assert cassini_topology(-1, 1, 0.5) == 'two-lobes'
    assert cassini_topology(-1, 1, 0.0) == 'empty'
    assert cassini_topology(-1, 1, math.inf) == 'unbounded'


def test_strict_membership():
    assert not contains(CassiniOval(-1, 1, 1.0), 0)
    annulus = CassiniAnnulus(-1, 1, 3.0, 1.0)
    assert not contains(annulus, 0)
    assert contains(annulus, 1.5)
    assert not contains(annulus, 3.0)


def test_laurent_region():
    region = laurent_region(_model("1/((z^2-1)*(z^2-4))"), -1, 1)
    assert abs(region.r1 - 3) < 1e-12
    assert region.r2 == 0

    region = laurent_region(_model("1/(z^2-1)"), -1, 1)
    assert math.isinf(region.r1)

    region = laurent_region(_model("1/(z*(z^2-4))"), -1, 1, inner_poles=[0])
    assert abs(region.r2 - 1) < 1e-12
    assert abs(region.r1 - 3) < 1e-12


def test_laurent_region_errors():
    with pytest.raises(PoleSpecError):
        laurent_region(_model("1/(z^2-1)"), -1, 1, inner_poles=[5])
    with pytest.raises(EmptyRegionError):
        laurent_region(_model("1/(z*(z^2-4))"), -1, 1, inner_poles=[2])


def test_taylor_laurent_region():
    region = taylor_laurent_region(_model("exp(z)/(z+1)"), -1, 1)
    assert region.vacuous
    assert region.apollonius is None
    assert region.to_dict()['vacuous_apollonius'] is True

    region = taylor_laurent_region(_model("1/(z*(z+1))"), -1, 1, inner_poles=[0])
    assert abs(region.r2 - 1) < 1e-12
    assert region.apollonius['kind'] == 'half-plane'
    assert contains(region, 0.5)
    assert not contains(region, -0.5)


def test_apollonius_circle():
    ap = TaylorLaurentRegion(-1, 1, math.inf, 0.5).apollonius
    assert ap['kind'] == 'circle'
    assert abs(ap['center'] - 5 / 3) < 1e-14
    assert abs(ap['radius'] - 4 / 3) < 1e-14
    assert ap['side'] == 'interior'


def test_boundary_points_lie_on_curves():
    for region in (CassiniOval(-1, 1, 2.0), CassiniOval(-1, 1, 0.75), CassiniOval(0.5j, 2 - 1j, 1.3)):
        points = np.array(boundary(region, 128))
        assert points.size > 0
        values = np.abs((points - region.z1) * (points - region.z2))
        assert np.all(np.abs(values - region.r) <= 1e-10 * region.r)
    annulus = CassiniAnnulus(-1, 1, 3.0, 0.5)
    labels = {label for label, _, _ in boundary_curves(annulus, 64)}
    assert labels == {'outer', 'inner_lobe_z1', 'inner_lobe_z2'}


def test_lemniscate_passes_through_center():
    points = np.array(boundary(CassiniOval(-1, 1, 1.0), 256))
    assert np.min(np.abs(points)) < 1e-6


def test_two_lobes_are_separated():
    curves = {label: z for label, _, z in boundary_curves(CassiniOval(-1, 1, 0.75), 128)}
    assert set(curves) == {'oval_lobe_z1', 'oval_lobe_z2'}
    assert np.all(curves['oval_lobe_z1'].real < 0)
    assert np.all(curves['oval_lobe_z2'].real > 0)


def test_membership_is_invariant_under_rigid_motion():
    rng = np.random.default_rng(5)
    rotation = cmath.exp(0.7j)
    shift = 2 - 3j
    region = CassiniOval(-1, 1, 1.7)
    moved = CassiniOval(rotation * -1 + shift, rotation * 1 + shift, 1.7)
    for _ in range(200):
        z = complex(rng.uniform(-3, 3), rng.uniform(-3, 3))
        assert contains(region, z) == contains(moved, rotation * z + shift)


def test_sample_interior():
    region = taylor_region(_model("1/(1+z^2)"), -1, 1)
    points = sample_interior(region, 50, rng=np.random.default_rng(0))
    assert points.shape == (50,)
    assert all(contains(region, z) for z in points)

    annulus = CassiniAnnulus(-1, 1, 3.0, 0.5)
    assert all(contains(annulus, z) for z in sample_interior(annulus, 30))


def test_describe_lists_curves():
    info = describe(CassiniAnnulus(-1, 1, 3.0, 1.0))
    assert info['family'] == 'laurent'
    assert [c['label'] for c in info['curves']] == ['outer', 'inner']
    assert info['curves'][1]['shape'] == 'lemniscate'


def test_region_for_unknown_family():
    with pytest.raises(UsageError):
        region_for('fourier', _model("exp(z)"), -1, 1)


def test_unbounded_sampling_stays_near_the_points():
    region = taylor_region(_model("exp(z)"), -1, 1)
    assert region.unbounded
    cap = unbounded_sampling_radius(-1, 1)
    assert cap == 2.0
    points = sample_interior(region, 200, rng=np.random.default_rng(3))
    assert np.all(np.abs((points + 1) * (points - 1)) < cap)


def _outside_points(r, count, poles, rng):
    # |(z+1)(z-1)| between 1.2 r and 1.6 r, away from the poles
    points = []
    while len(points) < count:
        u = rng.uniform(1.2 * r, 1.6 * r) * cmath.exp(1j * rng.uniform(0, 2 * math.pi))
        z = cmath.sqrt(1 + u) * rng.choice([-1, 1])
        if all(abs(z - p) > 0.2 for p in poles):
            points.append(z)
    return points


def _check_convergence_matches_region(region, remainder_at, poles):
    rng = np.random.default_rng(11)
    for z in sample_interior(region, 20, rng=rng):
        err_10, err_30 = abs(remainder_at(10, z)), abs(remainder_at(30, z))
        assert err_30 <= max(0.5 * err_10, 1e-12)
    r = region.r if isinstance(region, CassiniOval) else region.r1
    for z in _outside_points(r, 5, poles, rng):
        assert not contains(region, z)
        assert abs(remainder_at(30, z)) > 2 * abs(remainder_at(10, z))


def test_taylor_series_converges_exactly_inside_the_oval():
    f = _model("1/(1+z^2)")
    region = taylor_region(f, -1, 1)
    expansions = {N: expand(f, -1, 1, N) for N in (10, 30)}
    _check_convergence_matches_region(region, lambda N, z: remainder(f, expansions[N], z), [1j, -1j])


def test_laurent_series_converges_exactly_inside_the_annulus():
    f = _model("1/((z^2-1)*(z^2-4))")
    region = laurent_region(f, -1, 1)
    expansions = {N: laurent_expand(f, -1, 1, None, N) for N in (10, 30)}
    _check_convergence_matches_region(region, lambda N, z: remainder_laurent(f, expansions[N], z), [2, -2])


def test_taylor_laurent_series_converges_exactly_inside_its_region():
    f = _model("1/((z+1)*(z-3))")
    region = taylor_laurent_region(f, -1, 1)
    expansions = {N: taylor_laurent_expand(f, -1, 1, None, N) for N in (10, 30)}
    _check_convergence_matches_region(region, lambda N, z: remainder_tl(f, expansions[N], z), [3])


if __name__ == "__main__":
    from modules.console import run_test_functions
    sys.exit(run_test_functions(dict(globals())))
