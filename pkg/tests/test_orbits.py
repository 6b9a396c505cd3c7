"""Orbit storage, growth verdicts, drift and angle audits, scans."""
import math

import numpy as np
import pytest

from mutdyn.errors import DomainError
from mutdyn.orbits import (
    MAX_ORBIT_POINTS,
    GrowthKind,
    GrowthVerdict,
    Orbit,
    OrbitKind,
    StartPolicy,
    conserved_drift,
    growth_classification,
    iterate_orbit,
    monotonic_angle_audit,
    phi_drift_batch,
    scan_grid,
)
from mutdyn.params import Params
from mutdyn.rational import PointPos
from mutdyn.tropical import PointPL


def test_rational_five_cycle_points_exact():
    orbit = iterate_orbit(Params(1, 1), OrbitKind.RATIONAL, (1, 1), 5)
    expected = np.array([[1, 1], [2, 3], [2, 1], [1, 2], [3, 2], [1, 1]], dtype=float)
    assert np.array_equal(orbit.points, expected)
    assert orbit.steps == 5
    assert not orbit.truncated
    assert orbit.phi is None and orbit.polar is None and orbit.signs is None


def test_tropical_five_cycle_points_exact():
    orbit = iterate_orbit(Params(1, 1), OrbitKind.TROPICAL, (1, 0), 5)
    expected = np.array([[1, 0], [0, -1], [0, 1], [1, -1], [-1, 0], [1, 0]], dtype=float)
    assert np.array_equal(orbit.points, expected)
    assert np.array_equal(orbit.phi, np.ones(6))
    assert len(orbit.polar) == 6 and len(orbit.signs) == 6


def test_start_accepts_point_or_pair():
    params = Params(1.3, 0.8)
    a = iterate_orbit(params, OrbitKind.RATIONAL, PointPos(1.2, 0.7), 20)
    b = iterate_orbit(params, OrbitKind.RATIONAL, (1.2, 0.7), 20)
    assert np.array_equal(a.points, b.points)
    c = iterate_orbit(params, OrbitKind.TROPICAL, PointPL(-0.4, 1.1), 20)
    d = iterate_orbit(params, OrbitKind.TROPICAL, (-0.4, 1.1), 20)
    assert np.array_equal(c.points, d.points)


def test_step_validation():
    params = Params(1, 1)
    with pytest.raises(DomainError):
        iterate_orbit(params, OrbitKind.RATIONAL, (1, 1), -1)
    with pytest.raises(DomainError):
        iterate_orbit(params, OrbitKind.RATIONAL, (1, 1), MAX_ORBIT_POINTS)
    zero = iterate_orbit(params, OrbitKind.TROPICAL, (1, 0), 0)
    assert zero.points.shape == (1, 2) and zero.steps == 0


def test_truncation_on_float_range_exit():
    orbit = iterate_orbit(Params(4, 4), OrbitKind.RATIONAL, (1e80, 1e80), 50)
    assert orbit.truncated
    assert orbit.truncated_at == 1
    assert orbit.truncation_reason == "left float range"
    assert orbit.points.shape == (1, 2)
    assert orbit.steps == 0
    assert orbit.requested_steps == 50


def test_truncated_orbit_classifies_exponential_without_length_gate():
    orbit = iterate_orbit(Params(4, 4), OrbitKind.RATIONAL, (1e80, 1e80), 50)
    verdict = growth_classification(orbit)
    assert verdict.kind is GrowthKind.EXPONENTIAL
    # one finite point leaves no jump to measure; the clamp ceiling is used
    assert verdict.ratio == math.exp(700.0)


def test_growth_bounded_like_at_small_product():
    orbit = iterate_orbit(Params(2, 1), OrbitKind.RATIONAL, (1, 1), 400)
    verdict = growth_classification(orbit)
    assert verdict.kind is GrowthKind.BOUNDED_LIKE
    # the three-cycle through (2, 5) peaks at radius 5
    assert abs(verdict.max_log_radius - math.log(5.0)) < 1e-12
    assert verdict.ratio is None and verdict.rate is None


def test_growth_linear_at_critical_product():
    orbit = iterate_orbit(Params(2, 2), OrbitKind.TROPICAL, (1, 1), 400)
    verdict = growth_classification(orbit)
    assert verdict.kind is GrowthKind.LINEAR
    assert abs(verdict.rate - 4.0) < 1e-9


def test_growth_exponential_above_critical_product():
    orbit = iterate_orbit(Params(3, 3), OrbitKind.TROPICAL, (1, -1), 200)
    verdict = growth_classification(orbit)
    assert verdict.kind is GrowthKind.EXPONENTIAL
    lam = (9.0 - 2.0 + math.sqrt(9.0 * 5.0)) / 2.0
    assert abs(verdict.ratio - lam) < 1e-12 * lam


def test_rational_critical_growth_is_exponential():
    # log coordinates grow linearly there, so the coordinates themselves
    # grow exponentially
    orbit = iterate_orbit(Params(2, 2), OrbitKind.RATIONAL, (1, 1), 400)
    assert growth_classification(orbit).kind is GrowthKind.EXPONENTIAL


def test_growth_needs_sixteen_points():
    short = iterate_orbit(Params(1, 1), OrbitKind.TROPICAL, (1, 0), 14)
    with pytest.raises(DomainError):
        growth_classification(short)
    growth_classification(iterate_orbit(Params(1, 1), OrbitKind.TROPICAL, (1, 0), 15))


def test_growth_delta_validation():
    orbit = iterate_orbit(Params(1, 1), OrbitKind.TROPICAL, (1, 0), 40)
    for bad in (0.0, -0.5, math.nan):
        with pytest.raises(DomainError):
            growth_classification(orbit, delta=bad)


def test_growth_verdict_payload_consistency():
    GrowthVerdict(GrowthKind.EXPONENTIAL, ratio=2.0)
    GrowthVerdict(GrowthKind.LINEAR, rate=0.5)
    GrowthVerdict(GrowthKind.BOUNDED_LIKE, max_log_radius=-math.inf)
    with pytest.raises(DomainError):
        GrowthVerdict(GrowthKind.EXPONENTIAL)
    with pytest.raises(DomainError):
        GrowthVerdict(GrowthKind.EXPONENTIAL, ratio=0.9)
    with pytest.raises(DomainError):
        GrowthVerdict(GrowthKind.LINEAR, rate=0.0)
    with pytest.raises(DomainError):
        GrowthVerdict(GrowthKind.BOUNDED_LIKE)


def test_conserved_drift_zero_on_periodic_orbit():
    orbit = iterate_orbit(Params(1, 1), OrbitKind.TROPICAL, (1, 0), 100)
    assert conserved_drift(orbit) == 0.0


def test_conserved_drift_rejects_rational_orbits():
    orbit = iterate_orbit(Params(1, 1), OrbitKind.RATIONAL, (1, 1), 20)
    with pytest.raises(DomainError):
        conserved_drift(orbit)


def test_conserved_drift_skips_overflowed_values():
    # the quadratic leaves float range (inf - inf turns it nan) long
    # before the coordinates do
    orbit = iterate_orbit(Params(3, 3), OrbitKind.TROPICAL, (1, 1), 300)
    assert not orbit.truncated
    assert (~np.isfinite(orbit.phi)).any()
    assert math.isfinite(conserved_drift(orbit))


def test_angle_audit_flags_negative_conserved_start():
    orbit = iterate_orbit(Params(3, 3), OrbitKind.TROPICAL, (1, -1), 50)
    assert float(orbit.phi[0]) == -3.0
    assert monotonic_angle_audit(orbit) == 2
    # a large slack absorbs the climb
    assert monotonic_angle_audit(orbit, slack=0.1) is None


def test_angle_audit_passes_nonnegative_conserved_start():
    orbit = iterate_orbit(Params(3, 3), OrbitKind.TROPICAL, (1, 0), 50)
    assert float(orbit.phi[0]) > 0.0
    assert monotonic_angle_audit(orbit) is None
    boundary = iterate_orbit(Params(2, 2), OrbitKind.TROPICAL, (1, -1), 50)
    assert float(boundary.phi[0]) == 0.0
    assert monotonic_angle_audit(boundary) is None


def test_angle_audit_domain_errors():
    sub = iterate_orbit(Params(1, 1), OrbitKind.TROPICAL, (1, 0), 20)
    with pytest.raises(DomainError):
        monotonic_angle_audit(sub)
    rational = iterate_orbit(Params(3, 3), OrbitKind.RATIONAL, (1, 1), 5)
    with pytest.raises(DomainError):
        monotonic_angle_audit(rational)
    origin = iterate_orbit(Params(2, 2), OrbitKind.TROPICAL, (0, 0), 20)
    with pytest.raises(DomainError):
        monotonic_angle_audit(origin)


def test_batch_drift_matches_scalar_path_exactly():
    rng = np.random.default_rng(71)
    for _ in range(10):
        p, q = rng.uniform(0.4, 1.8, size=2)
        s, t = rng.uniform(-2.0, 2.0, size=2)
        orbit = iterate_orbit(Params(p, q), OrbitKind.TROPICAL, (s, t), 150)
        assert float(phi_drift_batch(p, q, s, t, 150)) == conserved_drift(orbit)


def test_batch_drift_scale_cap_bounds_the_window():
    raw = float(phi_drift_batch(3.0, 3.0, 1.0, 1.0, 60))
    capped = float(phi_drift_batch(3.0, 3.0, 1.0, 1.0, 60, scale_cap=1e3))
    assert capped < 1e-9
    assert raw > 1e10
    # a cap below every iterate samples nothing
    assert float(phi_drift_batch(3.0, 3.0, 1.0, 1.0, 60, scale_cap=1e-6)) == 0.0


def test_batch_drift_broadcasts():
    p = np.array([[0.5], [1.0], [2.0]])
    s0 = np.array([[0.3, -0.7, 1.1, 0.2]])
    out = phi_drift_batch(p, 1.0, s0, -0.5, 50)
    assert out.shape == (3, 4)
    assert np.isfinite(out).all()


def test_batch_drift_validation():
    with pytest.raises(DomainError):
        phi_drift_batch(1.0, 1.0, 1.0, 0.0, -1)
    with pytest.raises(DomainError):
        phi_drift_batch(-1.0, 1.0, 1.0, 0.0, 10)
    with pytest.raises(DomainError):
        phi_drift_batch(1.0, 1.0, math.inf, 0.0, 10)


def test_start_policy_validation():
    with pytest.raises(DomainError):
        StartPolicy()
    with pytest.raises(DomainError):
        StartPolicy(points=((1, 1),), seed=3)
    with pytest.raises(DomainError):
        StartPolicy(points=())
    with pytest.raises(DomainError):
        StartPolicy(seed=3, count=0)
    pol = StartPolicy(points=((1, 2),))
    assert pol.points == ((1.0, 2.0),)


def test_start_policy_draws_are_reproducible_and_in_range():
    pol = StartPolicy(seed=9, count=5)
    a = pol.starts_for(OrbitKind.RATIONAL, 2, 3)
    b = pol.starts_for(OrbitKind.RATIONAL, 2, 3)
    assert a == b
    assert len(a) == 5
    assert all(0.5 <= v <= 2.0 for pt in a for v in pt)
    assert pol.starts_for(OrbitKind.RATIONAL, 2, 4) != a
    trop = pol.starts_for(OrbitKind.TROPICAL, 0, 0)
    assert all(-2.0 <= v <= 2.0 for pt in trop for v in pt)
    assert all(max(abs(s), abs(t)) >= 0.1 for s, t in trop)


def test_scan_grid_geometry():
    table = scan_grid((1.0, 2.0), (0.5, 1.5), 3, OrbitKind.TROPICAL, 40,
                      StartPolicy(seed=4, count=2))
    assert table.p_values == tuple(np.linspace(1.0, 2.0, 3))
    assert table.q_values == tuple(np.linspace(0.5, 1.5, 3))
    assert len(table.cells) == 9
    for i in range(3):
        for j in range(3):
            cell = table.cell(i, j)
            assert cell.p == table.p_values[i]
            assert cell.q == table.q_values[j]


def test_scan_grid_keeps_most_severe_verdict():
    # the origin start stays put (bounded-like) while (1, 1) grows
    # linearly; the horizon must be long enough for the log-radius
    # slope of linear growth to drop under the exponential threshold
    table = scan_grid((2.0, 2.0), (2.0, 2.0), 1, OrbitKind.TROPICAL, 400,
                      StartPolicy(points=((0.0, 0.0), (1.0, 1.0))))
    assert table.cell(0, 0).verdict.kind is GrowthKind.LINEAR


def test_scan_grid_small_product_rectangle_is_bounded_like():
    table = scan_grid((0.2, 1.0), (0.2, 1.0), 2, OrbitKind.RATIONAL, 200)
    assert all(c.verdict.kind is GrowthKind.BOUNDED_LIKE for c in table.cells)


def test_scan_grid_validation():
    with pytest.raises(DomainError):
        scan_grid((1.0, 2.0), (1.0, 2.0), 0, OrbitKind.RATIONAL, 40)
    with pytest.raises(DomainError):
        scan_grid((2.0, 1.0), (1.0, 2.0), 2, OrbitKind.RATIONAL, 40)
    with pytest.raises(DomainError):
        scan_grid((0.0, 1.0), (1.0, 2.0), 2, OrbitKind.RATIONAL, 40)
