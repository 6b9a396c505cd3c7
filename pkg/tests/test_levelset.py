"""Level-set sampling of the conserved piecewise quadratic."""
import math

import numpy as np
import pytest

from mutdyn.errors import DomainError
from mutdyn.levelset import levelset_points, levelset_residual
from mutdyn.params import Params


def _endpoints(pieces):
    return [pc[0] for pc in pieces] + [pc[-1] for pc in pieces]


def _count_near(points, target, tol=1e-9):
    return sum(1 for s, t in points if math.hypot(s - target[0], t - target[1]) <= tol)


def test_piece_counts_by_regime():
    assert len(levelset_points(Params(1, 1), 1.0, 64)) == 2
    assert len(levelset_points(Params(2, 2), 4.0, 64)) == 3
    assert len(levelset_points(Params(3, 3), 3.0, 64)) == 3


def test_piece_lengths_match_samples():
    for samples in (2, 17, 128):
        pieces = levelset_points(Params(1, 2), 0.7, samples)
        assert all(len(pc) == samples for pc in pieces)


def test_residual_within_advertised_accuracy():
    rng = np.random.default_rng(81)
    configs = [(1, 1, 1.0), (2, 2, 4.0), (3, 3, 3.0), (1, 2, 0.7), (0.5, 0.5, 2.0)]
    for _ in range(10):
        p, q = rng.uniform(0.3, 3.0, size=2)
        configs.append((float(p), float(q), float(rng.uniform(0.2, 5.0))))
    for p, q, c in configs:
        params = Params(p, q)
        pieces = levelset_points(params, c, 64)
        assert pieces, f"no pieces for p={p} q={q} c={c}"
        assert levelset_residual(params, pieces, c) < 1e-9


def test_residual_detects_wrong_level():
    params = Params(1, 1)
    pieces = levelset_points(params, 1.0, 32)
    assert levelset_residual(params, pieces, 2.0) > 0.4


def test_adjacent_pieces_share_axis_endpoints():
    # each axis crossing is hit by exactly two pieces; truncation ends of
    # unbounded branches stay unpaired
    cases = [
        (Params(1, 1), 1.0, (0.0, 1.0), (-1.0, 0.0)),
        (Params(2, 2), 4.0, (0.0, math.sqrt(2.0)), (-math.sqrt(2.0), 0.0)),
        (Params(3, 3), 3.0, (0.0, 1.0), (-1.0, 0.0)),
    ]
    for params, level, top, left in cases:
        ends = _endpoints(levelset_points(params, level, 64))
        assert _count_near(ends, top) == 2
        assert _count_near(ends, left) == 2


def test_unbounded_pieces_reach_farther_with_extent():
    params = Params(3, 3)

    def reach(extent):
        pieces = levelset_points(params, 3.0, 64, extent=extent)
        return max(max(abs(s), abs(t)) for pc in pieces for s, t in pc)

    assert reach(20.0) > reach(8.0) > 2.0


def test_sampling_is_deterministic():
    a = levelset_points(Params(2.6, 1.9), 1.3, 48)
    b = levelset_points(Params(2.6, 1.9), 1.3, 48)
    assert a == b


def test_validation():
    params = Params(1, 1)
    for bad in (0.0, -1.0, math.inf, math.nan):
        with pytest.raises(DomainError):
            levelset_points(params, bad)
    with pytest.raises(DomainError):
        levelset_points(params, 1.0, samples_per_piece=1)
    with pytest.raises(DomainError):
        levelset_points(params, 1.0, extent=1.9)
    levelset_points(params, 1.0, samples_per_piece=2, extent=2.0)
