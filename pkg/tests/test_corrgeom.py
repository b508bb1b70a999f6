from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import brentq

from isospace.corrgeom import (
    hotelling,
    in_range,
    permissible_q_bound,
    r_minus,
    r_plus,
    rho_behavioural,
    rho_mixed,
)
from isospace.errors import DegenerateMarginal


def test_behavioural_correlation_examples():
    assert rho_behavioural(0.5, 0, 1) == pytest.approx(1)
    assert rho_behavioural(0.5, 1, 0) == pytest.approx(-1)
    for p, q in ((0.2, 0.3), (0.5, 0.5), (0.9, 0.1)):
        assert rho_behavioural(p, q, q) == 0


def test_behavioural_correlation_degenerate():
    with pytest.raises(DegenerateMarginal):
        rho_behavioural(0, 0.3, 0.4)
    with pytest.raises(DegenerateMarginal):
        rho_behavioural(0.5, 0, 0)


def test_mixed_correlation_examples():
    assert rho_mixed(0.4, 1, 0, 0) == pytest.approx(1)
    assert rho_mixed(0.4, 0, 1, 0) == pytest.approx(-1)
    assert rho_mixed(0.4, 0.3, 0.3, 0.2) == 0


def test_mixed_correlation_errors():
    with pytest.raises(DegenerateMarginal):
        rho_mixed(0.4, 0, 0, 0)
    with pytest.raises(ValueError):
        rho_mixed(0.4, 0.7, 0.7, 0)


def test_mixed_matches_behavioural_under_plan_mapping():
    # plan weights: b0=(0,0), b1=(0,1), b2=(1,0), b3=(1,1) as (y|x=0, y|x=1)
    p, q, r = 0.3, 0.6, 0.2
    b1, b2, b3 = (1 - q) * r, q * (1 - r), q * r
    assert rho_mixed(p, b1, b2, b3) == pytest.approx(rho_behavioural(p, q, r))


def test_r_plus_examples():
    assert r_plus(0.3, 0.45, 0) == pytest.approx(0.45)
    assert r_plus(0.5, 0, 1) == pytest.approx(1)
    r = r_plus(0.5, 0.3, 0.5)
    oracle = brentq(lambda t: rho_behavioural(0.5, 0.3, t) - 0.5, 0.3, 1)
    assert r == pytest.approx(oracle, abs=1e-9)


def test_in_range_examples():
    assert all(in_range(r) for r in (0, 0.5, 1))
    assert not in_range(1.0001)
    assert not in_range(-1e-9)


def test_permissible_bound_examples():
    assert permissible_q_bound(0.5, 0.5) == pytest.approx(0.6)
    assert permissible_q_bound(0.5, 1 - 1e-9) < 1e-6
    assert permissible_q_bound(0.5, 1) == 0
    with pytest.warns(UserWarning):
        assert permissible_q_bound(0.5, 0) is None


def test_permissible_bound_negative_formula():
    p, rho = 0.4, -0.6
    assert permissible_q_bound(p, rho) == pytest.approx(1 / (1 + p * (1 - rho**2) / rho**2))


@pytest.mark.parametrize("p,rho", [(0.3, 0.5), (0.7, 0.2), (0.5, -0.5), (0.2, -0.8)])
def test_permissible_bound_separates_valid_q(p, rho):
    bound = permissible_q_bound(p, rho)
    for q in np.linspace(0.001, 0.999, 200):
        inside = q <= bound if rho > 0 else q >= bound
        if abs(q - bound) > 1e-6:
            assert in_range(r_plus(p, q, rho)) == inside


def test_permissible_bound_rejects_bad_input():
    with pytest.raises(ValueError):
        permissible_q_bound(0, 0.5)
    with pytest.raises(ValueError):
        permissible_q_bound(0.5, 1.5)


def test_r_plus_round_trip_on_random_samples():
    rng = np.random.default_rng(0)
    checked = 0
    while checked < 1000:
        p, q = rng.uniform(0.01, 0.99, 2)
        rho = rng.uniform(-0.99, 0.99)
        r = r_plus(p, q, rho)
        if not in_range(r):
            continue
        assert abs(rho_behavioural(p, q, r) - rho) < 1e-8
        checked += 1


def test_boundary_surfaces_touch_square_only_at_edges():
    for p in np.linspace(0.05, 0.95, 10):
        assert r_plus(p, 0, 1) == pytest.approx(1)
        assert r_plus(p, 1, 1) == pytest.approx(1)
        assert r_plus(p, 0, -1) == pytest.approx(0, abs=1e-12)
        assert r_plus(p, 1, -1) == pytest.approx(0, abs=1e-12)
        for q in np.linspace(0.05, 0.95, 10):
            assert r_plus(p, q, 1) > 1
            assert r_plus(p, q, -1) < 0


@given(st.floats(0.05, 0.95), st.floats(0.05, 0.95), st.floats(-0.95, 0.95))
@settings(max_examples=100, deadline=None)
def test_r_minus_solves_the_same_quadratic(p, q, rho):
    for r in (r_plus(p, q, rho), r_minus(p, q, rho)):
        if 0.001 < r < 0.999:
            assert abs(rho_behavioural(p, q, r) ** 2 - rho**2) < 1e-8


def test_hotelling_examples():
    assert hotelling(0.3, -1.2, 1) == (0.3, 0.3)
    assert hotelling(0.3, -1.2, 0) == (0.3, -1.2)
    x, y = hotelling(1, 1, 0.6)
    assert (x, y) == (1, pytest.approx(1.4))
    with pytest.raises(ValueError):
        hotelling(0, 0, 1.1)


@pytest.mark.parametrize("rho", [-0.8, 0.0, 0.35, 0.9])
def test_hotelling_produces_requested_correlation(rho):
    n = 100_000
    rng = np.random.default_rng(11)
    u, v = rng.standard_normal((2, n))
    x, y = hotelling(u, v, rho)
    sample = np.corrcoef(x, y)[0, 1]
    sigma = (1 - rho**2) / math.sqrt(n)
    assert abs(sample - rho) <= 3 * sigma + 1e-12
