from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
import pytest

from isospace.catalog import SQUARE_CORRELATED, behavioural_space, mixed_space, resolved_square, square_xy_space
from isospace.errors import CountOnPrunedEvent, DegenerateMarginal, SingularFisher
from isospace.infomeasures import (
    behavioural_mutual_information,
    binary_entropy,
    conditional_entropy,
    correlation,
    entropy,
    fisher_information,
    log_likelihood,
    log_likelihood_gradient,
    marginal,
    maximize_joint_entropy,
    ml_estimate,
    mutual_information,
)
from isospace.probspace import JointDistribution, interior_points, joint_distribution, resolve

F = Fraction
LOG2 = math.log(2)


def xy(a, b, c, d) -> JointDistribution:
    return JointDistribution(("x", "y"), {(0, 0): a, (0, 1): b, (1, 0): c, (1, 1): d})


def test_entropy_examples():
    assert entropy([0.5, 0.5]) == pytest.approx(LOG2)
    assert entropy([0.25] * 4) == pytest.approx(2 * LOG2)
    assert entropy([1, 0, 0, 0]) == 0
    assert binary_entropy(0.5) == pytest.approx(LOG2)


def test_entropy_rejects_negative_entries():
    with pytest.raises(ValueError):
        entropy([1.5, -0.5])


def test_mutual_information_of_square_map():
    third = F(1, 3)
    d = JointDistribution(("x", "y"), {(-1, 1): third, (0, 0): third, (1, 1): third})
    assert mutual_information(d, "x", "y") == pytest.approx(math.log(3) - 2 / 3 * LOG2)
    assert mutual_information(d, "y", "x") == pytest.approx(mutual_information(d, "x", "y"))


def test_mutual_information_independent_is_zero():
    p, q = 0.3, 0.8
    d = xy((1 - p) * (1 - q), (1 - p) * q, p * (1 - q), p * q)
    assert mutual_information(d, "x", "y") == pytest.approx(0, abs=1e-12)


def test_mutual_information_perfect_correlation_is_marginal_entropy():
    a = 0.37
    d = xy(a, 0, 0, 1 - a)
    assert mutual_information(d, "x", "y") == pytest.approx(entropy(marginal(d, "x")))
    assert conditional_entropy(d, "x", "y") == pytest.approx(0)


def test_behavioural_closed_form_examples():
    assert behavioural_mutual_information(0.3, 0.4, 0.4) == pytest.approx(0, abs=1e-15)
    p = 0.3
    assert behavioural_mutual_information(p, 0, 1) == pytest.approx(-((1 - p) * math.log(1 - p) + p * math.log(p)))
    assert behavioural_mutual_information(0.5, 0, 1) == pytest.approx(LOG2)


def test_behavioural_closed_form_matches_generic_on_grid():
    r = resolve(behavioural_space())
    grid = [F(i, 20) for i in range(21)]
    for p in grid:
        for q in grid:
            for rr in grid:
                generic = mutual_information(joint_distribution(r, (p, q, rr)), "x", "y")
                assert abs(behavioural_mutual_information(float(p), float(q), float(rr)) - generic) < 1e-9


def test_anticorrelation_duplicates_correlation_information():
    for p in (0.1, 0.5, 0.77):
        assert behavioural_mutual_information(p, 1, 0) == pytest.approx(behavioural_mutual_information(p, 0, 1))


def test_correlation_examples():
    assert correlation(xy(0.5, 0, 0, 0.5)) == pytest.approx(1)
    assert correlation(xy(0.06, 0.14, 0.24, 0.56)) == pytest.approx(0, abs=1e-12)
    a, b, c, d = 0.4, 0.1, 0.2, 0.3
    ex, ey, exy = c + d, b + d, d
    oracle = (exy - ex * ey) / math.sqrt(ex * (1 - ex) * ey * (1 - ey))
    assert correlation(xy(a, b, c, d)) == pytest.approx(oracle)
    assert oracle == pytest.approx((a * d - b * c) / math.sqrt((c + d) * (a + b) * (b + d) * (a + c)))


def test_correlation_degenerate_marginal():
    with pytest.raises(DegenerateMarginal):
        correlation(xy(0.5, 0.5, 0, 0))


def test_fisher_constrained_closed_form():
    r = resolved_square(correlated=True)
    assert fisher_information(r, {"a": F(1, 2)}).entries == ((4,),)
    for a in (F(1, 10), F(1, 3), F(7, 9)):
        assert fisher_information(r, {"a": a}).entries == ((1 / (a * (1 - a)),),)


def test_fisher_unconstrained_square_by_direct_summation():
    r = resolved_square()
    a = b = c = F(1, 4)
    got = fisher_information(r, (a, b, c)).entries
    # P = (a, b, c, 1-a-b-c): d log P_i/d theta_j = delta_ij / P_i - 1 / P_d
    probs = [a, b, c, 1 - a - b - c]
    want = [[sum(probs[e] * ((e == i) / probs[e] - (e == 3) / probs[3]) * ((e == j) / probs[e] - (e == 3) / probs[3])
                 for e in range(4)) for j in range(3)] for i in range(3)]
    assert [list(row) for row in got] == want


def test_fisher_singular_at_boundary():
    with pytest.raises(SingularFisher):
        fisher_information(resolved_square(correlated=True), {"a": F(0)})


@pytest.mark.parametrize("space", [behavioural_space, mixed_space, square_xy_space])
def test_fisher_positive_semidefinite(space):
    r = resolve(space())
    for pt in interior_points(r.dimension, 100, seed=3, margin=0.05):
        vals = tuple(float(v) for v in pt)
        if space is mixed_space:
            vals = (vals[0], *(v / 3 for v in vals[1:]))
        if space is square_xy_space:
            vals = tuple(v / 3 for v in vals)
        m = fisher_information(r, vals).to_numpy()
        assert np.allclose(m, m.T)
        assert np.linalg.eigvalsh(m).min() > -1e-9


def test_ml_estimate_constrained():
    r = resolved_square(correlated=True)
    assert ml_estimate(r, {(0, 0): 3, (1, 1): 7}) == {"a": F(3, 10)}


def test_ml_estimate_unconstrained_square():
    r = resolved_square()
    counts = {(0, 0): 2, (0, 1): 3, (1, 0): 1, (1, 1): 4}
    assert ml_estimate(r, counts) == {"a": F(1, 5), "b": F(3, 10), "c": F(1, 10)}


def test_counts_on_pruned_events_rejected():
    r = resolved_square(correlated=True)
    counts = {(0, 0): 3, (0, 1): 1, (1, 1): 6}
    for fn in (lambda: ml_estimate(r, counts), lambda: log_likelihood(r, counts, {"a": F(1, 2)}),
               lambda: log_likelihood_gradient(r, counts, {"a": F(1, 2)})):
        with pytest.raises(CountOnPrunedEvent):
            fn()


def test_likelihood_gradient_vanishes_at_estimate():
    r = resolved_square(correlated=True)
    counts = {(0, 0): 3, (1, 1): 7}
    assert tuple(log_likelihood_gradient(r, counts, {"a": F(3, 10)})) == (0,)
    assert log_likelihood(r, counts, {"a": 0.3}) > log_likelihood(r, counts, {"a": 0.4})


def test_ml_estimate_converges_on_samples():
    r = resolve(behavioural_space())
    truth = (0.3, 0.6, 0.2)
    dist = joint_distribution(r, truth)
    outcomes = list(dist.table)
    rng = np.random.default_rng(42)
    draws = rng.choice(len(outcomes), size=100_000, p=[float(dist[o]) for o in outcomes])
    counts = {o: int((draws == i).sum()) for i, o in enumerate(outcomes)}
    est = ml_estimate(r, counts)
    for name, value in zip(r.free_params, truth):
        assert abs(float(est[name]) - value) < 0.02


def test_entropy_maximum_over_square_spaces():
    corr = maximize_joint_entropy(resolved_square(correlated=True))
    assert corr.value == pytest.approx(LOG2, abs=1e-9)
    assert (corr.point["a"], corr.point["b"], corr.point["c"]) == pytest.approx((0.5, 0, 0), abs=1e-6)
    free = maximize_joint_entropy(resolved_square())
    assert free.value == pytest.approx(2 * LOG2, abs=1e-9)
    assert free.free == pytest.approx((0.25, 0.25, 0.25), abs=1e-6)
    assert len(SQUARE_CORRELATED) == 2


@pytest.mark.parametrize("probs", [[0.1, 0.2, 0.7], [0.25] * 4, [1.0], [0.5, 0.5, 0, 0]])
def test_entropy_bounds(probs):
    h = entropy(probs)
    support = sum(1 for p in probs if p > 0)
    assert -1e-12 <= h <= math.log(len(probs)) + 1e-12
    if support == 1:
        assert h == 0
    if len(set(probs)) == 1:
        assert h == pytest.approx(math.log(len(probs)))
