from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
import pytest

from helpers import is_valid, owner_of_param
from isospace.catalog import (
    DTREE_SWEEP,
    IPD_NAMED,
    IPD_NAMED_TABLE,
    aumann27,
    centipede,
    chainstore,
    dtree,
    get_game,
    get_space_family,
    ipd,
    ipd_named_spec,
    publicgoods,
    trust,
    twostage,
)
from isospace.errors import EmptyFeasibleSet, UnknownFamily, UnsupportedShape
from isospace.gamemodel import IDENTITY, GameDefinition, expected_payoff_resolved, parse_spec
from isospace.numeric import numeric_box_maximize
from isospace.polynomial import Polynomial
from isospace.solver import (
    INDIFFERENT,
    MIXED,
    PURE,
    backwards_induction,
    best_response_equilibria,
    comparison_table,
    constrained_equilibrium,
    entropy_max_under_rho,
    enumerate_spaces,
    meta_equilibria,
    monte_carlo_verify,
    nonpolylinear_function,
    nonpolylinear_objective,
    reduce_table,
    rho_sweep,
)

F = Fraction
LOG2 = math.log(2)


def test_twostage_backwards_induction():
    r = backwards_induction(twostage())
    assert r.point == {"p": 0, "q": 1, "r": 0}
    assert r.payoffs == {"X": 2, "Y": 2}
    assert r.kind == PURE


def test_centipede_all_down():
    r = backwards_induction(centipede())
    assert r.payoffs == {"X": 1, "Y": 0}
    assert r.pure_profile["x1"] == 0


def test_single_free_node_is_argmax():
    g = chainstore()
    r = backwards_induction(g, parse_spec(g, "q=0"))
    assert r.point == {"p": 1}
    assert r.payoffs == {"X": 1, "Y": 0}


def test_aumann_equilibria():
    found = {(tuple(r.point.values()), tuple(r.payoffs.values()), r.kind) for r in best_response_equilibria(aumann27())}
    assert found == {((0, 1), (2, 7), PURE), ((1, 0), (7, 2), PURE), ((F(1, 3), F(1, 3)), (F(14, 3), F(14, 3)), MIXED)}


def test_single_stage_prisoners_dilemma():
    (r,) = best_response_equilibria(ipd(1))
    assert r.payoffs == {"X": 1, "Y": 1}


def test_constant_game_is_indifferent_everywhere():
    g = twostage()
    flat = GameDefinition("flat", g.players, g.space, {"X": Polynomial.const(1), "Y": Polynomial.const(1)})
    found = best_response_equilibria(flat)
    assert len(found) == 8
    assert {r.kind for r in found} == {INDIFFERENT}


def test_constrained_equilibrium_examples():
    g = chainstore()
    r = constrained_equilibrium(g, parse_spec(g, "q=1"))
    assert r.payoffs == {"X": 0, "Y": 1} and r.pure_profile["x"] == 0
    t = trust()
    fam = get_space_family("standard", t)
    assert constrained_equilibrium(t, fam.rows[2] + fam.cols[0]).payoffs == {"X": 2, "Y": 1}
    i = ipd(2)
    r = constrained_equilibrium(i, ipd_named_spec("X", "IND", 2) + ipd_named_spec("Y", "TFT", 2))
    assert r.payoffs == {"X": 5, "Y": 2}
    assert tuple(r.point.values()) == (0, 1, 1)


def test_correlation_other_than_corners_needs_numerics():
    g = twostage()
    with pytest.raises(UnsupportedShape):
        backwards_induction(g, parse_spec(g, "rho=1/2"))


def test_enumerate_spaces_sizes():
    assert [s.label for s in enumerate_spaces(ipd(2), "tags")][:2] == ["X:++++", "X:+++0"]
    assert len(enumerate_spaces(ipd(2), "tags")) == 16
    assert len(enumerate_spaces(centipede(), "markov", "X")) == 4
    assert len(enumerate_spaces(centipede(), "markov", "Y")) == 8
    assert len(enumerate_spaces(twostage(), "signs")) == 9
    with pytest.raises(UnknownFamily):
        enumerate_spaces(twostage(), "nope")


def _family_table(game, family):
    fam = get_space_family(family, game)
    return fam, comparison_table(game, fam.rows, fam.cols, fam.row_player)


@pytest.mark.parametrize("game,family", [
    (twostage(), "signs"), (twostage(), "rho"), (chainstore(), "standard"), (trust(), "standard"),
    (get_game("ultimatum"), "thresholds"), (publicgoods(), "anticorr"), (centipede(), "markov"),
    (ipd(2), "named"),
])
def test_family_tables_match_reference(game, family):
    fam, table = _family_table(game, family)
    assert table.shape == (len(fam.rows), len(fam.cols))
    for i, row in enumerate(fam.expected):
        for j, want in enumerate(row):
            got = table.payoffs(i, j)
            assert tuple(F(v) for v in got) == want, (table.row_labels[i], table.col_labels[j])


def test_named_ipd_table_and_meta():
    fam = get_space_family("named", ipd(2))
    table = comparison_table(ipd(2), fam.rows, fam.cols)
    assert table.grid() == [[tuple(c) for c in row] for row in IPD_NAMED_TABLE]
    assert table.row_labels == [f"X:{n}" for n in IPD_NAMED]
    assert table.meta == [(0, 0), (3, 3)]
    for i, j in table.meta:
        x, y = table.payoffs(i, j)
        assert all(table.payoffs(k, j)[0] <= x for k in range(4))
        assert all(table.payoffs(i, k)[1] <= y for k in range(4))


def test_reduce_table_drops_duplicates():
    g = twostage()
    fam = get_space_family("signs", g)
    table = comparison_table(g, fam.rows, fam.cols, fam.row_player)
    reduced = reduce_table(table, prefer=("++",))
    assert reduced.shape == (3, 1)
    assert "Y:++" in reduced.row_labels
    assert sorted(reduced.payoffs(i, 0) for i in range(3)) == [(2, 2), (3, 1), (4, 3)]


def test_meta_equilibria_weak_inequalities():
    g = chainstore()
    fam = get_space_family("standard", g)
    table = comparison_table(g, fam.rows, fam.cols, fam.row_player)
    # column payoffs for Y are (0, 0, 1): only the q=1 row is a best reply
    assert table.meta == [(2, 0)]
    assert meta_equilibria(table) == table.meta


def _deviation_ok(game, result):
    resolved = game.resolve(result.spec)
    pay = expected_payoff_resolved(game, resolved)
    base = {n: F(v) for n, v in result.point.items()}
    for name in resolved.free_params:
        owner = owner_of_param(resolved, name)
        if owner is None:
            continue
        for v in (F(0), F(1)):
            dev = dict(base, **{name: v})
            if not is_valid(resolved, dev):
                continue
            if pay[owner].evaluate(dev) > pay[owner].evaluate(base) + F(1, 10**9):
                return False
    return True


@pytest.mark.parametrize("game,family", [
    (twostage(), "signs"), (chainstore(), "standard"), (trust(), "standard"),
    (publicgoods(), "anticorr"), (centipede(), "markov"), (ipd(2), "named"),
])
def test_no_profitable_single_parameter_deviation(game, family):
    fam, table = _family_table(game, family)
    for row in table.cells:
        for cell in row:
            assert _deviation_ok(game, cell), cell.spec.label


def _spe_oracle(game):
    """Subgame-perfect payoffs by recursion over the tree, ties to the lowest value."""
    space = game.space
    moves = game.moves

    def value(i, a):
        if i == len(moves):
            vals = {k: (v or 0) for k, v in a.items()}
            return tuple(game.payoffs[p].evaluate(vals) for p in game.players)
        m = moves[i]
        if not space.is_active(m, a):
            return value(i + 1, {**a, m.id: None})
        k = game.players.index(m.owner)
        best = None
        for v in m.domain:
            out = value(i + 1, {**a, m.id: v})
            if best is None or out[k] > best[k]:
                best = out
        return best

    return value(0, {})


@pytest.mark.parametrize("name", ["twostage", "dtree", "chainstore", "trust", "ultimatum", "centipede"])
def test_backwards_induction_matches_tree_recursion(name):
    game = get_game(name)
    r = backwards_induction(game)
    assert r.payoff_tuple(game.players) == _spe_oracle(game)


@pytest.mark.parametrize("scale", [F(1, 2), 3, 17])
def test_argmax_invariant_under_positive_scaling(scale):
    for game in (twostage(), aumann27(), centipede()):
        scaled = GameDefinition(game.name, game.players, game.space,
                                {**game.payoffs, "X": game.payoffs["X"] * scale}, game.description,
                                game.correlation_pair, dict(game.params))
        before = [r.point for r in best_response_equilibria(game)] if game.name == "aumann27" \
            else [backwards_induction(game).point]
        after = [r.point for r in best_response_equilibria(scaled)] if game.name == "aumann27" \
            else [backwards_induction(scaled).point]
        assert before == after


@pytest.mark.parametrize("N", [2, 3, 4, 5])
def test_ipd_closed_forms(N):
    g = ipd(N)
    pairs = {("MKV", "MKV"): (2 * N, 2 * N), ("MKV", "IND"): (2 * N - 1, 2 * N - 1), ("IND", "IND"): (N, N)}
    for (a, b), want in pairs.items():
        spec = ipd_named_spec("X", a, N) + ipd_named_spec("Y", b, N)
        assert constrained_equilibrium(g, spec).payoff_tuple(g.players) == want


def test_numeric_box_maximize_quadratic():
    arg, val = numeric_box_maximize(lambda X: -((X[:, 0] - 0.3) ** 2) - (X[:, 1] - 0.7) ** 2, [(0, 1), (0, 1)])
    assert arg == pytest.approx((0.3, 0.7), abs=1e-6)
    assert val == pytest.approx(0, abs=1e-10)


def test_numeric_box_maximize_respects_indicator():
    arg, val = numeric_box_maximize(lambda X: X[:, 0] + X[:, 1], [(0, 1), (0, 1)],
                                    indicator=lambda X: X[:, 0] + X[:, 1] <= 1.5, grid=101)
    assert val == pytest.approx(1.5, abs=1e-6)


def test_numeric_box_maximize_empty():
    with pytest.raises(EmptyFeasibleSet):
        numeric_box_maximize(lambda X: X[:, 0], [(0, 1)], indicator=lambda X: X[:, 0] > 2)


@pytest.mark.parametrize("rho", [1.0, 0.25, -0.5])
def test_dtree_sweep_points(rho):
    ref = {r: (pt, v) for r, pt, v in DTREE_SWEEP}
    (opt,) = rho_sweep(dtree(), [rho])
    pt, v = ref[rho]
    assert opt.value == pytest.approx(v, abs=1e-4)
    assert opt.point[:2] == pytest.approx(pt[:2], abs=2e-3)


def test_entropy_maximum_under_correlation():
    assert entropy_max_under_rho(0) == pytest.approx(2 * LOG2, abs=1e-6)
    assert entropy_max_under_rho(1) == pytest.approx(LOG2, abs=1e-6)
    assert entropy_max_under_rho(-1) == pytest.approx(LOG2, abs=1e-6)
    mid = entropy_max_under_rho(0.5)
    assert LOG2 < mid < 2 * LOG2
    assert mid == pytest.approx(entropy_max_under_rho(-0.5), abs=1e-5)


def test_nonpolylinear_objective_examples():
    g = dtree()
    assert nonpolylinear_objective(g, IDENTITY, (0, 0, 0)) == pytest.approx(-1)
    assert nonpolylinear_objective(g, IDENTITY, (0.5, 0.3, 0.7)) == pytest.approx(0.5)
    tied = parse_spec(g, "q=0, r=1")
    for p in (0.1, 0.5, 0.9):
        assert nonpolylinear_objective(g, tied, (p,)) == pytest.approx(1)
    names, f = nonpolylinear_function(g)
    _, val = numeric_box_maximize(f, [(0, 1)] * len(names), grid=41)
    assert val == pytest.approx(0.5, abs=1e-6)


def test_nonpolylinear_matches_closed_form():
    g = dtree()
    rng = np.random.default_rng(5)
    for p, q, r in rng.uniform(0, 1, (50, 3)):
        want = 1 - (1 - q - r) ** 2 - (1 - p) ** 2 - p**2
        assert nonpolylinear_objective(g, IDENTITY, (p, q, r)) == pytest.approx(want)


def test_monte_carlo_deterministic_profile():
    g = ipd(2)
    spec = ipd_named_spec("X", "MKV", 2) + ipd_named_spec("Y", "MKV", 2)
    stats = monte_carlo_verify(g, spec, {"p1": 0, "q1": 0}, n=1000)
    for s in stats.values():
        assert s.mean == 4 and s.stderr == 0 and s.z == 0


def test_monte_carlo_within_four_sigma():
    g = twostage()
    stats = monte_carlo_verify(g, IDENTITY, (F(1, 2),) * 3, n=100_000, seed=1)
    for s in stats.values():
        assert abs(s.z) <= 4


def test_monte_carlo_is_reproducible():
    g = twostage()
    a = monte_carlo_verify(g, IDENTITY, (F(1, 3),) * 3, n=5000, seed=9)
    b = monte_carlo_verify(g, IDENTITY, (F(1, 3),) * 3, n=5000, seed=9)
    assert a == b
    with pytest.raises(ValueError):
        monte_carlo_verify(g, IDENTITY, None, n=0)
