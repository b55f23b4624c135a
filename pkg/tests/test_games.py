import itertools
import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings

from gamegen import games
from spoa.bounds import UtilityRule, WelfareCurve, spoa_bound
from spoa.games import (
    GameError, InstanceTooLarge, ResourceGame, brute_force_spoa, coalition_best_response, coalitions,
    deviation_sum_from_labels, deviation_sum_oracle, enumerate_ksne, is_k_strong_ne, label_resources, objective,
    optimum, ring_game, run_dynamics, welfare,
)


@pytest.fixture
def ring():
    return ring_game(3)


def test_ring_welfare(ring):
    assert welfare(ring, (0, 0, 0)) == 3
    assert welfare(ring, (1, 1, 1)) == 6
    assert welfare(ring, (1, 0, 0)) == 3
    assert welfare(ring, (0, 1, 1)) == 4
    assert objective(ring, (1, 1, 1)) == 6


def test_ring_equilibria(ring):
    assert is_k_strong_ne(ring, (0, 0, 0), 1)
    check = is_k_strong_ne(ring, (0, 0, 0), 2)
    assert not check
    assert (check.coalition, check.block, check.gain) == ((0, 1), (1, 1), 1)
    assert is_k_strong_ne(ring, (1, 1, 1), 3)


def test_ring_best_response_and_dynamics(ring):
    assert coalition_best_response(ring, (0, 0, 0), (0, 1)) == (1, 1, 0)
    assert coalition_best_response(ring, (1, 1, 1), (0,)) == (1, 1, 1)
    trace = run_dynamics(ring, (0, 0, 0), 2)
    assert welfare(ring, trace.final) == 6
    assert [s.new_value for s in trace.steps] == sorted(s.new_value for s in trace.steps)
    assert run_dynamics(ring, (0, 0, 0), 1).steps == []


def test_ring_brute_force(ring):
    assert brute_force_spoa(ring, 1) == F(1, 2)
    assert brute_force_spoa(ring, 2) == 1
    assert brute_force_spoa(ring, 3) == 1
    assert optimum(ring)[0] == 6
    assert (0, 0, 0) in enumerate_ksne(ring, 1)


def test_ring_labels(ring):
    theta = label_resources(ring, (0, 0, 0), (1, 1, 1))
    assert theta.support() == {(0, 0, 1): 3, (1, 0, 1): 3}
    for zeta in (1, 2, 3):
        assert deviation_sum_oracle(ring, (0, 0, 0), (1, 1, 1), zeta) == deviation_sum_from_labels(
            theta, zeta, ring.welfare_curve)


def test_coalitions_order():
    assert coalitions(3, 2) == [(0,), (1,), (2,), (0, 1), (0, 2), (1, 2)]
    with pytest.raises(GameError):
        coalitions(3, 4)


def test_asynchronous_is_seeded(ring):
    a = run_dynamics(ring, (0, 0, 0), 2, "asynchronous", seed=7)
    b = run_dynamics(ring, (0, 0, 0), 2, "asynchronous", seed=7)
    assert a == b
    assert is_k_strong_ne(ring, a.final, 2)
    with pytest.raises(GameError):
        run_dynamics(ring, (0, 0, 0), 2, "sideways")


def test_validation():
    w = WelfareCurve.indicator(1)
    with pytest.raises(GameError):
        ResourceGame([("a", 1), ("a", 2)], [[["a"]]], w)
    with pytest.raises(GameError):
        ResourceGame([("a", -1)], [[["a"]]], w)
    with pytest.raises(GameError):
        ResourceGame([("a", 1)], [[["b"]]], w)
    with pytest.raises(GameError):
        ResourceGame([("a", 1)], [[]], w)
    with pytest.raises(GameError):
        ResourceGame([("a", 1)], [[["a"]], [["a"]]], w)
    g = ResourceGame([("a", 1)], [[["a"], []]], w)
    with pytest.raises(GameError):
        welfare(g, (2,))
    with pytest.raises(GameError):
        welfare(g, (0, 0))


def test_size_guards(monkeypatch):
    g = ring_game(6)
    with pytest.raises(InstanceTooLarge):
        brute_force_spoa(g, 1, cap=10)
    monkeypatch.setenv("SPOA_BRUTE_CAP", "5")
    with pytest.raises(InstanceTooLarge):
        optimum(g)
    with pytest.raises(InstanceTooLarge):
        deviation_sum_oracle(g, (0,) * 6, (1,) * 6, 3)


def test_utility_rule_changes_equilibria():
    # rewarding overlap makes crowding onto the valuable resource stable
    w = WelfareCurve.indicator(2)
    game = ResourceGame([("a", 1), ("b", F(1, 2))], [[["a"]], [["a"], ["b"]]], w)
    assert not is_k_strong_ne(game, (0, 0), 1)
    designed = game.with_utility(UtilityRule([0, 1, 2]))
    assert is_k_strong_ne(designed, (0, 0), 1)
    assert run_dynamics(designed, (0, 1), 1).final == (0, 0)
    assert brute_force_spoa(designed, 1) == F(2, 3)


@settings(max_examples=120, deadline=None)
@given(games())
def test_dynamics_reach_strong_equilibria(game):
    for k in range(1, game.n + 1):
        start = (0,) * game.n
        trace = run_dynamics(game, start, k)
        assert is_k_strong_ne(game, trace.final, k)
        values = [objective(game, start)] + [s.new_value for s in trace.steps]
        assert all(a < b for a, b in zip(values, values[1:]))


@settings(max_examples=120, deadline=None)
@given(games())
def test_equilibrium_sets_are_nested(game):
    sets = [set(enumerate_ksne(game, k)) for k in range(1, game.n + 1)]
    for smaller, larger in zip(sets[1:], sets):
        assert smaller <= larger
    best, arg = optimum(game)
    assert all(arg in s for s in sets)


@settings(max_examples=120, deadline=None)
@given(games())
def test_label_expansion_and_bound(game):
    actions = list(game.joint_actions())
    rng = random.Random(len(actions))
    a_ne, a_opt = rng.choice(actions), rng.choice(actions)
    theta = label_resources(game, a_ne, a_opt)
    for zeta in range(1, game.n + 1):
        assert deviation_sum_oracle(game, a_ne, a_opt, zeta) == deviation_sum_from_labels(
            theta, zeta, game.welfare_curve)
    for k in range(1, game.n + 1):
        assert brute_force_spoa(game, k) >= spoa_bound(game.n, game.welfare_curve, k).spoa


def test_all_pairs_welfare_from_labels():
    # label masses reproduce both welfares on every pair of joint actions
    game = ring_game(3, WelfareCurve([0, 1, F(3, 2), 2]))
    for a, b in itertools.product(game.joint_actions(), repeat=2):
        theta = label_resources(game, a, b)
        sup = theta.support().items()
        assert sum(v * game.welfare_curve(l.ne_load) for l, v in sup) == game.welfare(a)
        assert sum(v * game.welfare_curve(l.opt_load) for l, v in sup) == game.welfare(b)
