import json

import numpy as np
import pytest

from remotetrack.belief import BeliefGrid, build_kernel
from remotetrack.experiments import SCENARIOS, SYMMETRIC, UNBALANCED
from remotetrack.model import D1, D2, Action, ModelConfig
from remotetrack.policies import expected_greedy_policy, make_rule, map_policy
from remotetrack.solver import (
    NonConvergenceError,
    Policy,
    evaluate_policy,
    rvia,
    solve,
    stage_costs,
    stationary_distribution,
)

GRID = BeliefGrid(0.01)


def _setup(cfg, grid=GRID):
    return build_kernel(grid, cfg), stage_costs(grid, cfg)


def test_perfect_free_tracking():
    cfg = ModelConfig(p=0.7, detect=((1.0, 1.0), (0.5, 0.5)), channel=(1.0, 0.5), alpha=0.0)
    sol = solve(cfg)
    assert sol.lam == pytest.approx(0.0, abs=1e-12)
    k, c = _setup(cfg)
    # zero cost requires transmitting at the certain beliefs the chain lives on
    assert evaluate_policy(Policy.constant(101, Action.SENSOR1), k, c) == pytest.approx(0.0, abs=1e-12)
    assert (sol.policy.actions == Action.SENSOR1).all()


def test_useless_sensors():
    cfg = ModelConfig(p=0.7, detect=((0.0, 0.0), (0.0, 0.0)), channel=(0.8, 0.8), alpha=0.2)
    sol = solve(cfg)
    assert sol.lam == pytest.approx(0.5, abs=1e-3)
    k, c = _setup(cfg)
    idle = Policy.constant(101, Action.IDLE, "always-idle")
    assert evaluate_policy(idle, k, c) == pytest.approx(0.5, abs=1e-12)
    assert evaluate_policy(sol.policy, k, c) == pytest.approx(0.5, abs=1e-12)


def test_always_idle_cost_is_half():
    for p in (0.1, 0.45, 0.7, 0.93):
        cfg = SCENARIOS["b"].replace(p=p, alpha=0.7)
        k, c = _setup(cfg)
        assert evaluate_policy(Policy.constant(101, Action.IDLE), k, c) == pytest.approx(0.5, abs=1e-12)


def test_dead_channel_costs_idle_plus_alpha():
    cfg = SCENARIOS["a"].replace(channel=(0.0, 0.8))
    k, c = _setup(cfg)
    idle = evaluate_policy(Policy.constant(101, Action.IDLE), k, c)
    s1 = evaluate_policy(Policy.constant(101, Action.SENSOR1), k, c)
    assert s1 == pytest.approx(idle + cfg.alpha, abs=1e-12)


def test_fig3a_lambda_matches_policy_evaluation():
    k, c = _setup(SCENARIOS["a"])
    sol = rvia(k, c, GRID, epsilon=1e-9)
    assert sol.lam == pytest.approx(evaluate_policy(sol.policy, k, c), abs=1e-6)
    loose = rvia(k, c, GRID, epsilon=1e-3)
    assert abs(loose.lam - evaluate_policy(loose.policy, k, c)) < 1e-3


def test_normalization_and_trace():
    k, c = _setup(SCENARIOS["d"])
    sol = rvia(k, c, GRID, epsilon=1e-3)
    assert sol.h[sol.reference_index] == 0.0 and sol.reference_index == 0
    assert sol.final_span < 1e-3 and sol.spans[-1] == sol.final_span
    assert len(sol.spans) == sol.iterations


@pytest.mark.parametrize("ref", [0.0, 0.37, 0.5, 1.0])
def test_lambda_independent_of_reference(ref):
    k, c = _setup(SCENARIOS["b"])
    base = rvia(k, c, GRID, epsilon=1e-11)
    other = rvia(k, c, GRID, epsilon=1e-11, reference=ref)
    assert other.lam == pytest.approx(base.lam, abs=1e-9)
    shift = other.h - base.h
    assert np.ptp(shift) < 1e-8


def test_tie_break_prefers_idle():
    cfg = ModelConfig(p=0.7, detect=((0.0, 0.0), (0.0, 0.0)), channel=(0.8, 0.8), alpha=0.0)
    sol = solve(cfg)
    # transmission is free and worthless, so every action ties
    assert (sol.policy.actions == 0).all()


def test_nonconvergence_raises():
    k, c = _setup(SCENARIOS["a"])
    with pytest.raises(NonConvergenceError) as err:
        rvia(k, c, GRID, epsilon=1e-14, max_iters=2)
    assert err.value.iterations == 2 and err.value.span > 0


def test_multichain_grid_does_not_converge():
    cfg = ModelConfig(p=0.8, detect=UNBALANCED, channel=(0.0, 0.0), alpha=0.2, distortion=D2)
    with pytest.raises(NonConvergenceError):
        solve(cfg, max_iters=2000)


def test_epsilon_validation():
    k, c = _setup(SCENARIOS["a"])
    with pytest.raises(ValueError):
        rvia(k, c, GRID, epsilon=0)


def test_dominance_over_baselines():
    for cfg in list(SCENARIOS.values()) + [
        SCENARIOS["a"].replace(detect=UNBALANCED, p=0.8, distortion=D2, alpha=0.4),
        SCENARIOS["a"].replace(detect=SYMMETRIC, p=0.3),
    ]:
        k, c = _setup(cfg)
        sol = rvia(k, c, GRID)
        for fn in (map_policy, expected_greedy_policy):
            pol = Policy([int(fn(b, cfg)) for b in GRID.points])
            assert sol.lam <= evaluate_policy(pol, k, c) + 1e-3
            assert evaluate_policy(sol.policy, k, c) <= evaluate_policy(pol, k, c) + 1e-6
        idle = evaluate_policy(Policy.constant(101, Action.IDLE), k, c)
        assert evaluate_policy(sol.policy, k, c) <= idle + 1e-6


def test_alpha_monotone_and_bounded():
    cfg = SCENARIOS["a"].replace(detect=UNBALANCED, p=0.8, distortion=D2)
    alphas = np.linspace(0, 1, 11)
    lams = [rvia(*_setup(cfg.replace(alpha=a)), GRID, epsilon=1e-9).lam for a in alphas]
    assert np.all(np.diff(lams) >= -1e-9)
    k, c = _setup(cfg.replace(alpha=0.0))
    idle = evaluate_policy(Policy.constant(101, Action.IDLE), k, c)
    for a, lam in zip(alphas, lams):
        assert lam <= min(lams[0] + a, idle) + 1e-9


def test_symmetric_value_and_policy():
    cfg = ModelConfig(p=0.7, detect=SYMMETRIC, channel=(0.8, 0.8), alpha=0.2, distortion=D1)
    mir = GRID.mirror()
    for p in (0.15, 0.35, 0.7, 0.95):
        sol = solve(cfg.replace(p=p))
        np.testing.assert_allclose(sol.h, sol.h[mir], atol=5e-3)
        swap = np.array([0, 2, 1])[sol.policy.actions]
        best = sol.q_values.min(axis=0)
        assert np.all(sol.q_values[swap, mir] <= best[mir] + 1e-9)


def test_stationary_distribution_periodic_chain():
    chain = np.array([[0.0, 1.0], [1.0, 0.0]])
    np.testing.assert_allclose(stationary_distribution(chain, 0), [0.5, 0.5], atol=1e-12)


def test_evaluate_randomized_weights():
    cfg = SCENARIOS["a"]
    k, c = _setup(cfg)
    w = np.full((3, 101), 1 / 3)
    mixed = evaluate_policy(w, k, c)
    assert 0.0 < mixed < 0.5 + cfg.alpha


def test_policy_validation():
    with pytest.raises(ValueError):
        Policy([0, 3])
    with pytest.raises(ValueError):
        Policy([0, 1], provenance="nope")


def test_exports(tmp_path):
    sol = solve(SCENARIOS["a"], delta=0.1)
    data = json.loads(sol.to_json(tmp_path / "s.json"))
    assert set(data) >= {"lambda", "iterations", "final_span"}
    assert json.loads((tmp_path / "s.json").read_text()) == data
    sol.to_csv(tmp_path / "s.csv")
    lines = (tmp_path / "s.csv").read_text().splitlines()
    assert lines[0] == "belief,h,action" and len(lines) == 12


def test_optimal_rule_requires_policy():
    with pytest.raises(ValueError):
        make_rule("optimal", SCENARIOS["a"])
