"""Finite-step straight-path erasure: heat, excess, and energy caps."""

from __future__ import annotations

import math

import numpy as np
import pytest

from oraclecost.erasure import (
    ErasureConfig,
    build_plan,
    erase_register,
    excess_heat_bound,
    execute,
    execute_many,
    explicit_swap_heat,
    max_env_energy_bound,
    realized_heat,
    required_steps,
    target_final_state,
)
from oraclecost.states import (
    DensityOperator,
    basis_state_density,
    random_density,
    random_diagonal_density,
    von_neumann_entropy,
)

TOL = 1e-9
SEEDS = list(range(10))

STEP_ORACLE = [
    (0.5, 1.0, 3),
    (0.1, 0.3, 22),
    (0.01, 0.1, 113),
    (0.5, 0.1, 59),
    (0.01, 1.0, 9),
]


@pytest.mark.parametrize("epsilon,eta,expected", STEP_ORACLE)
def test_required_steps_matches_frozen_values(epsilon, eta, expected):
    cfg = ErasureConfig(beta=1.0, epsilon=epsilon, eta=eta, dim=2)
    assert required_steps(cfg) == expected


def test_config_validation():
    with pytest.raises(ValueError):
        ErasureConfig(beta=0.0)
    with pytest.raises(ValueError):
        ErasureConfig(epsilon=0.0)
    with pytest.raises(ValueError):
        ErasureConfig(epsilon=0.7)
    with pytest.raises(ValueError):
        ErasureConfig(eta=1.5)
    with pytest.raises(ValueError):
        ErasureConfig(dim=1)


def test_degenerate_path_has_zero_heat():
    cfg = ErasureConfig(beta=1.0, epsilon=0.5, eta=1.0, dim=2)
    rho = target_final_state(basis_state_density(2, 1), cfg)
    plan = build_plan(rho, cfg, steps=4)
    assert np.allclose(plan.path, plan.path[0], atol=TOL)
    report = execute(plan, cfg)
    assert report.q_e == pytest.approx(0.0, abs=TOL)
    assert report.delta_s == pytest.approx(0.0, abs=TOL)
    assert report.excess == pytest.approx(0.0, abs=TOL)


def test_two_step_path_on_pure_qubit_is_exact():
    cfg = ErasureConfig(beta=1.0, epsilon=0.5, eta=1.0, dim=2)
    plan = build_plan(basis_state_density(2, 1), cfg, steps=2)
    expected = np.array([
        np.diag([0.0, 1.0]),
        np.diag([0.25, 0.75]),
        np.diag([0.5, 0.5]),
    ])
    assert np.allclose(plan.path, expected, atol=TOL)


@pytest.mark.parametrize("seed", SEEDS)
def test_path_minimum_eigenvalue_floor(seed):
    rng = np.random.default_rng(seed)
    cfg = ErasureConfig(beta=1.0, epsilon=0.05, eta=0.2, dim=3)
    steps = 17
    plan = build_plan(random_density(3, rng), cfg, steps=steps)
    for t in range(steps + 1):
        floor = (t / steps) * cfg.epsilon / (cfg.dim - 1)
        assert np.linalg.eigvalsh(plan.path[t]).min() >= floor - TOL


@pytest.mark.parametrize("seed", SEEDS)
def test_required_steps_meet_both_budgets(seed):
    rng = np.random.default_rng(seed)
    cfg = ErasureConfig(beta=1.0, epsilon=0.01, eta=0.1, dim=2)
    rho = random_density(2, rng)
    report = execute(build_plan(rho, cfg), cfg)
    assert -TOL <= report.excess <= cfg.eta + TOL
    assert report.final_infidelity <= cfg.epsilon + TOL


@pytest.mark.parametrize("seed", SEEDS[:5])
@pytest.mark.parametrize("steps", [2, 5, 17, 40])
def test_generic_step_count_bound(seed, steps):
    rng = np.random.default_rng(seed)
    cfg = ErasureConfig(beta=2.0, epsilon=0.05, eta=0.5, dim=3)
    rho = random_density(3, rng)
    report = execute(build_plan(rho, cfg, steps=steps), cfg)
    cap = excess_heat_bound(cfg, steps)
    assert cap == pytest.approx(
        math.log(math.e * (cfg.dim - 1) ** 2 * steps / cfg.epsilon) / steps, abs=TOL
    )
    assert -TOL <= report.excess <= cap + TOL


@pytest.mark.parametrize("seed", SEEDS)
def test_per_step_summands_are_nondecreasing(seed):
    rng = np.random.default_rng(seed)
    cfg = ErasureConfig(beta=1.0, epsilon=0.1, eta=0.3, dim=2)
    report = execute(build_plan(random_density(2, rng), cfg), cfg)
    diffs = np.diff(report.per_step_summands)
    assert diffs.min() >= -TOL


def test_env_energy_bound_frozen_value_and_growth():
    cfg = ErasureConfig(beta=1.0, epsilon=0.5, eta=1.0, dim=2)
    assert max_env_energy_bound(cfg, 3) == pytest.approx(
        3.5841698371140813, abs=1e-12
    )
    ratio = max_env_energy_bound(cfg, 100) / max_env_energy_bound(cfg, 50)
    assert 1.9 <= ratio <= 2.1


@pytest.mark.parametrize("seed", SEEDS)
def test_executed_env_energy_within_bound(seed):
    rng = np.random.default_rng(seed)
    cfg = ErasureConfig(beta=1.5, epsilon=0.1, eta=0.3, dim=2)
    plan = build_plan(random_density(2, rng), cfg)
    report = execute(plan, cfg)
    assert report.max_env_energy <= max_env_energy_bound(cfg, plan.steps) + TOL
    assert report.energy_bound == pytest.approx(
        max_env_energy_bound(cfg, plan.steps), abs=TOL
    )


@pytest.mark.parametrize("seed", SEEDS[:6])
@pytest.mark.parametrize("steps", [2, 4, 6])
def test_explicit_swap_circuit_matches_analytic_heat(seed, steps):
    rng = np.random.default_rng(seed)
    cfg = ErasureConfig(beta=1.0, epsilon=0.2, eta=0.5, dim=2)
    rho = random_density(2, rng)
    plan = build_plan(rho, cfg, steps=steps)
    analytic = execute(plan, cfg)
    heat, final = explicit_swap_heat(rho, cfg, steps)
    assert heat == pytest.approx(analytic.q_e, abs=1e-8)
    assert np.allclose(final.mat, analytic.final_state.mat, atol=1e-8)


def test_batched_execution_matches_loop():
    rng = np.random.default_rng(321)
    cfg = ErasureConfig(beta=1.0, epsilon=0.1, eta=0.3, dim=2)
    rhos = np.stack([random_density(2, rng).mat for _ in range(32)])
    batch = execute_many(rhos, cfg)
    for i in range(rhos.shape[0]):
        single = execute(build_plan(DensityOperator(rhos[i]), cfg), cfg)
        assert batch.q_e[i] == pytest.approx(single.q_e, abs=TOL)
        assert batch.delta_s[i] == pytest.approx(single.delta_s, abs=TOL)
        assert batch.excess[i] == pytest.approx(single.excess, abs=TOL)
        assert batch.final_infidelity[i] == pytest.approx(
            single.final_infidelity, abs=TOL
        )
        assert batch.max_env_energy[i] == pytest.approx(
            single.max_env_energy, abs=TOL
        )


def test_register_erasure_aggregates_and_caps():
    rng = np.random.default_rng(7)
    cfg = ErasureConfig(beta=1.0, epsilon=0.01, eta=0.1, dim=2)
    rhos = [random_density(2, rng) for _ in range(6)]
    report = erase_register(rhos, cfg)
    assert report.q_e <= report.heat_bound + TOL
    assert report.heat_bound == pytest.approx(6.0 * (math.log(2.0) + cfg.eta), abs=TOL)
    for sub in report.qubit_reports:
        assert sub.delta_s <= math.log(2.0) + TOL
    assert report.delta_s == pytest.approx(
        sum(sub.delta_s for sub in report.qubit_reports), abs=TOL
    )
    with pytest.raises(ValueError):
        erase_register([random_density(3, rng)], cfg)


@pytest.mark.parametrize("seed", SEEDS)
def test_realized_heat_is_affine_and_floored(seed):
    rng = np.random.default_rng(seed)
    cfg = ErasureConfig(beta=1.0, epsilon=0.05, eta=0.2, dim=2)
    design = random_density(2, rng)
    plan = build_plan(design, cfg)
    report = execute(plan, cfg)

    assert realized_heat(plan, cfg, design) == pytest.approx(report.q_e, abs=TOL)

    sigma = random_diagonal_density(2, rng)
    tau = random_density(2, rng)
    lam = 0.3
    mix = DensityOperator(lam * sigma.mat + (1.0 - lam) * tau.mat)
    assert realized_heat(plan, cfg, mix) == pytest.approx(
        lam * realized_heat(plan, cfg, sigma)
        + (1.0 - lam) * realized_heat(plan, cfg, tau),
        abs=TOL,
    )

    target_entropy = von_neumann_entropy(DensityOperator(plan.target_state))
    for actual in (sigma, tau, basis_state_density(2, 0), basis_state_density(2, 1)):
        floor = von_neumann_entropy(actual) - target_entropy
        assert cfg.beta * realized_heat(plan, cfg, actual) >= floor - TOL
