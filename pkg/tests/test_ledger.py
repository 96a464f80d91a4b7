"""Energy ledger: run pricing, conservation, bounds, and floors."""

from __future__ import annotations

import math

import numpy as np
import pytest

from oraclecost.ledger import (
    DELTA_STAR,
    KB_CODATA,
    KB_ROUNDED,
    MAX_QUANTUM_LEDGER_BITS,
    BoundConstants,
    CircuitShape,
    CostModel,
    RunOutcome,
    classical_record_outcome,
    classical_simon_energy_floor,
    energy_floor_table,
    entropy_energy_floor,
    erasure_depth,
    fault_tolerant_energy_upper,
    ideal_energy_upper,
    log_falling_factorial,
    log_falling_factorial_bounds,
    matched_constants,
    record_entropy_bruteforce,
    record_entropy_floor,
    run_framework,
    simon_classical_shape,
    simon_quantum_shape,
    simon_scaling_shape,
    trivial_shape,
)
from oraclecost.erasure import required_steps
from oraclecost.simon import fourier_twice_stages, sample_uniform_instance

TOL = 1e-9
SEEDS = list(range(10))

CODATA_TABLE = [
    (50, 1.9102610840083973e-13),
    (100, 1.3009987292518424e-05),
    (150, 658.0091864188331),
    (200, 29510305521.4619),
    (250, 1.2395505981476805e18),
    (300, 4.995918227470004e25),
]


def test_cost_model_and_shape_validation():
    with pytest.raises(ValueError):
        CostModel(e_qubit=0.0)
    with pytest.raises(ValueError):
        CostModel(eta=0.0)
    with pytest.raises(ValueError):
        CostModel(epsilon=0.7)
    with pytest.raises(ValueError):
        CircuitShape(n=2, w=3, m=1, depths=(1, 1), d_erase=4)  # w < 2n
    with pytest.raises(ValueError):
        CircuitShape(n=2, w=5, m=2, depths=(1, 1), d_erase=4)  # len != m+1
    with pytest.raises(ValueError):
        CircuitShape(n=2, w=5, m=1, depths=(1, -1), d_erase=4)


def test_shape_builders_have_consistent_geometry():
    cost = CostModel()
    quantum = simon_quantum_shape(3, cost)
    rounds = 3 + 10
    assert quantum.m == rounds + 2
    assert quantum.w == 2 * 3 * quantum.m + 1
    assert len(quantum.depths) == quantum.m + 1
    assert quantum.depths[-1] == 1 + 3**3

    classical = simon_classical_shape(3, 4, cost)
    assert classical.m == 4
    assert classical.w == 2 * 3 * 4 + 1
    assert classical.depths[-1] == max(1, 4 * 4)

    scaling = simon_scaling_shape(6, cost)
    assert scaling.w == 2 * 6 * scaling.m
    assert scaling.depths[-1] == 6**3

    assert trivial_shape(cost).m == 0
    assert erasure_depth(cost) == required_steps(cost.erasure_config()) * cost.d_swap


@pytest.mark.parametrize("seed", SEEDS)
@pytest.mark.parametrize("algorithm,n", [("quantum", 2), ("quantum", 3),
                                         ("classical", 2), ("classical", 3)])
def test_ledger_identity_and_exact_residual(seed, algorithm, n):
    cost = CostModel()
    rng = np.random.default_rng([seed, n])
    inst = sample_uniform_instance(n, rng)
    run = run_framework(inst, cost, rng, algorithm=algorithm)
    led = run.ledger
    identity = led.q_e + led.q_e_prime + led.conservation_residual
    assert led.total_w == pytest.approx(identity, abs=TOL)
    assert led.conservation_residual == pytest.approx(
        cost.epsilon * led.shape.w * cost.e_qubit, rel=1e-12
    )


@pytest.mark.parametrize("algorithm", ["quantum", "classical"])
def test_residual_scales_linearly_with_the_infidelity_budget(algorithm):
    residuals = []
    for epsilon in (1e-2, 1e-3, 1e-4):
        cost = CostModel(epsilon=epsilon)
        rng = np.random.default_rng(77)
        inst = sample_uniform_instance(3, rng)
        run = run_framework(inst, cost, rng, algorithm=algorithm)
        residuals.append(run.ledger.conservation_residual)
    assert residuals[0] > residuals[1] > residuals[2]
    assert residuals[0] / residuals[1] == pytest.approx(10.0, rel=1e-9)
    assert residuals[1] / residuals[2] == pytest.approx(10.0, rel=1e-9)


def test_ledger_report_has_the_stable_key_set():
    cost = CostModel()
    rng = np.random.default_rng(1)
    run = run_framework(sample_uniform_instance(2, rng), cost, rng, algorithm="classical")
    payload = run.ledger.report_dict()
    assert set(payload) == {
        "w", "m", "depths", "e_qubit", "beta", "eta", "epsilon",
        "delta_e_gates", "ctrl_total", "q_e", "q_e_prime", "total_w",
        "conservation_residual",
    }
    assert payload["total_w"] == pytest.approx(run.ledger.total_w, abs=TOL)


def test_run_framework_rejects_bad_requests():
    cost = CostModel()
    rng = np.random.default_rng(0)
    inst = sample_uniform_instance(2, rng)
    with pytest.raises(ValueError):
        run_framework(inst, cost, rng, algorithm="annealer")
    with pytest.raises(ValueError):
        run_framework(None, cost, rng, algorithm="classical")
    big = sample_uniform_instance(MAX_QUANTUM_LEDGER_BITS + 1, rng)
    with pytest.raises(ValueError):
        run_framework(big, cost, rng, algorithm="quantum")


def test_trivial_run_prices_a_bare_erasure_cycle():
    cost = CostModel()
    run = run_framework(None, cost, np.random.default_rng(0), algorithm="trivial")
    led = run.ledger
    assert led.shape.m == 0
    assert led.total_w == pytest.approx(
        led.q_e + led.q_e_prime + led.conservation_residual, abs=TOL
    )
    assert run.outcome.a == 0


@pytest.mark.parametrize("seed", SEEDS)
@pytest.mark.parametrize("algorithm,n", [("quantum", 3), ("classical", 4)])
def test_measured_energy_stays_below_both_bound_variants(seed, algorithm, n):
    cost = CostModel()
    rng = np.random.default_rng([seed, n, 2])
    inst = sample_uniform_instance(n, rng)
    run = run_framework(inst, cost, rng, algorithm=algorithm)
    shape = run.ledger.shape
    for constants in (BoundConstants(), matched_constants(cost)):
        bound = ideal_energy_upper(shape, cost, constants)
        assert run.ledger.total_w <= bound.value + TOL
        ft = fault_tolerant_energy_upper(shape, cost, constants)
        assert ft.value >= bound.value - TOL


def test_fault_tolerant_bound_reports_consistent_overheads():
    cost = CostModel()
    shape = simon_scaling_shape(8, cost)
    ft = fault_tolerant_energy_upper(shape, cost)
    depth = shape.total_depth(cost.d_swap)
    assert ft.polylog_factor == pytest.approx(
        math.log(shape.w * depth) ** ft.constants.q, rel=1e-12
    )
    assert ft.w_ft == pytest.approx(shape.w * depth * ft.polylog_factor, rel=1e-12)
    assert ft.d_ft == pytest.approx(depth * ft.polylog_factor, rel=1e-12)


def test_upper_bounds_are_monotone_in_every_resource():
    cost = CostModel()
    base = CircuitShape(n=3, w=10, m=2, depths=(2, 3, 4), d_erase=30)
    wider = CircuitShape(n=3, w=14, m=2, depths=(2, 3, 4), d_erase=30)
    more_queries = CircuitShape(n=3, w=10, m=3, depths=(2, 3, 1, 4), d_erase=30)
    deeper = CircuitShape(n=3, w=10, m=2, depths=(2, 3, 9), d_erase=30)
    for variant in (wider, more_queries, deeper):
        assert ideal_energy_upper(variant, cost).value > ideal_energy_upper(
            base, cost
        ).value
        assert fault_tolerant_energy_upper(variant, cost).value > (
            fault_tolerant_energy_upper(base, cost).value
        )
    tighter = CostModel(eta=cost.eta / 2.0)
    assert ideal_energy_upper(base, tighter).value > ideal_energy_upper(
        base, cost
    ).value


def test_halving_eta_grows_the_erasure_term_at_the_predicted_rate():
    cost = CostModel(eta=0.2, epsilon=1e-3)
    halved = CostModel(eta=0.1, epsilon=1e-3)
    shape = simon_scaling_shape(6, cost)
    bound = ideal_energy_upper(shape, cost)
    after = ideal_energy_upper(shape, halved).erasure_term
    growth = after / bound.erasure_term
    c = bound.constants
    prefactor = (cost.e_qubit + c.c3 / (halved.beta * halved.eta)) / (
        cost.e_qubit + c.c3 / (cost.beta * cost.eta)
    )
    logs = math.log(1.0 / (halved.epsilon * halved.eta)) / math.log(
        1.0 / (cost.epsilon * cost.eta)
    )
    assert growth == pytest.approx(prefactor * 2.0 * logs**c.p, rel=1e-12)
    assert growth > 2.0


def test_scaling_slopes_on_the_quiet_cost_model():
    cost = CostModel(e_ctrl=0.05, eta=1.0, epsilon=0.5)
    ns = np.arange(4, 13)
    ideal = [ideal_energy_upper(simon_scaling_shape(int(n), cost), cost).value
             for n in ns]
    ft = [fault_tolerant_energy_upper(simon_scaling_shape(int(n), cost), cost).value
          for n in ns]
    slope_ideal = np.polyfit(np.log(ns), np.log(ideal), 1)[0]
    slope_ft = np.polyfit(np.log(ns), np.log(ft), 1)[0]
    assert 3.5 <= slope_ideal <= 5.5
    assert slope_ideal <= slope_ft <= 9.0


def test_floor_table_matches_frozen_codata_values():
    rows = energy_floor_table([n for n, _ in CODATA_TABLE], 300.0, "codata")
    for row, (n, expected) in zip(rows, CODATA_TABLE):
        assert row.n == n
        assert row.bound_joules == pytest.approx(expected, rel=1e-12)


def test_floor_table_rounded_mode_and_temperature_scaling():
    rounded = energy_floor_table([50], 300.0, "rounded")[0]
    assert rounded.bound_joules == pytest.approx(1.383596470941128e-13, rel=1e-12)
    codata = energy_floor_table([50], 300.0, "codata")[0]
    assert rounded.bound_joules * (KB_CODATA / KB_ROUNDED) == pytest.approx(
        codata.bound_joules, rel=1e-12
    )
    doubled = energy_floor_table([50], 600.0, "codata")[0]
    assert doubled.bound_joules == pytest.approx(2.0 * codata.bound_joules, rel=1e-12)
    with pytest.raises(ValueError):
        energy_floor_table([50], 300.0, "exact")
    with pytest.raises(ValueError):
        energy_floor_table([50], -1.0, "codata")


def test_classical_energy_floor_formula_and_argmax():
    lead = (3.0 * math.sqrt(15.0) - 11.0) / (6.0 * math.sqrt(15.0) - 18.0)
    root = math.sqrt((8.0 - 2.0 * math.sqrt(15.0)) / (6.0 - math.sqrt(15.0)))
    n = 10
    expected = lead * (root * 2.0 ** (n / 2.0) * (n * math.log(2.0) - 1.0) - 1.0)
    expected -= math.log(2.0)
    assert classical_simon_energy_floor(n, 1.0) == pytest.approx(expected, rel=1e-12)
    assert classical_simon_energy_floor(n, 1.0) == pytest.approx(
        6.9399169484014385, rel=1e-12
    )
    assert classical_simon_energy_floor(n, 2.0) == pytest.approx(
        expected / 2.0, rel=1e-12
    )

    grid = np.arange(0.03, 0.12, 1e-5)
    values = [classical_simon_energy_floor(40, 1.0, float(d)) for d in grid]
    best = grid[int(np.argmax(values))]
    assert abs(best - DELTA_STAR) <= 1e-4

    with pytest.raises(ValueError):
        classical_simon_energy_floor(10, 1.0, 0.2)
    with pytest.raises(ValueError):
        classical_simon_energy_floor(10, 0.0)


def test_falling_factorial_bounds_frozen_case_and_edges():
    bounds = log_falling_factorial_bounds(4, 1.0 / 6.0)
    assert bounds.queries == 3
    assert bounds.exact == pytest.approx(math.log(3360.0), abs=TOL)
    assert bounds.floor == pytest.approx(
        math.sqrt(2.0 / 7.0) * 4.0 * (4.0 * math.log(2.0) - 1.0) - 1.0, abs=TOL
    )
    assert log_falling_factorial(4, 0) == 0.0
    assert log_falling_factorial(2, 4) == pytest.approx(math.log(24.0), abs=TOL)
    with pytest.raises(ValueError):
        log_falling_factorial_bounds(4, 0.3)


@pytest.mark.parametrize("delta", [0.05, 1.0 / 12.0, 0.0635])
def test_falling_factorial_exact_dominates_floor_for_all_sizes(delta):
    for n in range(1, 21):
        bounds = log_falling_factorial_bounds(n, delta)
        assert bounds.exact >= bounds.floor - TOL


def test_record_entropy_brute_force_matches_the_closed_form():
    for n in (2, 3):
        size = 2**n
        for m in range(0, size + 1):
            brute = record_entropy_bruteforce(n, m)
            exact = log_falling_factorial(n, m)
            assert brute == pytest.approx(exact, abs=TOL)
            assert brute >= record_entropy_floor(n, m) - TOL
    assert record_entropy_bruteforce(2, 1) == pytest.approx(math.log(4.0), abs=TOL)
    assert record_entropy_bruteforce(2, 2) == pytest.approx(math.log(12.0), abs=TOL)


def test_record_outcome_frozen_values_for_the_smallest_case():
    outcome = classical_record_outcome(2, 2)
    assert outcome.p[1] == pytest.approx(1.0 / 6.0, abs=TOL)
    assert outcome.p[0] == pytest.approx(5.0 / 6.0, abs=TOL)
    assert outcome.cond_entropy[1] == pytest.approx(math.log(48.0), abs=TOL)
    assert outcome.cond_entropy[0] == pytest.approx(math.log(144.0), abs=TOL)
    assert outcome.conditional_entropy == pytest.approx(4.786711251464649, abs=TOL)


@pytest.mark.parametrize("n,m", [(2, 1), (2, 3), (3, 2), (3, 3)])
def test_record_outcome_is_a_distribution_with_nonnegative_entropies(n, m):
    outcome = classical_record_outcome(n, m)
    assert sum(outcome.p.values()) == pytest.approx(1.0, abs=TOL)
    assert all(v >= -TOL for v in outcome.cond_entropy.values())
    if m >= 2:
        assert outcome.p.get(1, 0.0) > 0.0


def test_outcome_validation_rejects_malformed_statistics():
    with pytest.raises(ValueError):
        RunOutcome(p={0: 0.7}, cond_entropy={0: 1.0})
    with pytest.raises(ValueError):
        RunOutcome(p={0: 1.0}, cond_entropy={1: 1.0})
    with pytest.raises(ValueError):
        RunOutcome(p={0: 1.0}, cond_entropy={0: -1.0})


def test_entropy_floor_of_a_maximally_mixed_register():
    w = 12
    outcome = RunOutcome(p={0: 1.0}, cond_entropy={0: w * math.log(2.0)})
    assert entropy_energy_floor(outcome, 2.0) == pytest.approx(
        w * math.log(2.0) / 2.0, abs=TOL
    )
    with pytest.raises(ValueError):
        entropy_energy_floor(outcome, 0.0)


def test_every_classical_run_pays_at_least_the_answer_entropy_floor():
    cost = CostModel()
    floor = entropy_energy_floor(classical_record_outcome(2, 2), cost.beta)
    for seed in range(30):
        rng = np.random.default_rng([99, seed])
        inst = sample_uniform_instance(2, rng)
        run = run_framework(inst, cost, rng, algorithm="classical", m=2)
        assert run.ledger.total_w >= floor - TOL


def test_mean_energy_dominates_the_floor_even_without_control_costs():
    cost = CostModel(e_ctrl=0.0, c_ctrl_env=0.0)
    floor = entropy_energy_floor(classical_record_outcome(2, 2), cost.beta)
    totals = []
    for seed in range(200):
        rng = np.random.default_rng([555, seed])
        inst = sample_uniform_instance(2, rng)
        run = run_framework(inst, cost, rng, algorithm="classical", m=2)
        totals.append(run.ledger.total_w)
    assert float(np.mean(totals)) >= floor


def test_independent_rounds_price_additively():
    rng = np.random.default_rng(4)
    inst = sample_uniform_instance(2, rng, b=1)
    stage1, stage2, stage3 = fourier_twice_stages(inst)
    weights = np.array([bin(i).count("1") for i in range(inst.size)], dtype=float)
    joint_w = weights[:, None] + weights[None, :]

    def energy(stage: np.ndarray) -> float:
        return float((np.abs(stage) ** 2 * joint_w).sum())

    single = energy(stage3)
    pair = np.kron(stage3.reshape(-1), stage3.reshape(-1))
    probs = np.abs(pair) ** 2
    flat_w = joint_w.reshape(-1)
    pair_w = flat_w[:, None] + flat_w[None, :]
    joint_energy = float((probs.reshape(len(flat_w), len(flat_w)) * pair_w).sum())
    assert joint_energy == pytest.approx(2.0 * single, rel=1e-12)


def test_quantum_run_prices_the_first_layer_exactly():
    cost = CostModel()
    rng = np.random.default_rng(8)
    inst = sample_uniform_instance(2, rng)
    run = run_framework(inst, cost, rng, algorithm="quantum")
    # the first sampling layer lifts n/2 expected excitations on the inputs
    assert run.ledger.delta_e_gates[0] == pytest.approx(
        cost.e_qubit * inst.n / 2.0, abs=TOL
    )


def test_identical_seeds_give_identical_ledgers():
    cost = CostModel()
    runs = []
    for _ in range(2):
        rng = np.random.default_rng([42, 0])
        inst = sample_uniform_instance(3, rng)
        runs.append(run_framework(inst, cost, rng, algorithm="quantum"))
    assert runs[0].ledger.report_dict() == runs[1].ledger.report_dict()
    assert runs[0].record == runs[1].record
