"""Energy bookkeeping for oracle computations and the bound calculators.

This module prices a full run of the query framework.  Every unitary block,
oracle query, output transfer, and final register erasure is charged to an
itemized ledger, and the analytic calculators provide matching upper and
lower bounds on the total energy consumption.  Entropies are in nats and
energies are in the units fixed by the cost model.

The register erasure inside a run uses one fixed protocol, planned for the
maximally mixed qubit state, applied identically to every register qubit.
A protocol that adapted to the realized register contents could erase at
artificially low heat and would invalidate the entropy lower bound, so the
plan is chosen once from the ensemble marginal and the realized heat per
qubit is the planned heat plus an affine correction in the actual state.
"""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass

import numpy as np

from .erasure import (
    ErasureConfig,
    ErasurePlan,
    build_plan,
    execute,
    required_steps,
)
from .simon import (
    BoundParams,
    SimonInstance,
    classical_solve,
    collision_queries,
    fourier_twice_stages,
    query_count_floor,
    quantum_solve,
)
from .states import DensityOperator

KB_CODATA = 1.380649e-23
"""Boltzmann constant in joules per kelvin (exact SI value)."""

KB_ROUNDED = 1e-23
"""Rounded Boltzmann constant used by the headline floor table."""

DELTA_STAR = 2.0 - math.sqrt(15.0) / 2.0
"""Argmax of the classical energy floor's leading constant over (0, 1/6)."""

MAX_QUANTUM_LEDGER_BITS = 6
MAX_BRUTEFORCE_BITS = 3
MAX_RECORD_ENUMERATION = 20_000_000


@dataclass(frozen=True)
class CostModel:
    """Energy pricing for one run of the query framework.

    e_qubit is the largest single-qubit Hamiltonian norm, e_ctrl the control
    cost per qubit per depth layer, and c_ctrl_env the coefficient of the
    erasure apparatus cost c_ctrl_env * W * (T / beta) * ln(1 / epsilon).
    beta is the inverse temperature of the erasure environment; eta and
    epsilon are the erasure accuracy targets passed to the erasure protocol.
    d_swap is the circuit depth of one swap.
    """

    e_qubit: float = 1.0
    e_ctrl: float = 0.05
    c_ctrl_env: float = 0.05
    beta: float = 1.0
    eta: float = 0.1
    epsilon: float = 1e-3
    d_swap: int = 3

    def __post_init__(self) -> None:
        if self.e_qubit <= 0.0:
            raise ValueError("e_qubit must be positive")
        if self.e_ctrl < 0.0 or self.c_ctrl_env < 0.0:
            raise ValueError("control coefficients must be nonnegative")
        if self.beta <= 0.0:
            raise ValueError("beta must be positive")
        if not 0.0 < self.eta <= 1.0:
            raise ValueError("eta must lie in (0, 1]")
        if not 0.0 < self.epsilon <= 0.5:
            raise ValueError("epsilon must lie in (0, 1/2]")
        if not (isinstance(self.d_swap, int) and self.d_swap >= 1):
            raise ValueError("d_swap must be a positive integer")

    def erasure_config(self) -> ErasureConfig:
        """Qubit erasure settings implied by this cost model."""
        return ErasureConfig(
            beta=self.beta, epsilon=self.epsilon, eta=self.eta, dim=2
        )


@dataclass(frozen=True)
class CircuitShape:
    """Width, query count, and per-block depths of one framework circuit.

    depths lists the depth of each unitary block between consecutive oracle
    queries, ending with the post-processing block, so it has m + 1 entries.
    d_erase is the depth of the erasure stage.
    """

    n: int
    w: int
    m: int
    depths: tuple[int, ...]
    d_erase: int

    def __post_init__(self) -> None:
        if self.n < 0 or self.m < 0:
            raise ValueError("n and m must be nonnegative")
        if self.w < max(1, 2 * self.n):
            raise ValueError("width must be at least 2n and positive")
        if len(self.depths) != self.m + 1:
            raise ValueError("depths must have m + 1 entries")
        if any(
            (not isinstance(d, (int, np.integer))) or d < 0 for d in self.depths
        ):
            raise ValueError("depths must be nonnegative integers")
        if self.d_erase < 0:
            raise ValueError("d_erase must be nonnegative")

    @property
    def gate_depth(self) -> int:
        """Total depth of the unitary blocks alone."""
        return int(sum(self.depths))

    def total_depth(self, d_swap: int) -> int:
        """Full circuit depth including query, output, and erasure swaps."""
        return self.gate_depth + (2 * self.m + 1) * d_swap + self.d_erase


def erasure_depth(cost: CostModel) -> int:
    """Depth of the erasure stage: one swap per interaction step."""
    return required_steps(cost.erasure_config()) * cost.d_swap


def simon_quantum_shape(n: int, cost: CostModel, rounds: int | None = None) -> CircuitShape:
    """Circuit shape of the simulated quantum solver with verification.

    Each of the ``rounds`` sampling phases uses a fresh 2n-qubit slot, two
    further slots hold the verification queries, and one qubit holds the
    answer.  Post-processing is budgeted a cubic depth for the linear solve.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if rounds is None:
        rounds = n + 10
    if rounds < 1:
        raise ValueError("rounds must be positive")
    m = rounds + 2
    depths = (1,) + (2,) * (rounds - 1) + (2, 1, 1 + n**3)
    return CircuitShape(
        n=n, w=2 * n * m + 1, m=m, depths=depths, d_erase=erasure_depth(cost)
    )


def simon_classical_shape(n: int, m: int, cost: CostModel) -> CircuitShape:
    """Circuit shape of the random-query classical solver."""
    if n < 1 or m < 1:
        raise ValueError("n and m must be positive")
    depths = (1,) * m + (max(1, m * m),)
    return CircuitShape(
        n=n, w=2 * n * m + 1, m=m, depths=depths, d_erase=erasure_depth(cost)
    )


def simon_scaling_shape(n: int, cost: CostModel, rounds: int | None = None) -> CircuitShape:
    """Idealized shape used for asymptotic growth studies of the bounds.

    Width 2n per query slot with no answer qubit, unit depth per sampling
    block, and a cubic post-processing block.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if rounds is None:
        rounds = n + 10
    m = rounds + 2
    depths = (1,) * m + (n**3,)
    return CircuitShape(
        n=n, w=2 * n * m, m=m, depths=depths, d_erase=erasure_depth(cost)
    )


def trivial_shape(cost: CostModel) -> CircuitShape:
    """Shape of the do-nothing algorithm: one answer qubit, no queries."""
    return CircuitShape(n=0, w=1, m=0, depths=(0,), d_erase=erasure_depth(cost))


@dataclass(frozen=True)
class EnergyLedger:
    """Itemized energy flows of one framework run.

    Gate entries follow the block order U_1 .. U_{m+1}; input entries follow
    the query order.  delta_e_out is the energy leaving with the answer and
    delta_e_erasure the register energy change during reinitialization.
    q_e is the heat dissipated into the erasure environment.
    """

    shape: CircuitShape
    cost: CostModel
    delta_e_gates: tuple[float, ...]
    ctrl_gates: tuple[float, ...]
    delta_e_inputs: tuple[float, ...]
    ctrl_inputs: tuple[float, ...]
    delta_e_out: float
    ctrl_out: float
    delta_e_erasure: float
    ctrl_erasure: float
    q_e: float
    erasure_steps: int
    touched_qubits: int

    def __post_init__(self) -> None:
        if len(self.delta_e_gates) != self.shape.m + 1:
            raise ValueError("delta_e_gates must have m + 1 entries")
        if len(self.ctrl_gates) != self.shape.m + 1:
            raise ValueError("ctrl_gates must have m + 1 entries")
        if len(self.delta_e_inputs) != self.shape.m:
            raise ValueError("delta_e_inputs must have m entries")
        if len(self.ctrl_inputs) != self.shape.m:
            raise ValueError("ctrl_inputs must have m entries")
        if min(
            [0.0, self.ctrl_out, self.ctrl_erasure]
            + list(self.ctrl_gates)
            + list(self.ctrl_inputs)
        ) < 0.0:
            raise ValueError("control costs must be nonnegative")

    @property
    def delta_e_in_total(self) -> float:
        """Energy injected by the oracle across all queries."""
        return float(sum(self.delta_e_inputs))

    @property
    def q_e_prime(self) -> float:
        """Total control work, dissipated outside the computer."""
        return float(
            sum(self.ctrl_gates)
            + sum(self.ctrl_inputs)
            + self.ctrl_out
            + self.ctrl_erasure
        )

    @property
    def w_gates(self) -> float:
        """Work cost of all gates, query swaps, output swap, and erasure."""
        return float(
            sum(self.delta_e_gates)
            + sum(self.ctrl_gates)
            + sum(self.ctrl_inputs)
            + self.ctrl_out
            + (self.delta_e_erasure + self.ctrl_erasure + self.q_e)
        )

    @property
    def total_w(self) -> float:
        """Total energy consumption of the run."""
        return self.w_gates + self.delta_e_in_total - self.delta_e_out

    @property
    def conservation_residual(self) -> float:
        """Net register energy over the full cycle; vanishes as epsilon -> 0."""
        return float(
            sum(self.delta_e_gates)
            + self.delta_e_in_total
            - self.delta_e_out
            + self.delta_e_erasure
        )

    def report_dict(self) -> dict:
        """Serializable summary with the stable external key set."""
        return {
            "w": self.shape.w,
            "m": self.shape.m,
            "depths": [int(d) for d in self.shape.depths],
            "e_qubit": self.cost.e_qubit,
            "beta": self.cost.beta,
            "eta": self.cost.eta,
            "epsilon": self.cost.epsilon,
            "delta_e_gates": [float(x) for x in self.delta_e_gates],
            "ctrl_total": self.q_e_prime,
            "q_e": self.q_e,
            "q_e_prime": self.q_e_prime,
            "total_w": self.total_w,
            "conservation_residual": self.conservation_residual,
        }


@dataclass(frozen=True)
class RunOutcome:
    """Answer statistics of a run or of a run ensemble.

    p maps each announced answer to its probability, and cond_entropy maps
    it to the entropy in nats of the computer state conditioned on that
    answer.  For a single realized run both maps are degenerate.
    """

    p: dict[int, float]
    cond_entropy: dict[int, float]
    a: int | None = None

    def __post_init__(self) -> None:
        if set(self.p) != set(self.cond_entropy):
            raise ValueError("p and cond_entropy must share the same answers")
        if not self.p:
            raise ValueError("outcome must cover at least one answer")
        total = sum(self.p.values())
        if abs(total - 1.0) > 1e-9:
            raise ValueError("answer probabilities must sum to one")
        if min(self.p.values()) < -1e-12:
            raise ValueError("answer probabilities must be nonnegative")
        if min(self.cond_entropy.values()) < -1e-9:
            raise ValueError("conditional entropies must be nonnegative")

    @property
    def conditional_entropy(self) -> float:
        """Average entropy of the computer state given the answer, in nats."""
        return float(
            sum(self.p[a] * self.cond_entropy[a] for a in self.p)
        )

    @classmethod
    def deterministic(cls, a: int, entropy: float = 0.0) -> RunOutcome:
        """Outcome of one realized run with a definite answer."""
        return cls(p={a: 1.0}, cond_entropy={a: entropy}, a=a)


@dataclass(frozen=True)
class RunRecord:
    """What one framework run computed, independent of its energy price."""

    algorithm: str
    n: int
    b: int | None
    a: int
    correct: bool
    s_hat: int | None
    m_used: int


@dataclass(frozen=True)
class FrameworkRun:
    """Bundle of ledger, outcome, and record for one framework run."""

    ledger: EnergyLedger
    outcome: RunOutcome
    record: RunRecord


@functools.lru_cache(maxsize=64)
def _shared_erasure(cfg: ErasureConfig) -> tuple[ErasurePlan, float, float, float]:
    """Fixed qubit erasure plan from the maximally mixed state.

    Returns the plan, its planned heat, and the diagonal of the first
    interaction Hamiltonian, which is all the affine heat correction needs.
    """
    mixed = DensityOperator(np.eye(2, dtype=complex) / 2.0)
    plan = build_plan(mixed, cfg)
    report = execute(plan, cfg)
    h0 = plan.env_h[0]
    return plan, report.q_e, float(h0[0, 0].real), float(h0[1, 1].real)


def _erasure_terms(
    p_one: np.ndarray, cost: CostModel
) -> tuple[float, float, float, int, int]:
    """Heat, energy change, and control cost of erasing the whole register.

    p_one holds each register qubit's probability of being in state one at
    erasure time; the fixed plan is applied to every qubit regardless.
    """
    cfg = cost.erasure_config()
    _, q_plan, h00, h11 = _shared_erasure(cfg)
    steps = required_steps(cfg)
    w = p_one.size
    q_e = float(w * q_plan + (h11 - h00) * (p_one - 0.5).sum())
    delta_e = float(cost.e_qubit * (w * cfg.epsilon - p_one.sum()))
    ctrl = cost.c_ctrl_env * w * (steps / cost.beta) * math.log(1.0 / cfg.epsilon)
    touched = int((p_one > 1e-12).sum())
    return q_e, delta_e, ctrl, steps, touched


def _bit_masks(n: int) -> np.ndarray:
    """(2^n, n) array whose row x lists the bits of x."""
    return ((np.arange(1 << n)[:, None] >> np.arange(n)[None, :]) & 1).astype(float)


def _basis_bits(value: int, n: int) -> np.ndarray:
    """Bits of a basis-state label as a float array of length n."""
    return ((value >> np.arange(n)) & 1).astype(float)


def _control_terms(
    shape: CircuitShape, cost: CostModel
) -> tuple[tuple[float, ...], tuple[float, ...], float]:
    """Per-block, per-query, and output control costs for a shape."""
    ctrl_gates = tuple(cost.e_ctrl * shape.w * d for d in shape.depths)
    ctrl_inputs = tuple(
        cost.e_ctrl * shape.w * 2 * cost.d_swap for _ in range(shape.m)
    )
    ctrl_out = cost.e_ctrl * shape.w * cost.d_swap
    return ctrl_gates, ctrl_inputs, ctrl_out


def _quantum_run(
    inst: SimonInstance,
    cost: CostModel,
    rng: np.random.Generator,
    rounds: int | None,
) -> FrameworkRun:
    if inst.n > MAX_QUANTUM_LEDGER_BITS:
        raise ValueError(
            f"quantum ledger runs support n <= {MAX_QUANTUM_LEDGER_BITS}"
        )
    if rounds is None:
        rounds = inst.n + 10
    result = quantum_solve(inst, rng, rounds=rounds)
    m = rounds + 2
    shape = simon_quantum_shape(inst.n, cost, rounds)
    n = inst.n

    masks = _bit_masks(n)
    pops = masks.sum(axis=1)
    stage1, stage2, stage3 = fourier_twice_stages(inst)

    def register_energy(psi: np.ndarray) -> float:
        weights = np.abs(psi) ** 2
        return float(
            cost.e_qubit * (weights.sum(axis=1) @ pops + weights.sum(axis=0) @ pops)
        )

    e1 = register_energy(stage1)
    e2 = register_energy(stage2)
    e3 = register_energy(stage3)

    delta_gates = np.zeros(m + 1)
    delta_inputs = np.zeros(m)
    delta_gates[0] = e1
    for k in range(1, rounds):
        delta_gates[k] = (e3 - e2) + e1
    delta_inputs[:rounds] = e2 - e1
    delta_gates[rounds] = e3 - e2

    weights3 = np.abs(stage3) ** 2
    slot_p_one = np.concatenate(
        [masks.T @ weights3.sum(axis=1), masks.T @ weights3.sum(axis=0)]
    )
    p_one_parts = [np.tile(slot_p_one, rounds)]

    verify = result.log.queries
    if verify:
        (x1, y1), (x2, y2) = verify
        delta_gates[rounds] += cost.e_qubit * x1.bit_count()
        delta_inputs[rounds] = cost.e_qubit * y1.bit_count()
        delta_gates[rounds + 1] = cost.e_qubit * x2.bit_count()
        delta_inputs[rounds + 1] = cost.e_qubit * y2.bit_count()
        for x, y in ((x1, y1), (x2, y2)):
            p_one_parts.append(_basis_bits(x, n))
            p_one_parts.append(_basis_bits(y, n))
    else:
        p_one_parts.append(np.zeros(4 * n))

    answer = result.a
    delta_gates[m] = cost.e_qubit * answer
    delta_e_out = cost.e_qubit * answer
    p_one_parts.append(np.zeros(1))
    p_one = np.concatenate(p_one_parts)
    assert p_one.size == shape.w

    q_e, delta_e_erasure, ctrl_erasure, steps, touched = _erasure_terms(p_one, cost)
    ctrl_gates, ctrl_inputs, ctrl_out = _control_terms(shape, cost)
    ledger = EnergyLedger(
        shape=shape,
        cost=cost,
        delta_e_gates=tuple(float(x) for x in delta_gates),
        ctrl_gates=ctrl_gates,
        delta_e_inputs=tuple(float(x) for x in delta_inputs),
        ctrl_inputs=ctrl_inputs,
        delta_e_out=float(delta_e_out),
        ctrl_out=ctrl_out,
        delta_e_erasure=delta_e_erasure,
        ctrl_erasure=ctrl_erasure,
        q_e=q_e,
        erasure_steps=steps,
        touched_qubits=touched,
    )
    record = RunRecord(
        algorithm="quantum",
        n=inst.n,
        b=inst.b,
        a=answer,
        correct=answer == inst.b,
        s_hat=result.s_hat,
        m_used=result.m_used,
    )
    return FrameworkRun(ledger, RunOutcome.deterministic(answer), record)


def _classical_run(
    inst: SimonInstance,
    cost: CostModel,
    rng: np.random.Generator,
    m: int | None,
) -> FrameworkRun:
    if m is None:
        m = min(collision_queries(inst.n), inst.size)
    result = classical_solve(inst, m, rng)
    shape = simon_classical_shape(inst.n, m, cost)
    n = inst.n

    queries = result.log.queries
    delta_gates = np.zeros(m + 1)
    delta_inputs = np.zeros(m)
    p_one_parts = []
    for k, (x, y) in enumerate(queries):
        delta_gates[k] = cost.e_qubit * x.bit_count()
        delta_inputs[k] = cost.e_qubit * y.bit_count()
        p_one_parts.append(_basis_bits(x, n))
        p_one_parts.append(_basis_bits(y, n))

    answer = result.a
    delta_gates[m] = cost.e_qubit * answer
    delta_e_out = cost.e_qubit * answer
    p_one_parts.append(np.zeros(1))
    p_one = np.concatenate(p_one_parts)
    assert p_one.size == shape.w

    q_e, delta_e_erasure, ctrl_erasure, steps, touched = _erasure_terms(p_one, cost)
    ctrl_gates, ctrl_inputs, ctrl_out = _control_terms(shape, cost)
    ledger = EnergyLedger(
        shape=shape,
        cost=cost,
        delta_e_gates=tuple(float(x) for x in delta_gates),
        ctrl_gates=ctrl_gates,
        delta_e_inputs=tuple(float(x) for x in delta_inputs),
        ctrl_inputs=ctrl_inputs,
        delta_e_out=float(delta_e_out),
        ctrl_out=ctrl_out,
        delta_e_erasure=delta_e_erasure,
        ctrl_erasure=ctrl_erasure,
        q_e=q_e,
        erasure_steps=steps,
        touched_qubits=touched,
    )
    record = RunRecord(
        algorithm="classical",
        n=inst.n,
        b=inst.b,
        a=answer,
        correct=answer == inst.b,
        s_hat=result.s_hat,
        m_used=m,
    )
    return FrameworkRun(ledger, RunOutcome.deterministic(answer), record)


def _trivial_run(inst: SimonInstance | None, cost: CostModel) -> FrameworkRun:
    shape = trivial_shape(cost)
    p_one = np.zeros(1)
    q_e, delta_e_erasure, ctrl_erasure, steps, touched = _erasure_terms(p_one, cost)
    ctrl_gates, ctrl_inputs, ctrl_out = _control_terms(shape, cost)
    ledger = EnergyLedger(
        shape=shape,
        cost=cost,
        delta_e_gates=(0.0,),
        ctrl_gates=ctrl_gates,
        delta_e_inputs=(),
        ctrl_inputs=ctrl_inputs,
        delta_e_out=0.0,
        ctrl_out=ctrl_out,
        delta_e_erasure=delta_e_erasure,
        ctrl_erasure=ctrl_erasure,
        q_e=q_e,
        erasure_steps=steps,
        touched_qubits=touched,
    )
    record = RunRecord(
        algorithm="trivial",
        n=inst.n if inst is not None else 0,
        b=inst.b if inst is not None else None,
        a=0,
        correct=(inst.b == 0) if inst is not None else True,
        s_hat=None,
        m_used=0,
    )
    return FrameworkRun(ledger, RunOutcome.deterministic(0), record)


def run_framework(
    inst: SimonInstance | None,
    cost: CostModel,
    rng: np.random.Generator,
    algorithm: str = "quantum",
    rounds: int | None = None,
    m: int | None = None,
) -> FrameworkRun:
    """Run one algorithm inside the framework and price every energy flow.

    algorithm selects the quantum sampler, the classical random-query
    solver, or the trivial solver that outputs zero without computing.
    rounds configures the quantum sampler, m the classical query count.
    """
    if algorithm == "quantum":
        if inst is None:
            raise ValueError("quantum runs require an instance")
        return _quantum_run(inst, cost, rng, rounds)
    if algorithm == "classical":
        if inst is None:
            raise ValueError("classical runs require an instance")
        return _classical_run(inst, cost, rng, m)
    if algorithm == "trivial":
        return _trivial_run(inst, cost)
    raise ValueError(f"unknown algorithm {algorithm!r}")


@dataclass(frozen=True)
class BoundConstants:
    """Explicit constants for the upper-bound calculators.

    The analytic bounds are stated up to constants and polylog exponents;
    the calculators evaluate the displayed expressions with these values and
    echo them next to every result so the numbers stay falsifiable.
    """

    c1: float = 1.0
    c2: float = 1.0
    c3: float = 1.0
    p: int = 2
    q: int = 2

    def __post_init__(self) -> None:
        if min(self.c1, self.c2, self.c3) < 0.0:
            raise ValueError("constants must be nonnegative")
        if self.p < 1 or self.q < 1:
            raise ValueError("polylog exponents must be at least one")


@dataclass(frozen=True)
class IdealBound:
    """Ideal-case upper bound on run energy, with its term breakdown."""

    value: float
    gate_term: float
    erasure_term: float
    constants: BoundConstants


@dataclass(frozen=True)
class FaultTolerantBound:
    """Fault-tolerant upper bound on run energy, with overhead factors."""

    value: float
    gate_term: float
    erasure_term: float
    polylog_factor: float
    w_ft: float
    d_ft: float
    constants: BoundConstants


def ideal_energy_upper(
    shape: CircuitShape, cost: CostModel, constants: BoundConstants | None = None
) -> IdealBound:
    """Upper bound on run energy without gate errors.

    Evaluates c1 * E_qubit * W * (sum D_k + c2 * M) plus
    (E_qubit + c3 / (beta eta)) * (W / eta) * ln(1 / (epsilon eta))^p.
    """
    c = constants if constants is not None else BoundConstants()
    gate_term = c.c1 * cost.e_qubit * shape.w * (shape.gate_depth + c.c2 * shape.m)
    lam = math.log(1.0 / (cost.epsilon * cost.eta))
    erasure_term = (
        (cost.e_qubit + c.c3 / (cost.beta * cost.eta))
        * (shape.w / cost.eta)
        * lam**c.p
    )
    return IdealBound(gate_term + erasure_term, gate_term, erasure_term, c)


def fault_tolerant_energy_upper(
    shape: CircuitShape, cost: CostModel, constants: BoundConstants | None = None
) -> FaultTolerantBound:
    """Upper bound on run energy for a fault-tolerant, measurement-free run.

    The simulation overhead multiplies both terms by the amplification
    factor sum D_k + M + 1/eta and by the polylog factor ln(W * D)^q, where
    D is the total depth including query, output, and erasure swaps.  The
    implied fault-tolerant width W * D * ln(W * D)^q and depth
    D * ln(W * D)^q are reported alongside the bound.
    """
    c = constants if constants is not None else BoundConstants()
    d_total = shape.total_depth(cost.d_swap)
    amplification = shape.gate_depth + shape.m + 1.0 / cost.eta
    polylog = math.log(shape.w * d_total) ** c.q
    gate_term = (
        c.c1
        * cost.e_qubit
        * shape.w
        * amplification
        * (shape.gate_depth + c.c2 * shape.m)
        * polylog
    )
    erasure_term = (
        (cost.e_qubit + c.c3 / (cost.beta * cost.eta))
        * shape.w
        * amplification
        / cost.eta
        * polylog
    )
    return FaultTolerantBound(
        value=gate_term + erasure_term,
        gate_term=gate_term,
        erasure_term=erasure_term,
        polylog_factor=polylog,
        w_ft=shape.w * d_total * polylog,
        d_ft=d_total * polylog,
        constants=c,
    )


def matched_constants(cost: CostModel) -> BoundConstants:
    """Constants that make the ideal bound dominate every priced run.

    The gate constants absorb the control costs per depth layer and per
    query swap.  The erasure constant converts the computed per-qubit heat
    cap, the residual register energy, and the erasure apparatus cost into
    the bound's erasure term.  Dominance then holds for every shape this
    module produces with at least one query.
    """
    cfg = cost.erasure_config()
    steps = required_steps(cfg)
    _, q_plan, h00, h11 = _shared_erasure(cfg)
    c1 = 1.0 + cost.e_ctrl / cost.e_qubit
    c2 = (1.0 + 3.0 * cost.d_swap * cost.e_ctrl / cost.e_qubit) / c1
    heat_cap = cost.beta * q_plan + cost.beta * abs(h11 - h00) / 2.0
    per_qubit = (
        cost.epsilon * cost.e_qubit
        + heat_cap / cost.beta
        + cost.c_ctrl_env * (steps / cost.beta) * math.log(1.0 / cost.epsilon)
    )
    lam = math.log(1.0 / (cost.epsilon * cost.eta))
    c3 = per_qubit * cost.beta * cost.eta**2 / lam**2
    return BoundConstants(c1=c1, c2=c2, c3=c3, p=2, q=2)


def entropy_energy_floor(outcome: RunOutcome, beta: float) -> float:
    """Least average energy any run with these answer statistics costs."""
    if beta <= 0.0:
        raise ValueError("beta must be positive")
    return outcome.conditional_entropy / beta


def classical_simon_energy_floor(
    n: int, beta: float, delta: float | None = None
) -> float:
    """Least average energy of any classical solver of the hidden-shift task.

    delta trades the queried fraction against the tail probability and
    defaults to the value maximizing the leading constant.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if beta <= 0.0:
        raise ValueError("beta must be positive")
    if delta is None:
        delta = DELTA_STAR
    if not 0.0 < delta < 1.0 / 6.0:
        raise ValueError("delta must lie in (0, 1/6)")
    lead = (1.0 - 6.0 * delta) / (6.0 - 12.0 * delta)
    root = math.sqrt(2.0 * delta / (1.0 + delta))
    inner = root * 2.0 ** (n / 2.0) * (n * math.log(2.0) - 1.0) - 1.0
    return (lead * inner - math.log(2.0)) / beta


@dataclass(frozen=True)
class FloorTableRow:
    """One row of the classical energy floor table, in joules."""

    n: int
    temp_kelvin: float
    kb_mode: str
    bound_joules: float


def energy_floor_table(
    n_list: list[int] | tuple[int, ...],
    temp_kelvin: float = 300.0,
    kb_mode: str = "codata",
) -> tuple[FloorTableRow, ...]:
    """Classical energy floors at a physical temperature.

    kb_mode selects the exact SI Boltzmann constant ("codata") or the
    rounded value 1e-23 J/K ("rounded").
    """
    if temp_kelvin <= 0.0:
        raise ValueError("temperature must be positive")
    try:
        kb = {"codata": KB_CODATA, "rounded": KB_ROUNDED}[kb_mode]
    except KeyError:
        raise ValueError("kb_mode must be 'codata' or 'rounded'") from None
    beta = 1.0 / (kb * temp_kelvin)
    return tuple(
        FloorTableRow(
            n=int(n),
            temp_kelvin=float(temp_kelvin),
            kb_mode=kb_mode,
            bound_joules=classical_simon_energy_floor(int(n), beta),
        )
        for n in n_list
    )


def log_falling_factorial(n: int, m: int) -> float:
    """ln of the number of ordered m-tuples of distinct n-bit values."""
    size = 1 << n
    if not 0 <= m <= size:
        raise ValueError("m must lie in [0, 2^n]")
    return float(sum(math.log(size - j) for j in range(m)))


@dataclass(frozen=True)
class FallingFactorialBounds:
    """Exact log falling factorial next to its closed-form floor."""

    queries: int
    exact: float
    floor: float


def log_falling_factorial_bounds(n: int, delta: float) -> FallingFactorialBounds:
    """Exact record-count logarithm and its floor at the query floor count.

    Uses the least query count that keeps the missed-collision penalty at
    delta; the closed-form floor is what the analytic energy bound uses in
    place of the exact sum.  The endpoint delta = 1/6 is allowed here: the
    comparison is well defined there even though the downstream tail floor
    degenerates to zero.
    """
    if not 0.0 < delta <= 1.0 / 6.0:
        raise ValueError("delta must lie in (0, 1/6]")
    m = query_count_floor(n, BoundParams(delta_cap=delta))
    if m > (1 << n):
        raise ValueError("query floor exceeds the domain size")
    exact = log_falling_factorial(n, m)
    floor = (
        math.sqrt(2.0 * delta / (1.0 + delta))
        * 2.0 ** (n / 2.0)
        * (n * math.log(2.0) - 1.0)
        - 1.0
    )
    assert exact >= floor
    return FallingFactorialBounds(queries=m, exact=exact, floor=floor)


def record_entropy_floor(n: int, m: int) -> float:
    """Half the log record count: the analytic floor on record entropy."""
    return 0.5 * log_falling_factorial(n, m)


def record_entropy_bruteforce(
    n: int, m: int, rng: np.random.Generator | None = None
) -> float:
    """Entropy of the reply marginal by enumerating every bijective oracle.

    Draws m distinct queries, applies all (2^n)! permutations, and returns
    the entropy of the reply tuple distribution, which equals the log
    falling factorial exactly.
    """
    if n > MAX_BRUTEFORCE_BITS:
        raise ValueError(
            f"brute force enumerates (2^n)! oracles; n <= {MAX_BRUTEFORCE_BITS}"
        )
    size = 1 << n
    if not 0 <= m <= size:
        raise ValueError("m must lie in [0, 2^n]")
    if rng is None:
        xs = np.arange(m)
    else:
        xs = rng.choice(size, size=m, replace=False)
    perms = np.array(list(itertools.permutations(range(size))), dtype=np.int64)
    if m == 0:
        return 0.0
    replies = perms[:, xs]
    radix = size ** np.arange(m - 1, -1, -1, dtype=np.int64)
    codes = replies @ radix
    _, counts = np.unique(codes, return_counts=True)
    probs = counts / perms.shape[0]
    return float(-(probs * np.log(probs)).sum())


def classical_record_outcome(n: int, m: int) -> RunOutcome:
    """Exact answer statistics of the random-query solver on uniform tasks.

    Enumerates every ordered tuple of distinct queries and every reply
    tuple, weights replies by the uniform instance ensemble, and returns
    the answer distribution together with the entropy of the classical
    record conditioned on the announced answer.
    """
    size = 1 << n
    if not 1 <= m <= size:
        raise ValueError("m must lie in [1, 2^n]")
    x_count = 1
    for j in range(m):
        x_count *= size - j
    y_count = size**m
    work = x_count * y_count * max(size - 1, 1)
    if work > MAX_RECORD_ENUMERATION:
        raise ValueError("enumeration too large; reduce n or m")

    ys = np.array(list(itertools.product(range(size), repeat=m)), dtype=np.int64)
    eq = ys[:, :, None] == ys[:, None, :]
    collide = np.zeros(ys.shape[0], dtype=bool)
    for i in range(m):
        for j in range(i + 1, m):
            collide |= eq[:, i, j]

    falling = [1.0] * (m + 1)
    for k in range(1, m + 1):
        falling[k] = falling[k - 1] * (size - k + 1)

    plogp = {0: 0.0, 1: 0.0}
    ptot = {0: 0.0, 1: 0.0}
    for xs in itertools.permutations(range(size), m):
        xs_arr = np.array(xs, dtype=np.int64)
        weights = np.zeros(ys.shape[0])
        weights[~collide] += 0.5 / falling[m]
        for s in range(1, size):
            consistent = np.ones(ys.shape[0], dtype=bool)
            paired = set()
            reps = []
            pairs = 0
            for i in range(m):
                if i in paired:
                    continue
                reps.append(i)
                matches = np.nonzero(xs_arr == (xs_arr[i] ^ s))[0]
                if matches.size and matches[0] > i:
                    j = int(matches[0])
                    paired.add(j)
                    pairs += 1
                    consistent &= eq[:, i, j]
            for ai in range(len(reps)):
                for bi in range(ai + 1, len(reps)):
                    consistent &= ~eq[:, reps[ai], reps[bi]]
            weights[consistent] += 0.5 / (size - 1) / falling[m - pairs]
        weights /= x_count
        for a_val, mask in ((1, collide), (0, ~collide)):
            block = weights[mask]
            block = block[block > 0.0]
            if block.size:
                plogp[a_val] += float((block * np.log(block)).sum())
                ptot[a_val] += float(block.sum())

    p = {}
    cond = {}
    for a_val in (0, 1):
        if ptot[a_val] > 0.0:
            p[a_val] = ptot[a_val]
            cond[a_val] = math.log(ptot[a_val]) - plogp[a_val] / ptot[a_val]
    return RunOutcome(p=p, cond_entropy=cond, a=None)
