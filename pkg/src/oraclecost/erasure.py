"""Finite-step erasure of a register into a thermal environment.

The protocol drags a d-dimensional system along the straight path
rho[u] = rho + u*(rho_target - rho), sampled at u_t = t/T, by swapping the
system step by step with fresh thermal subsystems whose Gibbs states are
exactly the path states. The heat is what those subsystems gain. With
T = required_steps(cfg) the dissipated heat exceeds the entropy drop by at
most eta nats, and the final state misses |0><0| by exactly epsilon.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .states import DensityOperator, _as_matrix, basis_state_density, shannon_entropy

__all__ = [
    "ErasureConfig",
    "ErasurePlan",
    "ErasureReport",
    "ErasureBatch",
    "required_steps",
    "target_final_state",
    "build_plan",
    "execute",
    "execute_many",
    "realized_heat",
    "max_env_energy_bound",
    "excess_heat_bound",
    "erase_register",
    "RegisterErasureReport",
    "explicit_swap_heat",
]

E = math.e


@dataclass(frozen=True)
class ErasureConfig:
    """Protocol parameters: inverse temperature, infidelity and excess-heat budgets."""

    beta: float = 1.0
    epsilon: float = 1e-3
    eta: float = 0.1
    dim: int = 2

    def __post_init__(self):
        if not self.beta > 0.0:
            raise ValueError(f"beta must be positive, got {self.beta!r}")
        if not 0.0 < self.epsilon <= 0.5:
            raise ValueError(f"epsilon must be in (0, 1/2], got {self.epsilon!r}")
        if not 0.0 < self.eta <= 1.0:
            raise ValueError(f"eta must be in (0, 1], got {self.eta!r}")
        if int(self.dim) != self.dim or self.dim < 2:
            raise ValueError(f"dim must be an integer >= 2, got {self.dim!r}")


@dataclass(frozen=True)
class ErasurePlan:
    """Straight-path schedule: path states rho[u_t] and step Hamiltonians.

    env_h[t-1] = -(1/beta) ln path[t] is the Hamiltonian of the t-th thermal
    subsystem; its Gibbs state at inverse temperature beta is path[t] itself.
    """

    cfg: ErasureConfig
    steps: int
    path: np.ndarray  # (steps+1, d, d)
    env_h: np.ndarray  # (steps, d, d), positive semidefinite

    @property
    def initial_state(self) -> np.ndarray:
        return self.path[0]

    @property
    def target_state(self) -> np.ndarray:
        return self.path[-1]


@dataclass(frozen=True)
class ErasureReport:
    """Measured outcome of one executed plan (all entropies in nats)."""

    cfg: ErasureConfig
    steps: int
    q_e: float
    delta_s: float
    excess: float
    final_state: DensityOperator
    final_infidelity: float
    max_env_energy: float
    energy_bound: float
    per_step_summands: np.ndarray = field(repr=False)


@dataclass(frozen=True)
class ErasureBatch:
    """Vectorized execute() results over a batch of input states."""

    cfg: ErasureConfig
    steps: int
    q_e: np.ndarray
    delta_s: np.ndarray
    excess: np.ndarray
    final_infidelity: np.ndarray
    max_env_energy: np.ndarray
    per_step_summands: np.ndarray  # (batch, steps)


def required_steps(cfg: ErasureConfig) -> int:
    """Step count sufficient for excess heat <= eta at final infidelity epsilon."""
    d, eps, eta = cfg.dim, cfg.epsilon, cfg.eta
    raw = ((E + 1.0) / (E * eta)) * math.log((E + 1.0) * (d - 1) ** 2 / (eps * eta))
    steps = math.ceil(raw)
    assert steps >= 2
    return steps


def target_final_state(rho: DensityOperator, cfg: ErasureConfig) -> DensityOperator:
    """Erasure target: weight 1-epsilon on |0>, the rest spread evenly.

    The input state only fixes the dimension; the target is the same for every
    input and has full rank, which is what keeps every intermediate path state
    invertible.
    """
    if rho.dim != cfg.dim:
        raise ValueError(f"state dim {rho.dim} != config dim {cfg.dim}")
    return DensityOperator(_target_matrix(cfg))


def _target_matrix(cfg: ErasureConfig) -> np.ndarray:
    d, eps = cfg.dim, cfg.epsilon
    diag = np.full(d, eps / (d - 1), dtype=complex)
    diag[0] = 1.0 - eps
    return np.diag(diag)


def _path_floors(cfg: ErasureConfig, steps: int) -> np.ndarray:
    # Analytic guarantee: path state t has min eigenvalue >= (t/T) eps/(d-1).
    # Half of it is a pure float-noise guard that never activates for valid input.
    t = np.arange(1, steps + 1)
    return 0.5 * (t / steps) * cfg.epsilon / (cfg.dim - 1)


def build_plan(rho: DensityOperator, cfg: ErasureConfig, steps: int | None = None) -> ErasurePlan:
    """Lay out the straight path from rho to the target in `steps` equal moves."""
    if rho.dim != cfg.dim:
        raise ValueError(f"state dim {rho.dim} != config dim {cfg.dim}")
    steps = required_steps(cfg) if steps is None else int(steps)
    if steps < 2:
        raise ValueError(f"steps must be >= 2, got {steps}")
    u = np.arange(steps + 1)[:, None, None] / steps
    path = rho.mat[None] + u * (_target_matrix(cfg) - rho.mat[None])
    w, v = np.linalg.eigh(path[1:])
    floors = _path_floors(cfg, steps)
    if (w.min(axis=1) < floors).any():
        raise ValueError("intermediate path state is singular beyond the analytic floor")
    log_w = np.log(np.maximum(w, floors[:, None]))
    ln_path = np.einsum("tij,tj,tkj->tik", v, log_w, v.conj())
    return ErasurePlan(cfg=cfg, steps=steps, path=path, env_h=-ln_path / cfg.beta)


def execute(plan: ErasurePlan, cfg: ErasureConfig) -> ErasureReport:
    """Run the plan: per-step heat, entropy drop, and environment energy cap."""
    diffs = plan.path[1:] - plan.path[:-1]
    summands = np.einsum("tij,tji->t", diffs, -cfg.beta * plan.env_h).real
    beta_q = float(summands.sum())
    w0 = np.clip(np.linalg.eigvalsh(plan.path[0]), 0.0, None)
    wt = np.linalg.eigvalsh(plan.path[-1])
    delta_s = shannon_entropy(w0 / w0.sum()) - shannon_entropy(wt / wt.sum())
    env_norms = np.linalg.eigvalsh(plan.env_h)[:, -1]
    final = DensityOperator(plan.path[-1])
    return ErasureReport(
        cfg=cfg,
        steps=plan.steps,
        q_e=beta_q / cfg.beta,
        delta_s=delta_s,
        excess=beta_q - delta_s,
        final_state=final,
        final_infidelity=1.0 - final.mat[0, 0].real,
        max_env_energy=float(env_norms.sum()),
        energy_bound=max_env_energy_bound(cfg, plan.steps),
        per_step_summands=summands,
    )


def execute_many(rhos: np.ndarray, cfg: ErasureConfig, steps: int | None = None) -> ErasureBatch:
    """Vectorized build+execute over a (batch, d, d) stack of input states."""
    rhos = np.asarray(rhos, dtype=complex)
    assert rhos.ndim == 3 and rhos.shape[1] == rhos.shape[2] == cfg.dim
    steps = required_steps(cfg) if steps is None else int(steps)
    if steps < 2:
        raise ValueError(f"steps must be >= 2, got {steps}")
    u = (np.arange(steps + 1) / steps)[None, :, None, None]
    path = rhos[:, None] + u * (_target_matrix(cfg)[None, None] - rhos[:, None])
    w, v = np.linalg.eigh(path)  # (batch, steps+1, d), (batch, steps+1, d, d)
    floors = _path_floors(cfg, steps)
    w_in = np.maximum(w[:, 1:], floors[None, :, None])
    ln_path = np.einsum("btij,btj,btkj->btik", v[:, 1:], np.log(w_in), v[:, 1:].conj())
    diffs = path[:, 1:] - path[:, :-1]
    summands = np.einsum("btij,btji->bt", diffs, ln_path).real
    beta_q = summands.sum(axis=1)
    p0 = np.clip(w[:, 0], 0.0, None)
    p0 = p0 / p0.sum(axis=1, keepdims=True)
    with np.errstate(divide="ignore", invalid="ignore"):
        s0 = -np.where(p0 > 0.0, p0 * np.log(p0), 0.0).sum(axis=1)
    pt = w[:, -1]
    s_t = -(pt * np.log(pt)).sum(axis=1)
    delta_s = s0 - s_t
    max_env = (-np.log(w_in.min(axis=2))).sum(axis=1) / cfg.beta
    return ErasureBatch(
        cfg=cfg,
        steps=steps,
        q_e=beta_q / cfg.beta,
        delta_s=delta_s,
        excess=beta_q - delta_s,
        final_infidelity=1.0 - path[:, -1, 0, 0].real,
        max_env_energy=max_env,
        per_step_summands=summands,
    )


def realized_heat(
    plan: ErasurePlan, cfg: ErasureConfig, initial: DensityOperator | np.ndarray
) -> float:
    """Heat when the state actually entering the plan differs from its design input.

    Swaps force the system through the planned path from step 1 on, so only the
    first step feels the real input: the heat is affine in it,
    Q = Q_plan + tr[H^(1) (initial - planned_initial)].
    """
    initial = np.asarray(_as_matrix(initial), dtype=complex)
    plan_q = execute(plan, cfg).q_e
    corr = np.trace(plan.env_h[0] @ (initial - plan.path[0])).real
    return plan_q + float(corr)


def max_env_energy_bound(cfg: ErasureConfig, steps: int) -> float:
    """Cap on the summed operator norms of the step Hamiltonians."""
    if steps < 2:
        raise ValueError(f"steps must be >= 2, got {steps}")
    d, eps, beta = cfg.dim, cfg.epsilon, cfg.beta
    return (steps / beta) * (math.log((d - 1) / eps) + 1.0) - (
        math.log(2.0 * math.pi * steps) / 2.0 + 1.0 / (12.0 * steps + 1.0)
    ) / beta


def excess_heat_bound(cfg: ErasureConfig, steps: int) -> float:
    """Excess heat guarantee (nats) for an arbitrary step count T >= 2."""
    if steps < 2:
        raise ValueError(f"steps must be >= 2, got {steps}")
    return math.log(E * (cfg.dim - 1) ** 2 * steps / cfg.epsilon) / steps


@dataclass(frozen=True)
class RegisterErasureReport:
    """Sum of per-qubit erasure reports for a W-qubit register."""

    cfg: ErasureConfig
    q_e: float
    delta_s: float
    excess: float
    heat_bound: float
    qubit_reports: tuple[ErasureReport, ...]


def erase_register(rhos, cfg: ErasureConfig) -> RegisterErasureReport:
    """Erase W single-qubit states independently and aggregate the accounting.

    Uses T = required_steps(cfg) per qubit; the aggregate heat then obeys
    Q_E <= (W/beta)(ln 2 + eta).
    """
    if cfg.dim != 2:
        raise ValueError("register erasure is defined for qubits (cfg.dim must be 2)")
    reports = []
    for rho in rhos:
        if rho.dim != 2:
            raise ValueError("register erasure expects single-qubit states")
        reports.append(execute(build_plan(rho, cfg), cfg))
    q_e = sum(r.q_e for r in reports)
    delta_s = sum(r.delta_s for r in reports)
    return RegisterErasureReport(
        cfg=cfg,
        q_e=q_e,
        delta_s=delta_s,
        excess=cfg.beta * q_e - delta_s,
        heat_bound=(len(reports) / cfg.beta) * (math.log(2.0) + cfg.eta),
        qubit_reports=tuple(reports),
    )


def explicit_swap_heat(rho: DensityOperator, cfg: ErasureConfig, steps: int) -> tuple[float, DensityOperator]:
    """Cross-check: simulate the swap circuit literally on the joint state.

    Builds system x env_1 x ... x env_T as one dense density matrix (env
    subsystem t starts in the Gibbs state of the step-t Hamiltonian, i.e. the
    path state), applies the T swaps in sequence, and reads the heat off the
    environment's energy gain. Exponential in T, hence the small-T guard.
    """
    if cfg.dim != 2 or steps > 6:
        raise ValueError("explicit swap check is limited to qubits with steps <= 6")
    plan = build_plan(rho, cfg, steps)
    d = cfg.dim
    n_sys = steps + 1
    joint = plan.path[0]
    for t in range(1, steps + 1):
        joint = np.kron(joint, plan.path[t])

    dims = (d,) * n_sys
    size = d**n_sys
    digits = np.stack([(np.arange(size) // d ** (n_sys - 1 - k)) % d for k in range(n_sys)])

    for t in range(1, steps + 1):
        swapped = digits.copy()
        swapped[[0, t]] = swapped[[t, 0]]
        perm = (swapped * (d ** (n_sys - 1 - np.arange(n_sys)))[:, None]).sum(axis=0)
        joint = joint[perm][:, perm]

    from .states import partial_trace  # local import to avoid cycle at module load

    heat = 0.0
    for t in range(1, steps + 1):
        env_t = partial_trace(joint, dims, keep=[t]).mat
        heat += np.trace(plan.env_h[t - 1] @ (env_t - plan.path[t])).real
    system = partial_trace(joint, dims, keep=[0])
    return float(heat), system
