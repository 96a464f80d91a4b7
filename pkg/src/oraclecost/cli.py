"""Seeded, reproducible experiment harness over the library modules.

Subcommands:
  erasure                one finite-step erasure run with heat accounting
  simon quantum          sampled quantum runs inside the priced framework
  simon classical        sampled classical runs inside the priced framework
  simon bounds           query-count calculators for one problem size
  bounds floor-table     classical energy floors at a physical temperature
  bounds quantum-upper   energy upper bounds over a problem-size sweep
  control                ladder-control gate diagnostics over window sizes

Every report embeds the fully resolved configuration and the tool
version.  Per-trial randomness comes from streams keyed by (seed, trial
index) and results are reduced in trial order, so identical (config,
seed) pairs give byte-identical JSON and CSV reports regardless of the
worker count.  PNG figures are rendered beside the reports as a reading
aid and are not covered by the byte-identity contract.

Exit codes: 0 success, 1 usage error, 2 a checked bound was violated.
Values for options may also come from a JSON file via --config; explicit
flags override the file, which overrides built-in defaults.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from functools import partial
from pathlib import Path
from typing import Any, Mapping, Sequence

import numpy as np

from . import erasure as erasure_lib
from . import ledger as ledger_lib
from . import simon as simon_lib
from .control import LadderControl, control_diagnostics, named_gate
from .reports import write_csv, write_json_report
from .states import DensityOperator, basis_state_density, random_density

TOLERANCE = 1e-9

DEFAULTS: dict[str, dict[str, Any]] = {
    "erasure": {
        "d": 2,
        "epsilon": 1e-3,
        "eta": 0.1,
        "beta": 1.0,
        "state": "mixed",
        "state_file": None,
        "steps": "auto",
        "seed": None,
    },
    "simon-quantum": {
        "n": 4,
        "trials": 100,
        "rounds": "auto",
        "seed": None,
        "workers": 1,
    },
    "simon-classical": {
        "n": 8,
        "m": "auto",
        "trials": 100,
        "seed": None,
        "workers": 1,
    },
    "simon-bounds": {
        "n": 10,
        "delta_cap": 1.0 / 6.0,
        "delta_fail": 1.0 / 3.0,
    },
    "bounds-floor-table": {
        "n": "50,100,150,200,250,300",
        "temp_kelvin": 300.0,
        "kb": "codata",
    },
    "bounds-quantum-upper": {
        "n": "4,5,6,7,8,9,10,11,12",
        "e_qubit": 1.0,
        "e_ctrl": 0.05,
        "c_ctrl_env": 0.05,
        "beta": 1.0,
        "eta": 1.0,
        "epsilon": 0.5,
    },
    "control": {
        "gate": "X",
        "l": "8,16,32,64",
        "ell0": 1,
        "omega": 1.0,
        "haar": 200,
        "seed": None,
    },
}


class _Parser(argparse.ArgumentParser):
    """Argument parser whose usage failures exit with status 1."""

    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _add_output_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--out",
        default=None,
        help="output directory (default: $ORACLECOST_OUT or the working directory)",
    )
    parser.add_argument(
        "--config",
        default=None,
        help="JSON file of option values; explicit flags override it",
    )


def build_parser() -> _Parser:
    """Construct the full command-line interface."""
    parser = _Parser(prog="oraclecost", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p_er = sub.add_parser("erasure", help="run one finite-step erasure")
    p_er.add_argument("--d", type=int, default=None, help="system dimension")
    p_er.add_argument("--epsilon", type=float, default=None, help="final infidelity budget")
    p_er.add_argument("--eta", type=float, default=None, help="excess heat budget (nats)")
    p_er.add_argument("--beta", type=float, default=None, help="inverse temperature")
    p_er.add_argument(
        "--state", default=None, choices=["random", "pure", "mixed", "file"],
        help="input state kind",
    )
    p_er.add_argument("--state-file", default=None, help="JSON state for --state file")
    p_er.add_argument("--steps", default=None, help="'auto' or an explicit step count")
    p_er.add_argument("--seed", type=int, default=None, help="seed for --state random")
    _add_output_flags(p_er)
    p_er.set_defaults(handler=cmd_erasure, defaults_key="erasure")

    p_si = sub.add_parser("simon", help="period-finding runs and calculators")
    si_sub = p_si.add_subparsers(dest="mode", required=True, parser_class=_Parser)

    p_sq = si_sub.add_parser("quantum", help="sampled quantum runs")
    p_sq.add_argument("--n", type=int, default=None, help="problem size in bits")
    p_sq.add_argument("--trials", type=int, default=None, help="number of sampled runs")
    p_sq.add_argument("--rounds", default=None, help="'auto' (n+10) or a round count")
    p_sq.add_argument("--seed", type=int, default=None, help="root seed")
    p_sq.add_argument("--workers", type=int, default=None, help="worker processes")
    _add_output_flags(p_sq)
    p_sq.set_defaults(handler=cmd_simon_run, defaults_key="simon-quantum",
                      algorithm="quantum")

    p_sc = si_sub.add_parser("classical", help="sampled classical runs")
    p_sc.add_argument("--n", type=int, default=None, help="problem size in bits")
    p_sc.add_argument("--m", default=None, help="'auto' or a distinct query count")
    p_sc.add_argument("--trials", type=int, default=None, help="number of sampled runs")
    p_sc.add_argument("--seed", type=int, default=None, help="root seed")
    p_sc.add_argument("--workers", type=int, default=None, help="worker processes")
    _add_output_flags(p_sc)
    p_sc.set_defaults(handler=cmd_simon_run, defaults_key="simon-classical",
                      algorithm="classical")

    p_sb = si_sub.add_parser("bounds", help="query-count calculators")
    p_sb.add_argument("--n", type=int, default=None, help="problem size in bits")
    p_sb.add_argument("--delta-cap", type=float, default=None,
                      help="advantage parameter of the query floor")
    p_sb.add_argument("--delta-fail", type=float, default=None,
                      help="failure budget of the collision query count")
    _add_output_flags(p_sb)
    p_sb.set_defaults(handler=cmd_simon_bounds, defaults_key="simon-bounds")

    p_bo = sub.add_parser("bounds", help="energy floor and upper-bound tables")
    bo_sub = p_bo.add_subparsers(dest="mode", required=True, parser_class=_Parser)

    p_ft = bo_sub.add_parser("floor-table", help="classical energy floors in joules")
    p_ft.add_argument("--n", default=None, help="comma-separated problem sizes")
    p_ft.add_argument("--temp-kelvin", type=float, default=None, help="temperature")
    p_ft.add_argument("--kb", default=None, choices=["rounded", "codata"],
                      help="Boltzmann constant convention")
    _add_output_flags(p_ft)
    p_ft.set_defaults(handler=cmd_floor_table, defaults_key="bounds-floor-table")

    p_qu = bo_sub.add_parser("quantum-upper", help="energy upper bounds over sizes")
    p_qu.add_argument("--n", default=None, help="comma-separated problem sizes")
    p_qu.add_argument("--e-qubit", type=float, default=None, help="per-qubit energy scale")
    p_qu.add_argument("--e-ctrl", type=float, default=None, help="control cost per layer")
    p_qu.add_argument("--c-ctrl-env", type=float, default=None,
                      help="erasure apparatus cost coefficient")
    p_qu.add_argument("--beta", type=float, default=None, help="inverse temperature")
    p_qu.add_argument("--eta", type=float, default=None, help="excess heat budget")
    p_qu.add_argument("--epsilon", type=float, default=None, help="erasure infidelity")
    _add_output_flags(p_qu)
    p_qu.set_defaults(handler=cmd_quantum_upper, defaults_key="bounds-quantum-upper")

    p_ct = sub.add_parser("control", help="ladder-control gate diagnostics")
    p_ct.add_argument("--gate", default=None, choices=["I", "X", "hadamard", "T", "random"],
                      help="gate to dilate")
    p_ct.add_argument("--l", default=None, help="comma-separated window lengths")
    p_ct.add_argument("--ell0", type=int, default=None, help="window base level")
    p_ct.add_argument("--omega", type=float, default=None, help="ladder energy spacing")
    p_ct.add_argument("--haar", type=int, default=None, help="Haar samples per window")
    p_ct.add_argument("--seed", type=int, default=None, help="root seed")
    _add_output_flags(p_ct)
    p_ct.set_defaults(handler=cmd_control, defaults_key="control")

    return parser


def _load_config_file(path: str | None) -> dict[str, Any]:
    """Read the optional JSON config file as a flat mapping."""
    if path is None:
        return {}
    try:
        payload = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ValueError(f"cannot read config file {path}: {exc}") from exc
    if not isinstance(payload, dict):
        raise ValueError("config file must hold a JSON object")
    return payload


def _resolve_options(args: argparse.Namespace) -> dict[str, Any]:
    """Merge explicit flags over the config file over built-in defaults."""
    defaults = DEFAULTS[args.defaults_key]
    file_values = _load_config_file(args.config)
    unknown = set(file_values) - set(defaults)
    if unknown:
        raise ValueError(f"unknown config keys: {', '.join(sorted(unknown))}")
    resolved: dict[str, Any] = {}
    for key, default in defaults.items():
        explicit = getattr(args, key, None)
        if explicit is not None:
            resolved[key] = explicit
        elif key in file_values:
            resolved[key] = file_values[key]
        else:
            resolved[key] = default
    return resolved


def _out_dir(args: argparse.Namespace) -> Path:
    """Resolve the output directory from the flag or the environment."""
    raw = args.out if args.out is not None else os.environ.get("ORACLECOST_OUT", ".")
    path = Path(raw)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _int_list(value: Any, name: str) -> list[int]:
    """Parse a comma-separated string or JSON list of integers."""
    if isinstance(value, str):
        parts = [p for p in value.split(",") if p.strip() != ""]
        try:
            items = [int(p) for p in parts]
        except ValueError as exc:
            raise ValueError(f"{name} must be comma-separated integers") from exc
    elif isinstance(value, (list, tuple)):
        items = [_int_value(v, name) for v in value]
    else:
        items = [_int_value(value, name)]
    if not items:
        raise ValueError(f"{name} must list at least one integer")
    return items


def _int_value(value: Any, name: str) -> int:
    """Coerce one config/flag value to an integer."""
    if isinstance(value, bool) or (isinstance(value, float) and int(value) != value):
        raise ValueError(f"{name} must be an integer, got {value!r}")
    try:
        return int(value)
    except (TypeError, ValueError) as exc:
        raise ValueError(f"{name} must be an integer, got {value!r}") from exc


def _auto_or_int(value: Any, name: str) -> int | None:
    """Parse an 'auto' marker or an explicit positive integer."""
    if isinstance(value, str) and value.strip().lower() == "auto":
        return None
    count = _int_value(value, name)
    if count < 1:
        raise ValueError(f"{name} must be positive, got {count}")
    return count


def _echo(resolved: Mapping[str, Any], args: argparse.Namespace,
          command: str, out: Path) -> dict[str, Any]:
    """Assemble the resolved-configuration echo for the report.

    The worker count is execution plumbing that cannot change any result,
    so it is excluded; reports stay byte-identical across worker counts.
    """
    config = {key: value for key, value in resolved.items() if key != "workers"}
    config["command"] = command
    config["out"] = str(out)
    config["config_file"] = args.config
    return config


def _state_from_file(path: str, dim: int) -> DensityOperator:
    """Load a density operator from JSON: a diagonal or a real/imag matrix."""
    payload = json.loads(Path(path).read_text())
    if isinstance(payload, list) and all(isinstance(x, (int, float)) for x in payload):
        diag = np.asarray(payload, dtype=float)
        if diag.size != dim:
            raise ValueError(f"diagonal has {diag.size} entries, expected {dim}")
        return DensityOperator(np.diag(diag).astype(complex))
    if isinstance(payload, dict) and "real" in payload:
        matrix = np.asarray(payload["real"], dtype=float).astype(complex)
        if "imag" in payload:
            matrix = matrix + 1j * np.asarray(payload["imag"], dtype=float)
        if matrix.shape != (dim, dim):
            raise ValueError(f"matrix shape {matrix.shape} does not match d={dim}")
        return DensityOperator(matrix)
    raise ValueError("state file must hold a diagonal list or {'real': ..., 'imag': ...}")


def cmd_erasure(args: argparse.Namespace) -> int:
    """Run one erasure plan and report its heat accounting."""
    resolved = _resolve_options(args)
    out = _out_dir(args)
    dim = _int_value(resolved["d"], "--d")
    epsilon = float(resolved["epsilon"])
    eta = float(resolved["eta"])
    beta = float(resolved["beta"])
    state_kind = str(resolved["state"])
    seed = resolved["seed"]

    cfg = erasure_lib.ErasureConfig(beta=beta, epsilon=epsilon, eta=eta, dim=dim)
    if state_kind == "random":
        if seed is None:
            raise ValueError("--state random requires --seed")
        rho = random_density(dim, np.random.default_rng(_int_value(seed, "--seed")))
    elif state_kind == "pure":
        rho = basis_state_density(dim, 1)
    elif state_kind == "mixed":
        rho = DensityOperator(np.eye(dim, dtype=complex) / dim)
    elif state_kind == "file":
        if resolved["state_file"] is None:
            raise ValueError("--state file requires --state-file")
        rho = _state_from_file(str(resolved["state_file"]), dim)
    else:
        raise ValueError(f"unknown state kind {state_kind!r}")

    steps = _auto_or_int(resolved["steps"], "--steps")
    plan = erasure_lib.build_plan(rho, cfg, steps)
    report = erasure_lib.execute(plan, cfg)

    results = {
        "T": plan.steps,
        "Q_E": report.q_e,
        "delta_S": report.delta_s,
        "excess": report.excess,
        "eta": eta,
        "epsilon": epsilon,
        "final_infidelity": report.final_infidelity,
        "max_env_energy": report.max_env_energy,
        "env_energy_bound": report.energy_bound,
        "excess_bound": erasure_lib.excess_heat_bound(cfg, plan.steps),
    }
    config = _echo(resolved, args, "erasure", out)
    write_json_report(out / "erasure_report.json", "erasure", config, results)

    from . import figures

    figures.curves_figure(
        np.arange(1, plan.steps + 1),
        {"step heat summand": report.per_step_summands},
        xlabel="step t",
        ylabel="heat summand (nats)",
        title=f"straight-path erasure, d={dim}, T={plan.steps}",
        path=out / "erasure_steps.png",
    )
    return 2 if report.excess > eta + TOLERANCE else 0


def _simon_trial(trial: int, algorithm: str, n: int, seed: int,
                 rounds: int | None, m: int | None) -> dict[str, Any]:
    """Run one seeded framework trial; used by the worker pool."""
    rng = np.random.default_rng([seed, trial])
    inst = simon_lib.sample_uniform_instance(n, rng)
    run = ledger_lib.run_framework(
        inst, ledger_lib.CostModel(), rng, algorithm=algorithm, rounds=rounds, m=m
    )
    record = run.record
    led = run.ledger
    return {
        "trial": trial,
        "n": record.n,
        "b": record.b,
        "algorithm": record.algorithm,
        "m": record.m_used,
        "a": record.a,
        "correct": record.correct,
        "total_w": led.total_w,
        "q_e": led.q_e,
        "q_e_prime": led.q_e_prime,
        "residual": led.conservation_residual,
        "ledger": led.report_dict() if trial == 0 else None,
    }


def cmd_simon_run(args: argparse.Namespace) -> int:
    """Sample framework runs of one algorithm and report trial statistics."""
    resolved = _resolve_options(args)
    out = _out_dir(args)
    algorithm = args.algorithm
    n = _int_value(resolved["n"], "--n")
    trials = _int_value(resolved["trials"], "--trials")
    if trials < 1:
        raise ValueError(f"--trials must be positive, got {trials}")
    workers = _int_value(resolved["workers"], "--workers")
    if workers < 1:
        raise ValueError(f"--workers must be positive, got {workers}")
    if resolved["seed"] is None:
        raise ValueError(f"simon {algorithm} requires --seed")
    seed = _int_value(resolved["seed"], "--seed")

    rounds = _auto_or_int(resolved["rounds"], "--rounds") if algorithm == "quantum" else None
    m = _auto_or_int(resolved["m"], "--m") if algorithm == "classical" else None

    worker = partial(_simon_trial, algorithm=algorithm, n=n, seed=seed,
                     rounds=rounds, m=m)
    if workers == 1:
        rows = [worker(t) for t in range(trials)]
    else:
        chunk = max(1, trials // (workers * 4))
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(worker, range(trials), chunksize=chunk))

    header = ["trial", "n", "b", "algorithm", "m", "a", "correct"]
    csv_rows = [[row[key] for key in header] for row in rows]
    prefix = f"simon_{algorithm}"
    write_csv(out / f"{prefix}_trials.csv", header, csv_rows)

    correct = np.array([row["correct"] for row in rows], dtype=float)
    b_flags = np.array([row["b"] for row in rows], dtype=int)
    one_to_one = correct[b_flags == 0]
    two_to_one = correct[b_flags == 1]
    results = {
        "trials": trials,
        "n": n,
        "algorithm": algorithm,
        "success_rate": float(correct.mean()),
        "mean_queries": float(np.mean([row["m"] for row in rows])),
        "success_rate_one_to_one": (
            float(one_to_one.mean()) if one_to_one.size else None
        ),
        "failure_rate_two_to_one": (
            float(1.0 - two_to_one.mean()) if two_to_one.size else None
        ),
        "ledger_totals": {
            "mean_total_w": float(np.mean([row["total_w"] for row in rows])),
            "mean_q_e": float(np.mean([row["q_e"] for row in rows])),
            "mean_q_e_prime": float(np.mean([row["q_e_prime"] for row in rows])),
            "mean_conservation_residual": float(
                np.mean([row["residual"] for row in rows])
            ),
        },
        "example_ledger": rows[0]["ledger"],
    }
    config = _echo(resolved, args, f"simon {algorithm}", out)
    write_json_report(out / f"{prefix}_report.json", f"simon {algorithm}", config, results)

    from . import figures

    labels = ["1-to-1 ok", "1-to-1 wrong", "2-to-1 ok", "2-to-1 wrong"]
    values = [
        float(one_to_one.sum()),
        float(one_to_one.size - one_to_one.sum()),
        float(two_to_one.sum()),
        float(two_to_one.size - two_to_one.sum()),
    ]
    figures.bar_figure(
        labels, values,
        ylabel="trials",
        title=f"{algorithm} runs, n={n}, {trials} trials",
        path=out / f"{prefix}_counts.png",
    )
    return 0


def cmd_simon_bounds(args: argparse.Namespace) -> int:
    """Evaluate the query-count calculators for one problem size."""
    resolved = _resolve_options(args)
    out = _out_dir(args)
    n = _int_value(resolved["n"], "--n")
    delta_cap = float(resolved["delta_cap"])
    delta_fail = float(resolved["delta_fail"])
    params = simon_lib.BoundParams(delta_cap=delta_cap, delta_fail=delta_fail)

    query_floor = simon_lib.query_count_floor(n, params)
    collisions = simon_lib.collision_queries(n, params)
    tail_floor = (
        simon_lib.query_tail_floor(params) if delta_cap < 1.0 / 6.0 else None
    )
    results = {
        "n": n,
        "query_floor": query_floor,
        "success_ceiling_at_floor": simon_lib.success_ceiling(n, query_floor),
        "collision_queries": collisions,
        "collision_miss_bound": simon_lib.collision_failure_bound(n, collisions),
        "tail_floor": tail_floor,
    }
    config = _echo(resolved, args, "simon bounds", out)
    write_json_report(out / "simon_bounds_report.json", "simon bounds", config, results)

    from . import figures

    ms = np.arange(0, max(collisions, query_floor) + 1)
    ceiling = [simon_lib.success_ceiling(n, int(m)) for m in ms]
    figures.curves_figure(
        ms, {"success ceiling": ceiling},
        xlabel="distinct queries m",
        ylabel="success probability cap",
        title=f"classical success ceiling, n={n}",
        path=out / "simon_bounds_ceiling.png",
    )
    return 0


def cmd_floor_table(args: argparse.Namespace) -> int:
    """Tabulate classical energy floors in joules at a temperature."""
    resolved = _resolve_options(args)
    out = _out_dir(args)
    n_list = _int_list(resolved["n"], "--n")
    temp = float(resolved["temp_kelvin"])
    kb_mode = str(resolved["kb"])
    if kb_mode not in ("rounded", "codata"):
        raise ValueError(f"--kb must be rounded or codata, got {kb_mode!r}")

    table = ledger_lib.energy_floor_table(n_list, temp, kb_mode)
    header = ["n", "temp_kelvin", "kb_mode", "bound_joules"]
    rows = [[r.n, r.temp_kelvin, r.kb_mode, r.bound_joules] for r in table]
    write_csv(out / "floor_table.csv", header, rows)

    results = [
        {"n": r.n, "temp_kelvin": r.temp_kelvin, "kb_mode": r.kb_mode,
         "bound_joules": r.bound_joules}
        for r in table
    ]
    config = _echo(resolved, args, "bounds floor-table", out)
    write_json_report(out / "floor_table_report.json", "bounds floor-table",
                      config, results)

    from . import figures

    figures.curves_figure(
        [r.n for r in table],
        {"energy floor": [r.bound_joules for r in table]},
        xlabel="problem size n",
        ylabel="bound (J)",
        title=f"classical energy floor at {temp:g} K",
        path=out / "floor_table.png",
        logy=True,
    )
    return 0


def cmd_quantum_upper(args: argparse.Namespace) -> int:
    """Evaluate energy upper bounds over a sweep of problem sizes."""
    resolved = _resolve_options(args)
    out = _out_dir(args)
    n_list = _int_list(resolved["n"], "--n")
    cost = ledger_lib.CostModel(
        e_qubit=float(resolved["e_qubit"]),
        e_ctrl=float(resolved["e_ctrl"]),
        c_ctrl_env=float(resolved["c_ctrl_env"]),
        beta=float(resolved["beta"]),
        eta=float(resolved["eta"]),
        epsilon=float(resolved["epsilon"]),
    )

    header = ["n", "w", "total_depth", "ideal_bound", "ideal_gate_term",
              "ideal_erasure_term", "ft_bound", "ft_polylog_factor"]
    rows = []
    ideal_values = []
    ft_values = []
    for n in n_list:
        shape = ledger_lib.simon_scaling_shape(n, cost)
        ideal = ledger_lib.ideal_energy_upper(shape, cost)
        ft = ledger_lib.fault_tolerant_energy_upper(shape, cost)
        rows.append([
            n, shape.w, shape.total_depth(cost.d_swap), ideal.value,
            ideal.gate_term, ideal.erasure_term, ft.value, ft.polylog_factor,
        ])
        ideal_values.append(ideal.value)
        ft_values.append(ft.value)

    write_csv(out / "quantum_upper.csv", header, rows)

    log_n = np.log(np.asarray(n_list, dtype=float))
    slope_ideal = (
        float(np.polyfit(log_n, np.log(ideal_values), 1)[0])
        if len(n_list) >= 2 else None
    )
    slope_ft = (
        float(np.polyfit(log_n, np.log(ft_values), 1)[0])
        if len(n_list) >= 2 else None
    )
    results = {
        "n": n_list,
        "ideal_bound": ideal_values,
        "ft_bound": ft_values,
        "fitted_exponent_ideal": slope_ideal,
        "fitted_exponent_ft": slope_ft,
    }
    config = _echo(resolved, args, "bounds quantum-upper", out)
    write_json_report(out / "quantum_upper_report.json", "bounds quantum-upper",
                      config, results)

    from . import figures

    figures.curves_figure(
        n_list,
        {"without gate errors": ideal_values, "fault tolerant": ft_values},
        xlabel="problem size n",
        ylabel="energy bound",
        title="energy upper bounds over problem size",
        path=out / "quantum_upper.png",
        logx=True,
        logy=True,
    )
    return 0


def cmd_control(args: argparse.Namespace) -> int:
    """Sweep window lengths for one gate and report channel diagnostics."""
    resolved = _resolve_options(args)
    out = _out_dir(args)
    gate = str(resolved["gate"])
    l_list = _int_list(resolved["l"], "--l")
    ell0 = _int_value(resolved["ell0"], "--ell0")
    omega = float(resolved["omega"])
    haar = _int_value(resolved["haar"], "--haar")
    if resolved["seed"] is None:
        raise ValueError("control requires --seed")
    seed = _int_value(resolved["seed"], "--seed")

    u = named_gate(gate, np.random.default_rng(seed))
    header = ["gate", "L", "ell0", "omega", "avg_fidelity", "one_minus_f",
              "delta_s_c", "control_energy"]
    rows = []
    one_minus_f = []
    l_times_ds = []
    for big_l in l_list:
        ctrl = LadderControl(big_l=big_l, ell0=ell0, omega=omega)
        rep = control_diagnostics(u, ctrl, haar_samples=haar,
                                  rng=np.random.default_rng([seed, big_l]))
        gap = 1.0 - rep.avg_fidelity
        rows.append([gate, big_l, ell0, omega, rep.avg_fidelity, gap,
                     rep.delta_s_c, rep.control_energy])
        one_minus_f.append(gap)
        l_times_ds.append(big_l * rep.delta_s_c)

    write_csv(out / "control_channel.csv", header, rows)

    fit_ok = len(l_list) >= 2 and all(v > 1e-12 for v in one_minus_f)
    slope = (
        float(np.polyfit(np.log(np.asarray(l_list, dtype=float)),
                         np.log(np.asarray(one_minus_f)), 1)[0])
        if fit_ok else None
    )
    positive_ds = [v for v in l_times_ds if v > 0.0]
    band_ratio = (
        float(max(positive_ds) / min(positive_ds))
        if len(positive_ds) == len(l_times_ds) and positive_ds else None
    )
    results = {
        "gate": gate,
        "l_values": l_list,
        "one_minus_f": one_minus_f,
        "slope_one_minus_f": slope,
        "l_times_delta_s": l_times_ds,
        "band_ratio": band_ratio,
    }
    config = _echo(resolved, args, "control", out)
    write_json_report(out / "control_report.json", "control", config, results)

    from . import figures

    plotted = [max(v, 1e-18) for v in one_minus_f]
    figures.curves_figure(
        l_list, {"1 - avg fidelity": plotted},
        xlabel="window length L",
        ylabel="1 - avg fidelity",
        title=f"gate {gate}: fidelity gap versus window length",
        path=out / "control_fidelity.png",
        logx=True,
        logy=True,
    )
    return 0


def main(argv: Sequence[str] | None = None) -> int:
    """Entry point: parse, dispatch, and map failures to exit codes."""
    parser = build_parser()
    args = parser.parse_args(sys.argv[1:] if argv is None else list(argv))
    try:
        return int(args.handler(args))
    except ValueError as exc:
        print(f"oraclecost: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
