"""Hidden-shift collision problem: instances, oracle, solvers, query bounds.

An instance hides a bit b. With b=0 the black-box function f on n bits is a
uniform permutation; with b=1 it is exactly 2-to-1 with f(x) = f(x xor s) for
a hidden nonzero shift s. The task is to decide b. The quantum solver samples
strings orthogonal to s via the Hadamard/oracle/Hadamard subroutine; the
classical solver looks for collisions among distinct random queries.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field

import numpy as np

from .gf2 import gf2_kernel_vector, gf2_rank

__all__ = [
    "SimonInstance",
    "QueryLog",
    "BoundParams",
    "PRPConfig",
    "sample_uniform_instance",
    "prp_instance",
    "classical_query",
    "oracle_apply",
    "fourier_twice_stages",
    "round_distribution",
    "quantum_fourier_twice_round",
    "quantum_solve",
    "classical_solve",
    "QuantumSolveResult",
    "ClassicalSolveResult",
    "query_count_floor",
    "success_ceiling",
    "collision_queries",
    "collision_failure_bound",
    "query_tail_floor",
]

MAX_TABLE_BITS = 20
MAX_STATEVECTOR_BITS = 10


@dataclass(frozen=True)
class SimonInstance:
    """One oracle: problem size n, hidden bit b, shift s (b=1 only), full table."""

    n: int
    b: int
    s: int | None
    table: np.ndarray

    def __post_init__(self):
        table = np.asarray(self.table, dtype=np.int64)
        object.__setattr__(self, "table", table)
        size = 1 << self.n
        if self.b not in (0, 1):
            raise ValueError(f"b must be 0 or 1, got {self.b!r}")
        if table.shape != (size,) or table.min() < 0 or table.max() >= size:
            raise ValueError("table must hold 2^n values in range")
        if self.b == 0:
            if self.s is not None:
                raise ValueError("permutation instances carry no shift")
            if np.unique(table).size != size:
                raise ValueError("b=0 table is not a permutation")
        else:
            if not self.s or not 0 < self.s < size:
                raise ValueError(f"b=1 requires a nonzero n-bit shift, got {self.s!r}")
            xs = np.arange(size)
            if not np.array_equal(table, table[xs ^ self.s]):
                raise ValueError("table violates f(x) = f(x xor s)")
            if np.unique(table).size != size // 2:
                raise ValueError("b=1 table is not exactly 2-to-1")

    @property
    def size(self) -> int:
        return 1 << self.n


@dataclass
class QueryLog:
    """Ordered record of classical oracle calls with distinct inputs."""

    queries: list[tuple[int, int]] = field(default_factory=list)
    _seen: set[int] = field(default_factory=set, repr=False)

    @property
    def m(self) -> int:
        return len(self.queries)

    def record(self, x: int, y: int) -> None:
        if x in self._seen:
            raise ValueError(f"input {x} was already queried; inputs must be distinct")
        self._seen.add(x)
        self.queries.append((x, y))


@dataclass(frozen=True)
class BoundParams:
    """delta_cap: advantage margin in (0, 1/2); delta_fail: failure budget in (0, 1)."""

    delta_cap: float = 1.0 / 6.0
    delta_fail: float = 1.0 / 3.0

    def __post_init__(self):
        if not 0.0 < self.delta_cap < 0.5:
            raise ValueError(f"delta_cap must be in (0, 1/2), got {self.delta_cap!r}")
        if not 0.0 < self.delta_fail < 1.0:
            raise ValueError(f"delta_fail must be in (0, 1), got {self.delta_fail!r}")


@dataclass(frozen=True)
class PRPConfig:
    """Keyed permutation settings: nonempty key, even round count >= 4."""

    key: bytes
    rounds: int = 8

    def __post_init__(self):
        if not self.key:
            raise ValueError("key must be nonempty")
        if self.rounds < 4 or self.rounds % 2:
            raise ValueError(f"rounds must be even and >= 4, got {self.rounds!r}")


def _check_table_size(n: int) -> None:
    if not 1 <= n <= MAX_TABLE_BITS:
        raise ValueError(f"n must be in [1, {MAX_TABLE_BITS}] for table-based oracles, got {n}")


def sample_uniform_instance(n: int, rng: np.random.Generator, b: int | None = None) -> SimonInstance:
    """Draw an instance with b (and s) uniform, table uniform given (b, s).

    b=0: unbiased random permutation. b=1: uniform nonzero s, then a uniformly
    random ordered selection of 2^(n-1) distinct outputs assigned to the
    equivalence classes {x, x xor s}.
    """
    _check_table_size(n)
    size = 1 << n
    if b is None:
        b = int(rng.integers(2))
    if b == 0:
        return SimonInstance(n=n, b=0, s=None, table=rng.permutation(size))
    s = int(rng.integers(1, size)) if n > 1 else 1
    xs = np.arange(size)
    reps = np.minimum(xs, xs ^ s)
    class_ids = np.searchsorted(np.unique(reps), reps)
    outputs = rng.permutation(size)[: size // 2]
    return SimonInstance(n=n, b=1, s=s, table=outputs[class_ids])


def _round_table(cfg: PRPConfig, round_idx: int, in_bits: int, out_bits: int) -> np.ndarray:
    """Keyed round function tabulated over its (half-width) input domain."""
    out = np.empty(1 << in_bits, dtype=np.int64)
    mask = (1 << out_bits) - 1
    for v in range(1 << in_bits):
        digest = hashlib.blake2b(
            round_idx.to_bytes(2, "big") + v.to_bytes(4, "big"),
            key=cfg.key,
            digest_size=8,
        ).digest()
        out[v] = int.from_bytes(digest, "big") & mask
    return out


def _feistel_table(n: int, cfg: PRPConfig) -> np.ndarray:
    """Bijection on n bits from alternating keyed half-block rounds."""
    r_bits = n // 2
    l_bits = n - r_bits
    xs = np.arange(1 << n)
    left, right = xs >> r_bits, xs & ((1 << r_bits) - 1)
    for i in range(cfg.rounds):
        if i % 2 == 0:
            left = left ^ _round_table(cfg, i, r_bits, l_bits)[right]
        else:
            right = right ^ _round_table(cfg, i, l_bits, r_bits)[left]
    return (left << r_bits) | right


def prp_instance(n: int, b: int, s: int | None, cfg: PRPConfig) -> SimonInstance:
    """Deterministic instance from a keyed permutation p: f = p for b=0,
    f(x) = p(min(x, x xor s)) for b=1 (min over binary-integer order)."""
    _check_table_size(n)
    perm = _feistel_table(n, cfg)
    if b == 0:
        if s is not None:
            raise ValueError("permutation instances carry no shift")
        return SimonInstance(n=n, b=0, s=None, table=perm)
    xs = np.arange(1 << n)
    if s is None or not 0 < s < (1 << n):
        raise ValueError(f"b=1 requires a nonzero n-bit shift, got {s!r}")
    return SimonInstance(n=n, b=1, s=s, table=perm[np.minimum(xs, xs ^ s)])


def classical_query(inst: SimonInstance, x: int, log: QueryLog) -> int:
    """Evaluate f(x), recording the call; repeated inputs are a domain error."""
    if not 0 <= x < inst.size:
        raise ValueError(f"query {x} outside the {inst.n}-bit domain")
    y = int(inst.table[x])
    log.record(x, y)
    return y


def oracle_apply(psi: np.ndarray, inst: SimonInstance, require_clean: bool = True) -> np.ndarray:
    """Oracle as a unitary on (input, output) registers: |x,y> -> |x, y xor f(x)>.

    The algorithms only ever call it with the output register in |0>, and that
    is asserted here, so nothing downstream depends on how the oracle acts on
    y != 0 (the black box is never uncomputed).
    """
    assert psi.shape == (inst.size, inst.size)
    if require_clean:
        assert np.abs(psi[:, 1:]).max() < 1e-12, "oracle input register must be |0>"
    cols = np.arange(inst.size)[None, :] ^ inst.table[:, None]
    return np.take_along_axis(psi, cols, axis=1)


def _fwht_rows(psi: np.ndarray) -> np.ndarray:
    """In-place Walsh-Hadamard transform along axis 0 (unnormalized)."""
    m = psi.shape[0]
    h = 1
    while h < m:
        for i in range(0, m, 2 * h):
            a = psi[i : i + h].copy()
            b = psi[i + h : i + 2 * h]
            psi[i : i + h] = a + b
            psi[i + h : i + 2 * h] = a - b
        h *= 2
    return psi


def fourier_twice_stages(inst: SimonInstance) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """The three stage states of one subroutine round on |0...0>.

    Returns the 2n-qubit statevector as a (2^n, 2^n) array psi[x, y] after
    (1) Hadamards on the input register, (2) the oracle, (3) Hadamards again.
    """
    if inst.n > MAX_STATEVECTOR_BITS:
        raise ValueError(f"statevector simulation limited to n <= {MAX_STATEVECTOR_BITS}")
    dim = inst.size
    psi = np.zeros((dim, dim), dtype=complex)
    psi[0, 0] = 1.0
    stage1 = _fwht_rows(psi) / math.sqrt(dim)
    stage2 = oracle_apply(stage1, inst)
    stage3 = _fwht_rows(stage2.copy()) / math.sqrt(dim)
    assert abs(np.linalg.norm(stage3) - 1.0) < 1e-10
    return stage1, stage2, stage3


def round_distribution(inst: SimonInstance) -> np.ndarray:
    """Exact distribution of the measured input register after one round."""
    stage3 = fourier_twice_stages(inst)[2]
    p = np.abs(stage3) ** 2
    p = p.sum(axis=1)
    return p / p.sum()


def quantum_fourier_twice_round(inst: SimonInstance, rng: np.random.Generator) -> int:
    """Run one subroutine round and measure the input register."""
    return int(rng.choice(inst.size, p=round_distribution(inst)))


@dataclass(frozen=True)
class QuantumSolveResult:
    a: int
    s_hat: int | None
    m_used: int
    rank: int
    samples: tuple[int, ...]
    log: QueryLog


@dataclass(frozen=True)
class ClassicalSolveResult:
    a: int
    s_hat: int | None
    log: QueryLog


def quantum_solve(inst: SimonInstance, rng: np.random.Generator, rounds: int | None = None) -> QuantumSolveResult:
    """Decide b from `rounds` subroutine samples plus two verification queries.

    Full-rank samples rule out any shift, so a=0 immediately. Otherwise a
    kernel vector s_hat is the only candidate shift consistent with the
    samples, and f(0) = f(s_hat) settles it. The reported query count is the
    deterministic capacity rounds + 2 regardless of the branch taken, so
    circuit shapes do not depend on the data.
    """
    rounds = inst.n + 10 if rounds is None else int(rounds)
    if rounds < inst.n + 1:
        raise ValueError(f"rounds must be >= n+1, got {rounds}")
    p = round_distribution(inst)
    samples = tuple(int(y) for y in rng.choice(inst.size, size=rounds, p=p))
    rank = gf2_rank(list(samples))
    log = QueryLog()
    if rank >= inst.n:
        a, s_hat = 0, None
    else:
        s_hat = gf2_kernel_vector(list(samples), inst.n)
        assert s_hat is not None
        f0 = classical_query(inst, 0, log)
        fs = classical_query(inst, s_hat, log)
        a = 1 if f0 == fs else 0
    return QuantumSolveResult(a=a, s_hat=s_hat, m_used=rounds + 2, rank=rank, samples=samples, log=log)


def classical_solve(inst: SimonInstance, m: int, rng: np.random.Generator) -> ClassicalSolveResult:
    """Query m distinct uniform inputs; answer 1 exactly when a collision shows."""
    if m > inst.size:
        raise ValueError(f"cannot make {m} distinct queries on {inst.n} bits")
    log = QueryLog()
    xs = rng.choice(inst.size, size=m, replace=False)
    seen: dict[int, int] = {}
    a, s_hat = 0, None
    for x in xs:
        y = classical_query(inst, int(x), log)
        if y in seen and a == 0:
            a, s_hat = 1, seen[y] ^ int(x)
        seen.setdefault(y, int(x))
    return ClassicalSolveResult(a=a, s_hat=s_hat, log=log)


def query_count_floor(n: int, params: BoundParams | None = None) -> int:
    """Queries below this cannot give a classical algorithm a delta_cap advantage."""
    d = (params if params is not None else BoundParams()).delta_cap
    return math.ceil(math.sqrt(2.0 * d / (1.0 + d)) * 2.0 ** (n / 2.0))


def success_ceiling(n: int, m: int) -> float:
    """Cap on average classical success probability with m distinct queries.

    Saturates at 1.0 once m^2 >= 2^(n+1) (the cap says nothing there).
    """
    if m < 0:
        raise ValueError(f"m must be nonnegative, got {m}")
    denom = 2.0 ** (n + 1) - float(m) ** 2
    if denom <= 0.0:
        return 1.0
    return min(1.0, 0.5 + float(m) ** 2 / denom)


def collision_queries(n: int, params: BoundParams | None = None) -> int:
    """Distinct uniform queries sufficient to find a b=1 collision with
    probability >= 1 - delta_fail. Callers cap the result at 2^n."""
    d = (params if params is not None else BoundParams()).delta_fail
    return math.ceil(0.5 * math.sqrt(8.0 * math.log(1.0 / d) * 2.0**n + 1.0) + 0.5)


def collision_failure_bound(n: int, m: int) -> float:
    """Cap exp(-m(m-1)/2^(n+1)) on the miss probability of m distinct queries."""
    return math.exp(-float(m) * (m - 1) / 2.0 ** (n + 1))


def query_tail_floor(params: BoundParams | None = None) -> float:
    """Floor on the probability that a delta_cap-advantaged classical algorithm
    needs at least query_count_floor(n, params) queries; valid for delta_cap < 1/6."""
    d = (params if params is not None else BoundParams()).delta_cap
    if not 0.0 < d < 1.0 / 6.0:
        raise ValueError(f"delta_cap must be in (0, 1/6) here, got {d!r}")
    return (1.0 - 6.0 * d) / (3.0 - 6.0 * d)
