"""Dense quantum-state primitives: density operators, entropies, partial traces.

Everything works in natural log units (nats). All functionals accept either a
DensityOperator or a raw complex matrix; validation happens when a
DensityOperator is constructed, so hot loops can stay on bare arrays.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "DensityOperator",
    "Hamiltonian",
    "von_neumann_entropy",
    "shannon_entropy",
    "quantum_relative_entropy",
    "partial_trace",
    "fidelity_to_pure",
    "matrix_logarithm",
    "apply_unitary",
    "basis_state_density",
    "random_density",
    "random_pure_density",
    "random_diagonal_density",
    "haar_unitary",
]

HERM_TOL = 1e-10
TRACE_TOL = 1e-10
EIG_CLAMP = 1e-10  # eigenvalues in [-EIG_CLAMP, 0) count as rounding noise
UNITARY_TOL = 1e-9


def _as_matrix(op) -> np.ndarray:
    mat = op.mat if isinstance(op, (DensityOperator, Hamiltonian)) else op
    return np.asarray(mat, dtype=complex)


@dataclass(frozen=True)
class DensityOperator:
    """Hermitian, positive-semidefinite matrix with unit trace."""

    mat: np.ndarray

    def __post_init__(self):
        mat = np.asarray(self.mat, dtype=complex)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ValueError(f"density matrix must be square, got shape {mat.shape}")
        if np.abs(mat - mat.conj().T).max() > HERM_TOL:
            raise ValueError("density matrix is not Hermitian within tolerance")
        tr = np.trace(mat).real
        if abs(tr - 1.0) > TRACE_TOL:
            raise ValueError(f"density matrix trace is {tr!r}, expected 1")
        lo = np.linalg.eigvalsh(mat).min()
        if lo < -EIG_CLAMP:
            raise ValueError(f"density matrix has negative eigenvalue {lo:g}")
        object.__setattr__(self, "mat", mat)

    @property
    def dim(self) -> int:
        return self.mat.shape[0]


@dataclass(frozen=True)
class Hamiltonian:
    """Hermitian operator with nonnegative spectrum (energies in model units)."""

    mat: np.ndarray

    def __post_init__(self):
        mat = np.asarray(self.mat, dtype=complex)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ValueError(f"Hamiltonian must be square, got shape {mat.shape}")
        if np.abs(mat - mat.conj().T).max() > HERM_TOL:
            raise ValueError("Hamiltonian is not Hermitian within tolerance")
        lo = np.linalg.eigvalsh(mat).min()
        if lo < -EIG_CLAMP:
            raise ValueError(f"Hamiltonian has negative eigenvalue {lo:g}; shift the ground energy")
        object.__setattr__(self, "mat", mat)

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    def expectation(self, rho) -> float:
        """tr[H rho] as a real number."""
        return float(np.trace(self.mat @ _as_matrix(rho)).real)


def _clamped_eigenvalues(mat: np.ndarray) -> np.ndarray:
    evals = np.linalg.eigvalsh(mat)
    if evals.min() < -EIG_CLAMP:
        raise ValueError(f"matrix has negative eigenvalue {evals.min():g}")
    return np.clip(evals, 0.0, None)


def shannon_entropy(probs: np.ndarray) -> float:
    """Entropy -sum p ln p in nats of a probability vector, with 0 ln 0 = 0."""
    p = np.asarray(probs, dtype=float)
    assert p.min() > -1e-12 and abs(p.sum() - 1.0) < 1e-9
    p = p[p > 0.0]
    return float(-(p * np.log(p)).sum())


def von_neumann_entropy(rho) -> float:
    """Von Neumann entropy -tr[rho ln rho] in nats."""
    evals = _clamped_eigenvalues(_as_matrix(rho))
    evals = evals[evals > 0.0]
    return float(-(evals * np.log(evals)).sum())


def quantum_relative_entropy(rho, sigma, support_tol: float = 1e-12) -> float:
    """Relative entropy tr[rho (ln rho - ln sigma)] in nats.

    Returns math.inf when rho has weight outside sigma's support (detected as
    sigma-eigenvalues at or below support_tol); that is the documented sentinel,
    not an error.
    """
    rmat, smat = _as_matrix(rho), _as_matrix(sigma)
    if rmat.shape != smat.shape:
        raise ValueError(f"dimension mismatch {rmat.shape} vs {smat.shape}")
    sw, sv = np.linalg.eigh(smat)
    sw = np.clip(sw, 0.0, None)
    # weight of rho on sigma's null space
    rho_in_sigma_basis = (sv.conj().T @ rmat @ sv).diagonal().real
    null = sw <= support_tol
    if rho_in_sigma_basis[null].sum() > support_tol:
        return math.inf
    ln_rho_term = 0.0
    rw = _clamped_eigenvalues(rmat)
    rw = rw[rw > 0.0]
    ln_rho_term = float((rw * np.log(rw)).sum())
    ln_sigma_term = float((rho_in_sigma_basis[~null] * np.log(sw[~null])).sum())
    return ln_rho_term - ln_sigma_term


def partial_trace(rho, dims, keep) -> DensityOperator:
    """Trace out all subsystems not listed in `keep` (indices into `dims`)."""
    mat = _as_matrix(rho)
    dims = [int(d) for d in dims]
    if int(np.prod(dims)) != mat.shape[0]:
        raise ValueError(f"subsystem dims {dims} do not factor dimension {mat.shape[0]}")
    keep = sorted(set(int(i) for i in keep))
    if any(i < 0 or i >= len(dims) for i in keep):
        raise ValueError(f"keep indices {keep} out of range for {len(dims)} subsystems")
    tensor = mat.reshape(dims + dims)
    nd = len(dims)
    for ax in sorted((i for i in range(len(dims)) if i not in keep), reverse=True):
        tensor = np.trace(tensor, axis1=ax, axis2=ax + nd)
        nd -= 1
    kept_dim = int(np.prod([dims[i] for i in keep])) if keep else 1
    return DensityOperator(tensor.reshape(kept_dim, kept_dim))


def fidelity_to_pure(rho, basis_index: int) -> float:
    """Overlap <k|rho|k> with a computational basis state."""
    mat = _as_matrix(rho)
    if not 0 <= basis_index < mat.shape[0]:
        raise ValueError(f"basis index {basis_index} out of range for dim {mat.shape[0]}")
    return float(mat[basis_index, basis_index].real)


def matrix_logarithm(rho, floor: float) -> np.ndarray:
    """Principal matrix log via eigendecomposition.

    Eigenvalues below `floor` are raised to it before the log. The floor is
    mandatory: the caller owns the regularization of (near-)singular inputs,
    e.g. erasure paths pass their analytic minimum-eigenvalue guarantee.
    """
    if not floor > 0.0:
        raise ValueError(f"floor must be positive, got {floor!r}")
    w, v = np.linalg.eigh(_as_matrix(rho))
    w = np.maximum(w, floor)
    return (v * np.log(w)) @ v.conj().T


def apply_unitary(rho, u) -> DensityOperator:
    """Conjugate rho by a unitary: U rho U^dagger."""
    umat = np.asarray(u, dtype=complex)
    dev = np.abs(umat.conj().T @ umat - np.eye(umat.shape[0])).max()
    if dev > UNITARY_TOL:
        raise ValueError(f"matrix is not unitary within tolerance (deviation {dev:g})")
    return DensityOperator(umat @ _as_matrix(rho) @ umat.conj().T)


def basis_state_density(dim: int, k: int) -> DensityOperator:
    """|k><k| in dimension dim."""
    mat = np.zeros((dim, dim), dtype=complex)
    mat[k, k] = 1.0
    return DensityOperator(mat)


def random_density(dim: int, rng: np.random.Generator) -> DensityOperator:
    """Full-rank random state G G^dagger / tr from a complex Ginibre matrix."""
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    mat = g @ g.conj().T
    return DensityOperator(mat / np.trace(mat).real)


def random_pure_density(dim: int, rng: np.random.Generator) -> DensityOperator:
    """Haar-random pure state |psi><psi|."""
    vec = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    vec /= np.linalg.norm(vec)
    return DensityOperator(np.outer(vec, vec.conj()))


def random_diagonal_density(dim: int, rng: np.random.Generator) -> DensityOperator:
    """Random classical (diagonal) state with Dirichlet-uniform weights."""
    p = rng.dirichlet(np.ones(dim))
    return DensityOperator(np.diag(p.astype(complex)))


def haar_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary from the QR decomposition of a Ginibre matrix."""
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(g)
    phases = np.diagonal(r) / np.abs(np.diagonal(r))
    u = q * phases
    assert np.abs(u.conj().T @ u - np.eye(dim)).max() < 1e-10
    return u
