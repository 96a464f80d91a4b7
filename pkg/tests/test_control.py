"""Finite control register: dilation, induced channel, fidelity scaling."""

from __future__ import annotations

import numpy as np
import pytest

from oraclecost.control import (
    ChannelReport,
    LadderControl,
    average_fidelity,
    build_dilation,
    control_channel,
    control_diagnostics,
    haar_average_fidelity,
    kraus_operators,
    named_gate,
)
from oraclecost.states import haar_unitary, von_neumann_entropy

TOL = 1e-9
SEEDS = [0, 1, 2, 3, 4]
L_GRID = [8, 16, 32, 64]


def basis_gate(name: str, seed: int = 0) -> np.ndarray:
    return named_gate(name, np.random.default_rng(seed))


def test_configuration_validation():
    with pytest.raises(ValueError):
        LadderControl(big_l=1)
    with pytest.raises(ValueError):
        LadderControl(big_l=4, ell0=0)
    with pytest.raises(ValueError):
        LadderControl(big_l=4, omega=0.0)
    with pytest.raises(ValueError):
        LadderControl(big_l=4, ell0=1, trunc=5)
    ctrl = LadderControl(big_l=4, ell0=2)
    assert ctrl.trunc == 2 + 4 + 2
    assert ctrl.dim == 2 * ctrl.trunc
    assert list(ctrl.window) == [2, 3, 4, 5]


def test_control_state_and_energy_are_exact():
    ctrl = LadderControl(big_l=9, ell0=1, omega=1.0)
    phi = ctrl.control_state()
    assert np.isclose(np.linalg.norm(phi), 1.0, atol=TOL)
    assert ctrl.control_energy() == 5.0
    for big_l in L_GRID:
        for ell0 in (1, 3):
            for omega in (1.0, 0.25):
                ctrl = LadderControl(big_l=big_l, ell0=ell0, omega=omega)
                assert ctrl.control_energy() == omega * (ell0 + (big_l - 1) / 2.0)


def test_gate_table_and_validation():
    assert np.array_equal(named_gate("I"), np.eye(2))
    x = named_gate("X")
    assert np.array_equal(x @ x, np.eye(2))
    h = named_gate("hadamard")
    assert np.allclose(h @ h, np.eye(2), atol=TOL)
    t = named_gate("T")
    assert np.allclose(
        np.linalg.matrix_power(t, 8), np.eye(2), atol=TOL
    )
    with pytest.raises(ValueError):
        named_gate("random")
    with pytest.raises(ValueError):
        named_gate("CNOT")
    with pytest.raises(ValueError):
        build_dilation(np.ones((2, 2)), LadderControl(big_l=4))


@pytest.mark.parametrize("seed", SEEDS)
def test_dilation_is_unitary_off_the_truncation_corner(seed):
    ctrl = LadderControl(big_l=6, ell0=2)
    u = haar_unitary(2, np.random.default_rng(seed))
    v = build_dilation(u, ctrl)
    dead = ctrl.trunc + (ctrl.trunc - 1)
    live = np.delete(np.arange(ctrl.dim), dead)
    gram = v.conj().T @ v
    assert np.allclose(gram[np.ix_(live, live)], np.eye(ctrl.dim - 1), atol=TOL)
    assert np.allclose(v[:, dead], 0.0, atol=TOL)


def test_identity_gate_dilation_fixes_the_live_subspace():
    ctrl = LadderControl(big_l=5)
    v = build_dilation(np.eye(2), ctrl)
    dead = ctrl.trunc + (ctrl.trunc - 1)
    expected = np.eye(ctrl.dim, dtype=complex)
    expected[dead, dead] = 0.0
    assert np.allclose(v, expected, atol=TOL)


@pytest.mark.parametrize("name", ["X", "hadamard", "T", "random"])
def test_dilation_commutes_with_the_total_energy(name):
    ctrl = LadderControl(big_l=8)
    v = build_dilation(basis_gate(name, seed=11), ctrl)
    h = ctrl.hamiltonian()
    commutator = h[:, None] * v - v * h[None, :]
    assert np.linalg.norm(commutator, 2) <= 1e-12


@pytest.mark.parametrize("seed", SEEDS)
def test_kraus_family_is_complete(seed):
    ctrl = LadderControl(big_l=7, ell0=2)
    kraus = kraus_operators(haar_unitary(2, np.random.default_rng(seed)), ctrl)
    total = np.einsum("mki,mkj->ij", kraus.conj(), kraus)
    assert np.allclose(total, np.eye(2), atol=TOL)


def test_bit_flip_channel_nearly_flips_the_ground_state():
    ctrl = LadderControl(big_l=16)
    rho_s, _ = control_channel(named_gate("X"), ctrl, np.array([1.0, 0.0]))
    assert rho_s.mat[1, 1].real >= 1.0 - 2.0 / 16.0


@pytest.mark.parametrize("big_l", L_GRID)
def test_average_fidelity_has_exact_closed_forms(big_l):
    ctrl = LadderControl(big_l=big_l)
    assert 1.0 - average_fidelity(named_gate("X"), ctrl) == pytest.approx(
        2.0 / (3.0 * big_l), abs=1e-12
    )
    assert 1.0 - average_fidelity(named_gate("hadamard"), ctrl) == pytest.approx(
        1.0 / (2.0 * big_l), abs=1e-12
    )
    assert 1.0 - average_fidelity(named_gate("T"), ctrl) == pytest.approx(
        0.0, abs=1e-12
    )
    assert average_fidelity(named_gate("I"), ctrl) == pytest.approx(
        1.0, abs=1e-12
    )


@pytest.mark.parametrize("name", ["X", "hadamard", "random"])
def test_monte_carlo_fidelity_agrees_with_the_exact_average(name):
    ctrl = LadderControl(big_l=12)
    u = basis_gate(name, seed=21)
    exact = average_fidelity(u, ctrl)
    mean, stderr = haar_average_fidelity(u, ctrl, 4000, np.random.default_rng(5))
    assert abs(mean - exact) <= 3.0 * stderr + 1e-12


@pytest.mark.parametrize("name", ["X", "hadamard", "T", "random"])
def test_infidelity_never_grows_when_the_window_doubles(name):
    u = basis_gate(name, seed=31)
    infids = [1.0 - average_fidelity(u, LadderControl(big_l=big_l))
              for big_l in L_GRID]
    for before, after in zip(infids, infids[1:]):
        assert after <= before + 1e-12


@pytest.mark.parametrize("seed", SEEDS)
def test_joint_output_stays_pure_and_energy_preserving(seed):
    ctrl = LadderControl(big_l=10, ell0=2, omega=0.5)
    rng = np.random.default_rng(seed)
    u = haar_unitary(2, rng)
    psi = rng.normal(size=2) + 1j * rng.normal(size=2)
    psi /= np.linalg.norm(psi)
    rho_s, rho_c = control_channel(u, ctrl, psi)
    assert von_neumann_entropy(rho_s) == pytest.approx(
        von_neumann_entropy(rho_c), abs=TOL
    )
    v = build_dilation(u, ctrl)
    h = ctrl.hamiltonian()
    joint_in = np.kron(psi, ctrl.control_state())
    joint_out = v @ joint_in
    energy_in = float(np.real(np.conj(joint_in) @ (h * joint_in)))
    energy_out = float(np.real(np.conj(joint_out) @ (h * joint_out)))
    assert energy_out == pytest.approx(energy_in, abs=TOL)


def test_identity_gate_leaves_the_control_register_pure():
    report = control_diagnostics(named_gate("I"), LadderControl(big_l=8),
                                 haar_samples=50)
    assert report.delta_s_c <= 1e-12
    assert report.avg_fidelity == pytest.approx(1.0, abs=1e-12)
    assert report.commutator_norm <= 1e-12


@pytest.mark.parametrize("name", ["X", "hadamard", "random"])
def test_entropy_gain_scales_like_the_inverse_window(name):
    u = basis_gate(name, seed=41)
    products = []
    for big_l in L_GRID:
        report = control_diagnostics(
            u, LadderControl(big_l=big_l), haar_samples=200,
            rng=np.random.default_rng([13, big_l]),
        )
        assert report.control_energy == 1.0 * (1 + (big_l - 1) / 2.0)
        products.append(big_l * report.delta_s_c)
    ratio = max(products) / min(products)
    assert ratio < 2.0


def test_report_validation_rejects_out_of_range_diagnostics():
    with pytest.raises(ValueError):
        ChannelReport(avg_fidelity=1.2, delta_s_c=0.0, control_energy=1.0,
                      commutator_norm=0.0)
    with pytest.raises(ValueError):
        ChannelReport(avg_fidelity=0.9, delta_s_c=-0.1, control_energy=1.0,
                      commutator_norm=0.0)
    with pytest.raises(ValueError):
        ChannelReport(avg_fidelity=0.9, delta_s_c=0.0, control_energy=1.0,
                      commutator_norm=-1.0)


def test_diagnostics_validation():
    with pytest.raises(ValueError):
        control_diagnostics(named_gate("X"), LadderControl(big_l=4),
                            haar_samples=0)
    with pytest.raises(ValueError):
        haar_average_fidelity(named_gate("X"), LadderControl(big_l=4), 1,
                              np.random.default_rng(0))
