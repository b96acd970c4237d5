"""Unit checks for the vectorized master-equation machinery.

The generator and the steady-state solver are compared against independent
reconstructions (direct master-equation arithmetic, eigenvector kernel
extraction) rather than against themselves.
"""

import numpy as np
import pytest

from chiralg2 import hilbert
from chiralg2.errors import RankDeficientError, StiffnessError, UndefinedCorrelationError
from chiralg2.lindblad import (SteadyState, expectation, g2_numeric,
                               liouvillian, occupation, propagate,
                               steady_state, trace_distance, unvectorize,
                               vectorize)
from chiralg2.model import Chirality, ModelParams, collapse_ops, hamiltonian


def random_hermitian(rng, dim):
    m = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return 0.5 * (m + m.conj().T)


def random_state(rng, dim):
    m = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    rho = m @ m.conj().T
    return rho / np.trace(rho)


def master_rhs(h, collapse, rho):
    # direct master-equation arithmetic, no superoperator involved
    out = -1j * (h @ rho - rho @ h)
    for rate, op in collapse:
        od = op.conj().T
        out += 0.5 * rate * (2.0 * op @ rho @ od - od @ op @ rho - rho @ od @ op)
    return out


def test_vectorization_round_trip_is_column_stacked():
    m = np.array([[1.0, 3.0], [2.0, 4.0]], dtype=np.complex128)
    v = vectorize(m)
    assert np.array_equal(v, np.array([1.0, 2.0, 3.0, 4.0], dtype=np.complex128))
    assert np.array_equal(unvectorize(v, 2), m)


def test_liouvillian_matches_direct_master_equation():
    rng = np.random.default_rng(21)
    dim = 3
    h = random_hermitian(rng, dim)
    collapse = [(0.5, rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))),
                (1.2, rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim)))]
    lv = liouvillian(h, collapse)
    assert lv.shape == (dim * dim, dim * dim)
    for _ in range(4):
        rho = random_state(rng, dim)
        direct = master_rhs(h, collapse, rho)
        assert np.allclose(unvectorize(lv @ vectorize(rho), dim), direct,
                           rtol=0.0, atol=1e-12)


def test_trace_row_annihilates_the_generator():
    rng = np.random.default_rng(22)
    dim = 4
    h = random_hermitian(rng, dim)
    collapse = [(0.7, rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim)))]
    lv = liouvillian(h, collapse)
    trace_row = np.eye(dim, dtype=np.complex128).ravel(order="F")
    assert np.max(np.abs(trace_row @ lv)) < 1e-12 * np.max(np.abs(lv))


def test_steady_state_matches_kernel_eigenvector():
    rng = np.random.default_rng(23)
    dim = 3
    h = random_hermitian(rng, dim)
    collapse = [(0.8, rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))),
                (0.3, rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim)))]
    lv = liouvillian(h, collapse)
    st = steady_state(lv)
    assert isinstance(st, SteadyState)
    assert np.trace(st.rho) == pytest.approx(1.0, abs=1e-12)
    assert st.residual < 1e-10
    assert st.min_eigenvalue > -1e-10
    # independent route: kernel eigenvector, trace-normalized
    w, v = np.linalg.eig(lv)
    rho_eig = unvectorize(v[:, np.argmin(np.abs(w))], dim)
    rho_eig /= np.trace(rho_eig)
    assert np.allclose(st.rho, rho_eig, rtol=0.0, atol=1e-9)


def test_steady_state_validates_generator_shape():
    with pytest.raises(ValueError):
        steady_state(np.zeros((3, 4)))
    with pytest.raises(ValueError):
        steady_state(np.zeros((5, 5)))  # 5 is not a squared dimension


def test_degenerate_generator_raises_rank_deficient():
    # no dynamics at all: every diagonal state is steady
    lv = liouvillian(np.zeros((2, 2)), [])
    with pytest.raises(RankDeficientError):
        steady_state(lv)


def test_empty_cavity_photon_number_closed_form():
    # drives off except the probe: the cavity is a driven damped mode
    p = ModelParams.from_mhz(delta_c=0.37, g=0.0, omega_31=0.0, omega_32=0.0)
    st = steady_state(liouvillian(hamiltonian(p, Chirality.LEFT),
                                  collapse_ops(p)))
    space = p.space
    number = hilbert.lift(np.diag(np.arange(space.cavity_dim, dtype=float)),
                          "cavity", space)
    nbar = expectation(number, st.rho).real
    expected = p.xi_p ** 2 / (p.delta_c ** 2 + p.kappa ** 2 / 4.0)
    assert nbar == pytest.approx(expected, rel=1e-10)


def test_propagate_reproduces_exponential_decay():
    p = ModelParams(delta_c=0.0, delta_31=0.0, delta_32=0.0, kappa=1.0,
                    gamma_21=0.0, gamma_31=0.0, gamma_32=0.0,
                    gamma_phi_21=0.0, gamma_phi_31=0.0, gamma_phi_32=0.0,
                    g=0.0, omega_31=0.0, omega_32=0.0, xi_p=0.0, n_c=2)
    h = hamiltonian(p, Chirality.LEFT)
    space = p.space
    rho0 = np.zeros((space.dim, space.dim), dtype=np.complex128)
    rho0[space.index(1, 1), space.index(1, 1)] = 1.0
    t = 1.3
    rho_t = propagate(h, collapse_ops(p), rho0, t_final=t, dt=1e-3)
    assert occupation(rho_t, 1, 1, space) == pytest.approx(np.exp(-p.kappa * t), abs=1e-9)
    assert occupation(rho_t, 1, 0, space) == pytest.approx(1.0 - np.exp(-p.kappa * t), abs=1e-9)
    assert np.trace(rho_t).real == pytest.approx(1.0, abs=1e-9)


def test_propagate_validates_inputs():
    p = ModelParams.from_mhz(n_c=2)
    h = hamiltonian(p, Chirality.LEFT)
    bad = np.zeros((p.space.dim, p.space.dim), dtype=np.complex128)
    with pytest.raises(ValueError, match="trace"):
        propagate(h, collapse_ops(p), bad, t_final=1.0, dt=0.1)
    with pytest.raises(ValueError):
        propagate(h, collapse_ops(p), np.eye(4) / 4.0, t_final=1.0, dt=0.1)


def test_propagate_raises_when_halving_cannot_stabilize():
    # eigenfrequencies ~ n_c * delta_c; dt stays far beyond the stability
    # bound even after every allowed halving
    p = ModelParams(delta_c=100.0, delta_31=100.0, delta_32=0.0, kappa=1.0,
                    gamma_21=0.0, gamma_31=0.0, gamma_32=0.0,
                    gamma_phi_21=0.0, gamma_phi_31=0.0, gamma_phi_32=0.0,
                    g=0.0, omega_31=0.0, omega_32=0.0, xi_p=3.0, n_c=8)
    h = hamiltonian(p, Chirality.LEFT)
    space = p.space
    rho0 = np.zeros((space.dim, space.dim), dtype=np.complex128)
    rho0[0, 0] = 1.0
    with pytest.raises(StiffnessError):
        propagate(h, collapse_ops(p), rho0, t_final=2.0, dt=1.0)


def test_g2_numeric_on_a_known_photon_distribution():
    space = hilbert.SpaceSpec(n_c=3)
    rho = np.zeros((space.dim, space.dim), dtype=np.complex128)
    for n, prob in ((0, 0.7), (1, 0.2), (2, 0.1)):
        rho[space.index(1, n), space.index(1, n)] = prob
    # <n(n-1)> = 2 * 0.1, <n> = 0.4
    assert g2_numeric(rho, space) == pytest.approx(0.2 / 0.4 ** 2, rel=1e-12)


def test_g2_numeric_rejects_an_empty_cavity():
    space = hilbert.SpaceSpec(n_c=2)
    rho = np.zeros((space.dim, space.dim), dtype=np.complex128)
    rho[space.index(1, 0), space.index(1, 0)] = 1.0
    with pytest.raises(UndefinedCorrelationError):
        g2_numeric(rho, space)


def test_trace_distance_limits():
    space = hilbert.SpaceSpec(n_c=1)
    rho1 = np.zeros((space.dim, space.dim), dtype=np.complex128)
    rho2 = np.zeros_like(rho1)
    rho1[0, 0] = 1.0
    rho2[1, 1] = 1.0
    assert trace_distance(rho1, rho2) == pytest.approx(1.0)
    assert trace_distance(rho1, rho1) == pytest.approx(0.0, abs=1e-14)
