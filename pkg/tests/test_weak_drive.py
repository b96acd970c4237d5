"""Unit checks for the closed-form weak-drive amplitudes.

The Cramer solutions are compared against an independent LU solve of the
same truncated equations, and against closed-form limits that can be read
off by hand.
"""

import math

import numpy as np
import pytest

from chiralg2.errors import NearSingularError, UndefinedCorrelationError
from chiralg2.model import Chirality, ModelParams, loop_phase_factor
from chiralg2.weak_drive import (AmplitudeSolution, WeakDriveWarning,
                                 _g2_full_sum, amplitude_denominators,
                                 amplitudes, complex_detunings, eom_residual,
                                 g2_analytic)

SQRT2 = math.sqrt(2.0)


def lu_reference(params, chirality):
    """Same truncated equations, solved by LU factorization instead."""
    dc, d2, d3 = complex_detunings(params)
    g, o31, o32, xi = params.g, params.omega_31, params.omega_32, params.xi_p
    ep = loop_phase_factor(chirality, params.phi)
    em = ep.conjugate()
    a1 = np.array([[dc, g, 0.0],
                   [g, d2, o32 * ep],
                   [0.0, o32 * em, d3]], dtype=np.complex128)
    b1 = np.array([-xi, 0.0, -o31], dtype=np.complex128)
    c11, c20, c30 = np.linalg.solve(a1, b1)
    a2 = np.array([[2.0 * dc, SQRT2 * g, 0.0],
                   [SQRT2 * g, d2 + dc, o32 * ep],
                   [0.0, o32 * em, d3 + dc]], dtype=np.complex128)
    b2 = np.array([-SQRT2 * xi * c11,
                   -xi * c20,
                   -xi * c30 - o31 * c11], dtype=np.complex128)
    c12, c21, c31 = np.linalg.solve(a2, b2)
    return c11, c20, c30, c12, c21, c31


def random_weak_params(rng):
    return ModelParams.from_mhz(
        phi=rng.uniform(0.0, 2.0 * math.pi),
        delta_c=rng.uniform(-2.0, 2.0),
        delta_31=rng.uniform(-2.0, 2.0),
        delta_32=rng.uniform(-0.5, 0.5),
        omega_32=rng.uniform(0.1, 1.0),
        omega_31=rng.uniform(0.0, 0.03),
        xi_p=rng.uniform(0.001, 0.03),
    )


def test_closed_form_matches_lu_solve():
    rng = np.random.default_rng(31)
    for i in range(8):
        params = random_weak_params(rng)
        ch = Chirality.LEFT if i % 2 == 0 else Chirality.RIGHT
        sol = amplitudes(params, ch)
        ref = lu_reference(params, ch)
        got = (sol.c11, sol.c20, sol.c30, sol.c12, sol.c21, sol.c31)
        scale = max(abs(v) for v in ref)
        for a, b in zip(got, ref):
            assert abs(a - b) < 1e-12 * scale
        assert sol.c10 == 1.0 + 0.0j


def test_amplitudes_satisfy_their_own_equations():
    rng = np.random.default_rng(32)
    for i in range(5):
        params = random_weak_params(rng)
        ch = Chirality.RIGHT if i % 2 == 0 else Chirality.LEFT
        sol = amplitudes(params, ch)
        assert eom_residual(sol, params, ch) < 1e-10 * params.xi_p


def test_coherent_limit_amplitudes_and_g2():
    p = ModelParams.from_mhz(delta_c=0.7, g=0.0, omega_31=0.0, omega_32=0.0)
    sol = amplitudes(p, Chirality.LEFT)
    dc, _, _ = complex_detunings(p)
    assert abs(sol.c11 + p.xi_p / dc) < 1e-14 * abs(sol.c11)
    assert abs(sol.c12 - sol.c11 ** 2 / SQRT2) < 1e-14 * abs(sol.c12)
    # residual deviation from 1 is the normalization term |c11|^2
    assert abs(g2_analytic(p, Chirality.LEFT) - 1.0) < 2.0 * abs(sol.c11) ** 2


def test_denominator_reductions():
    p = ModelParams.from_mhz(delta_c=0.4, delta_31=0.9, delta_32=0.2,
                             omega_32=0.0)
    dc, d2, d3 = complex_detunings(p)
    single, double = amplitude_denominators(p)
    assert abs(single - d3 * (p.g ** 2 - d2 * dc)) < 1e-14 * abs(single)
    q = ModelParams.from_mhz(delta_c=0.4, delta_31=0.9, delta_32=0.2,
                             omega_32=0.0, g=0.0)
    dc, d2, d3 = complex_detunings(q)
    _, double = amplitude_denominators(q)
    assert abs(double - dc * (d2 + dc) * (d3 + dc)) < 1e-14 * abs(double)
    # classical drives off: the one-photon amplitude collapses to a single
    # fraction set by the cavity-molecule coupling alone
    r = ModelParams.from_mhz(delta_c=0.4, delta_31=0.9, delta_32=0.2,
                             omega_31=0.0, omega_32=0.0)
    dc, d2, _ = complex_detunings(r)
    sol = amplitudes(r, Chirality.LEFT)
    expected = d2 * r.xi_p / (r.g ** 2 - d2 * dc)
    assert abs(sol.c11 - expected) < 1e-13 * abs(expected)


def test_amplitude_hierarchy_stays_perturbative():
    for dc in (-0.5, 0.0, 0.8):
        p = ModelParams.from_mhz().with_detuning(dc * 2.0 * math.pi)
        sol = amplitudes(p, Chirality.LEFT)
        tier2 = max(abs(sol.c11), abs(sol.c20), abs(sol.c30))
        tier3 = max(abs(sol.c12), abs(sol.c21), abs(sol.c31))
        assert tier2 < 0.2 * abs(sol.c10)
        assert tier3 < 0.2 * tier2


def test_dephasing_has_no_closed_form():
    p = ModelParams.from_mhz(gamma_phi_21=0.01)
    with pytest.raises(ValueError, match="dephasing"):
        amplitudes(p, Chirality.LEFT)


def test_strong_drive_warns():
    p = ModelParams.from_mhz(xi_p=0.2)
    with pytest.warns(WeakDriveWarning):
        amplitudes(p, Chirality.LEFT)


def test_near_singular_denominator_is_refused():
    # dissipation-free parameters tuned so the single-excitation
    # determinant collapses
    p = ModelParams(delta_c=1.0, delta_31=1.0, delta_32=0.0, kappa=1e-16,
                    gamma_21=0.0, gamma_31=0.0, gamma_32=0.0,
                    gamma_phi_21=0.0, gamma_phi_31=0.0, gamma_phi_32=0.0,
                    g=1.0, omega_31=0.0, omega_32=0.0, xi_p=0.0)
    with pytest.raises(NearSingularError):
        amplitudes(p, Chirality.LEFT)


def test_g2_analytic_rejects_an_unlit_cavity():
    p = ModelParams.from_mhz(xi_p=0.0, omega_31=0.0)
    with pytest.raises(UndefinedCorrelationError):
        g2_analytic(p, Chirality.LEFT)


def test_g2_analytic_frozen_reference_values():
    p = ModelParams.from_mhz()
    assert g2_analytic(p, Chirality.LEFT) == pytest.approx(
        18.16878427734376, rel=1e-10)
    assert g2_analytic(p, Chirality.RIGHT) == pytest.approx(
        0.8081961839667717, rel=1e-10)


def test_analytic_mirror_and_phase_shift():
    k = 2.0 * math.pi
    base = ModelParams.from_mhz(phi=math.pi / 2)
    for dc in (0.1, 0.3, 1.2):
        left = g2_analytic(base.with_detuning(dc * k), Chirality.LEFT)
        right = g2_analytic(base.with_detuning(-dc * k), Chirality.RIGHT)
        assert abs(left - right) < 1e-12 * left
    for phi in (0.0, 0.37, math.pi / 2):
        p = ModelParams.from_mhz(phi=phi).with_detuning(0.2 * k)
        q = ModelParams.from_mhz(phi=phi + math.pi).with_detuning(0.2 * k)
        assert g2_analytic(q, Chirality.LEFT) == pytest.approx(
            g2_analytic(p, Chirality.RIGHT), rel=1e-12)


def test_full_sum_variant_tracks_the_leading_form():
    p = ModelParams.from_mhz()
    for ch in (Chirality.LEFT, Chirality.RIGHT):
        sol = amplitudes(p, ch)
        lead = g2_analytic(p, ch)
        full = _g2_full_sum(sol)
        assert abs(full / lead - 1.0) < 0.2


def test_solution_carries_its_ingredients():
    p = ModelParams.from_mhz(delta_c=0.25)
    sol = amplitudes(p, Chirality.LEFT)
    assert isinstance(sol, AmplitudeSolution)
    dc, d2, d3 = complex_detunings(p)
    assert sol.delta_c == dc
    assert sol.delta_2 == d2
    assert sol.delta_3 == d3
    total = math.sqrt(sum(abs(c) ** 2 for c in
                          (sol.c10, sol.c11, sol.c20, sol.c30,
                           sol.c12, sol.c21, sol.c31)))
    assert sol.norm == pytest.approx(total, rel=1e-15)
