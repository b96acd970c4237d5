"""Closed-form weak-drive photon statistics.

For weak probe and lower-rung drive the steady state stays inside the
two-excitation subspace spanned by |1,0>, |1,1>, |2,0>, |3,0>, |1,2>, |2,1>,
|3,1>. Writing the state as sum c_jn |j,n> and dropping quantum jumps, the
no-jump generator closes order by order: the single-excitation amplitudes
solve one 3x3 linear system and the double-excitation amplitudes another,
both with the ground amplitude pinned at c10 = 1. The formulas below are the
Cramer solutions of those systems; eom_residual re-evaluates the defining
equations so the algebra can be checked independently at any parameter point.

Dephasing has no no-jump representation at this order, so any nonzero
gamma_phi is a hard error rather than a silent approximation.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import NearSingularError, UndefinedCorrelationError
from .model import Chirality, ModelParams, loop_phase_factor

# relative floor for the closed-form denominators
SINGULAR_RTOL = 1e-14
# drives above this fraction of kappa strain the two-excitation ansatz
WEAK_DRIVE_FRACTION = 0.1
NORMALIZED_C11_FLOOR = 1e-12
SQRT2 = math.sqrt(2.0)


class WeakDriveWarning(UserWarning):
    """Drive strengths are outside the regime the closed forms assume."""


@dataclass(frozen=True)
class AmplitudeSolution:
    """Unnormalized state amplitudes c_jn plus the pieces they came from.

    delta_c, delta_2 and delta_3 are the complex detunings with the
    half-linewidths of the cavity, level |2> and level |3> absorbed into
    their imaginary parts; norm is sqrt(sum of all seven |c|^2).
    """

    c10: complex
    c11: complex
    c20: complex
    c30: complex
    c12: complex
    c21: complex
    c31: complex
    norm: float
    delta_c: complex
    delta_2: complex
    delta_3: complex


def complex_detunings(params: ModelParams) -> tuple[complex, complex, complex]:
    """Cavity, level-2 and level-3 complex detunings (rad/us)."""
    dc = params.delta_c - 0.5j * params.kappa
    d2 = params.delta_31 - params.delta_32 - 0.5j * params.gamma_21
    d3 = params.delta_31 - 0.5j * (params.gamma_31 + params.gamma_32)
    return dc, d2, d3


def amplitude_denominators(params: ModelParams) -> tuple[complex, complex]:
    """Determinant-like denominators of the two amplitude tiers.

    The first is (minus) the determinant of the single-excitation system,
    the second is half the determinant of the double-excitation system; both
    are chirality independent.
    """
    dc, d2, d3 = complex_detunings(params)
    g2 = params.g ** 2
    o32sq = params.omega_32 ** 2
    single = g2 * d3 - d2 * d3 * dc + dc * o32sq
    double = (d3 + dc) * (dc * (d2 + dc) - g2) - dc * o32sq
    return single, double


def amplitudes(params: ModelParams, chirality: Chirality) -> AmplitudeSolution:
    """Solve the truncated no-jump hierarchy in closed form.

    Raises:
        ValueError: if any dephasing rate is nonzero (no closed form then).
        NearSingularError: if a tier denominator nearly vanishes.
    """
    if params.gamma_phi_21 or params.gamma_phi_31 or params.gamma_phi_32:
        raise ValueError("closed-form amplitudes require all dephasing rates to be zero")
    if params.xi_p > WEAK_DRIVE_FRACTION * params.kappa \
            or params.omega_31 > WEAK_DRIVE_FRACTION * params.kappa:
        warnings.warn(
            f"xi_p or omega_31 exceeds {WEAK_DRIVE_FRACTION} * kappa; the "
            "two-excitation truncation degrades at this drive strength",
            WeakDriveWarning, stacklevel=2)

    dc, d2, d3 = complex_detunings(params)
    single, double = amplitude_denominators(params)
    scale = abs(dc * d2 * d3)
    if abs(single) <= SINGULAR_RTOL * scale:
        raise NearSingularError(
            f"single-excitation denominator |{single:.3e}| below "
            f"{SINGULAR_RTOL} * |delta_c delta_2 delta_3|")
    if abs(double) <= SINGULAR_RTOL * scale:
        raise NearSingularError(
            f"double-excitation denominator |{double:.3e}| below "
            f"{SINGULAR_RTOL} * |delta_c delta_2 delta_3|")

    g = params.g
    o31 = params.omega_31
    o32 = params.omega_32
    xi = params.xi_p
    eplus = loop_phase_factor(chirality, params.phi)
    eminus = eplus.conjugate()

    c10 = 1.0 + 0.0j
    c11 = (d2 * d3 * xi + eplus * g * o31 * o32 - xi * o32 ** 2) / single
    c20 = -(g * d3 * xi + eplus * dc * o31 * o32) / single
    c30 = (d2 * dc * o31 + eminus * g * xi * o32 - g ** 2 * o31) / single

    seed = c30 * xi + c11 * o31  # feeds every double-excitation amplitude
    c12 = (xi * (c20 * g - c11 * (d2 + dc)) * (d3 + dc)
           + xi * c11 * o32 ** 2
           - eplus * g * o32 * seed) / (SQRT2 * double)
    c21 = (eplus * dc * o32 * seed
           + (d3 + dc) * (c11 * g - c20 * dc) * xi) / double
    c31 = ((g ** 2 - dc * (d2 + dc)) * seed
           - eminus * xi * o32 * (c11 * g - c20 * dc)) / double

    norm = math.sqrt(abs(c10) ** 2 + abs(c11) ** 2 + abs(c20) ** 2
                     + abs(c30) ** 2 + abs(c12) ** 2 + abs(c21) ** 2
                     + abs(c31) ** 2)
    return AmplitudeSolution(c10=c10, c11=complex(c11), c20=complex(c20),
                             c30=complex(c30), c12=complex(c12),
                             c21=complex(c21), c31=complex(c31), norm=norm,
                             delta_c=dc, delta_2=d2, delta_3=d3)


def eom_residual(sol: AmplitudeSolution, params: ModelParams,
                 chirality: Chirality) -> float:
    """Largest residual of the truncated steady-state equations.

    Plugs the closed-form amplitudes back into the seven no-jump equations
    (time derivatives set to zero) and returns the worst absolute violation.
    Exact solutions leave only rounding noise, so this is the cheap
    independent check on the Cramer algebra.
    """
    dc, d2, d3 = sol.delta_c, sol.delta_2, sol.delta_3
    g = params.g
    o31 = params.omega_31
    o32 = params.omega_32
    xi = params.xi_p
    eplus = loop_phase_factor(chirality, params.phi)
    eminus = eplus.conjugate()
    residuals = (
        0.0,  # the ground amplitude is stationary at this order
        dc * sol.c11 + g * sol.c20 + xi * sol.c10,
        d2 * sol.c20 + g * sol.c11 + o32 * eplus * sol.c30,
        d3 * sol.c30 + o31 * sol.c10 + o32 * eminus * sol.c20,
        2.0 * dc * sol.c12 + SQRT2 * g * sol.c21 + SQRT2 * xi * sol.c11,
        (d2 + dc) * sol.c21 + SQRT2 * g * sol.c12 + xi * sol.c20
        + o32 * eplus * sol.c31,
        (d3 + dc) * sol.c31 + xi * sol.c30 + o31 * sol.c11
        + o32 * eminus * sol.c21,
    )
    return max(abs(r) for r in residuals)


def g2_analytic(params: ModelParams, chirality: Chirality) -> float:
    """Closed-form equal-time second-order correlation of the cavity field.

    Leading order in the weak drives: g2(0) = 2 |n12|^2 / |n11|^4 with the
    normalized amplitudes n_jn = c_jn / norm.
    """
    sol = amplitudes(params, chirality)
    n11 = abs(sol.c11) / sol.norm
    if not n11 > NORMALIZED_C11_FLOOR:
        raise UndefinedCorrelationError(
            f"normalized one-photon amplitude {n11:.3e} is below "
            f"{NORMALIZED_C11_FLOOR:.0e}; g2(0) is undefined")
    return 2.0 * abs(sol.c12) ** 2 * sol.norm ** 2 / abs(sol.c11) ** 4


def _g2_full_sum(sol: AmplitudeSolution) -> float:
    """Photon-number-weighted form of g2(0), kept as an internal cross-check.

    Same truncated state, but with the full sums n(n-1)|c|^2 and n|c|^2 in
    numerator and denominator instead of their leading terms.
    """
    one = abs(sol.c11) ** 2 + abs(sol.c21) ** 2 + abs(sol.c31) ** 2
    two = abs(sol.c12) ** 2
    nbar = (one + 2.0 * two) / sol.norm ** 2
    if not nbar > 0.0:
        raise UndefinedCorrelationError("empty truncated state")
    return (2.0 * two / sol.norm ** 2) / nbar ** 2
