"""Driven cavity coupled to a cyclic three-level emitter.

All frequency-like parameters are angular (rad/us). Laboratory values quoted
as nu/2pi in MHz enter through ModelParams.from_mhz, which multiplies by 2*pi
exactly once at the boundary; nothing downstream rescales units.

The emitter runs a closed drive loop |1>-|2>-|3>: the cavity couples the
|1>-|2> leg, classical fields drive |1>-|3> and |2>-|3>, and a weak probe
feeds the cavity. Handedness enters only through the loop phase: the
right-handed arrangement carries an extra pi relative to the left-handed one,
which is what the photon statistics end up reading out.

In the frame rotating with the drives the Hamiltonian is

    H = delta_c a^dag a + (delta_31 - delta_32) s22 + delta_31 s33
        + [ g a^dag s12 + xi_p a + omega_31 s13
            + omega_32 e^{i phase} s23 + h.c. ]

with s_ij = |i><j| lifted to the product space.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass, fields, replace

import numpy as np

from . import hilbert, linalg

TWO_PI = 2.0 * math.pi

# caption-level defaults, quoted as nu/2pi in MHz
DEFAULTS_MHZ = {
    "delta_c": 0.0,
    "delta_31": None,  # follows delta_c unless given
    "delta_32": 0.0,
    "kappa": 1.0,
    "gamma_21": 0.1,
    "gamma_31": 0.1,
    "gamma_32": 0.1,
    "gamma_phi_21": 0.0,
    "gamma_phi_31": 0.0,
    "gamma_phi_32": 0.0,
    "g": 0.1,
    "omega_31": 0.01,
    "omega_32": 0.1,
    "xi_p": 0.01,
}
DEFAULT_PHI = 0.0
DEFAULT_N_C = 8


class Chirality(enum.Enum):
    LEFT = "L"
    RIGHT = "R"


def to_angular(mhz: float) -> float:
    """Convert a frequency given as nu/2pi in MHz to rad/us."""
    return TWO_PI * mhz


def phase_of(chirality: Chirality, phi: float) -> float:
    """Loop phase seen by a molecule of the given handedness.

    Returned unreduced (left: phi, right: phi + pi); reduce mod 2*pi only
    for display. Numerical code should use loop_phase_factor instead, which
    avoids rounding the pi shift.
    """
    if chirality is Chirality.LEFT:
        return phi
    if chirality is Chirality.RIGHT:
        return phi + math.pi
    raise TypeError(f"chirality must be a Chirality, got {chirality!r}")


def chirality_sign(chirality: Chirality) -> float:
    """+1 for left-handed, -1 for right-handed."""
    if chirality is Chirality.LEFT:
        return 1.0
    if chirality is Chirality.RIGHT:
        return -1.0
    raise TypeError(f"chirality must be a Chirality, got {chirality!r}")


def loop_phase_factor(chirality: Chirality, phi: float) -> complex:
    """exp(i * phase_of(chirality, phi)) without ever adding the pi.

    The right-handed factor is the exact negation of the left-handed one.
    Folding the handedness into a sign instead of the exponent keeps the two
    branches (and detuning-mirrored parameter sets) related at the last bit,
    which the correlation contrast is sensitive to.
    """
    return chirality_sign(chirality) * cmath.exp(1j * phi)


@dataclass(frozen=True)
class ModelParams:
    """Model parameters in angular units (rad/us); phi in radians.

    delta_c is the cavity-probe detuning; delta_31 and delta_32 are the
    two-photon detunings of the upper-level drives. Rates gamma_ij damp the
    j->i transitions and gamma_phi_ij dephase the corresponding coherences.
    """

    delta_c: float
    delta_31: float
    delta_32: float
    kappa: float
    gamma_21: float
    gamma_31: float
    gamma_32: float
    gamma_phi_21: float
    gamma_phi_31: float
    gamma_phi_32: float
    g: float
    omega_31: float
    omega_32: float
    xi_p: float
    phi: float = DEFAULT_PHI
    n_c: int = DEFAULT_N_C

    def __post_init__(self):
        for f in fields(self):
            if f.name == "n_c":
                continue
            value = getattr(self, f.name)
            if not isinstance(value, (int, float)) or isinstance(value, bool) \
                    or not math.isfinite(value):
                raise ValueError(f"{f.name} must be a finite real number, got {value!r}")
        if self.kappa <= 0:
            raise ValueError(f"kappa must be positive, got {self.kappa}")
        for name in ("gamma_21", "gamma_31", "gamma_32",
                     "gamma_phi_21", "gamma_phi_31", "gamma_phi_32",
                     "g", "omega_31", "omega_32", "xi_p"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative, got {getattr(self, name)}")
        if not isinstance(self.n_c, (int, np.integer)) or isinstance(self.n_c, bool) \
                or self.n_c < 1:
            raise ValueError(f"n_c must be an integer >= 1, got {self.n_c!r}")

    @classmethod
    def from_mhz(cls, phi: float = DEFAULT_PHI, n_c: int = DEFAULT_N_C,
                 **mhz) -> "ModelParams":
        """Build parameters from nu/2pi values in MHz.

        Unspecified entries fall back to the caption-level defaults; per
        convention delta_31 tracks delta_c when not given explicitly.
        """
        unknown = set(mhz) - set(DEFAULTS_MHZ)
        if unknown:
            raise ValueError(f"unknown parameter(s): {sorted(unknown)}")
        merged = {**DEFAULTS_MHZ, **mhz}
        if merged["delta_31"] is None:
            merged["delta_31"] = merged["delta_c"]
        angular = {name: to_angular(value) for name, value in merged.items()}
        return cls(phi=phi, n_c=n_c, **angular)

    @property
    def space(self) -> hilbert.SpaceSpec:
        return hilbert.SpaceSpec(n_c=self.n_c)

    def with_detuning(self, delta_c: float) -> "ModelParams":
        """Same parameters at another cavity detuning, keeping delta_31 locked
        to delta_c and delta_32 = 0 (the resonance convention of the scans)."""
        return replace(self, delta_c=delta_c, delta_31=delta_c, delta_32=0.0)


def _loop_operators(params: ModelParams):
    space = params.space
    a = hilbert.lift(hilbert.annihilation(params.n_c), "cavity", space)
    s12 = hilbert.lift(hilbert.molecular_op(1, 2), "molecule", space)
    s13 = hilbert.lift(hilbert.molecular_op(1, 3), "molecule", space)
    s23 = hilbert.lift(hilbert.molecular_op(2, 3), "molecule", space)
    s22 = hilbert.lift(hilbert.molecular_op(2, 2), "molecule", space)
    s33 = hilbert.lift(hilbert.molecular_op(3, 3), "molecule", space)
    return space, a, s12, s13, s23, s22, s33


def hamiltonian(params: ModelParams, chirality: Chirality) -> np.ndarray:
    """Rotating-frame Hamiltonian on the product space (rad/us)."""
    _, a, s12, s13, s23, s22, s33 = _loop_operators(params)
    factor = loop_phase_factor(chirality, params.phi)
    number = linalg.matmul(linalg.dagger(a), a)
    diag = params.delta_c * number \
        + (params.delta_31 - params.delta_32) * s22 \
        + params.delta_31 * s33
    drive = params.g * linalg.matmul(linalg.dagger(a), s12) \
        + params.xi_p * a \
        + params.omega_32 * factor * s23 \
        + params.omega_31 * s13
    return diag + drive + linalg.dagger(drive)


def collapse_ops(params: ModelParams) -> list[tuple[float, np.ndarray]]:
    """Damping and dephasing channels as (rate, operator) pairs.

    Each channel enters the master equation as
    (rate/2) * (2 o rho o^dag - o^dag o rho - rho o^dag o); zero-rate
    channels are dropped so downstream loops never touch them.
    """
    space = params.space
    a = hilbert.lift(hilbert.annihilation(params.n_c), "cavity", space)

    def proj(i):
        return hilbert.molecular_op(i, i)

    def dephase(i, j):
        return hilbert.lift(proj(i) - proj(j), "molecule", space)

    channels = [
        (params.kappa, a),
        (params.gamma_31, hilbert.lift(hilbert.molecular_op(1, 3), "molecule", space)),
        (params.gamma_32, hilbert.lift(hilbert.molecular_op(2, 3), "molecule", space)),
        (params.gamma_21, hilbert.lift(hilbert.molecular_op(1, 2), "molecule", space)),
        (params.gamma_phi_31, dephase(3, 1)),
        (params.gamma_phi_32, dephase(3, 2)),
        (params.gamma_phi_21, dephase(2, 1)),
    ]
    return [(rate, op) for rate, op in channels if rate > 0]


def nonhermitian_hamiltonian(params: ModelParams, chirality: Chirality) -> np.ndarray:
    """Hamiltonian with the no-jump damping terms folded in.

    Adds -i kappa/2 a^dag a - i gamma_21/2 s22 - i (gamma_31 + gamma_32)/2 s33;
    this is the generator of the amplitude hierarchy behind the closed forms.
    """
    space = params.space
    a = hilbert.lift(hilbert.annihilation(params.n_c), "cavity", space)
    s22 = hilbert.lift(hilbert.molecular_op(2, 2), "molecule", space)
    s33 = hilbert.lift(hilbert.molecular_op(3, 3), "molecule", space)
    number = linalg.matmul(linalg.dagger(a), a)
    return hamiltonian(params, chirality) - 0.5j * (
        params.kappa * number
        + params.gamma_21 * s22
        + (params.gamma_31 + params.gamma_32) * s33
    )
