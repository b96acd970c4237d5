"""Steady-state photon statistics of a driven cavity coupled to a cyclic
three-level molecule, used to tell left- from right-handed molecules.

The two mirror forms share every rate and coupling and differ only in the
loop phase of the three-level cycle (phi versus phi + pi), which flips the
equal-time correlation g2(0) of the cavity output between bunching and
antibunching. The package computes g2(0) both from the full master equation
and from closed-form weak-driving amplitudes, scans it over parameters, and
turns a measured value into a handedness verdict.
"""

from .errors import (ConfigError, NearSingularError, NoPeakError,
                     RankDeficientError, SteadyStateError, StiffnessError,
                     UndefinedCorrelationError)
from .hilbert import SpaceSpec, annihilation, lift, molecular_op, total_excitation
from .lindblad import (SteadyState, g2_numeric, liouvillian, occupation,
                       propagate, steady_state, trace_distance)
from .model import (DEFAULTS_MHZ, Chirality, ModelParams, collapse_ops,
                    hamiltonian, phase_of)
from .sweeps import (SweepPoint, SweepResult, Verdict, discriminate,
                     locate_bunching_peak, sweep_2d, sweep_detuning)
from .weak_drive import (AmplitudeSolution, WeakDriveWarning, amplitudes,
                         eom_residual, g2_analytic)

__version__ = "0.1.0"

__all__ = [
    "AmplitudeSolution", "Chirality", "ConfigError", "DEFAULTS_MHZ",
    "ModelParams", "NearSingularError", "NoPeakError", "RankDeficientError",
    "SpaceSpec", "SteadyState", "SteadyStateError", "StiffnessError",
    "SweepPoint", "SweepResult", "UndefinedCorrelationError", "Verdict",
    "WeakDriveWarning", "amplitudes", "annihilation", "collapse_ops",
    "discriminate", "eom_residual", "g2_analytic", "g2_numeric",
    "hamiltonian", "lift", "liouvillian", "locate_bunching_peak",
    "molecular_op", "occupation", "phase_of", "propagate", "steady_state",
    "sweep_2d", "sweep_detuning", "total_excitation", "trace_distance",
    "__version__",
]
