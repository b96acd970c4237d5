"""Exception types shared across the package.

The command-line layer maps these onto process exit codes, so solver
failures must stay distinguishable from bad user input.
"""

from __future__ import annotations


class ConfigError(ValueError):
    """Invalid user input: unknown config key, malformed flag, bad range."""


class RankDeficientError(ValueError):
    """Least-squares matrix is numerically rank deficient."""

    def __init__(self, rank: int, cols: int):
        self.rank = rank
        self.cols = cols
        super().__init__(
            f"matrix is numerically rank deficient: effective rank {rank} < {cols} columns"
        )


class SteadyStateError(RuntimeError):
    """Steady-state solve did not converge to a valid density matrix."""

    def __init__(self, message: str, residual: float = float("nan"),
                 min_eigenvalue: float = float("nan")):
        self.residual = residual
        self.min_eigenvalue = min_eigenvalue
        super().__init__(message)


class StiffnessError(RuntimeError):
    """Fixed-step integration kept losing the trace even after step halving."""


class UndefinedCorrelationError(ValueError):
    """g2(0) is undefined because the cavity is (numerically) empty."""


class NearSingularError(ValueError):
    """Closed-form amplitude denominators are too close to zero to trust."""


class NoPeakError(ValueError):
    """A sweep contains no bunching point (g2 > 1) to locate a peak in."""
