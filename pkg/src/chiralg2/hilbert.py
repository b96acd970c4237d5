"""Composite Hilbert-space layout and elementary operators.

The system is a three-level emitter tensored with a truncated Fock mode.
Basis ordering puts the emitter level j in {1, 2, 3} on the slow index and
the photon number n in {0..n_c} on the fast one, so the product state
|j, n> lives at flat index (j - 1) * (n_c + 1) + n and composite operators
are kron(emitter, cavity).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg

MOLECULE_DIM = 3


@dataclass(frozen=True)
class SpaceSpec:
    """Dimensions of the emitter x cavity product space."""

    n_c: int
    molecule_dim: int = MOLECULE_DIM

    def __post_init__(self):
        if not isinstance(self.n_c, (int, np.integer)) or self.n_c < 1:
            raise ValueError(f"n_c must be an integer >= 1, got {self.n_c!r}")
        if self.molecule_dim != MOLECULE_DIM:
            raise ValueError(f"molecule_dim is fixed at {MOLECULE_DIM}")

    @property
    def cavity_dim(self) -> int:
        return self.n_c + 1

    @property
    def dim(self) -> int:
        return self.molecule_dim * self.cavity_dim

    def index(self, j: int, n: int) -> int:
        """Flat basis index of the product state |j, n>."""
        if not 1 <= j <= self.molecule_dim:
            raise ValueError(f"level index j must be in 1..{self.molecule_dim}, got {j}")
        if not 0 <= n <= self.n_c:
            raise ValueError(f"photon number n must be in 0..{self.n_c}, got {n}")
        return (j - 1) * self.cavity_dim + n


def annihilation(n_c: int) -> np.ndarray:
    """Photon annihilation operator on the (n_c + 1)-dimensional Fock space.

    a[n, n+1] = sqrt(n + 1); the commutator [a, a^dag] equals the identity
    only below the truncation edge, which is the price of a finite ladder.
    """
    if not isinstance(n_c, (int, np.integer)) or n_c < 1:
        raise ValueError(f"n_c must be an integer >= 1, got {n_c!r}")
    return np.diag(np.sqrt(np.arange(1.0, n_c + 1)), 1).astype(np.complex128)


def molecular_op(i: int, j: int) -> np.ndarray:
    """Emitter transition operator |i><j| on the bare three-level space."""
    if not (1 <= i <= MOLECULE_DIM and 1 <= j <= MOLECULE_DIM):
        raise ValueError(f"level indices must be in 1..{MOLECULE_DIM}, got ({i}, {j})")
    op = np.zeros((MOLECULE_DIM, MOLECULE_DIM), dtype=np.complex128)
    op[i - 1, j - 1] = 1.0
    return op


def lift(op: np.ndarray, subsystem: str, space: SpaceSpec) -> np.ndarray:
    """Embed a single-subsystem operator into the product space."""
    op = linalg.as_matrix(op)
    if subsystem == "molecule":
        if op.shape != (space.molecule_dim, space.molecule_dim):
            raise ValueError(f"emitter operator must be {space.molecule_dim}x"
                             f"{space.molecule_dim}, got {op.shape}")
        return linalg.kron(op, np.eye(space.cavity_dim, dtype=np.complex128))
    if subsystem == "cavity":
        if op.shape != (space.cavity_dim, space.cavity_dim):
            raise ValueError(f"cavity operator must be {space.cavity_dim}x"
                             f"{space.cavity_dim}, got {op.shape}")
        return linalg.kron(np.eye(space.molecule_dim, dtype=np.complex128), op)
    raise ValueError(f"subsystem must be 'molecule' or 'cavity', got {subsystem!r}")


def total_excitation(space: SpaceSpec) -> np.ndarray:
    """Combined excitation counter a^dag a + |2><2| + |3><3| on the product space.

    The cavity drive and the lower-rung emitter drive are the only couplings
    that change its eigenvalue.
    """
    # Integer diagonal, not dagger(a) @ a: squaring the sqrt(n) ladder entries
    # leaks ~1e-16 noise that would break exact commutation with the
    # excitation-conserving couplings.
    number = lift(np.diag(np.arange(space.n_c + 1, dtype=np.float64)),
                  "cavity", space)
    excited = lift(molecular_op(2, 2) + molecular_op(3, 3), "molecule", space)
    return number + excited
