"""Dense complex linear algebra helpers.

Matrices are plain 2-D complex128 numpy arrays (row-major) everywhere in this
package; these wrappers add the shape and finiteness validation the physics
layers rely on and keep the least-squares driver in one place.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg

from .errors import RankDeficientError

# relative singular-value cutoff for the numerical rank decision
RANK_RCOND = 1e-10


def as_matrix(m) -> np.ndarray:
    """Coerce ``m`` to a 2-D complex128 array (no copy when already one)."""
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim != 2:
        raise ValueError(f"expected a 2-D array, got shape {a.shape}")
    return a


def _require_finite(a: np.ndarray, what: str) -> np.ndarray:
    if not np.isfinite(a).all():
        raise ValueError(f"{what} contains non-finite entries")
    return a


def matmul(a, b) -> np.ndarray:
    """Matrix product with explicit inner-dimension validation."""
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"inner dimensions differ: {a.shape} @ {b.shape}")
    return _require_finite(a @ b, "matrix product")


def dagger(a) -> np.ndarray:
    """Conjugate transpose."""
    return as_matrix(a).conj().T


def kron(a, b) -> np.ndarray:
    """Kronecker product of two matrices."""
    return _require_finite(np.kron(as_matrix(a), as_matrix(b)), "kronecker product")


def trace(a) -> complex:
    """Trace of a square matrix."""
    a = as_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise ValueError(f"trace of a non-square matrix {a.shape}")
    return complex(np.trace(a))


def solve_least_squares(a, b, rcond: float = RANK_RCOND) -> np.ndarray:
    """Least-squares solution of ``a @ x = b`` for a tall system.

    Uses the rank-revealing column-pivoted QR driver (LAPACK gelsy), which is
    deterministic for identical input.

    Args:
        a: (m, n) matrix with m >= n.
        b: length-m right-hand side.
        rcond: relative rank tolerance; singular directions below
            ``rcond * ||a||_2`` count as numerically zero.

    Raises:
        RankDeficientError: when the numerical rank falls short of n.
    """
    a = as_matrix(a)
    bv = np.asarray(b, dtype=np.complex128)
    if bv.ndim != 1:
        raise ValueError(f"right-hand side must be a vector, got shape {bv.shape}")
    if bv.shape[0] != a.shape[0]:
        raise ValueError(f"shape mismatch: matrix {a.shape}, rhs {bv.shape}")
    if a.shape[0] < a.shape[1]:
        raise ValueError(f"system must not be underdetermined: {a.shape}")
    _require_finite(a, "matrix")
    _require_finite(bv, "right-hand side")
    x, _, rank, _ = scipy.linalg.lstsq(
        a, bv, cond=rcond, lapack_driver="gelsy", check_finite=False
    )
    if rank < a.shape[1]:
        raise RankDeficientError(rank=int(rank), cols=int(a.shape[1]))
    return _require_finite(x, "least-squares solution")
