"""Master-equation machinery: Liouvillian, steady state, propagation.

vec convention is column stacking, vec(rho) = rho.ravel(order="F"), under
which vec(A X B) = kron(B.T, A) vec(X). The generator of

    drho/dt = -i[H, rho]
              + sum_k rate_k/2 (2 o_k rho o_k^dag - o_k^dag o_k rho - rho o_k^dag o_k)

is then the dim^2 x dim^2 matrix

    L = -i (kron(I, H) - kron(H.T, I))
        + sum_k rate_k/2 (2 kron(conj(o_k), o_k)
                          - kron(I, o_k^dag o_k) - kron((o_k^dag o_k).T, I)).

The steady state is the least-squares solution of L vec(rho) = 0 augmented
with the trace row; positivity is checked, never projected.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
import scipy.linalg

from . import hilbert, linalg
from .errors import SteadyStateError, StiffnessError, UndefinedCorrelationError

RESIDUAL_TOL = 1e-8
POSITIVITY_TOL = 1e-8
TRACE_DRIFT_TOL = 1e-9
MAX_HALVINGS = 6
PHOTON_FLOOR = 1e-12


def vectorize(rho: np.ndarray) -> np.ndarray:
    """Column-stacked vec of a matrix."""
    return linalg.as_matrix(rho).ravel(order="F")


def unvectorize(v: np.ndarray, dim: int) -> np.ndarray:
    """Inverse of vectorize."""
    v = np.asarray(v, dtype=np.complex128)
    if v.shape != (dim * dim,):
        raise ValueError(f"expected a length-{dim * dim} vector, got shape {v.shape}")
    return v.reshape((dim, dim), order="F")


def liouvillian(h: np.ndarray,
                collapse: Iterable[tuple[float, np.ndarray]]) -> np.ndarray:
    """Generator matrix acting on column-stacked density matrices."""
    h = linalg.as_matrix(h)
    dim = h.shape[0]
    if h.shape != (dim, dim):
        raise ValueError(f"hamiltonian must be square, got {h.shape}")
    eye = np.eye(dim, dtype=np.complex128)
    gen = -1j * (np.kron(eye, h) - np.kron(h.T, eye))
    for rate, op in collapse:
        op = linalg.as_matrix(op)
        if op.shape != (dim, dim):
            raise ValueError(f"collapse operator shape {op.shape} != {(dim, dim)}")
        if rate < 0:
            raise ValueError(f"collapse rate must be non-negative, got {rate}")
        opdop = linalg.dagger(op) @ op
        gen += 0.5 * rate * (2.0 * np.kron(op.conj(), op)
                             - np.kron(eye, opdop) - np.kron(opdop.T, eye))
    if not np.isfinite(gen).all():
        raise ValueError("liouvillian contains non-finite entries")
    return gen


@dataclass(frozen=True)
class SteadyState:
    """Solver output: the state plus the diagnostics that certify it."""

    rho: np.ndarray
    residual: float
    min_eigenvalue: float


def steady_state(lv: np.ndarray) -> SteadyState:
    """Solve L vec(rho) = 0 with unit trace by augmented least squares.

    The trace row is appended to the generator and the combined tall system
    is solved in one rank-revealing factorization; the kernel direction is
    fixed by the trace constraint, so no eigen-decomposition is needed.
    """
    lv = linalg.as_matrix(lv)
    n = lv.shape[0]
    dim = math.isqrt(n)
    if lv.shape != (n, n) or dim * dim != n:
        raise ValueError(f"generator must be square with dim^2 rows, got {lv.shape}")
    trace_row = np.eye(dim, dtype=np.complex128).ravel(order="F")
    system = np.vstack([lv, trace_row[None, :]])
    rhs = np.zeros(n + 1, dtype=np.complex128)
    rhs[-1] = 1.0
    x = linalg.solve_least_squares(system, rhs)
    rho = unvectorize(x, dim)
    rho = 0.5 * (rho + linalg.dagger(rho))
    rho = rho / np.trace(rho).real
    residual = float(np.linalg.norm(lv @ rho.ravel(order="F")))
    min_eig = float(np.linalg.eigvalsh(rho)[0])
    if residual > RESIDUAL_TOL:
        raise SteadyStateError(
            f"steady state did not converge: residual {residual:.3e} > {RESIDUAL_TOL:.0e}",
            residual=residual, min_eigenvalue=min_eig)
    if min_eig <= -POSITIVITY_TOL:
        raise SteadyStateError(
            f"steady state is not positive: min eigenvalue {min_eig:.3e}",
            residual=residual, min_eigenvalue=min_eig)
    return SteadyState(rho=rho, residual=residual, min_eigenvalue=min_eig)


def _rhs_factory(h: np.ndarray, collapse: Sequence[tuple[float, np.ndarray]]):
    # matrix form of the same generator liouvillian() represents on vec(rho);
    # cheaper than a dim^2 matvec for repeated evaluation
    terms = []
    for rate, op in collapse:
        op = linalg.as_matrix(op)
        opd = linalg.dagger(op)
        terms.append((rate, op, opd, opd @ op))

    def rhs(rho):
        out = -1j * (h @ rho - rho @ h)
        for rate, op, opd, opdop in terms:
            out += rate * ((op @ rho) @ opd) \
                - 0.5 * rate * (opdop @ rho + rho @ opdop)
        return out

    return rhs


def propagate(h: np.ndarray, collapse: Sequence[tuple[float, np.ndarray]],
              rho0: np.ndarray, t_final: float, dt: float) -> np.ndarray:
    """Classical fixed-step 4th-order integration of the master equation.

    The trace is conserved by the generator, so any drift beyond
    TRACE_DRIFT_TOL flags an unstable step size; the step is then halved and
    the run restarted, at most MAX_HALVINGS times before giving up.
    """
    h = linalg.as_matrix(h)
    rho0 = linalg.as_matrix(rho0)
    dim = h.shape[0]
    if h.shape != (dim, dim) or rho0.shape != (dim, dim):
        raise ValueError(f"shape mismatch: h {h.shape}, rho0 {rho0.shape}")
    if abs(np.trace(rho0) - 1.0) > 1e-9:
        raise ValueError(f"rho0 must have unit trace, got {np.trace(rho0):.6f}")
    if np.abs(rho0 - rho0.conj().T).max() > 1e-9:
        raise ValueError("rho0 must be Hermitian")
    if not (t_final >= 0 and math.isfinite(t_final)):
        raise ValueError(f"t_final must be finite and >= 0, got {t_final}")
    if not (dt > 0 and math.isfinite(dt)):
        raise ValueError(f"dt must be finite and > 0, got {dt}")
    if t_final == 0.0:
        return rho0.copy()

    rhs = _rhs_factory(h, collapse)
    trace0 = complex(np.trace(rho0))

    for halving in range(MAX_HALVINGS + 1):
        step = dt / (2 ** halving)
        n_full = int(t_final / step)
        remainder = t_final - n_full * step
        rho = rho0.astype(np.complex128, copy=True)
        ok = True
        for k in range(n_full + 1):
            this = step if k < n_full else remainder
            if this <= 0.0:
                break
            k1 = rhs(rho)
            k2 = rhs(rho + (0.5 * this) * k1)
            k3 = rhs(rho + (0.5 * this) * k2)
            k4 = rhs(rho + this * k3)
            rho = rho + (this / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            drift = abs(complex(np.trace(rho)) - trace0)
            if not drift < TRACE_DRIFT_TOL:
                ok = False  # includes NaN
                break
        if ok:
            return rho
    raise StiffnessError(
        f"trace drift exceeded {TRACE_DRIFT_TOL:.0e} even after "
        f"{MAX_HALVINGS} step halvings (dt down to {dt / 2 ** MAX_HALVINGS:.3e})")


def expectation(op: np.ndarray, rho: np.ndarray) -> complex:
    """Tr(op rho)."""
    return linalg.trace(linalg.matmul(op, rho))


def g2_numeric(rho: np.ndarray, space: hilbert.SpaceSpec) -> float:
    """Equal-time second-order correlation of the cavity field.

    g2(0) = <a^dag a^dag a a> / <a^dag a>^2, evaluated on a steady (or any)
    state over the given product space.
    """
    rho = linalg.as_matrix(rho)
    if rho.shape != (space.dim, space.dim):
        raise ValueError(f"state shape {rho.shape} does not match space dim {space.dim}")
    a = hilbert.lift(hilbert.annihilation(space.n_c), "cavity", space)
    ad = linalg.dagger(a)
    nbar = expectation(ad @ a, rho).real
    if not nbar > PHOTON_FLOOR:
        raise UndefinedCorrelationError(
            f"mean photon number {nbar:.3e} is below {PHOTON_FLOOR:.0e}; "
            "g2(0) is undefined")
    numer = expectation(ad @ ad @ a @ a, rho).real
    return numer / nbar ** 2


def occupation(rho: np.ndarray, j: int, n: int, space: hilbert.SpaceSpec) -> float:
    """Population of the product state |j, n>."""
    rho = linalg.as_matrix(rho)
    if rho.shape != (space.dim, space.dim):
        raise ValueError(f"state shape {rho.shape} does not match space dim {space.dim}")
    idx = space.index(j, n)
    return float(rho[idx, idx].real)


def trace_distance(rho1: np.ndarray, rho2: np.ndarray) -> float:
    """Half the trace norm of the difference of two states."""
    diff = linalg.as_matrix(rho1) - linalg.as_matrix(rho2)
    return 0.5 * float(np.sum(scipy.linalg.svdvals(diff)))
