"""Parameter scans and the handedness verdict built on top of them.

Scans follow the resonance convention of the figures: at every grid point
the lower-drive two-photon detuning tracks the cavity detuning
(delta_31 = delta_c) and delta_32 = 0. Both handedness branches are always
computed, because their contrast is the whole point.

Points that fail to converge are flagged and carried as NaN rather than
aborting the scan, and points where g2 is undefined are recorded as missing.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from . import hilbert, linalg, lindblad, model, weak_drive
from .errors import (NearSingularError, NoPeakError, SteadyStateError,
                     UndefinedCorrelationError)
from .model import Chirality, ModelParams

SECOND_AXES = ("omega_31", "gamma_phi")
# below this log10 separation of the two predictions no verdict is possible
MIN_LOG10_SEPARATION = 0.05

_FIELDS = ("g2_numeric", "g2_analytic", "p11", "p12", "photon_number", "residual")


@dataclass(frozen=True)
class ChiralityRecord:
    """Per-point observables for one handedness."""

    g2_numeric: float
    g2_analytic: float | None
    p11: float
    p12: float
    photon_number: float
    residual: float
    flagged: bool


@dataclass(frozen=True)
class SweepPoint:
    axis1: float
    axis2: float | None
    left: ChiralityRecord
    right: ChiralityRecord

    def record(self, chirality: Chirality) -> ChiralityRecord:
        return self.left if chirality is Chirality.LEFT else self.right


@dataclass(frozen=True)
class SweepResult:
    """Grid scan output; points run axis2-major, axis1-minor."""

    params: ModelParams
    axis1_name: str
    axis1_values: tuple[float, ...]
    axis2_name: str | None
    axis2_values: tuple[float, ...] | None
    points: tuple[SweepPoint, ...]

    def series(self, field: str, chirality: Chirality) -> np.ndarray:
        """1-D array of one field for one handedness (NaN for missing)."""
        if field not in _FIELDS:
            raise ValueError(f"unknown field {field!r}; pick one of {_FIELDS}")
        values = [getattr(p.record(chirality), field) for p in self.points]
        return np.array([math.nan if v is None else v for v in values], dtype=float)

    def grid(self, field: str, chirality: Chirality) -> np.ndarray:
        """Field reshaped to (len(axis2), len(axis1)); 2-D scans only."""
        if self.axis2_values is None:
            raise ValueError("grid() needs a 2-D scan; use series() for 1-D")
        flat = self.series(field, chirality)
        return flat.reshape(len(self.axis2_values), len(self.axis1_values))

    def log10_g2_grid(self, chirality: Chirality) -> np.ndarray:
        """log10 of numeric g2 on the 2-D grid, the usual map quantity."""
        return np.log10(self.grid("g2_numeric", chirality))


@dataclass(frozen=True)
class Verdict:
    """Outcome of comparing a measured g2 with both predictions.

    chirality is None when the call is inconclusive; margin is the log10
    separation of the two predictions discounted by the measurement's
    distance to the nearer one.
    """

    chirality: Chirality | None
    margin: float
    g2_left: float
    g2_right: float


def _validated_axis(values, name: str, allow_negative: bool = True) -> tuple[float, ...]:
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 1 or arr.size < 1:
        raise ValueError(f"{name} must be a non-empty 1-D sequence")
    if not np.isfinite(arr).all():
        raise ValueError(f"{name} contains non-finite values")
    if arr.size > 1:
        steps = np.diff(arr)
        if not (np.all(steps > 0) or np.all(steps < 0)):
            raise ValueError(f"{name} must be strictly monotonic")
    if not allow_negative and (arr < 0).any():
        raise ValueError(f"{name} must be non-negative")
    return tuple(float(v) for v in arr)


def _evaluate(params: ModelParams, chirality: Chirality,
              include_analytic: bool) -> ChiralityRecord:
    analytic = None
    dephasing = params.gamma_phi_21 or params.gamma_phi_31 or params.gamma_phi_32
    if include_analytic and not dephasing:
        try:
            analytic = weak_drive.g2_analytic(params, chirality)
        except (NearSingularError, UndefinedCorrelationError):
            analytic = None
    try:
        gen = lindblad.liouvillian(model.hamiltonian(params, chirality),
                                   model.collapse_ops(params))
        state = lindblad.steady_state(gen)
    except SteadyStateError as err:
        nan = math.nan
        return ChiralityRecord(g2_numeric=nan, g2_analytic=analytic, p11=nan,
                               p12=nan, photon_number=nan,
                               residual=err.residual, flagged=True)
    space = params.space
    try:
        g2 = lindblad.g2_numeric(state.rho, space)
    except UndefinedCorrelationError:
        g2 = math.nan
    return ChiralityRecord(
        g2_numeric=g2,
        g2_analytic=analytic,
        p11=lindblad.occupation(state.rho, 1, 1, space),
        p12=lindblad.occupation(state.rho, 1, 2, space),
        photon_number=_photon_number(state.rho, space),
        residual=state.residual,
        flagged=False,
    )


def _photon_number(rho: np.ndarray, space) -> float:
    a = hilbert.lift(hilbert.annihilation(space.n_c), "cavity", space)
    return lindblad.expectation(linalg.matmul(linalg.dagger(a), a), rho).real


def _run_points(tasks: Sequence[ModelParams], include_analytic: bool,
                jobs: int) -> list[SweepPoint]:
    def one(item) -> SweepPoint:
        axis1, axis2, q = item
        return SweepPoint(
            axis1=axis1, axis2=axis2,
            left=_evaluate(q, Chirality.LEFT, include_analytic),
            right=_evaluate(q, Chirality.RIGHT, include_analytic),
        )

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(one, tasks))
    return [one(t) for t in tasks]


def _check_jobs(jobs: int) -> int:
    if not isinstance(jobs, int) or isinstance(jobs, bool) or jobs < 1:
        raise ValueError(f"jobs must be an integer >= 1, got {jobs!r}")
    return jobs


def sweep_detuning(params: ModelParams, detunings,
                   include_analytic: bool = True, jobs: int = 1) -> SweepResult:
    """Scan the cavity detuning (rad/us) at fixed drive parameters.

    Per point, delta_31 is locked to delta_c and delta_32 to zero. The
    analytic column is filled only when all dephasing rates vanish.
    """
    jobs = _check_jobs(jobs)
    axis = _validated_axis(detunings, "detunings")
    tasks = [(dc, None, params.with_detuning(dc)) for dc in axis]
    points = _run_points(tasks, include_analytic, jobs)
    return SweepResult(params=params, axis1_name="delta_c", axis1_values=axis,
                       axis2_name=None, axis2_values=None, points=tuple(points))


def sweep_2d(params: ModelParams, detunings, second_axis: str, axis_values,
             jobs: int = 1) -> SweepResult:
    """Scan detuning against a second parameter; numeric only.

    second_axis is "omega_31" (lower-drive strength) or "gamma_phi", which
    sets all three dephasing rates together.
    """
    jobs = _check_jobs(jobs)
    if second_axis not in SECOND_AXES:
        raise ValueError(f"second_axis must be one of {SECOND_AXES}, got {second_axis!r}")
    axis1 = _validated_axis(detunings, "detunings")
    axis2 = _validated_axis(axis_values, second_axis, allow_negative=False)
    tasks = []
    for value in axis2:
        for dc in axis1:
            q = params.with_detuning(dc)
            if second_axis == "omega_31":
                q = replace(q, omega_31=value)
            else:
                q = replace(q, gamma_phi_21=value, gamma_phi_31=value,
                            gamma_phi_32=value)
            tasks.append((dc, value, q))
    points = _run_points(tasks, include_analytic=False, jobs=jobs)
    return SweepResult(params=params, axis1_name="delta_c", axis1_values=axis1,
                       axis2_name=second_axis, axis2_values=axis2,
                       points=tuple(points))


def locate_bunching_peak(result: SweepResult,
                         chirality: Chirality) -> tuple[float, float]:
    """Position and height of the strongest bunching peak (g2 > 1).

    The grid argmax is refined with a parabola through its neighbours, which
    recovers sub-step positions of smooth peaks.
    """
    if result.axis2_values is not None:
        raise ValueError("peak location works on 1-D scans only")
    x = np.asarray(result.axis1_values, dtype=float)
    y = result.series("g2_numeric", chirality)
    finite = np.isfinite(y)
    if not finite.any() or np.max(y[finite]) <= 1.0:
        raise NoPeakError("no point with g2 > 1 in this scan")
    i = int(np.argmax(np.where(finite, y, -np.inf)))
    if 0 < i < len(x) - 1 and finite[i - 1] and finite[i + 1]:
        # parabola through the three points around the argmax, in local
        # coordinates for conditioning
        xs = x[i - 1:i + 2] - x[i]
        ys = y[i - 1:i + 2]
        coeff = np.polyfit(xs, ys, 2)
        if coeff[0] < 0.0:
            vertex = -coeff[1] / (2.0 * coeff[0])
            lo, hi = xs[0], xs[2]
            vertex = min(max(vertex, lo), hi)
            height = float(np.polyval(coeff, vertex))
            return float(x[i] + vertex), height
    return float(x[i]), float(y[i])


def discriminate(g2_measured: float, params: ModelParams,
                 min_separation: float = MIN_LOG10_SEPARATION) -> Verdict:
    """Assign handedness by comparing a measured g2 with both predictions.

    Works in log10 space, where the predictions' bunching/antibunching
    contrast lives. Returns an inconclusive verdict when the two predictions
    are closer than min_separation or when the measurement sits farther
    than half their separation from both.
    """
    if not (isinstance(g2_measured, (int, float)) and math.isfinite(g2_measured)
            and g2_measured > 0):
        raise ValueError(f"g2_measured must be a finite positive number, "
                         f"got {g2_measured!r}")
    if not (isinstance(min_separation, (int, float)) and min_separation >= 0
            and math.isfinite(min_separation)):
        raise ValueError(f"min_separation must be a finite non-negative number, "
                         f"got {min_separation!r}")
    left = _evaluate(params, Chirality.LEFT, include_analytic=False)
    right = _evaluate(params, Chirality.RIGHT, include_analytic=False)
    for name, rec in (("left", left), ("right", right)):
        if rec.flagged or not math.isfinite(rec.g2_numeric) or rec.g2_numeric <= 0:
            raise SteadyStateError(f"no usable g2 prediction for the {name}-handed "
                                   f"model at this point", residual=rec.residual)
    lg_l = math.log10(left.g2_numeric)
    lg_r = math.log10(right.g2_numeric)
    lg_m = math.log10(g2_measured)
    separation = abs(lg_l - lg_r)
    d_left = abs(lg_m - lg_l)
    d_right = abs(lg_m - lg_r)
    margin = separation - min(d_left, d_right)
    chirality: Chirality | None
    if separation < min_separation or min(d_left, d_right) > separation / 2.0:
        chirality = None
    elif d_left <= d_right:
        chirality = Chirality.LEFT
    else:
        chirality = Chirality.RIGHT
    return Verdict(chirality=chirality, margin=margin,
                   g2_left=left.g2_numeric, g2_right=right.g2_numeric)
