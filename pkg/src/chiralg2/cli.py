"""Command-line front end: argument/config parsing, scan presets, CSV output.

Conventions
-----------
* Model parameters are given as nu/2pi in MHz (matching how such setups are
  usually quoted); phases in radians, with strings like "pi/2" accepted.
* Grid bounds are in units of kappa; CSV axis columns likewise report
  delta_c/kappa (and the second axis over kappa for maps).
* Exit codes: 0 success, 1 bad input or I/O, 2 solver failure or failed
  selftest, 3 inconclusive verdict.

A config file (YAML mapping, strict keys) can seed any setting for the
generic commands; explicit flags win over the file. The figure-preset
commands pin the published parameter sets and accept only grid, output,
truncation, and parallelism overrides.
"""

from __future__ import annotations

import argparse
import math
import re
import sys
from dataclasses import dataclass

import numpy as np
import yaml

from . import hilbert, lindblad, model, sweeps, weak_drive
from .errors import (ConfigError, NearSingularError, NoPeakError,
                     RankDeficientError, SteadyStateError, StiffnessError,
                     UndefinedCorrelationError)
from .model import Chirality, ModelParams

_MODEL_KEYS = tuple(model.DEFAULTS_MHZ)
_GAMMA_PHI_KEYS = ("gamma_phi_21", "gamma_phi_31", "gamma_phi_32")
_SETTING_KEYS = _MODEL_KEYS + (
    "phi", "gamma_phi", "n_c", "jobs",
    "dc_min", "dc_max", "dc_points",
    "axis2", "axis2_min", "axis2_max", "axis2_points",
    "out", "analytic", "g2_measured", "min_separation",
)
_AXIS2_CHOICES = ("omega_31", "gamma_phi")

_DC_SPAN = (-2.0, 2.0)
_DC_POINTS_1D = 201
_DC_POINTS_2D = 41
_AXIS2_POINTS = 21
# published map extents, in kappa units
_OMEGA_31_SPAN = (0.0, 0.03)
_GAMMA_PHI_SPAN = (0.0, 0.02)
_FIG3_OMEGA_32_MHZ = 0.5

_PI_FORM = re.compile(
    r"^\s*(-?)\s*(\d+(?:\.\d+)?)?\s*\*?\s*pi\s*(?:/\s*(\d+(?:\.\d+)?))?\s*$",
    re.IGNORECASE)

_CSV_COLUMNS = ("g2_L_num", "g2_R_num", "g2_L_ana", "g2_R_ana",
                "P11_L", "P12_L", "P11_R", "P12_R",
                "nbar_L", "nbar_R", "residual_L", "residual_R")


class _Parser(argparse.ArgumentParser):
    """argparse that reports problems as ConfigError instead of exiting."""

    def error(self, message):
        raise ConfigError(message)


def parse_phase(value) -> float:
    """Phase in radians from a number or a 'pi' expression like 'pi/2'."""
    if isinstance(value, bool):
        raise ConfigError(f"phase must be a number, got {value!r}")
    if isinstance(value, (int, float)):
        phase = float(value)
    else:
        text = str(value)
        try:
            phase = float(text)
        except ValueError:
            m = _PI_FORM.match(text)
            if m is None:
                raise ConfigError(
                    f"cannot parse phase {value!r}; give radians or a form "
                    f"like 'pi/2', '-pi', '3pi/2'") from None
            sign = -1.0 if m.group(1) else 1.0
            num = float(m.group(2)) if m.group(2) else 1.0
            den = float(m.group(3)) if m.group(3) else 1.0
            if den == 0.0:
                raise ConfigError(f"zero denominator in phase {value!r}") from None
            phase = sign * num * math.pi / den
    if not math.isfinite(phase):
        raise ConfigError(f"phase must be finite, got {value!r}")
    return phase


@dataclass(frozen=True)
class RunConfig:
    """Fully merged settings for one invocation."""

    command: str
    params: ModelParams
    dc_min: float
    dc_max: float
    dc_points: int
    axis2: str | None
    axis2_min: float | None
    axis2_max: float | None
    axis2_points: int
    out: str | None
    analytic: bool
    jobs: int
    g2_measured: float | None
    min_separation: float


def _as_float(name: str, value) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{name} must be a number, got {value!r}")
    v = float(value)
    if not math.isfinite(v):
        raise ConfigError(f"{name} must be finite, got {value!r}")
    return v


def _as_int(name: str, value) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{name} must be an integer, got {value!r}")
    return value


def _as_bool(name: str, value) -> bool:
    if not isinstance(value, bool):
        raise ConfigError(f"{name} must be true or false, got {value!r}")
    return value


def load_config_file(path: str) -> dict:
    """Read a YAML mapping of settings, rejecting unknown keys."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = yaml.safe_load(fh)
    except yaml.YAMLError as err:
        raise ConfigError(f"config file {path} is not valid YAML: {err}") from err
    if raw is None:
        return {}
    if not isinstance(raw, dict):
        raise ConfigError(f"config file {path} must contain a mapping")
    unknown = sorted(set(raw) - set(_SETTING_KEYS))
    if unknown:
        raise ConfigError(f"unknown config key(s) in {path}: {', '.join(unknown)}")
    return raw


def _merge_settings(ns: argparse.Namespace) -> dict:
    """Config-file values overlaid with explicit flags (flags win)."""
    settings: dict = {}
    config_path = getattr(ns, "config", None)
    if config_path is not None:
        settings.update(load_config_file(config_path))
    for key in _SETTING_KEYS:
        value = getattr(ns, key, None)
        if value is not None:
            settings[key] = value
    return settings


def _resolve_params(settings: dict) -> ModelParams:
    mhz = {}
    for key in _MODEL_KEYS:
        if key in settings:
            mhz[key] = _as_float(key, settings[key])
    if "gamma_phi" in settings:
        explicit = [k for k in _GAMMA_PHI_KEYS if k in mhz]
        if explicit:
            raise ConfigError(
                f"gamma_phi conflicts with {', '.join(explicit)}; give one or "
                f"the other")
        rate = _as_float("gamma_phi", settings["gamma_phi"])
        for key in _GAMMA_PHI_KEYS:
            mhz[key] = rate
    phi = parse_phase(settings.get("phi", model.DEFAULT_PHI))
    n_c = _as_int("n_c", settings.get("n_c", model.DEFAULT_N_C))
    try:
        return ModelParams.from_mhz(phi=phi, n_c=n_c, **mhz)
    except ValueError as err:
        raise ConfigError(str(err)) from err


def _build_config(command: str, settings: dict) -> RunConfig:
    params = _resolve_params(settings)

    dc_min = _as_float("dc_min", settings.get("dc_min", _DC_SPAN[0]))
    dc_max = _as_float("dc_max", settings.get("dc_max", _DC_SPAN[1]))
    default_points = _DC_POINTS_2D if command in ("map", "fig4", "fig5") \
        else _DC_POINTS_1D
    dc_points = _as_int("dc_points", settings.get("dc_points", default_points))
    if dc_points < 1:
        raise ConfigError(f"dc_points must be >= 1, got {dc_points}")
    if dc_points > 1 and not dc_min < dc_max:
        raise ConfigError(f"dc_min must be below dc_max, got [{dc_min}, {dc_max}]")

    axis2 = settings.get("axis2")
    axis2_min = axis2_max = None
    axis2_points = _AXIS2_POINTS
    if axis2 is not None:
        axis2 = str(axis2).replace("-", "_")
        if axis2 not in _AXIS2_CHOICES:
            raise ConfigError(f"axis2 must be one of {_AXIS2_CHOICES}, got {axis2!r}")
        span = _OMEGA_31_SPAN if axis2 == "omega_31" else _GAMMA_PHI_SPAN
        axis2_min = _as_float("axis2_min", settings.get("axis2_min", span[0]))
        axis2_max = _as_float("axis2_max", settings.get("axis2_max", span[1]))
        axis2_points = _as_int("axis2_points",
                               settings.get("axis2_points", _AXIS2_POINTS))
        if axis2_points < 1:
            raise ConfigError(f"axis2_points must be >= 1, got {axis2_points}")
        if axis2_min < 0:
            raise ConfigError(f"axis2_min must be >= 0, got {axis2_min}")
        if axis2_points > 1 and not axis2_min < axis2_max:
            raise ConfigError(
                f"axis2_min must be below axis2_max, got [{axis2_min}, {axis2_max}]")

    jobs = _as_int("jobs", settings.get("jobs", 1))
    if jobs < 1:
        raise ConfigError(f"jobs must be >= 1, got {jobs}")

    g2_measured = settings.get("g2_measured")
    if g2_measured is not None:
        g2_measured = _as_float("g2_measured", g2_measured)
    min_separation = _as_float(
        "min_separation",
        settings.get("min_separation", sweeps.MIN_LOG10_SEPARATION))
    if min_separation < 0:
        raise ConfigError(f"min_separation must be >= 0, got {min_separation}")

    out = settings.get("out")
    if out is not None:
        out = str(out)

    return RunConfig(command=command, params=params, dc_min=dc_min,
                     dc_max=dc_max, dc_points=dc_points, axis2=axis2,
                     axis2_min=axis2_min, axis2_max=axis2_max,
                     axis2_points=axis2_points, out=out,
                     analytic=_as_bool("analytic", settings.get("analytic", True)),
                     jobs=jobs, g2_measured=g2_measured,
                     min_separation=min_separation)


def _field(value) -> str:
    """One CSV cell: full round-trip precision, empty when missing."""
    if value is None:
        return ""
    v = float(value)
    if not math.isfinite(v):
        return ""
    return format(v, ".17e")


def write_csv(result: sweeps.SweepResult, path: str) -> None:
    """Serialize a scan: axis column(s) in kappa units, then the fixed
    observable columns; missing values as empty fields; '\\n' newlines."""
    kappa = result.params.kappa
    header = ["delta_c_over_kappa"]
    if result.axis2_name is not None:
        header.append(f"{result.axis2_name}_over_kappa")
    header.extend(_CSV_COLUMNS)
    lines = [",".join(header)]
    for point in result.points:
        row = [_field(point.axis1 / kappa)]
        if result.axis2_name is not None:
            row.append(_field(point.axis2 / kappa))
        left, right = point.left, point.right
        row.extend(_field(v) for v in (
            left.g2_numeric, right.g2_numeric,
            left.g2_analytic, right.g2_analytic,
            left.p11, left.p12, right.p11, right.p12,
            left.photon_number, right.photon_number,
            left.residual, right.residual,
        ))
        lines.append(",".join(row))
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("\n".join(lines) + "\n")


def _detuning_grid(cfg: RunConfig) -> np.ndarray:
    return np.linspace(cfg.dc_min, cfg.dc_max, cfg.dc_points) * cfg.params.kappa


def _axis2_grid(cfg: RunConfig) -> np.ndarray:
    return np.linspace(cfg.axis2_min, cfg.axis2_max,
                       cfg.axis2_points) * cfg.params.kappa


def _finish_scan(result: sweeps.SweepResult, cfg: RunConfig) -> int:
    path = cfg.out if cfg.out is not None else f"{cfg.command}.csv"
    write_csv(result, path)
    flagged = sum(1 for p in result.points if p.left.flagged or p.right.flagged)
    print(f"wrote {path}: {len(result.points)} rows")
    if flagged:
        print(f"{flagged} of {len(result.points)} points failed to converge",
              file=sys.stderr)
        return 2
    return 0


def _point_g2(params: ModelParams, chirality: Chirality) -> float:
    gen = lindblad.liouvillian(model.hamiltonian(params, chirality),
                               model.collapse_ops(params))
    state = lindblad.steady_state(gen)
    return lindblad.g2_numeric(state.rho, params.space)


def _cmd_g2(cfg: RunConfig) -> int:
    params = cfg.params
    dephasing = (params.gamma_phi_21 or params.gamma_phi_31
                 or params.gamma_phi_32)
    for chirality in (Chirality.LEFT, Chirality.RIGHT):
        numeric = _point_g2(params, chirality)
        if cfg.analytic and not dephasing:
            analytic = _field(weak_drive.g2_analytic(params, chirality)) or "nan"
        else:
            analytic = "n/a"
        print(f"{chirality.value}: g2_numeric={_field(numeric) or 'nan'} "
              f"g2_analytic={analytic}")
    return 0


def _cmd_sweep(cfg: RunConfig) -> int:
    result = sweeps.sweep_detuning(cfg.params, _detuning_grid(cfg),
                                   include_analytic=cfg.analytic, jobs=cfg.jobs)
    return _finish_scan(result, cfg)


def _cmd_map(cfg: RunConfig) -> int:
    if cfg.axis2 is None:
        raise ConfigError("map needs --axis2 (omega-31 or gamma-phi)")
    result = sweeps.sweep_2d(cfg.params, _detuning_grid(cfg), cfg.axis2,
                             _axis2_grid(cfg), jobs=cfg.jobs)
    return _finish_scan(result, cfg)


def _cmd_discriminate(cfg: RunConfig) -> int:
    if cfg.g2_measured is None:
        raise ConfigError("discriminate needs --g2 (the measured value)")
    verdict = sweeps.discriminate(cfg.g2_measured, cfg.params,
                                  min_separation=cfg.min_separation)
    print(verdict.chirality.value if verdict.chirality else "inconclusive")
    print(f"margin={verdict.margin:.6f} "
          f"g2_L={_field(verdict.g2_left) or 'nan'} "
          f"g2_R={_field(verdict.g2_right) or 'nan'}")
    return 0 if verdict.chirality else 3


_COMMANDS = {
    "g2": _cmd_g2,
    "sweep": _cmd_sweep,
    "map": _cmd_map,
    "discriminate": _cmd_discriminate,
}


def _preset_settings(ns: argparse.Namespace) -> dict:
    """Pin the published parameter set for a figure command."""
    command = ns.command
    settings: dict = {}
    for key in ("n_c", "jobs", "dc_min", "dc_max", "dc_points",
                "axis2_min", "axis2_max", "axis2_points", "out"):
        value = getattr(ns, key, None)
        if value is not None:
            settings[key] = value
    panel = getattr(ns, "panel", None)
    if command == "fig2":
        settings["phi"] = 0.0 if panel == "a" else math.pi / 2.0
        settings.setdefault("out", f"fig2{panel}.csv")
    elif command == "fig3":
        settings["phi"] = math.pi / 2.0
        omega_32 = getattr(ns, "omega_32", None)
        settings["omega_32"] = _FIG3_OMEGA_32_MHZ if omega_32 is None else omega_32
        settings.setdefault("out", "fig3.csv")
    elif command in ("fig4", "fig5"):
        settings["phi"] = 0.0 if panel in ("a", "b") else math.pi / 2.0
        settings["axis2"] = "omega_31" if command == "fig4" else "gamma_phi"
        settings.setdefault("out", f"{command}{panel}.csv")
    if getattr(ns, "no_analytic", False):
        settings["analytic"] = False
    return settings


def _cmd_fig(ns: argparse.Namespace) -> int:
    cfg = _build_config(ns.command, _preset_settings(ns))
    if ns.command in ("fig2", "fig3"):
        return _cmd_sweep(cfg)
    result = sweeps.sweep_2d(cfg.params, _detuning_grid(cfg), cfg.axis2,
                             _axis2_grid(cfg), jobs=cfg.jobs)
    return _finish_scan(result, cfg)


def _selftest_checks():
    """Yield (name, callable) pairs; each callable raises on failure."""

    def ladder_commutator():
        n_c = model.DEFAULT_N_C
        a = hilbert.annihilation(n_c)
        comm = a @ a.conj().T - a.conj().T @ a
        expected = np.diag(np.concatenate([np.ones(n_c), [-float(n_c)]]))
        # sqrt(n) ladder entries square back to n only within a few ulp
        worst = np.max(np.abs(comm - expected))
        assert worst < 1e-12, f"truncated [a, a^dag] off by {worst:.3e}"

    def hermiticity():
        params = ModelParams.from_mhz()
        for chirality in Chirality:
            h = model.hamiltonian(params, chirality)
            assert np.max(np.abs(h - h.conj().T)) == 0.0, \
                f"H not Hermitian for {chirality.value}"

    def trace_row():
        params = ModelParams.from_mhz()
        gen = lindblad.liouvillian(model.hamiltonian(params, Chirality.LEFT),
                                   model.collapse_ops(params))
        dim = params.space.dim
        row = lindblad.vectorize(np.eye(dim)).conj() @ gen
        worst = np.max(np.abs(row))
        assert worst < 1e-10, f"trace row residual {worst:.3e}"

    def steady_state_diagnostics():
        params = ModelParams.from_mhz()
        gen = lindblad.liouvillian(model.hamiltonian(params, Chirality.LEFT),
                                   model.collapse_ops(params))
        state = lindblad.steady_state(gen)
        tr = np.trace(state.rho)
        assert abs(tr - 1.0) <= 1e-12, f"trace {tr}"
        assert state.residual < lindblad.RESIDUAL_TOL
        assert state.min_eigenvalue > -lindblad.POSITIVITY_TOL

    def number_conservation():
        params = ModelParams.from_mhz(xi_p=0.0, omega_31=0.0)
        h = model.hamiltonian(params, Chirality.LEFT)
        n_op = hilbert.total_excitation(params.space)
        worst = np.max(np.abs(n_op @ h - h @ n_op))
        assert worst == 0.0, f"[N, H] max abs {worst:.3e}"

    def phase_reparameterization():
        params = ModelParams.from_mhz(phi=0.37)
        shifted = ModelParams.from_mhz(phi=0.37 + math.pi)
        h_right = model.hamiltonian(params, Chirality.RIGHT)
        h_left = model.hamiltonian(shifted, Chirality.LEFT)
        # exp(i(phi+pi)) need not round to exactly -exp(i phi)
        worst = np.max(np.abs(h_right - h_left))
        assert worst < 1e-12, \
            f"R at phi differs from L at phi + pi by {worst:.3e}"

    def coherent_limit():
        params = ModelParams.from_mhz(delta_c=2.0, g=0.0, omega_31=0.0,
                                      omega_32=0.0)
        numeric = _point_g2(params, Chirality.LEFT)
        analytic = weak_drive.g2_analytic(params, Chirality.LEFT)
        assert abs(numeric - 1.0) < 1e-3, f"numeric {numeric}"
        assert abs(analytic - 1.0) < 1e-4, f"analytic {analytic}"

    def closed_form_equations():
        params = ModelParams.from_mhz()
        for chirality in Chirality:
            sol = weak_drive.amplitudes(params, chirality)
            residual = weak_drive.eom_residual(sol, params, chirality)
            assert residual < 1e-10 * params.xi_p, \
                f"{chirality.value} residual {residual:.3e}"

    def mirror_pair():
        params = ModelParams.from_mhz(phi=math.pi / 2.0)
        dc = 0.3 * params.kappa
        num_l = _point_g2(params.with_detuning(dc), Chirality.LEFT)
        num_r = _point_g2(params.with_detuning(-dc), Chirality.RIGHT)
        rel = abs(num_l - num_r) / abs(num_l)
        assert rel < 1e-6, f"numeric mirror asymmetry {rel:.3e}"
        ana_l = weak_drive.g2_analytic(params.with_detuning(dc), Chirality.LEFT)
        ana_r = weak_drive.g2_analytic(params.with_detuning(-dc), Chirality.RIGHT)
        rel = abs(ana_l - ana_r) / abs(ana_l)
        assert rel < 1e-12, f"analytic mirror asymmetry {rel:.3e}"

    return (
        ("ladder commutator on the truncated space", ladder_commutator),
        ("hamiltonian hermiticity", hermiticity),
        ("trace row annihilates the generator", trace_row),
        ("steady-state diagnostics at defaults", steady_state_diagnostics),
        ("excitation conservation without weak drives", number_conservation),
        ("handedness equals a pi phase shift", phase_reparameterization),
        ("coherent limit has flat correlations", coherent_limit),
        ("closed-form amplitudes satisfy the equations", closed_form_equations),
        ("mirror symmetry at phi = pi/2", mirror_pair),
    )


def _cmd_selftest() -> int:
    failures = 0
    for name, check in _selftest_checks():
        try:
            check()
        except Exception as err:  # noqa: BLE001  (report, do not abort)
            failures += 1
            print(f"FAIL: {name} ({err})")
        else:
            print(f"ok: {name}")
    total = len(_selftest_checks())
    print(f"{total - failures}/{total} checks passed")
    return 0 if failures == 0 else 2


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="chiralg2",
                     description="Steady-state photon-correlation toolkit for "
                                 "a driven cavity coupled to a cyclic "
                                 "three-level molecule.")
    commands = parser.add_subparsers(dest="command", required=True,
                                     metavar="command")

    common = _Parser(add_help=False)
    common.add_argument("--n-c", dest="n_c", type=int, metavar="N",
                        help="photon-number truncation (default 8)")
    common.add_argument("--jobs", type=int, metavar="N",
                        help="worker threads for scans (default 1)")

    modelp = _Parser(add_help=False)
    modelp.add_argument("--config", metavar="FILE",
                        help="YAML settings file; flags override it")
    for key in _MODEL_KEYS:
        flag = "--" + key.replace("_", "-")
        modelp.add_argument(flag, dest=key, type=float, metavar="MHZ",
                            help=f"{key} as nu/2pi in MHz")
    modelp.add_argument("--gamma-phi", dest="gamma_phi", type=float,
                        metavar="MHZ",
                        help="set all three dephasing rates at once")
    modelp.add_argument("--phi", type=parse_phase, metavar="RAD",
                        help="loop phase in radians ('pi/2' accepted)")

    gridp = _Parser(add_help=False)
    gridp.add_argument("--dc-min", dest="dc_min", type=float, metavar="K",
                       help="lowest detuning, in kappa units (default -2)")
    gridp.add_argument("--dc-max", dest="dc_max", type=float, metavar="K",
                       help="highest detuning, in kappa units (default 2)")
    gridp.add_argument("--dc-points", dest="dc_points", type=int, metavar="N",
                       help="detuning grid size")

    axis2p = _Parser(add_help=False)
    axis2p.add_argument("--axis2-min", dest="axis2_min", type=float,
                        metavar="K", help="second-axis low end, kappa units")
    axis2p.add_argument("--axis2-max", dest="axis2_max", type=float,
                        metavar="K", help="second-axis high end, kappa units")
    axis2p.add_argument("--axis2-points", dest="axis2_points", type=int,
                        metavar="N", help="second-axis grid size (default 21)")

    outp = _Parser(add_help=False)
    outp.add_argument("--out", metavar="FILE", help="CSV output path")

    analyticp = _Parser(add_help=False)
    analyticp.add_argument("--no-analytic", dest="no_analytic",
                           action="store_true",
                           help="skip the closed-form column")

    commands.add_parser("g2", parents=[modelp, common, analyticp],
                        help="both-handedness g2(0) at one point")

    commands.add_parser("sweep", parents=[modelp, common, gridp, outp,
                                          analyticp],
                        help="detuning scan to CSV")
    p = commands.add_parser("map", parents=[modelp, common, gridp, axis2p,
                                            outp],
                            help="detuning x second-parameter scan to CSV")
    p.add_argument("--axis2", choices=["omega-31", "gamma-phi"],
                   help="second axis")

    p = commands.add_parser("fig2", parents=[common, gridp, outp, analyticp],
                            help="preset detuning scan, panel a (phi=0) or "
                                 "b (phi=pi/2)")
    p.add_argument("--panel", choices=["a", "b"], default="a")

    p = commands.add_parser("fig3", parents=[common, gridp, outp, analyticp],
                            help="preset scan at phi=pi/2 and a chosen "
                                 "lower-drive strength")
    p.add_argument("--omega-32", dest="omega_32", type=float, metavar="MHZ",
                   help=f"drive on the upper leg (default "
                        f"{_FIG3_OMEGA_32_MHZ})")

    for name, axis_help in (("fig4", "drive-strength map"),
                            ("fig5", "dephasing map")):
        p = commands.add_parser(name, parents=[common, gridp, axis2p, outp],
                                help=f"preset {axis_help}; panels a,b at "
                                     f"phi=0 and c,d at phi=pi/2")
        p.add_argument("--panel", choices=["a", "b", "c", "d"], default="a")

    p = commands.add_parser("discriminate", parents=[modelp, common],
                            help="compare a measured g2(0) with both "
                                 "handedness predictions")
    p.add_argument("--g2", dest="g2_measured", type=float, metavar="VALUE",
                   help="measured g2(0)")
    p.add_argument("--min-separation", dest="min_separation", type=float,
                   metavar="LOG10",
                   help="smallest usable prediction separation (default "
                        f"{sweeps.MIN_LOG10_SEPARATION})")

    commands.add_parser("selftest", help="run the built-in invariant checks")
    return parser


def run(argv=None) -> int:
    """Parse argv, execute one command, map failures to exit codes."""
    try:
        ns = build_parser().parse_args(argv)
        if ns.command == "selftest":
            return _cmd_selftest()
        if ns.command in _COMMANDS:
            settings = _merge_settings(ns)
            if getattr(ns, "no_analytic", False):
                settings["analytic"] = False
            cfg = _build_config(ns.command, settings)
            return _COMMANDS[ns.command](cfg)
        return _cmd_fig(ns)
    except (NearSingularError, RankDeficientError, SteadyStateError,
            StiffnessError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except (UndefinedCorrelationError, NoPeakError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    except (ConfigError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


def main(argv=None) -> int:
    return run(argv)


if __name__ == "__main__":
    sys.exit(main())
