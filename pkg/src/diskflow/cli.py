"""Command-line front end: config parsing, dispatch, files, exit codes.

One JSON document drives every subcommand.  Parsing is strict by default:
unknown keys are rejected with their dotted path, range violations name the
offending key.  Exit codes: 0 success, 2 config error, 3 numerical failure
(NaN / collapsed step / tail mass), 4 a verification check out of tolerance.

Everything here is randomness-free; identical configs produce identical
output bytes apart from the runtime_s column of sweep records.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass, replace

import numpy as np

from .dynamics import KINDS, ModelParams
from .dynamics import RunConfig as SolverConfig
from .dynamics import run
from .errors import (ConfigError, DegenerateFitError, DiskflowError,
                     NumericalFailure)
from .fields import write_snapshot
from .grid import GridSpec, build_grid
from .harness import (SweepConfig, euler_reference_state, fit_rate,
                      rate_entry, run_sweep, write_sweep_csv)
from .initial_data import InitialCase, canonical_psi, make_initial
from .verify import (energy_audit_study, report_dict, verify_corrector,
                     verify_elliptic, verify_initial_data)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_VERIFY = 4

_MISSING = object()


# ------------------------------------------------------------ config schema

@dataclass(frozen=True)
class SweepSettings:
    """Sweep-only keys; the rest of the sweep reuses the top-level config."""

    alphas: tuple
    nu_c: float = 0.0
    nu_gamma: float = 2.0
    delta_rule: float = 4.0 / 3.0


@dataclass(frozen=True)
class Tolerances:
    """Acceptance windows of the verify-* subcommands."""

    order_window: float = 0.2        # |fitted order - 2| for the Poisson solve
    chain_rel: float = 1e-9          # fourth-order inverse consistency
    probe_floor: float = -2.1        # slope floor of |D^3 u| vs alpha
    corrector_window: float = 0.05   # both corrector slopes, about +-1/2
    hypothesis_window: float = 0.1   # family rates, about +-1/2
    audit_rel: float = 1e-3          # energy-budget residual, relative


@dataclass(frozen=True)
class RunConfig:
    """Fully validated configuration for any subcommand."""

    model: str
    alpha: float
    nu: float
    grid: GridSpec
    t_final: float
    cfl: float = 0.5
    dt: float | None = None
    dt_max: float = 0.05
    snapshot_dt: float | None = None
    tail_threshold: float = 1e-8
    output_dir: str = "."
    case: InitialCase = InitialCase()
    sweep: SweepSettings | None = None
    audit_delta: float | None = None
    tolerances: Tolerances = Tolerances()


def _type_name(v) -> str:
    return "null" if v is None else type(v).__name__


def _as_object(v, path: str) -> dict:
    if not isinstance(v, dict):
        raise ConfigError("%s must be an object, got %s"
                          % (path, _type_name(v)), key=path)
    return dict(v)


def _as_str(v, path: str) -> str:
    if not isinstance(v, str):
        raise ConfigError("%s must be a string, got %s"
                          % (path, _type_name(v)), key=path)
    return v


def _as_number(v, path: str) -> float:
    # JSON booleans arrive as Python bools, which are ints; reject them
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError("%s must be a number, got %s"
                          % (path, _type_name(v)), key=path)
    out = float(v)
    if not math.isfinite(out):
        raise ConfigError("%s must be finite" % path, key=path)
    return out


def _as_int(v, path: str) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        raise ConfigError("%s must be an integer, got %s"
                          % (path, _type_name(v)), key=path)
    return v


def _as_positive(v, path: str) -> float:
    out = _as_number(v, path)
    if not out > 0.0:
        raise ConfigError("%s=%r must be positive" % (path, out), key=path)
    return out


def _as_positive_or_null(v, path: str):
    return None if v is None else _as_positive(v, path)


def _pop(obj: dict, key: str, path: str, default=_MISSING):
    if key in obj:
        return obj.pop(key)
    if default is _MISSING:
        raise ConfigError("missing required key %r" % path, key=path)
    return default


def _reject_unknown(obj: dict, prefix: str, strict: bool) -> None:
    if strict and obj:
        path = prefix + sorted(obj)[0]
        raise ConfigError("unknown key %r" % path, key=path)


def _rekey(exc: ConfigError, prefix: str) -> ConfigError:
    key = prefix + exc.key if exc.key else prefix.rstrip(".")
    return ConfigError(str(exc), key=key)


def _parse_grid(raw, strict: bool) -> GridSpec:
    obj = _as_object(raw, "grid")
    n_r = _as_int(_pop(obj, "n_r", "grid.n_r"), "grid.n_r")
    n_theta = _as_int(_pop(obj, "n_theta", "grid.n_theta", 128),
                      "grid.n_theta")
    r_max = _as_number(_pop(obj, "r_max", "grid.r_max", 8.0), "grid.r_max")
    _reject_unknown(obj, "grid.", strict)
    try:
        return GridSpec(n_r=n_r, n_theta=n_theta, r_max=r_max)
    except ConfigError as exc:
        raise _rekey(exc, "grid.") from exc


def _parse_case(raw, strict: bool) -> InitialCase:
    obj = _as_object(raw, "case")
    kw = {}
    if "name" in obj:
        kw["name"] = _as_str(obj.pop("name"), "case.name")
    for key in ("amplitude", "r0", "sigma", "eps"):
        if key in obj:
            kw[key] = _as_number(obj.pop(key), "case.%s" % key)
    if "mode" in obj:
        kw["mode"] = _as_int(obj.pop("mode"), "case.mode")
    if "boundary_profile" in obj:
        kw["boundary_profile"] = _as_str(obj.pop("boundary_profile"),
                                         "case.boundary_profile")
    if "path" in obj:
        v = obj.pop("path")
        kw["path"] = None if v is None else _as_str(v, "case.path")
    _reject_unknown(obj, "case.", strict)
    try:
        return InitialCase(**kw)
    except ConfigError as exc:
        raise _rekey(exc, "case.") from exc


def _parse_sweep(raw, strict: bool) -> SweepSettings | None:
    if raw is None:
        return None
    obj = _as_object(raw, "sweep")
    alphas_raw = _pop(obj, "alphas", "sweep.alphas")
    if not isinstance(alphas_raw, list) or not alphas_raw:
        raise ConfigError("sweep.alphas must be a nonempty array",
                          key="sweep.alphas")
    alphas = tuple(_as_number(a, "sweep.alphas") for a in alphas_raw)
    nu_c = _as_number(_pop(obj, "nu_c", "sweep.nu_c", 0.0), "sweep.nu_c")
    nu_gamma = _as_number(_pop(obj, "nu_gamma", "sweep.nu_gamma", 2.0),
                          "sweep.nu_gamma")
    delta_rule = _as_number(
        _pop(obj, "delta_rule", "sweep.delta_rule", 4.0 / 3.0),
        "sweep.delta_rule")
    _reject_unknown(obj, "sweep.", strict)
    return SweepSettings(alphas=alphas, nu_c=nu_c, nu_gamma=nu_gamma,
                         delta_rule=delta_rule)


def _parse_audit(raw, strict: bool):
    if raw is None:
        return None
    obj = _as_object(raw, "audit")
    delta = _as_positive_or_null(_pop(obj, "delta", "audit.delta", None),
                                 "audit.delta")
    _reject_unknown(obj, "audit.", strict)
    return delta


def _parse_tolerances(raw, strict: bool) -> Tolerances:
    obj = _as_object(raw, "tolerances")
    kw = {}
    for key in ("order_window", "chain_rel", "corrector_window",
                "hypothesis_window", "audit_rel"):
        if key in obj:
            kw[key] = _as_positive(obj.pop(key), "tolerances.%s" % key)
    if "probe_floor" in obj:
        kw["probe_floor"] = _as_number(obj.pop("probe_floor"),
                                       "tolerances.probe_floor")
    _reject_unknown(obj, "tolerances.", strict)
    return Tolerances(**kw)


def parse_config(text: str, strict: bool = True) -> RunConfig:
    """Validate a JSON config document; errors carry the dotted key path."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError("config is not valid JSON: %s" % exc,
                          key="document") from exc
    obj = _as_object(doc, "document")

    model = _as_str(_pop(obj, "model", "model"), "model")
    if model not in KINDS:
        raise ConfigError("model=%r not one of %r" % (model, KINDS),
                          key="model")
    alpha = _as_number(_pop(obj, "alpha", "alpha"), "alpha")
    if not 0.0 < alpha <= 0.5:
        raise ConfigError("alpha=%r outside (0, 0.5]" % alpha, key="alpha")
    nu = _as_number(_pop(obj, "nu", "nu", 0.0), "nu")
    if nu < 0.0:
        raise ConfigError("nu=%r must be nonnegative" % nu, key="nu")
    if model == "second_grade" and not nu > 0.0:
        raise ConfigError("model 'second_grade' requires nu > 0", key="nu")
    if model != "second_grade" and nu != 0.0:
        raise ConfigError("model %r requires nu = 0" % model, key="nu")

    grid = _parse_grid(_pop(obj, "grid", "grid"), strict)
    t_final = _as_positive(_pop(obj, "t_final", "t_final"), "t_final")
    cfl = _as_number(_pop(obj, "cfl", "cfl", 0.5), "cfl")
    if not 0.0 < cfl <= 1.0:
        raise ConfigError("cfl=%r outside (0, 1]" % cfl, key="cfl")
    dt = _as_positive_or_null(_pop(obj, "dt", "dt", None), "dt")
    dt_max = _as_positive(_pop(obj, "dt_max", "dt_max", 0.05), "dt_max")
    snapshot_dt = _as_positive_or_null(
        _pop(obj, "snapshot_dt", "snapshot_dt", None), "snapshot_dt")
    tail_threshold = _as_positive(
        _pop(obj, "tail_threshold", "tail_threshold", 1e-8), "tail_threshold")
    output_dir = _as_str(_pop(obj, "output_dir", "output_dir", "."),
                         "output_dir")
    case = _parse_case(_pop(obj, "case", "case", {}), strict)
    sweep = _parse_sweep(_pop(obj, "sweep", "sweep", None), strict)
    audit_delta = _parse_audit(_pop(obj, "audit", "audit", None), strict)
    tolerances = _parse_tolerances(_pop(obj, "tolerances", "tolerances", {}),
                                   strict)
    _reject_unknown(obj, "", strict)

    cfg = RunConfig(model=model, alpha=alpha, nu=nu, grid=grid,
                    t_final=t_final, cfl=cfl, dt=dt, dt_max=dt_max,
                    snapshot_dt=snapshot_dt, tail_threshold=tail_threshold,
                    output_dir=output_dir, case=case, sweep=sweep,
                    audit_delta=audit_delta, tolerances=tolerances)
    if sweep is not None:
        _sweep_config(cfg)  # fail fast: validates alphas against the grid
    return cfg


def config_document(cfg: RunConfig) -> dict:
    """Plain-dict form of a config; parse(serialize(...)) round-trips."""
    c = cfg.case
    doc = {
        "model": cfg.model, "alpha": cfg.alpha, "nu": cfg.nu,
        "grid": {"n_r": cfg.grid.n_r, "n_theta": cfg.grid.n_theta,
                 "r_max": cfg.grid.r_max},
        "t_final": cfg.t_final, "cfl": cfg.cfl, "dt": cfg.dt,
        "dt_max": cfg.dt_max, "snapshot_dt": cfg.snapshot_dt,
        "tail_threshold": cfg.tail_threshold, "output_dir": cfg.output_dir,
        "case": {"name": c.name, "amplitude": c.amplitude, "r0": c.r0,
                 "sigma": c.sigma, "mode": c.mode, "eps": c.eps,
                 "boundary_profile": c.boundary_profile, "path": c.path},
        "sweep": None, "audit": None,
        "tolerances": {k: getattr(cfg.tolerances, k)
                       for k in ("order_window", "chain_rel", "probe_floor",
                                 "corrector_window", "hypothesis_window",
                                 "audit_rel")},
    }
    if cfg.sweep is not None:
        s = cfg.sweep
        doc["sweep"] = {"alphas": list(s.alphas), "nu_c": s.nu_c,
                        "nu_gamma": s.nu_gamma, "delta_rule": s.delta_rule}
    if cfg.audit_delta is not None:
        doc["audit"] = {"delta": cfg.audit_delta}
    return doc


def serialize_config(cfg: RunConfig) -> str:
    return json.dumps(config_document(cfg), indent=2, sort_keys=True) + "\n"


# --------------------------------------------------------------- subcommands

def _write_json(path, obj) -> None:
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _solver_config(cfg: RunConfig, mass_tol: float = 1e-6) -> SolverConfig:
    return SolverConfig(cfl=cfg.cfl, dt=cfg.dt, dt_max=cfg.dt_max,
                        snapshot_dt=cfg.snapshot_dt,
                        tail_threshold=cfg.tail_threshold, mass_tol=mass_tol)


_DIAG_COLUMNS = ("t", "dt", "energy", "enstrophy", "tail_mass",
                 "norm_u_sq", "grad_u_sq")


def _write_diagnostics_csv(diagnostics: dict, path) -> None:
    cols = [np.asarray(diagnostics[k], dtype=float) for k in _DIAG_COLUMNS]
    with open(path, "w") as fh:
        fh.write(",".join(_DIAG_COLUMNS) + "\n")
        for row in zip(*cols):
            fh.write(",".join("%.17g" % v for v in row) + "\n")


def _cmd_simulate(cfg: RunConfig, args, out: str) -> int:
    grid = build_grid(cfg.grid)
    psi = canonical_psi(cfg.case, grid)
    if cfg.model == "euler":
        params = ModelParams(kind="euler")
        u0 = euler_reference_state(psi).u
        # grid-level vorticity mass is O(h^2), never exactly zero
        solver = _solver_config(cfg, mass_tol=1e-3)
    else:
        params = ModelParams(kind=cfg.model, alpha=cfg.alpha, nu=cfg.nu)
        u0 = make_initial(psi, cfg.alpha)
        solver = _solver_config(cfg)
    traj = run(params, u0, cfg.t_final, solver)
    _write_diagnostics_csv(traj.diagnostics, os.path.join(out,
                                                          "diagnostics.csv"))
    for i, s in enumerate(traj.snapshots):
        write_snapshot(s.q, os.path.join(out, "snapshot_%04d.csv" % i),
                       time=s.time, alpha=params.alpha, nu=params.nu)
    n_steps = len(traj.diagnostics["t"]) - 1
    print("simulate: %s to t=%g in %d steps, %d snapshots -> %s"
          % (cfg.model, cfg.t_final, n_steps, len(traj.snapshots), out))
    return EXIT_OK


def _sweep_config(cfg: RunConfig) -> SweepConfig:
    s = cfg.sweep
    if s is None:
        raise ConfigError("the sweep subcommand needs a 'sweep' section",
                          key="sweep")
    try:
        return SweepConfig(alphas=s.alphas, grid=cfg.grid, nu_c=s.nu_c,
                           nu_gamma=s.nu_gamma, t_final=cfg.t_final,
                           case=cfg.case, delta_rule=s.delta_rule,
                           snapshot_dt=cfg.snapshot_dt, dt=cfg.dt,
                           tail_threshold=cfg.tail_threshold)
    except ConfigError as exc:
        if exc.key in ("alphas", "nu_c", "nu_gamma", "delta_rule"):
            raise _rekey(exc, "sweep.") from exc
        raise


def _cmd_sweep(cfg: RunConfig, args, out: str) -> int:
    overrides = {}
    if args.alphas is not None:
        try:
            overrides["alphas"] = tuple(
                float(tok) for tok in args.alphas.split(",") if tok.strip())
        except ValueError as exc:
            raise ConfigError("--alphas must be comma-separated numbers: %s"
                              % exc, key="sweep.alphas") from exc
    if args.nu_c is not None:
        overrides["nu_c"] = args.nu_c
    if args.nu_gamma is not None:
        overrides["nu_gamma"] = args.nu_gamma
    if overrides:
        base = cfg.sweep if cfg.sweep is not None \
            else SweepSettings(alphas=(cfg.alpha,))
        cfg = replace(cfg, sweep=replace(base, **overrides))
    sweep_cfg = _sweep_config(cfg)
    records = run_sweep(sweep_cfg, threads=args.threads)
    write_sweep_csv(records, os.path.join(out, "sweep.csv"))
    entries = []
    ok = [r for r in records if r.status == "ok"]
    if len(ok) >= 3:
        for qty in ("sup_err_l2", "final_err_l2"):
            try:
                fit = fit_rate([r.alpha for r in ok],
                               [getattr(r, qty) for r in ok])
            except DegenerateFitError:
                continue
            entries.append(rate_entry(qty, fit))
    _write_json(os.path.join(out, "rates.json"), entries)
    for r in records:
        print("sweep: alpha=%g nu=%g sup_err_l2=%g status=%s"
              % (r.alpha, r.nu, r.sup_err_l2, r.status))
    if len(ok) < len(records):
        print("sweep: %d of %d runs failed -> %s"
              % (len(records) - len(ok), len(records), out))
        return EXIT_NUMERICAL
    print("sweep: %d runs ok -> %s" % (len(records), out))
    return EXIT_OK


def _finish_verify(name: str, report, out: str) -> int:
    _write_json(os.path.join(out, name.replace("-", "_") + ".json"),
                report_dict(report))
    print("%s: %s" % (name, "PASS" if report.passed else "FAIL"))
    return EXIT_OK if report.passed else EXIT_VERIFY


def _cmd_verify_elliptic(cfg: RunConfig, args, out: str) -> int:
    tol = cfg.tolerances
    rep = verify_elliptic(order_window=tol.order_window,
                          chain_tol=tol.chain_rel,
                          probe_floor=tol.probe_floor)
    print("poisson order: %.4f (2 +- %g) %s"
          % (-rep.order_fit.slope, tol.order_window,
             "ok" if rep.order_ok else "FAIL"))
    print("inverse chain: max rel %.3e (tol %g) %s"
          % (max(rel for _, rel in rep.chain_rels), tol.chain_rel,
             "ok" if rep.chain_ok else "FAIL"))
    print("D3 probe slope: %.4f (floor %g) %s"
          % (rep.probe_slope, tol.probe_floor,
             "ok" if rep.probe_ok else "FAIL"))
    return _finish_verify("verify-elliptic", rep, out)


def _cmd_verify_corrector(cfg: RunConfig, args, out: str) -> int:
    tol = cfg.tolerances
    rep = verify_corrector(window=tol.corrector_window)
    print("corrector |u_b| slope: %.4f (0.5 +- %g) %s"
          % (rep.report.l2_fit.slope, tol.corrector_window,
             "ok" if rep.l2_ok else "FAIL"))
    print("corrector |grad u_b| slope: %.4f (-0.5 +- %g) %s"
          % (rep.report.h1_fit.slope, tol.corrector_window,
             "ok" if rep.h1_ok else "FAIL"))
    return _finish_verify("verify-corrector", rep, out)


def _cmd_verify_initial_data(cfg: RunConfig, args, out: str) -> int:
    tol = cfg.tolerances
    rep = verify_initial_data(window=tol.hypothesis_window)
    print("family |u0^a - u0| slope: %.4f (0.5 +- %g) %s"
          % (rep.report.e0_fit.slope, tol.hypothesis_window,
             "ok" if rep.e0_ok else "FAIL"))
    print("family |D1 u0^a| slope: %.4f (-0.5 +- %g) %s"
          % (rep.report.dk_fits[1].slope, tol.hypothesis_window,
             "ok" if rep.d1_ok else "FAIL"))
    print("family alpha^k |D^k| decreasing: %s"
          % ("ok" if rep.products_ok else "FAIL"))
    return _finish_verify("verify-initial-data", rep, out)


def _cmd_energy_audit(cfg: RunConfig, args, out: str) -> int:
    if cfg.model == "euler":
        raise ConfigError("energy-audit compares a regularized run against "
                          "Euler; model must be euler_alpha or second_grade",
                          key="model")
    snap_dt = cfg.snapshot_dt if cfg.snapshot_dt is not None \
        else cfg.t_final / 8.0
    audit = energy_audit_study(cfg.case, cfg.grid, cfg.alpha, cfg.nu,
                               cfg.t_final, snap_dt, delta=cfg.audit_delta,
                               run_config=_solver_config(cfg))
    passed = audit.rel_residual <= cfg.tolerances.audit_rel
    doc = report_dict(audit)
    doc["passed"] = passed
    doc["tolerance"] = cfg.tolerances.audit_rel
    _write_json(os.path.join(out, "energy_audit.json"), doc)
    print("budget terms: i1=%.6e i2=%.6e i3=%.6e i4=%.6e lhs=%.6e"
          % (audit.i1, audit.i2, audit.i3, audit.i4, audit.lhs))
    print("relative residual: %.3e (tol %g)"
          % (audit.rel_residual, cfg.tolerances.audit_rel))
    print("energy-audit: %s" % ("PASS" if passed else "FAIL"))
    return EXIT_OK if passed else EXIT_VERIFY


_DISPATCH = {
    "simulate": _cmd_simulate,
    "sweep": _cmd_sweep,
    "verify-elliptic": _cmd_verify_elliptic,
    "verify-corrector": _cmd_verify_corrector,
    "verify-initial-data": _cmd_verify_initial_data,
    "energy-audit": _cmd_energy_audit,
}


# ------------------------------------------------------------------- driver

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="diskflow",
        description="Exterior-disk flow laboratory: simulate, sweep, verify.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
            ("simulate", "one run: snapshots plus a diagnostics CSV"),
            ("sweep", "alpha sweep against an Euler reference"),
            ("verify-elliptic", "solver order, inverse chain, D^3 probe"),
            ("verify-corrector", "boundary-layer corrector scalings"),
            ("verify-initial-data", "no-slip family rates"),
            ("energy-audit", "error-energy budget of one run")):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", required=True, metavar="PATH",
                       help="JSON config document")
        p.add_argument("--output-dir", default=None, metavar="PATH",
                       help="overrides output_dir from the config")
        p.add_argument("--threads", type=int, default=0, metavar="N",
                       help="worker threads for sweeps; 0 = auto")
        mode = p.add_mutually_exclusive_group()
        mode.add_argument("--strict", dest="strict", action="store_true",
                          default=True, help="reject unknown config keys")
        mode.add_argument("--lenient", dest="strict", action="store_false",
                          help="ignore unknown config keys")
        if name == "sweep":
            p.add_argument("--alphas", default=None, metavar="A1,A2,...",
                           help="overrides sweep.alphas")
            p.add_argument("--nu-c", type=float, default=None, dest="nu_c",
                           help="overrides sweep.nu_c")
            p.add_argument("--nu-gamma", type=float, default=None,
                           dest="nu_gamma", help="overrides sweep.nu_gamma")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.threads < 0:
            raise ConfigError("threads=%r must be >= 0" % args.threads,
                              key="threads")
        try:
            with open(args.config) as fh:
                text = fh.read()
        except OSError as exc:
            raise ConfigError("cannot read config %r: %s"
                              % (args.config, exc), key="config") from exc
        cfg = parse_config(text, strict=args.strict)
        if args.output_dir is not None:
            cfg = replace(cfg, output_dir=args.output_dir)
        out = cfg.output_dir
        try:
            os.makedirs(out, exist_ok=True)
        except OSError as exc:
            raise ConfigError("cannot create output_dir %r: %s" % (out, exc),
                              key="output_dir") from exc
        if not os.access(out, os.W_OK):
            raise ConfigError("output_dir %r is not writable" % out,
                              key="output_dir")
        return _DISPATCH[args.command](cfg, args, out)
    except ConfigError as exc:
        print("config error (%s): %s" % (exc.key or "?", exc),
              file=sys.stderr)
        return EXIT_CONFIG
    except NumericalFailure as exc:
        print("numerical failure (%s): %s" % (exc.kind, exc), file=sys.stderr)
        return EXIT_NUMERICAL
    except DegenerateFitError as exc:
        print("numerical failure (degenerate fit): %s" % exc, file=sys.stderr)
        return EXIT_NUMERICAL
    except DiskflowError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
