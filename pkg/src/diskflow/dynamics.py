"""Time evolution of the filtered vorticity q = w - alpha^2 Delta w.

The prognostic equation is dq/dt + u . grad q = nu Delta w, stepped with
classical four-stage Runge-Kutta; every stage recovers (phi, w, u) from q
through the elliptic module.  Diffusion is explicit: the regimes of interest
have nu far below alpha^{4/3}, and the diffusive dt bound guards the rest.
The inviscid filtered model sets nu = 0; the plain vorticity equation
(kind 'euler') identifies q with w and uses the Poisson solve instead.

A run aborts, rather than silently polluting the far boundary condition,
when vorticity mass reaches the outer 10 percent of the annulus.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, NumericalFailure
from .fields import (ScalarField, VectorField, advect, dealias_23,
                     grad_norm_l2, laplacian, norm_l2, perp_grad)
from .elliptic import recover_q, solve_poisson, solve_stream_helmholtz
from .grid import ExteriorGrid

KINDS = ("second_grade", "euler_alpha", "euler")


@dataclass(frozen=True)
class ModelParams:
    """Model selector with its two physical parameters."""

    kind: str
    alpha: float = 0.0
    nu: float = 0.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigError("kind=%r not one of %r" % (self.kind, KINDS),
                              key="kind")
        if self.kind == "second_grade" and not (self.alpha > 0.0 and self.nu > 0.0):
            raise ConfigError("second_grade requires alpha > 0 and nu > 0",
                              key="kind")
        if self.kind == "euler_alpha" and not (self.alpha > 0.0 and self.nu == 0.0):
            raise ConfigError("euler_alpha requires alpha > 0 and nu = 0",
                              key="kind")
        if self.kind == "euler" and not (self.alpha == 0.0 and self.nu == 0.0):
            raise ConfigError("euler requires alpha = 0 and nu = 0", key="kind")

    @property
    def boundary_tag(self) -> str:
        return "non-penetration" if self.kind == "euler" else "no-slip"


@dataclass(frozen=True)
class FlowState:
    """One time slice; all fields derived consistently from q."""

    time: float
    q: ScalarField
    w: ScalarField
    phi: ScalarField
    u: VectorField
    params: ModelParams


@dataclass(frozen=True)
class RunConfig:
    cfl: float = 0.5
    dt: float | None = None          # fixed step; None = adaptive
    dt_max: float = 0.05
    min_dt: float = 1e-10
    snapshot_dt: float | None = None
    tail_threshold: float = 1e-8     # relative to the initial |q|
    mass_tol: float = 1e-6           # mode-0 guard for the Poisson solve
    circulation_tol: float = 1e-8    # outer-ring witness, relative
    dealias: bool = False
    diagnostics_path: str | None = None

    def __post_init__(self):
        if not 0.0 < self.cfl <= 1.0:
            raise ConfigError("cfl=%r outside (0, 1]" % (self.cfl,), key="cfl")
        if self.dt is not None and not self.dt > 0.0:
            raise ConfigError("dt=%r must be positive" % (self.dt,), key="dt")


@dataclass
class Trajectory:
    """Strided snapshots plus per-step diagnostics arrays."""

    snapshots: list
    diagnostics: dict


_DIAG_KEYS = ("t", "dt", "energy", "enstrophy", "tail_mass",
              "norm_u_sq", "grad_u_sq")


def make_state(params: ModelParams, q: ScalarField, time: float,
               mass_tol: float = 1e-6) -> FlowState:
    """Derive (phi, w, u) from q for the given model kind."""
    if params.kind == "euler":
        w = q
        phi = solve_poisson(w, mass_tol=mass_tol)
        u = perp_grad(phi)
        u = VectorField(q.grid, u.u_r, u.u_theta, tag="non-penetration")
    else:
        phi, w, u = solve_stream_helmholtz(q, params.alpha)
    return FlowState(time=time, q=q, w=w, phi=phi, u=u, params=params)


def initial_state(params: ModelParams, u0: VectorField,
                  mass_tol: float = 1e-6) -> FlowState:
    """State at t=0 from a velocity field satisfying the boundary tag."""
    VectorField(u0.grid, u0.u_r, u0.u_theta, tag=params.boundary_tag)
    q0 = recover_q(u0, params.alpha)
    return make_state(params, q0, 0.0, mass_tol=mass_tol)


def rhs(state: FlowState, dealias: bool = False) -> ScalarField:
    """-u . grad q + nu Delta w (q and w coincide for plain vorticity)."""
    g = state.q.grid
    conv = advect(state.u, state.q)
    if dealias:
        conv = dealias_23(conv)
    vals = -conv.values
    if state.params.nu > 0.0:
        vals = vals + state.params.nu * laplacian(state.w).values
    return ScalarField(g, vals)


def _stage_rhs(params: ModelParams, grid: ExteriorGrid, q_values: np.ndarray,
               time: float, stage: str, mass_tol: float, dealias: bool) -> np.ndarray:
    if not np.isfinite(q_values).all():
        raise NumericalFailure("non-finite q entering stage %s" % stage,
                               kind="nan", time=time, detail=stage)
    try:
        state = make_state(params, ScalarField(grid, q_values), time, mass_tol)
        k = rhs(state, dealias=dealias).values
    except ConfigError:
        raise
    except ValueError as exc:  # field constructors reject NaN/Inf overflow
        raise NumericalFailure("non-finite field at stage %s" % stage,
                               kind="nan", time=time, detail=stage) from exc
    if not np.isfinite(k).all():
        raise NumericalFailure("non-finite tendency at stage %s" % stage,
                               kind="nan", time=time, detail=stage)
    return k


def step(state: FlowState, dt: float, mass_tol: float = 1e-6,
         dealias: bool = False, end_time: float | None = None) -> FlowState:
    """Classical RK4 update of q; returns a consistent new state."""
    params = state.params
    g = state.q.grid
    q = state.q.values
    t = state.time
    k1 = _stage_rhs(params, g, q, t, "k1", mass_tol, dealias)
    k2 = _stage_rhs(params, g, q + 0.5 * dt * k1, t + 0.5 * dt, "k2",
                    mass_tol, dealias)
    k3 = _stage_rhs(params, g, q + 0.5 * dt * k2, t + 0.5 * dt, "k3",
                    mass_tol, dealias)
    k4 = _stage_rhs(params, g, q + dt * k3, t + dt, "k4", mass_tol, dealias)
    q_new = q + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    if not np.isfinite(q_new).all():
        raise NumericalFailure("non-finite q after step", kind="nan",
                               time=t, detail="update")
    t_new = t + dt if end_time is None else end_time
    try:
        return make_state(params, ScalarField(g, q_new), t_new, mass_tol)
    except ConfigError:
        raise
    except ValueError as exc:
        raise NumericalFailure("non-finite field after step", kind="nan",
                               time=t, detail="update") from exc


def cfl_dt(state: FlowState, cfl: float, dt_max: float = 0.05) -> float:
    """Advective bound over both directions, capped by diffusion and dt_max."""
    if not 0.0 < cfl <= 1.0:
        raise ConfigError("cfl=%r outside (0, 1]" % (cfl,), key="cfl")
    g = state.q.grid
    r = g.r_nodes[:, None]
    ds, dtheta = g.ds, g.dtheta
    tiny = 1e-300
    adv = min(float(np.min(r * ds / np.maximum(np.abs(state.u.u_r), tiny))),
              float(np.min(r * dtheta / np.maximum(np.abs(state.u.u_theta), tiny))))
    bound = cfl * adv
    nu = state.params.nu
    if nu > 0.0:
        h_min = min(ds, dtheta)  # physical spacing is smallest on the ring
        bound = min(bound, h_min * h_min / (4.0 * nu))
    return min(bound, dt_max)


def energy(state: FlowState) -> float:
    """E_alpha = |u|^2 + alpha^2 |grad u|^2 (squared norms)."""
    a = state.params.alpha
    e = norm_l2(state.u) ** 2
    if a > 0.0:
        e += a * a * grad_norm_l2(state.u) ** 2
    return e


def outer_circulation(u: VectorField) -> float:
    """Line integral of u_theta around the outermost ring."""
    g = u.grid
    return float(g.spec.r_max * g.dtheta * np.sum(u.u_theta[-1]))


def _diag_row(state: FlowState, dt: float, tail_w: np.ndarray) -> dict:
    nusq = norm_l2(state.u) ** 2
    gusq = grad_norm_l2(state.u) ** 2
    a = state.params.alpha
    return {
        "t": state.time,
        "dt": dt,
        "energy": nusq + a * a * gusq,
        "enstrophy": norm_l2(state.w) ** 2,
        "tail_mass": float(np.sqrt(np.sum(tail_w * state.q.values ** 2))),
        "norm_u_sq": nusq,
        "grad_u_sq": gusq,
    }


def run(params: ModelParams, u0: VectorField, t_final: float,
        config: RunConfig = RunConfig(), observers=()) -> Trajectory:
    """Integrate to t_final with snapshots and per-step diagnostics."""
    if not t_final > 0.0:
        raise ConfigError("t_final=%r must be positive" % (t_final,),
                          key="t_final")
    g = u0.grid
    circ = abs(outer_circulation(u0))
    scale = max(norm_l2(u0), 1e-30)
    if circ > config.circulation_tol * scale:
        raise ConfigError(
            "outer-ring circulation %.3e of the initial velocity exceeds "
            "tolerance; vorticity support must stay inside the annulus" % circ,
            key="u0")
    state = initial_state(params, u0, mass_tol=config.mass_tol)

    tail_w = g.weights * (g.r_nodes[:, None] > 0.9 * g.spec.r_max)
    q0_norm = max(norm_l2(state.q), 1e-30)
    tail_abs = config.tail_threshold * q0_norm

    diags = {k: [] for k in _DIAG_KEYS}
    stream = None
    if config.diagnostics_path is not None:
        stream = open(config.diagnostics_path, "w")
        stream.write("t,dt,energy,enstrophy,tail_mass\n")

    def record(row):
        for k in _DIAG_KEYS:
            diags[k].append(row[k])
        if stream is not None:
            stream.write("%.17g,%.17g,%.17g,%.17g,%.17g\n" % (
                row["t"], row["dt"], row["energy"], row["enstrophy"],
                row["tail_mass"]))

    try:
        row = _diag_row(state, 0.0, tail_w)
        record(row)
        snapshots = [state]
        snap_idx = 1
        eps = 1e-9 * max(1.0, t_final)
        while state.time < t_final - eps:
            dt = config.dt if config.dt is not None \
                else cfl_dt(state, config.cfl, config.dt_max)
            if dt < config.min_dt:
                raise NumericalFailure(
                    "admissible dt %.3e collapsed below %.0e" % (dt, config.min_dt),
                    kind="cfl", time=state.time, detail=dt)
            target = None
            if config.snapshot_dt is not None:
                t_snap = snap_idx * config.snapshot_dt
                if t_snap < t_final - eps and state.time + dt >= t_snap - eps:
                    target = t_snap
            if state.time + dt >= t_final - eps and target is None:
                target = t_final
            if target is not None:
                dt = target - state.time
            state = step(state, dt, mass_tol=config.mass_tol,
                         dealias=config.dealias, end_time=target)
            row = _diag_row(state, dt, tail_w)
            record(row)
            if row["tail_mass"] > tail_abs:
                raise NumericalFailure(
                    "vorticity tail mass %.3e beyond 0.9 r_max exceeds "
                    "%.3e" % (row["tail_mass"], tail_abs),
                    kind="tail_mass", time=state.time, detail=row["tail_mass"])
            hit_snap = (config.snapshot_dt is not None and target is not None
                        and target != t_final)
            if hit_snap:
                snapshots.append(state)
                snap_idx += 1
            for obs in observers:
                obs(state, row)
        if snapshots[-1].time != state.time:
            snapshots.append(state)
    finally:
        if stream is not None:
            stream.close()

    return Trajectory(snapshots=snapshots,
                      diagnostics={k: np.asarray(v) for k, v in diags.items()})
