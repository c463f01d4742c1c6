"""Explicit time stepping for the graphical flow.

Forward Euler in time, second-order central differences in space, with the
step size adapted to the quasilinear principal coefficient

    a(u') = w^{-2} / (1 - (u'/w)^2),       dt = cfl * h^2 / (2 max a).

Covers the flat line problem u_t = u'' / (1 - u'^2), the rotationally
symmetric radial problem on conformal backgrounds, the zero-boundary
problem on balls with blended initial data, and nested-domain comparison
studies.  Slopes are never clamped: an update that breaks strict
spacelikeness is retried on a halved step or halts, by policy.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np

from . import diagnostics
from .fields import Field
from .geometry import (TOL_SPACELIKE, DomainError, SpacelikeViolationError,
                       euclidean_metric, radial_factors)
from .initial_data import interpolate_initial_data, lipschitz_constant

CLAMP_POLICIES = ("reject", "halt_and_report")
TERMINATIONS = ("reached_t_end", "spacelike_violation", "step_cap")
#: Retries (each halving dt) under the 'reject' policy.
MAX_DT_HALVINGS = 10


@dataclass(frozen=True)
class SolverConfig:
    """Grid spacing, step-size safety, horizon and output cadence."""

    h: float
    t_end: float
    cfl_safety: float = 0.9
    snapshot_every: float | None = None
    record_every: float | None = None
    clamp_policy: str = "reject"
    max_steps: int = 20_000_000

    def __post_init__(self):
        if not 0.0 < self.cfl_safety <= 1.0:
            raise ValueError(f"cfl_safety must be in (0, 1], got {self.cfl_safety}")
        if self.t_end <= 0:
            raise ValueError(f"t_end must be > 0, got {self.t_end}")
        if self.h <= 0:
            raise ValueError(f"h must be > 0, got {self.h}")
        if self.clamp_policy not in CLAMP_POLICIES:
            raise ValueError(f"clamp_policy must be one of {CLAMP_POLICIES}")

    @property
    def snapshot_cadence(self) -> float:
        return self.snapshot_every if self.snapshot_every else self.t_end / 8.0

    @property
    def record_cadence(self) -> float:
        return self.record_every if self.record_every else self.snapshot_cadence


@dataclass
class FlowTrajectory:
    """Time-ordered snapshots plus per-cadence diagnostics records."""

    snapshots: list = dc_field(default_factory=list)
    records: list = dc_field(default_factory=list)
    termination: str = "reached_t_end"
    steps: int = 0

    @property
    def final_field(self) -> Field:
        return self.snapshots[-1][1]

    @property
    def final_time(self) -> float:
        return self.snapshots[-1][0]


class _Engine:
    """Shared stepping kernel over a raw value array."""

    def __init__(self, kind, nodes, h, bc, metric, n):
        self.kind = kind
        self.nodes = nodes
        self.h = h
        self.bc = bc
        self.metric = metric
        self.n = n
        self.axis = bc[0] == "axis_symmetry"
        r_min = getattr(metric, "r_min", 0.0)
        if kind == "line":
            if getattr(metric, "a", 0.0) != 0.0:
                raise DomainError("line problems run on the flat metric")
            self.w_int = np.ones(nodes.size - 2)
            self.fp_int = np.zeros(nodes.size - 2)
            self.w_mid = np.ones(nodes.size - 1)
            self.r_int = None
        else:
            inner = nodes[1] if self.axis else nodes[0]
            if r_min > 0.0 and inner < r_min:
                raise DomainError("radial grid reaches below the metric's r_min")
            if not self.axis and nodes[0] <= 0.0:
                raise DomainError("radial grid starting at r = 0 needs the "
                                  "axis_symmetry tag")
            self.r_int = nodes[1:-1]
            self.w_int, self.fp_int = radial_factors(metric, self.r_int)
            mid = 0.5 * (nodes[:-1] + nodes[1:])
            self.w_mid = metric.w(np.maximum(mid, max(r_min, 1e-300)))
        self.w_all = None  # lazy, only needed by stable_dt-style callers

    def rhs_and_coeff(self, u):
        """(interior rhs, axis rhs or None, max principal coefficient)."""
        h = self.h
        du = (u[2:] - u[:-2]) * (0.5 / h)
        d2u = (u[2:] - 2.0 * u[1:-1] + u[:-2]) / (h * h)
        w = self.w_int
        p2 = (du / w) ** 2
        comp = 1.0 - p2
        if np.any(comp <= TOL_SPACELIKE):
            raise SpacelikeViolationError(
                "interior gradient reached the null slope")
        coeff = float(np.max(1.0 / (w * w * comp)))
        if self.kind == "line":
            rhs = d2u / comp
        else:
            n = self.n
            rhs = (w ** -2 * (d2u + (n - 1) * du / self.r_int
                              + (n - 2) * self.fp_int * du)
                   + w ** -4 * du * du * (d2u - self.fp_int * du) / comp)
        axis_rhs = None
        if self.axis:
            axis_rhs = self.n * 2.0 * (u[1] - u[0]) / (h * h)
            coeff = max(coeff, float(self.n))
        return rhs, axis_rhs, coeff

    def apply(self, u, dt, rhs, axis_rhs):
        """Candidate update with boundary treatment; returns a new array."""
        out = u.copy()
        out[1:-1] += dt * rhs
        if self.axis:
            out[0] = u[0] + dt * axis_rhs
        elif self.bc[0] == "dirichlet_zero":
            out[0] = 0.0
        # 'asymptotic_decay' freezes the end: out[0] already equals u[0]
        if self.bc[1] == "dirichlet_zero":
            out[-1] = 0.0
        return out

    def max_metric_slope(self, u):
        return float(np.max(np.abs(np.diff(u)) / (self.h * self.w_mid)))

    def advance(self, u, dt_cap, cfl, policy):
        """One accepted step; returns (u_new, dt).  Raises on violation."""
        rhs, axis_rhs, coeff = self.rhs_and_coeff(u)
        dt = cfl * self.h * self.h / (2.0 * coeff)
        if dt_cap is not None:
            dt = min(dt, dt_cap)
        attempts = 1 + (MAX_DT_HALVINGS if policy == "reject" else 0)
        worst = np.nan
        for _ in range(attempts):
            candidate = self.apply(u, dt, rhs, axis_rhs)
            worst = self.max_metric_slope(candidate)
            if worst < 1.0 - TOL_SPACELIKE:
                return candidate, dt
            dt *= 0.5
        raise SpacelikeViolationError(
            f"updated slope {worst:.12g} reached 1 - {TOL_SPACELIKE:g} "
            f"(policy {policy}, last dt {dt * 2:g})")


def _engine_for(field: Field, metric, n=None) -> _Engine:
    if field.kind == "line":
        metric = metric if metric is not None else euclidean_metric(1)
        return _Engine("line", field.nodes, field.h, field.bc, metric, 1)
    if n is None:
        n = metric.n
    return _Engine("radial", field.nodes, field.h, field.bc, metric, n)


def stable_dt(field: Field, metric, config: SolverConfig) -> float:
    """Largest explicit step: cfl * h^2 / (2 max principal coefficient).

    On a flat line this is cfl * h^2 / (2 max 1/(1 - u'^2)); the axis node of
    a radial grid contributes its limit coefficient n.
    """
    engine = _engine_for(field, metric)
    _, _, coeff = engine.rhs_and_coeff(field.values)
    return config.cfl_safety * field.h * field.h / (2.0 * coeff)


def step_1d(field: Field, config: SolverConfig, dt_cap: float | None = None):
    """One explicit step of the flat line flow.  Returns (new field, dt)."""
    if field.kind != "line":
        raise ValueError("step_1d expects a line field")
    engine = _engine_for(field, euclidean_metric(1))
    u_new, dt = engine.advance(field.values, dt_cap, config.cfl_safety,
                               config.clamp_policy)
    return Field(kind="line", nodes=field.nodes, values=u_new, h=field.h,
                 bc=field.bc), dt


def step_radial(field: Field, metric, n: int, config: SolverConfig,
                dt_cap: float | None = None):
    """One explicit step of the rotationally reduced flow in dimension n."""
    if field.kind != "radial":
        raise ValueError("step_radial expects a radial field")
    engine = _engine_for(field, metric, n)
    u_new, dt = engine.advance(field.values, dt_cap, config.cfl_safety,
                               config.clamp_policy)
    return Field(kind="radial", nodes=field.nodes, values=u_new, h=field.h,
                 bc=field.bc), dt


def _evolve(engine: _Engine, u0_values: np.ndarray, metric, config: SolverConfig,
            phi_params=None, barrier=None) -> FlowTrajectory:
    """Drive the engine to t_end, recording at cadence; shared by all runs."""
    u = u0_values.copy()
    if engine.bc[0] == "dirichlet_zero":
        u[0] = 0.0
    if engine.bc[1] == "dirichlet_zero":
        u[-1] = 0.0

    def as_field(vals):
        return Field(kind=engine.kind, nodes=engine.nodes, values=vals.copy(),
                     h=engine.h, bc=engine.bc)

    def record(t, vals):
        traj.records.append(diagnostics.make_record(
            as_field(vals), metric, t, phi_params=phi_params, profile=barrier))

    traj = FlowTrajectory()
    rec_cad = config.record_cadence
    snap_cad = config.snapshot_cadence
    t = 0.0
    record(t, u)
    traj.snapshots.append((t, as_field(u)))
    next_rec = rec_cad
    next_snap = snap_cad
    steps = 0
    try:
        while t < config.t_end - 1e-12:
            if steps >= config.max_steps:
                traj.termination = "step_cap"
                break
            mark = min(next_rec, next_snap, config.t_end)
            u, dt = engine.advance(u, mark - t, config.cfl_safety,
                                   config.clamp_policy)
            steps += 1
            t = mark if dt >= mark - t - 1e-15 else t + dt
            hit_rec = t >= next_rec - 1e-12
            hit_snap = t >= next_snap - 1e-12
            if hit_rec or t >= config.t_end - 1e-12:
                record(t, u)
            if hit_snap or t >= config.t_end - 1e-12:
                traj.snapshots.append((t, as_field(u)))
            if hit_rec:
                next_rec = (np.floor(t / rec_cad + 0.5) + 1.0) * rec_cad
            if hit_snap:
                next_snap = (np.floor(t / snap_cad + 0.5) + 1.0) * snap_cad
        else:
            traj.termination = "reached_t_end"
    except SpacelikeViolationError:
        traj.termination = "spacelike_violation"
        record(t, u)
        traj.snapshots.append((t, as_field(u)))
    traj.steps = steps
    return traj


def run_flow(metric, u0: Field, config: SolverConfig, phi_params=None,
             barrier=None) -> FlowTrajectory:
    """Evolve whole-space data on a large truncated grid to t_end.

    The far field is pinned by the grid's boundary tags (zero by default);
    contamination from the truncation is monitored through the optional
    barrier margin rather than assumed absent.  `phi_params = (lambda, mu)`
    enables the tilt monitor, `barrier` a BarrierProfile margin column.
    """
    sup = float(np.max(np.abs(u0.values)))
    if sup > 0.0:
        edges = [abs(u0.values[-1])]
        if not u0.axis:
            edges.append(abs(u0.values[0]))
        if max(edges) > 1e-3 * sup:
            raise ValueError("initial data must decay below 1e-3 * sup|u0| "
                             "at the grid edge")
    engine = _engine_for(u0, metric)
    return _evolve(engine, u0.values, metric, config,
                   phi_params=phi_params, barrier=barrier)


def solve_dirichlet(R: float, metric, u0: Field, config: SolverConfig,
                    phi_params=None, barrier=None) -> FlowTrajectory:
    """Zero-boundary problem on the ball of radius R^2 with blended data.

    The data and metric are blended to (delta, 0) across [R-1, R] at the
    data's own spacelikeness margin, then evolved on the radial grid with the
    outer value pinned to zero.  The returned trajectory carries the blend's
    metric for all diagnostics.
    """
    if u0.kind != "radial":
        raise ValueError("solve_dirichlet expects a radial field")
    if R <= 1.0 + getattr(metric, "r_min", 0.0) or R < 2.0:
        raise DomainError(f"R = {R} too small: need R >= 2 inside the "
                          "asymptotic chart")
    if abs(u0.nodes[-1] - R * R) > u0.h:
        raise ValueError(f"grid must reach R^2 = {R * R:g}, ends at "
                         f"{u0.nodes[-1]:g}")
    margin = 1.0 - lipschitz_constant(metric, u0)
    eps = min(0.999, margin)
    interp = interpolate_initial_data(metric, u0, R - 1.0, R, eps)
    blended = interp.sigma_tilde
    bc = (u0.bc[0], "dirichlet_zero")
    engine = _Engine("radial", u0.nodes, u0.h, bc, blended, metric.n)
    return _evolve(engine, interp.u_tilde.values, blended, config,
                   phi_params=phi_params, barrier=barrier)


def nested_ball_study(R_list, metric, u0: Field, config: SolverConfig) -> list:
    """Differences between zero-boundary runs on nested domains.

    `u0` lives on the largest grid; each run restricts it to [inner, R^2].
    Rows report max |u_R - u_R'| over the shared window r <= min(R)/2 and
    over shared snapshot times, for consecutive R pairs.  The expected
    decrease with R is reported, not asserted.
    """
    R_list = sorted(float(R) for R in R_list)
    if len(R_list) < 2:
        raise ValueError("need at least two radii")
    window = R_list[0] / 2.0
    runs = {}
    for R in R_list:
        mask = u0.nodes <= R * R + u0.h / 2.0
        fld = Field(kind="radial", nodes=u0.nodes[mask],
                    values=u0.values[mask], h=u0.h, bc=u0.bc)
        runs[R] = solve_dirichlet(R, metric, fld, config)
    rows = []
    for R_small, R_large in zip(R_list[:-1], R_list[1:]):
        small, large = runs[R_small], runs[R_large]
        n_common = min(len(small.snapshots), len(large.snapshots))
        diff = 0.0
        for k in range(n_common):
            t_s, f_s = small.snapshots[k]
            t_l, f_l = large.snapshots[k]
            if abs(t_s - t_l) > 1e-9 * max(1.0, t_s):
                continue
            m = f_s.nodes <= window + u0.h / 2.0
            diff = max(diff, float(np.max(np.abs(
                f_s.values[m] - f_l.values[:m.sum()]))))
        rows.append({"R_small": R_small, "R_large": R_large,
                     "window": window, "max_difference": diff})
    return rows
