"""Static and translating comparison profiles for the graphical flow.

Three rotationally symmetric families:

* the exact stationary profile beta on flat background, with slope
  beta' = -(1 + c r^{2n-2})^{-1/2} (zero flow speed for every c > 0);
* the static upper profile b with slope b' = -(1 + (r/r0)^{2n-3})^{-1/2},
  on which the flat flow speed is exactly (1/2) b'/r < 0 and which remains
  nonpositive under small conformal perturbations once r0 is large enough;
* the translating profile  b_hat = sqrt(2n(t - t0) + |x - x0|^2) + alpha t,
  an expanding-cone perturbation with flat residual exactly alpha, a uniform
  slope bound and a steep boundary slope.

Heights are recovered from slopes by adaptive quadrature of the improper
integral b(r) = -int_r^inf b'(s) ds.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad

from .geometry import (DomainError, RadialMetric, euclidean_metric,
                       radial_factors, radial_flow_rhs)

#: Log-spaced tabulation points per profile.
PROFILE_GRID_POINTS = 1024
#: Outer tabulation edge as a multiple of r0.
PROFILE_GRID_SPAN = 1.0e4
#: Certificate sample count for the curved sign check.
CERTIFICATE_POINTS = 256
#: Doubling-search budget for the inner radius.
MAX_DOUBLINGS = 40
#: Rounding allowance for certificate inequalities whose extreme case is an
#: exact analytic equality (e.g. the boundary slope at the window's far end).
EQUALITY_SLACK = 1e-14


class QuadratureError(ArithmeticError):
    """Adaptive quadrature failed to converge to the requested tolerance."""


class BarrierConstructionError(RuntimeError):
    """No inner radius within the search budget yields a certified profile."""


# ---------------------------------------------------------------------------
# closed-form slopes and curvatures
# ---------------------------------------------------------------------------

def maximal_slope(n: int, c: float, r):
    """Slope beta'(r) = -(1 + c r^{2n-2})^{-1/2} of the stationary profile."""
    if c <= 0:
        raise DomainError(f"constant c must be > 0, got {c}")
    r = np.asarray(r, dtype=float)
    return -(1.0 + c * r ** (2 * n - 2)) ** -0.5


def maximal_curvature(n: int, c: float, r):
    """beta''(r) = c (n-1) r^{2n-3} (1 + c r^{2n-2})^{-3/2}."""
    if c <= 0:
        raise DomainError(f"constant c must be > 0, got {c}")
    r = np.asarray(r, dtype=float)
    return c * (n - 1) * r ** (2 * n - 3) * (1.0 + c * r ** (2 * n - 2)) ** -1.5


def maximal_slope_sq_complement(n: int, c: float, r):
    """1 - beta'^2 = c r^{2n-2} / (1 + c r^{2n-2}), free of cancellation."""
    r = np.asarray(r, dtype=float)
    q = c * r ** (2 * n - 2)
    return q / (1.0 + q)


def maximal_surface_residual(n: int, c: float, r):
    """Flat radial flow speed on beta; identically zero in exact arithmetic."""
    du = maximal_slope(n, c, r)
    d2u = maximal_curvature(n, c, r)
    q = maximal_slope_sq_complement(n, c, r)
    r = np.asarray(r, dtype=float)
    w = np.ones_like(r)
    return radial_flow_rhs(n, r, du, d2u, w, np.zeros_like(r), one_minus_slope_sq=q)


def supersolution_profile_derivs(n: int, r0: float, r):
    """(b', b'', 1 - b'^2) for the static upper profile.

    b'  = -(1 + (r/r0)^{2n-3})^{-1/2}
    b'' = (n - 3/2) (1/r0) (r/r0)^{2n-4} / (1 + (r/r0)^{2n-3})^{3/2}
    1 - b'^2 = (r/r0)^{2n-3} / (1 + (r/r0)^{2n-3})

    Defined for n >= 3 and r >= r0 > 0.
    """
    if n < 3:
        raise DomainError(f"static profile needs n >= 3, got n = {n}")
    if r0 <= 0:
        raise DomainError(f"inner radius must be > 0, got {r0}")
    r = np.asarray(r, dtype=float)
    if np.any(r < r0 * (1.0 - 1e-12)):
        raise DomainError("profile evaluated inside its inner radius")
    q = (r / r0) ** (2 * n - 3)
    b1 = -(1.0 + q) ** -0.5
    b2 = (n - 1.5) * (1.0 / r0) * (r / r0) ** (2 * n - 4) * (1.0 + q) ** -1.5
    return b1, b2, q / (1.0 + q)


def supersolution_height(n: int, r0: float, r: float) -> float:
    """Height b(r) = -int_r^inf b'(s) ds by adaptive quadrature.

    The substitution s = r/x maps [r, inf) to (0, 1]; the transformed
    integrand has an integrable x^{n - 7/2} endpoint and converges to
    absolute tolerance 1e-12.
    """
    if n < 3:
        raise DomainError(f"static profile needs n >= 3, got n = {n}")
    if r < r0:
        raise DomainError("height requested inside the inner radius")

    def integrand(x):
        s = r / x
        return (1.0 + (s / r0) ** (2 * n - 3)) ** -0.5 * r / (x * x)

    val, err = quad(integrand, 0.0, 1.0, epsabs=1e-13, epsrel=1e-13, limit=200)
    if err > 1e-10:
        raise QuadratureError(f"height quadrature error estimate {err:g} > 1e-10")
    return val


def supersolution_tail_coefficient(n: int, r0: float) -> float:
    """Leading tail coefficient: b(r) ~ coeff * r^{-(n - 5/2)} as r -> inf."""
    return r0 ** (n - 1.5) / (n - 2.5)


# ---------------------------------------------------------------------------
# tabulated static profile with offset and interior cap
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BarrierProfile:
    """Tabulated static upper profile b_eps = b + eps, capped inside r0."""

    n: int
    r0: float
    eps: float
    cap: float
    r_grid: np.ndarray
    b_values: np.ndarray        # b(r) + eps on r_grid
    tail_coeff: float

    def value(self, r):
        """Evaluate b_eps(r): cap inside r0, tabulated values interpolated in
        log-log, closed-form power tail beyond the grid."""
        r = np.asarray(r, dtype=float)
        scalar = r.ndim == 0
        r = np.atleast_1d(r)
        out = np.empty_like(r)
        inside = r < self.r0
        out[inside] = self.cap
        beyond = r > self.r_grid[-1]
        out[beyond] = self.eps + self.tail_coeff * r[beyond] ** -(self.n - 2.5)
        mid = ~inside & ~beyond
        if np.any(mid):
            logb = np.interp(np.log(r[mid]), np.log(self.r_grid),
                             np.log(self.b_values - self.eps))
            out[mid] = self.eps + np.exp(logb)
        return float(out[0]) if scalar else out

    def derivs(self, r):
        """Closed-form (b', b'', 1 - b'^2) on r >= r0 (offset-independent)."""
        return supersolution_profile_derivs(self.n, self.r0, r)


def curved_profile_speed(metric, profile_n, r0, radii):
    """Flow speed of the static profile under `metric`, cancellation-free."""
    radii = np.asarray(radii, dtype=float)
    b1, b2, q = supersolution_profile_derivs(profile_n, r0, radii)
    w, fprime = radial_factors(metric, radii)
    return radial_flow_rhs(profile_n, radii, b1, b2, w, fprime,
                           one_minus_slope_sq=q)


def build_outer_barrier(n: int, r1_min: float, h: float, eps: float,
                        metric: RadialMetric | None = None) -> BarrierProfile:
    """Search an inner radius r0 >= r1_min whose profile clears height h.

    Doubling search: accept the first r0 with b(r0) >= h + eps whose flow
    speed under `metric` is <= 0 on a log-spaced certificate grid spanning
    [r0, 1e4 r0].  With a flat (or omitted) metric the speed is exactly
    (1/2) b'/r < 0 and only the height condition is active.
    """
    if h <= 0:
        raise DomainError(f"cap height must be > 0, got {h}")
    if eps < 0:
        raise DomainError(f"offset must be >= 0, got {eps}")
    if n < 3:
        raise DomainError(f"static profile needs n >= 3, got n = {n}")
    curved = metric is not None and metric.a != 0.0
    r0 = float(r1_min)
    worst = np.inf
    for _ in range(MAX_DOUBLINGS + 1):
        height_ok = supersolution_height(n, r0, r0) >= h + eps
        if curved:
            radii = np.geomspace(r0, PROFILE_GRID_SPAN * r0, CERTIFICATE_POINTS)
            worst = float(np.max(curved_profile_speed(metric, n, r0, radii)))
            sign_ok = worst <= 0.0
        else:
            sign_ok = True
        if height_ok and sign_ok:
            return _tabulate_profile(n, r0, h, eps)
        r0 *= 2.0
    raise BarrierConstructionError(
        f"no inner radius in [{r1_min:g}, {r0 / 2:g}] certified; "
        f"worst curved speed {worst:.3g}")


def _tabulate_profile(n, r0, cap, eps) -> BarrierProfile:
    r_grid = np.geomspace(r0, PROFILE_GRID_SPAN * r0, PROFILE_GRID_POINTS)
    tail_coeff = supersolution_tail_coefficient(n, r0)
    # integrate inward: exact tail height at the outer edge, then panelwise
    # quadrature of -b' between grid points
    heights = np.empty(PROFILE_GRID_POINTS)
    heights[-1] = supersolution_height(n, r0, r_grid[-1])
    for i in range(PROFILE_GRID_POINTS - 2, -1, -1):
        seg, _ = quad(lambda s: (1.0 + (s / r0) ** (2 * n - 3)) ** -0.5,
                      r_grid[i], r_grid[i + 1], epsabs=1e-13, epsrel=1e-13)
        heights[i] = heights[i + 1] + seg
    return BarrierProfile(n=n, r0=r0, eps=eps, cap=cap, r_grid=r_grid,
                          b_values=heights + eps, tail_coeff=tail_coeff)


@dataclass(frozen=True)
class SupersolutionReportRow:
    radius: float
    flat_value: float
    identity_deviation: float
    curved_value: float
    passed: bool

    def to_dict(self) -> dict:
        return {"radius": self.radius, "flat_value": self.flat_value,
                "identity_deviation": self.identity_deviation,
                "curved_value": self.curved_value, "pass": self.passed}


@dataclass(frozen=True)
class SupersolutionReport:
    rows: list

    @property
    def all_passed(self) -> bool:
        return all(row.passed for row in self.rows)

    @property
    def max_identity_deviation(self) -> float:
        return max(row.identity_deviation for row in self.rows)

    @property
    def max_curved_value(self) -> float:
        return max(row.curved_value for row in self.rows)

    def to_json_rows(self) -> list:
        return [row.to_dict() for row in self.rows]


def verify_static_supersolution(metric: RadialMetric, profile: BarrierProfile,
                                sample_radii) -> SupersolutionReport:
    """Per-radius certificate for a tabulated profile.

    Each row carries the flat flow speed, its deviation from the exact
    identity (1/2) b'/r, the speed under `metric`, and a sign flag
    (curved speed <= 0).  Failures are rows, not exceptions.
    """
    sample_radii = np.asarray(sample_radii, dtype=float)
    if np.any(sample_radii < profile.r0 * (1.0 - 1e-12)):
        raise DomainError("sample radii must be >= the profile's inner radius")
    b1, b2, q = profile.derivs(sample_radii)
    flat = euclidean_metric(profile.n)
    w1, f1 = radial_factors(flat, sample_radii)
    flat_vals = radial_flow_rhs(profile.n, sample_radii, b1, b2, w1, f1,
                                one_minus_slope_sq=q)
    exact = 0.5 * b1 / sample_radii
    curved_vals = curved_profile_speed(metric, profile.n, profile.r0,
                                       sample_radii)
    rows = [SupersolutionReportRow(radius=float(r), flat_value=float(fv),
                                   identity_deviation=float(abs(fv - ex)),
                                   curved_value=float(cv),
                                   passed=bool(cv <= 0.0))
            for r, fv, ex, cv in zip(sample_radii, flat_vals, exact, curved_vals)]
    return SupersolutionReport(rows=rows)


# ---------------------------------------------------------------------------
# translating profile
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TranslatingBarrier:
    """Expanding-cone profile sqrt(2n(t - t0) + |x - x0|^2) + alpha t.

    Lives on the closed ball of radius rho about x0 for t in [0, -t0], where
    rho = sqrt(((2 - mu)/mu) 4n (-t0)) and mu in (0, 1) is the slope margin.
    """

    n: int
    x0: np.ndarray
    t0: float
    alpha: float
    mu: float
    rho: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "x0", np.asarray(self.x0, dtype=float))
        if self.x0.shape != (self.n,):
            raise ValueError(f"x0 has shape {self.x0.shape}, expected ({self.n},)")
        if self.t0 >= -1.0:
            raise ValueError(f"backward offset t0 must be < -1, got {self.t0}")
        if self.alpha < 0:
            raise ValueError(f"drift alpha must be >= 0, got {self.alpha}")
        if not 0.0 < self.mu < 1.0:
            raise ValueError(f"margin mu must be in (0, 1), got {self.mu}")
        rho = np.sqrt((2.0 - self.mu) / self.mu * 4.0 * self.n * (-self.t0))
        object.__setattr__(self, "rho", float(rho))


def translating_barrier_eval(tb: TranslatingBarrier, x, t: float):
    """(value, time derivative, gradient, Hessian) of the translating profile.

    Only defined for |x - x0| <= rho and t in [0, -t0].
    """
    x = np.asarray(x, dtype=float)
    d = x - tb.x0
    dist = float(np.linalg.norm(d))
    if dist > tb.rho * (1.0 + 1e-12):
        raise DomainError(f"|x - x0| = {dist:g} outside the ball of radius {tb.rho:g}")
    if not -1e-12 <= t <= -tb.t0 + 1e-12:
        raise DomainError(f"t = {t:g} outside the window [0, {-tb.t0:g}]")
    s = 2.0 * tb.n * (t - tb.t0) + dist * dist
    root = np.sqrt(s)
    value = root + tb.alpha * t
    dt_value = tb.n / root + tb.alpha
    grad = d / root
    hess = (np.eye(tb.n) - np.outer(d, d) / s) / root
    return value, dt_value, grad, hess


@dataclass(frozen=True)
class TranslatingCertificate:
    rho: float
    min_gradient_complement: float     # min over ball x window of 1 - |grad|^2
    gradient_bound: float              # mu / 4
    min_boundary_slope: float          # radial slope at |x - x0| = rho
    boundary_slope_bound: float        # sqrt(1 - mu/2)
    gradient_ok: bool
    boundary_ok: bool

    @property
    def all_passed(self) -> bool:
        return self.gradient_ok and self.boundary_ok

    def to_dict(self) -> dict:
        return {"rho": self.rho,
                "min_gradient_complement": self.min_gradient_complement,
                "gradient_bound": self.gradient_bound,
                "min_boundary_slope": self.min_boundary_slope,
                "boundary_slope_bound": self.boundary_slope_bound,
                "pass": self.all_passed}


def translating_barrier_certificate(tb: TranslatingBarrier,
                                    n_radii: int = 101,
                                    n_times: int = 51) -> TranslatingCertificate:
    """Sampled inequality certificate for the translating profile.

    By rotational symmetry about x0 the extrema live on a (radius, time)
    rectangle: 1 - |grad|^2 = 2n(t - t0) / s is smallest at t = 0 on the
    boundary sphere, the boundary radial slope rho / sqrt(s) at t = -t0.
    """
    radii = np.linspace(0.0, tb.rho, n_radii)
    times = np.linspace(0.0, -tb.t0, n_times)
    rr, tt = np.meshgrid(radii, times, indexing="ij")
    s = 2.0 * tb.n * (tt - tb.t0) + rr * rr
    complement = 2.0 * tb.n * (tt - tb.t0) / s
    min_comp = float(complement.min())
    s_boundary = 2.0 * tb.n * (times - tb.t0) + tb.rho ** 2
    min_slope = float(np.min(tb.rho / np.sqrt(s_boundary)))
    grad_bound = tb.mu / 4.0
    slope_bound = float(np.sqrt(1.0 - tb.mu / 2.0))
    return TranslatingCertificate(
        rho=tb.rho,
        min_gradient_complement=min_comp, gradient_bound=grad_bound,
        min_boundary_slope=min_slope, boundary_slope_bound=slope_bound,
        gradient_ok=min_comp >= grad_bound - EQUALITY_SLACK,
        boundary_ok=min_slope >= slope_bound - EQUALITY_SLACK)


def translating_curved_residual(tb: TranslatingBarrier, metric: RadialMetric,
                                n_samples: int = 64, seed: int = 0) -> float:
    """Min over sampled (x, t) of  d_t b_hat - curved flow speed of b_hat.

    Positive means the translating profile is a strict upper profile under
    `metric` on its ball; this holds once the ball sits far enough out.
    """
    from .geometry import mcf_operator_cartesian

    rng = np.random.default_rng(seed)
    worst = np.inf
    for _ in range(n_samples):
        direction = rng.normal(size=tb.n)
        direction /= np.linalg.norm(direction)
        x = tb.x0 + direction * tb.rho * rng.uniform(0.0, 1.0)
        t = rng.uniform(0.0, -tb.t0)
        value, dtv, grad, hess = translating_barrier_eval(tb, x, t)
        worst = min(worst, dtv - mcf_operator_cartesian(metric, x, grad, hess))
    return float(worst)
