"""Asymptotically flat radial metrics and the graphical flow operator.

The spatial background is R^n with a rotationally symmetric conformal metric

    sigma_ij(x) = w(r)^2 delta_ij,     w(r) = (1 + a r^{-tau})^power,

which approaches the Euclidean metric at rate omega(r) = a r^{-tau}.  A
spacelike graph over this background is described pointwise by its gradient
(and Hessian), and the flow speed is the trace of the graph Hessian against
the inverse induced metric

    g^{ij} = sigma^{ij} + sigma^{ik} sigma^{jl} u_k u_l / (1 - sigma^{kl} u_k u_l).

Everything here is a pure function of immutable inputs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

#: Gradients with |grad u|^2_sigma >= 1 - TOL_SPACELIKE are rejected.
TOL_SPACELIKE = 1e-10

#: Non-Euclidean metrics are never evaluated below this radius.
R_MIN = 1e-6


class DomainError(ValueError):
    """Input outside the metric's validity domain (r < r_min, non-finite, ...)."""


class SpacelikeViolationError(ValueError):
    """A gradient failed the strict spacelikeness requirement |grad u|_sigma < 1."""


@dataclass(frozen=True)
class RadialMetric:
    """Rotationally symmetric conformally flat metric w(r)^2 * delta.

    family 'euclidean' forces a == 0 (w identically 1, all Christoffel symbols
    vanish).  family 'conformal_power' uses w(r) = (1 + a r^{-tau})^power; the
    extra exponent generalises the basic a, tau family enough to host e.g. the
    time-symmetric Schwarzschild slice (power=2, tau=1, a=m/2) used as a
    curvature test case.
    """

    n: int
    family: str = "euclidean"
    a: float = 0.0
    tau: float = 1.0
    power: float = 1.0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"dimension must be >= 1, got {self.n}")
        if self.family not in ("euclidean", "conformal_power"):
            raise ValueError(f"unknown metric family {self.family!r}")
        if self.a < 0:
            raise ValueError(f"amplitude a must be >= 0, got {self.a}")
        if self.tau <= 0:
            raise ValueError(f"decay exponent tau must be > 0, got {self.tau}")
        if (self.family == "euclidean") != (self.a == 0.0):
            raise ValueError("family 'euclidean' if and only if a == 0")

    @property
    def r_min(self) -> float:
        return 0.0 if self.a == 0.0 else R_MIN

    def w(self, r):
        """Conformal factor w(r); accepts scalars or arrays."""
        r = np.asarray(r, dtype=float)
        if self.a == 0.0:
            return np.ones_like(r)
        return (1.0 + self.a * r ** -self.tau) ** self.power

    def dw(self, r):
        """dw/dr; accepts scalars or arrays."""
        r = np.asarray(r, dtype=float)
        if self.a == 0.0:
            return np.zeros_like(r)
        base = 1.0 + self.a * r ** -self.tau
        return self.power * base ** (self.power - 1.0) * (
            -self.a * self.tau * r ** (-self.tau - 1.0))

    def omega(self, r):
        """Asymptotic deviation scale omega(r) = a r^{-tau}."""
        r = np.asarray(r, dtype=float)
        return self.a * r ** -self.tau


def euclidean_metric(n: int) -> RadialMetric:
    return RadialMetric(n=n, family="euclidean")


def conformal_metric(n: int, a: float, tau: float, power: float = 1.0) -> RadialMetric:
    return RadialMetric(n=n, family="conformal_power", a=a, tau=tau, power=power)


@dataclass(frozen=True)
class GraphQuantities:
    """Pointwise quantities of a spacelike graph: tilt v, induced metric, normal."""

    v: float
    g: np.ndarray
    g_inv: np.ndarray
    nu_spatial: np.ndarray
    nu_time: float


def _check_point(metric, x) -> tuple[np.ndarray, float]:
    x = np.asarray(x, dtype=float)
    if x.shape != (metric.n,):
        raise DomainError(f"point has shape {x.shape}, expected ({metric.n},)")
    if not np.all(np.isfinite(x)):
        raise DomainError("non-finite point coordinates")
    r = float(np.linalg.norm(x))
    if metric.a != 0.0 and r < R_MIN:
        raise DomainError(f"|x| = {r:g} below r_min = {R_MIN:g} for a non-Euclidean metric")
    return x, r


def _sigma_at(metric, r: float, n: int):
    w2 = float(metric.w(r)) ** 2
    return w2 * np.eye(n), np.eye(n) / w2


def metric_eval(metric: RadialMetric, x):
    """Evaluate (sigma, sigma^{-1}, Christoffel) at a point.

    For the conformal family sigma = e^{2f} delta with f = ln w the
    Christoffel symbols are Gamma^k_ij = d^k_i f_j + d^k_j f_i - d_ij f^k.

    Returns:
        (sigma, sigma_inv, gamma) with sigma, sigma_inv of shape (n, n) and
        gamma of shape (n, n, n) indexed as gamma[k, i, j] = Gamma^k_ij.
    """
    x, r = _check_point(metric, x)
    n = metric.n
    sigma, sigma_inv = _sigma_at(metric, r, n)
    gamma = np.zeros((n, n, n))
    if metric.a != 0.0:
        fp = float(metric.dw(r)) / float(metric.w(r))
        fvec = fp * x / r
        eye = np.eye(n)
        gamma = (eye[:, :, None] * fvec[None, None, :]
                 + eye[:, None, :] * fvec[None, :, None]
                 - eye[None, :, :] * fvec[:, None, None])
    return sigma, sigma_inv, gamma


def ricci_eval(metric: RadialMetric, x, spacing: float = 1e-4) -> np.ndarray:
    """Ricci tensor of sigma at a point, by central differencing of Christoffels.

    Ric_jk = d_i Gamma^i_jk - d_j Gamma^i_ik
             + Gamma^i_ip Gamma^p_jk - Gamma^i_jp Gamma^p_ik.

    One code path for any conformal factor; validated against the closed
    conformal form and a scalar-flat test slice in the test suite.
    """
    x, _ = _check_point(metric, x)
    n = metric.n
    if metric.a == 0.0:
        return np.zeros((n, n))
    dgamma = np.empty((n, n, n, n))  # dgamma[l] = d_l Gamma
    for l in range(n):
        e = np.zeros(n)
        e[l] = spacing
        gp = metric_eval(metric, x + e)[2]
        gm = metric_eval(metric, x - e)[2]
        dgamma[l] = (gp - gm) / (2.0 * spacing)
    g0 = metric_eval(metric, x)[2]
    ric = (np.einsum("iijk->jk", dgamma)
           - np.einsum("jiik->jk", dgamma)
           + np.einsum("iip,pjk->jk", g0, g0)
           - np.einsum("ijp,pik->jk", g0, g0))
    return ric


def graph_quantities(metric: RadialMetric, x, grad_u) -> GraphQuantities:
    """Tilt factor, induced metric and inverse, and unit normal of a graph.

    Requires a strictly spacelike gradient, |grad u|^2_sigma < 1 - TOL_SPACELIKE.
    """
    x, r = _check_point(metric, x)
    grad_u = np.asarray(grad_u, dtype=float)
    sigma, sigma_inv = _sigma_at(metric, r, metric.n)
    du2 = float(grad_u @ sigma_inv @ grad_u)
    if du2 >= 1.0 - TOL_SPACELIKE:
        raise SpacelikeViolationError(
            f"|grad u|^2_sigma = {du2:.17g} >= 1 - {TOL_SPACELIKE:g}")
    v = 1.0 / np.sqrt(1.0 - du2)
    g = sigma - np.outer(grad_u, grad_u)
    raised = sigma_inv @ grad_u
    g_inv = sigma_inv + np.outer(raised, raised) / (1.0 - du2)
    return GraphQuantities(v=v, g=g, g_inv=g_inv,
                           nu_spatial=v * raised, nu_time=v)


def mcf_operator_cartesian(metric: RadialMetric, x, grad_u, hess_u) -> float:
    """Flow speed g^{ij}(sigma, grad u) (u_ij - Gamma^k_ij u_k) at a point."""
    x, _ = _check_point(metric, x)
    grad_u = np.asarray(grad_u, dtype=float)
    hess_u = np.asarray(hess_u, dtype=float)
    q = graph_quantities(metric, x, grad_u)
    gamma = metric_eval(metric, x)[2]
    cov_hess = hess_u - np.einsum("kij,k->ij", gamma, grad_u)
    return float(np.sum(q.g_inv * cov_hess))


def radial_factors(metric, r):
    """(w, f') on an array of radii, where f = ln w.

    Solvers precompute these once per grid; `mcf_operator_radial` uses them
    per call.
    """
    r = np.asarray(r, dtype=float)
    w = metric.w(r)
    fprime = metric.dw(r) / w
    return w, fprime


def radial_flow_rhs(n, r, du, d2u, w, fprime, one_minus_slope_sq=None):
    """Rotationally reduced flow speed, vectorised over radius arrays.

    For u = U(r) on the conformal background the operator contracts to

        w^{-2} [U'' + (n-1) U'/r + (n-2) f' U']
        + w^{-4} U'^2 (U'' - f' U') / (1 - (U'/w)^2).

    `one_minus_slope_sq` may supply 1 - U'^2 in a cancellation-free closed
    form (profiles with |U'| near 1); otherwise it is formed from du.
    """
    if one_minus_slope_sq is None:
        p2c = 1.0 - (du / w) ** 2
    else:
        # 1 - (U'/w)^2 = (1 - U'^2 + (w^2 - 1)) / w^2, stable when 1 - U'^2 is
        w2m1 = w * w - 1.0
        p2c = (one_minus_slope_sq + w2m1) / (w * w)
    return (w ** -2 * (d2u + (n - 1) * du / r + (n - 2) * fprime * du)
            + w ** -4 * du * du * (d2u - fprime * du) / p2c)


def mcf_operator_radial(metric, r, du, d2u, one_minus_slope_sq=None):
    """Flow speed for a rotationally symmetric graph u = U(r).

    Args:
        metric: object with attributes `n`, `w(r)`, `dw(r)` (RadialMetric or a
            blended metric from the interpolation module).
        r: radius > 0 (scalar or array).
        du, d2u: U'(r), U''(r).
        one_minus_slope_sq: optional exact 1 - U'^2 for near-null slopes.

    Agrees with `mcf_operator_cartesian` on the rotationally symmetric
    extension to machine precision.
    """
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0.0):
        raise DomainError("radial operator needs r > 0; the r = 0 axis rule "
                          "lives in the solver")
    r_min = getattr(metric, "r_min", 0.0)
    if r_min > 0.0 and np.any(r < r_min):
        raise DomainError(f"radius below r_min = {r_min:g}")
    du = np.asarray(du, dtype=float)
    w, fprime = radial_factors(metric, r)
    if np.any((du / w) ** 2 >= 1.0 - TOL_SPACELIKE):
        raise SpacelikeViolationError("|U'/w|^2 >= 1 - tol in radial operator")
    out = radial_flow_rhs(metric.n, r, du, np.asarray(d2u, dtype=float),
                          w, fprime, one_minus_slope_sq)
    return float(out) if out.ndim == 0 else out


def ricci_form_bound(metric: RadialMetric, r_lo: float, r_hi: float,
                     n_radii: int = 40, n_dirs: int = 8, seed: int = 0) -> float:
    """Measured constant C with |Ric_sigma(y, y)| <= C |y|^2_sigma on [r_lo, r_hi].

    The bound is sampled, not proven: log-spaced radii along the first axis
    (rotational symmetry makes the base point direction irrelevant) and random
    test directions.  Used to configure the tilt monitor on curved runs.
    """
    if metric.a == 0.0:
        return 0.0
    rng = np.random.default_rng(seed)
    best = 0.0
    for r in np.geomspace(max(r_lo, R_MIN * 10), r_hi, n_radii):
        x = np.zeros(metric.n)
        x[0] = r
        ric = ricci_eval(metric, x)
        w2 = float(metric.w(r)) ** 2
        for _ in range(n_dirs):
            y = rng.normal(size=metric.n)
            best = max(best, abs(y @ ric @ y) / (w2 * (y @ y)))
    return best
