import numpy as np
import pytest

from mcflow.barriers import build_outer_barrier
from mcflow.diagnostics import (DiagnosticsRecord, InsufficientDataError,
                                barrier_margin, boundary_slope_series,
                                comparison_hypothesis_check,
                                decay_exponent_fit, field_norms,
                                h1_decay_check, max_principle_check,
                                phi_supremum)
from mcflow.fields import line_field, radial_field
from mcflow.geometry import conformal_metric, euclidean_metric
from mcflow.initial_data import smooth_cutoff
from mcflow.solver import SolverConfig, run_flow


def records_from(ts, sups, l2s=None, h1s=None):
    l2s = l2s if l2s is not None else np.zeros_like(ts)
    h1s = h1s if h1s is not None else np.zeros_like(ts)
    return [DiagnosticsRecord(t=float(t), sup_u=float(s), grad_max=0.0,
                              l2=float(l), h1_grad=float(g))
            for t, s, l, g in zip(ts, sups, l2s, h1s)]


# ---------------------------------------------------------------------------
# norms
# ---------------------------------------------------------------------------

def test_norms_zero_field():
    fld = line_field(-5.0, 5.0, 0.1, lambda x: np.zeros_like(x))
    assert field_norms(fld, euclidean_metric(1)) == (0.0, 0.0, 0.0, 0.0)


def test_norms_gaussian_l2():
    fld = line_field(-12.0, 12.0, 0.01, lambda x: np.exp(-x * x / 2),
                     bc=("asymptotic_decay", "asymptotic_decay"))
    _, _, l2, _ = field_norms(fld, euclidean_metric(1))
    assert l2 ** 2 == pytest.approx(np.sqrt(np.pi), abs=1e-6)


def test_norms_polynomial_l2():
    fld = line_field(0.0, 1.0, 1e-3, lambda x: x * (1 - x),
                     bc=("dirichlet_zero", "dirichlet_zero"))
    _, _, l2, _ = field_norms(fld, euclidean_metric(1))
    assert l2 ** 2 == pytest.approx(1.0 / 30.0, abs=1e-8)


def test_norms_radial_volume_weight():
    # u == 1 on [0, 1] flat n=3: integral of r^2 dr = 1/3
    fld = radial_field(0.0, 1.0, 1e-3, lambda r: np.ones_like(r),
                       bc=("axis_symmetry", "asymptotic_decay"))
    _, _, l2, _ = field_norms(fld, euclidean_metric(3))
    assert l2 ** 2 == pytest.approx(1.0 / 3.0, abs=1e-6)


def test_norms_grad_max_uses_metric():
    metric = conformal_metric(3, a=1.0, tau=1.0)
    fld = radial_field(1.0, 5.0, 0.01, lambda r: 0.5 * r,
                       bc=("asymptotic_decay", "asymptotic_decay"))
    _, grad_max, _, _ = field_norms(fld, metric)
    assert grad_max == pytest.approx(0.5 / float(metric.w(5.0)), abs=1e-12)


# ---------------------------------------------------------------------------
# tilt monitor
# ---------------------------------------------------------------------------

def test_phi_zero_field():
    fld = line_field(-2.0, 2.0, 0.1, lambda x: np.zeros_like(x))
    assert phi_supremum(fld, euclidean_metric(1), 0.7, 0.3) == pytest.approx(
        np.exp(0.3), abs=1e-12)


def test_phi_lambda_zero_drops_u_dependence():
    fld = line_field(-2.0, 2.0, 0.1, lambda x: 0.3 * np.exp(-x * x),
                     bc=("asymptotic_decay", "asymptotic_decay"))
    from mcflow.fields import gradient
    du = gradient(fld)
    v_max = float(np.max(1 / np.sqrt(1 - du ** 2)))
    assert phi_supremum(fld, euclidean_metric(1), 0.0, 0.5) == pytest.approx(
        v_max * np.exp(0.5), rel=1e-12)


def test_phi_requires_nonnegative_u_when_monotone():
    fld = line_field(-2.0, 2.0, 0.1, lambda x: -0.5 * np.exp(-x * x),
                     bc=("asymptotic_decay", "asymptotic_decay"))
    with pytest.raises(ValueError):
        phi_supremum(fld, euclidean_metric(1), 1.0, 1.0)


def test_phi_monotone_on_curved_run():
    metric = conformal_metric(3, a=0.5, tau=1.0)
    from mcflow.geometry import ricci_form_bound
    c = ricci_form_bound(metric, 0.5, 20.0)
    fld = radial_field(
        0.5, 20.0, 0.05,
        lambda r: 0.3 * (1 - smooth_cutoff(1.0, 2.0, r)) * smooth_cutoff(3.0, 5.0, r))
    cfg = SolverConfig(h=0.05, t_end=2.0, snapshot_every=1.0, record_every=0.1)
    traj = run_flow(metric, fld, cfg, phi_params=(c, 1.0 / c))
    phis = [rec.sup_phi for rec in traj.records]
    assert all(b <= a + 1e-6 for a, b in zip(phis, phis[1:]))
    assert all(p >= np.exp(1.0 / c) - 1e-12 for p in phis)


# ---------------------------------------------------------------------------
# barrier margin and comparison hypothesis
# ---------------------------------------------------------------------------

def test_barrier_margin_zero_field():
    prof = build_outer_barrier(3, r1_min=2.0, h=1.0, eps=0.1)
    fld = radial_field(0.0, 50.0, 0.1, lambda r: np.zeros_like(r))
    assert barrier_margin(fld, prof) >= 0.1


def test_barrier_margin_of_profile_itself_is_zero():
    prof = build_outer_barrier(3, r1_min=2.0, h=1.0, eps=0.1)
    nodes = np.arange(2.0, 40.0, 0.05)
    vals = prof.value(nodes)
    from mcflow.fields import Field
    fld = Field(kind="radial", nodes=nodes, values=vals, h=0.05,
                bc=("asymptotic_decay", "asymptotic_decay"))
    assert barrier_margin(fld, prof) == pytest.approx(0.0, abs=1e-12)


def test_comparison_hypothesis_check():
    fld = line_field(-2.0, 2.0, 0.05, lambda x: 0.5 * x,
                     bc=("asymptotic_decay", "asymptotic_decay"))
    ok = comparison_hypothesis_check(fld, np.sqrt(0.75), (0.0, 2.0))
    assert ok.passed and ok.sup_gradient == pytest.approx(0.5, abs=1e-12)
    steep = line_field(-2.0, 2.0, 0.05, lambda x: 0.9 * x,
                       bc=("asymptotic_decay", "asymptotic_decay"))
    assert not comparison_hypothesis_check(steep, np.sqrt(0.75), (0.0, 2.0)).passed
    zero = line_field(-2.0, 2.0, 0.05, lambda x: np.zeros_like(x))
    assert comparison_hypothesis_check(zero, 1e-6, (0.0, 2.0)).passed


# ---------------------------------------------------------------------------
# fits and checks
# ---------------------------------------------------------------------------

def test_decay_fit_exact_power_laws():
    ts = np.geomspace(1.0, 100.0, 40)
    fit = decay_exponent_fit(records_from(ts, ts ** -0.25), (1.0, 100.0))
    assert fit.exponent == pytest.approx(-0.25, abs=1e-10)
    assert fit.r_squared == pytest.approx(1.0, abs=1e-12)
    fit = decay_exponent_fit(records_from(ts, 3.0 * ts ** -0.5), (1.0, 100.0))
    assert fit.exponent == pytest.approx(-0.5, abs=1e-10)
    assert fit.intercept == pytest.approx(np.log(3.0), abs=1e-10)


def test_decay_fit_needs_enough_points():
    ts = np.geomspace(1.0, 100.0, 5)
    with pytest.raises(InsufficientDataError):
        decay_exponent_fit(records_from(ts, ts ** -0.25), (1.0, 100.0))


def test_boundary_slope_series_zero_run():
    cfg = SolverConfig(h=0.05, t_end=0.5, snapshot_every=0.1)
    fld = radial_field(0.0, 4.0, 0.05, lambda r: np.zeros_like(r))
    traj = run_flow(euclidean_metric(3), fld, cfg)
    series = boundary_slope_series(traj)
    assert np.all(series.slopes == 0.0)
    assert series.max_slope == 0.0


def test_max_principle_check():
    recs = records_from([0, 1, 2], [1.0, 0.9, 0.8])
    assert max_principle_check(recs).passed
    recs = records_from([0, 1, 2], [1.0, 0.9, 0.901])
    rep = max_principle_check(recs)
    assert not rep.passed
    assert rep.worst == pytest.approx(1e-3, abs=1e-12)
    flat = records_from([0, 1], [0.0, 0.0])
    assert max_principle_check(flat).passed


def test_h1_decay_check():
    ts = np.array([0.0, 1.0, 2.0])
    good = records_from(ts, ts * 0, l2s=[1.0, 0.8, 0.7],
                        h1s=[0.5, 0.4, 0.3])
    assert h1_decay_check(good).passed
    bad = records_from(ts, ts * 0, l2s=[1.0, 1.0, 1.0], h1s=[0.0, 0.4, 0.0])
    # at t=1: 1.0 + 0.16 > 1.001
    rep = h1_decay_check(bad)
    assert not rep.passed
    assert rep.worst > 1.1
