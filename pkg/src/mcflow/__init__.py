"""Numerical laboratory for graphical spacelike curvature flow.

Library layout:

* `geometry` - radial conformal backgrounds, graph quantities, flow operators
* `barriers` - stationary, static and translating comparison profiles
* `initial_data` - cutoffs, metric blending, slope and decay functionals
* `solver` - explicit stepping: line, radial, ball problems, nested studies
* `diagnostics` - norms, monitors, margins, rate fits
* `verification` - the closed-form identity suite
* `scenarios` / `cli` - config-driven runs and file artifacts
"""

from .barriers import (BarrierProfile, TranslatingBarrier, build_outer_barrier,
                       maximal_slope, supersolution_height,
                       supersolution_profile_derivs,
                       translating_barrier_certificate,
                       translating_barrier_eval, verify_static_supersolution)
from .diagnostics import (DecayFit, DiagnosticsRecord, barrier_margin,
                          boundary_slope_series, comparison_hypothesis_check,
                          decay_exponent_fit, field_norms, h1_decay_check,
                          max_principle_check, phi_supremum)
from .fields import Field, gradient, line_field, radial_field
from .geometry import (GraphQuantities, RadialMetric, conformal_metric,
                       euclidean_metric, graph_quantities, mcf_operator_cartesian,
                       mcf_operator_radial, metric_eval, ricci_eval)
from .initial_data import (InterpolationResult, decay_radius,
                           interpolate_initial_data, lipschitz_constant,
                           smooth_cutoff)
from .solver import (FlowTrajectory, SolverConfig, nested_ball_study, run_flow,
                     solve_dirichlet, stable_dt, step_1d, step_radial)
from .verification import run_identity_suite

__version__ = "0.1.0"
