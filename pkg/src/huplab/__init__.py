"""Computational toolkit for Heisenberg uniqueness pairs in the plane.

Evaluates Fourier transforms of finite complex measures on a catalog of
curves (circle, hyperbola, spiral, exponential curve, parabola, parallel
lines) under the pi-exponent convention, constructs numerically certified
annihilating measures for the known non-uniqueness cases, and implements
the symmetric-polynomial / Vandermonde fiber algebra for measures on four
parallel lines.
"""

from .bessel import AllIntegers, EvenHalfIntegers, Order, all_orders_nonzero, bessel_j, bessel_zero
from .expr import evaluate, evaluate_array, parse, pretty
from .fourlines import (
    Classification,
    Fiber,
    FourLinesConfig,
    UnitPoint,
    classify,
    delta_bound,
    homog_sym,
    lift_relation,
    lift_to_degree,
    periodize,
    rho,
    solve_delta,
    solve_e,
    solve_tau,
    vandermonde3_det,
)
from .geometry import (
    CircleSet,
    CompactSupport,
    CurveSet,
    ExpDecay,
    FiberList,
    GaussianDecay,
    LatticeCross,
    Line,
    Lines,
    Measure,
    ParamCurve,
    TabulatedDensity,
    anti_spiral,
    circle,
    curve_point,
    exp_curve,
    expr_curve,
    hyperbola_branch,
    hyperbola_full,
    parabola,
    parallel_lines,
    sample_set,
    spiral,
)
from .quadrature import QuadOpts, QuadResult, integrate, truncate_interval
from .transform import (
    FTValue,
    circle_coeff,
    convolution_identity,
    lines_mu_hat,
    mu_hat,
    mu_hat_at_points,
    substitution_identity,
    total_variation,
    translation_phase_check,
)
from .witnesses import (
    Certificate,
    Verdict,
    VerifyReport,
    all_annihilators,
    anti_certificate_midpoint_radius,
    circle_bessel_circle_annihilator,
    circle_line_annihilator,
    circle_rational_lines_annihilator,
    expcurve_vertical_line_annihilator,
    fourlines_annihilator,
    hyperbola_line_annihilator,
    known_pair_verdict,
    verify_certificate,
)

__version__ = "0.1.0"
