"""Annihilating-measure certificates and the uniqueness-pair verdict catalog.

A certificate packages a nonzero measure whose transform vanishes on a test
set: the measure, the set, a measured residual over set samples, and one
off-set witness point where the transform is demonstrably large.  Passing
certificates constructively refute the uniqueness-pair property; they are
re-verifiable from scratch with fresh samples.

Verdicts answer HUP / NotHUP / Unknown for cataloged (curve, set) pairs,
recording the decisive condition.  Rationality conditions are decided only
for exact ``fractions.Fraction`` inputs; floating-point angles are reported
Unknown, since rationality is not numerically decidable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

import numpy as np

from . import bessel as bessel_mod
from .bessel import AllIntegers, EvenHalfIntegers, bessel_zero
from .expr import parse
from .geometry import (
    CircleSet,
    CompactSupport,
    CurveSet,
    GaussianDecay,
    Line,
    Lines,
    Measure,
    PlanarSet,
    Window,
    circle,
    exp_curve,
    hyperbola_full,
    parallel_lines,
    sample_set,
)
from .quadrature import QuadOpts
from .transform import mu_hat, mu_hat_at_points

__all__ = [
    "Certificate",
    "VerifyReport",
    "Verdict",
    "WITNESS_THRESHOLD",
    "RESIDUAL_TOL",
    "circle_line_annihilator",
    "circle_rational_lines_annihilator",
    "circle_bessel_circle_annihilator",
    "hyperbola_line_annihilator",
    "expcurve_vertical_line_annihilator",
    "fourlines_annihilator",
    "all_annihilators",
    "anti_certificate_midpoint_radius",
    "verify_certificate",
    "known_pair_verdict",
]

WITNESS_THRESHOLD = 0.05
RESIDUAL_TOL = 1e-6
_BUILD_SAMPLES = 256


@dataclass(frozen=True)
class Certificate:
    measure: Measure
    lam: PlanarSet
    window: Window
    witness_point: tuple[float, float]
    residual_on_lambda: float
    witness_magnitude: float
    samples_used: int
    basis: str


@dataclass(frozen=True)
class VerifyReport:
    ok: bool
    residual: float
    witness_magnitude: float
    samples_used: int
    tol: float
    message: str = ""


@dataclass(frozen=True)
class Verdict:
    answer: str  # HUP | NotHUP | Unknown
    source: str
    condition: str


def _quad_opts(tol: float) -> QuadOpts:
    # two orders below the verification tolerance, floored at what float64
    # quadrature can deliver
    return QuadOpts(abs_tol=min(1e-9, max(tol / 100.0, 1e-13)), rel_tol=1e-9)


def _measure_certificate(
    measure: Measure,
    lam: PlanarSet,
    window: Window,
    witness_point: tuple[float, float],
    basis: str,
    n_samples: int = _BUILD_SAMPLES,
    tol: float = RESIDUAL_TOL,
) -> Certificate:
    opts = _quad_opts(tol)
    points = sample_set(lam, n_samples, window)
    residual = max(abs(ft.value) for ft in mu_hat_at_points(measure, points, opts))
    witness = abs(mu_hat(measure, witness_point[0], witness_point[1], opts).value)
    return Certificate(measure, lam, window, witness_point, residual, witness, len(points), basis)


def circle_line_annihilator() -> Certificate:
    """sin(theta) on the unit circle annihilates the horizontal axis."""
    measure = Measure(circle(), (parse("sin(t)"),))
    return _measure_certificate(
        measure,
        Line((0.0, 0.0), (1.0, 0.0)),
        (-10.0, 10.0, -1.0, 1.0),
        (0.0, 1.0),
        "odd circle density against the even cos(theta) phase on the x-axis",
    )


def circle_rational_lines_annihilator(j: int) -> Certificate:
    """sin(j theta) on the circle annihilates j concurrent lines pi/j apart."""
    if j < 1:
        raise ValueError("j must be >= 1")
    measure = Measure(circle(), (parse("sin(t)" if j == 1 else f"sin({j}*t)"),))
    lines = tuple(
        Line((0.0, 0.0), (math.cos(m * math.pi / j), math.sin(m * math.pi / j))) for m in range(j)
    )
    rho_w = (j + 1) / math.pi
    phi_w = math.pi / (2.0 * j)
    return _measure_certificate(
        measure,
        Lines(lines),
        (-10.0, 10.0, -10.0, 10.0),
        (rho_w * math.cos(phi_w), rho_w * math.sin(phi_w)),
        f"sin({j} phi) factor of the transform vanishes on lines at angles m pi/{j}",
    )


def circle_bessel_circle_annihilator(k: int, n: int) -> Certificate:
    """e^{ik theta} on the circle annihilates the circle of radius j_{k,n}/pi."""
    if k < 0 or n < 1:
        raise ValueError("need k >= 0 and n >= 1")
    radius = bessel_zero(k, n) / math.pi
    measure = Measure(circle(), (parse(f"exp({k}*i*t)"),))
    rho_w = 0.5 * (bessel_zero(k, n) + bessel_zero(k, n + 1)) / math.pi
    extent = rho_w + 1.0
    return _measure_certificate(
        measure,
        CircleSet(radius),
        (-extent, extent, -extent, extent),
        (rho_w, 0.0),
        f"single surviving circle coefficient carries J_{k}(pi rho) = 0 at rho = j_{{{k},{n}}}/pi",
    )


def hyperbola_line_annihilator() -> Certificate:
    """Odd compactly supported density on the hyperbola annihilates the x-axis."""
    measure = Measure(
        hyperbola_full(),
        (parse("sqrt(cosh(2*t))*sin(t)*chi(-pi,pi)(t)"),),
        CompactSupport(-math.pi, math.pi),
    )
    return _measure_certificate(
        measure,
        Line((0.0, 0.0), (1.0, 0.0)),
        (-8.0, 8.0, -1.0, 1.0),
        (0.0, 0.5),
        "odd density against the even cosh phase: the transform vanishes on eta = 0",
    )


def expcurve_vertical_line_annihilator() -> Certificate:
    """Odd Gaussian-windowed density on (t, e^{t^2}) annihilates the y-axis."""
    measure = Measure(exp_curve(), (parse("sin(t)*exp(-(t^2))"),), GaussianDecay(1.0, 1.0))
    return _measure_certificate(
        measure,
        Line((0.0, 0.0), (0.0, 1.0)),
        (-1.0, 1.0, -8.0, 8.0),
        (1.0, 0.0),
        "odd density against the even e^{t^2} phase: the transform vanishes at xi = 0",
    )


def _complex_literal(z: complex) -> str:
    return f"({z.real!r}+({z.imag!r})*i)"


def fourlines_annihilator(p: int, eta0: float) -> Certificate:
    """Triangle density on lines 0 and p with weights that cancel at eta0 mod 2.

    With c = e^{i pi eta0}, the height-0 component carries weight -c^{-p} and
    the height-p component weight 1, so the four-term transform vanishes on
    every line eta = eta0 + 2k; at eta0 + 1/p its magnitude is 2|fhat3(xi)|.
    """
    if p < 3:
        raise ValueError("p must be an integer >= 3")
    if not 0.0 <= eta0 < 2.0:
        raise ValueError("eta0 must lie in [0, 2)")
    w0 = -np.exp(-1j * math.pi * eta0 * p)
    triangle = "(1-abs(t))*chi(-1,1)(t)"
    measure = Measure(
        parallel_lines([0.0, 1.0, 2.0, float(p)]),
        (
            parse(f"{_complex_literal(complex(w0))}*{triangle}"),
            parse("0"),
            parse("0"),
            parse(triangle),
        ),
        CompactSupport(-1.0, 1.0),
    )
    heights = [eta0 + 2.0 * k for k in range(-4, 5)]
    return _measure_certificate(
        measure,
        CurveSet(parallel_lines(heights)),
        (-10.0, 10.0, eta0 - 8.5, eta0 + 8.5),
        (0.0, eta0 + 1.0 / p),
        "weighted triangle densities on lines 0 and p cancel exactly on eta = eta0 + 2k",
    )


def all_annihilators() -> list[Certificate]:
    """One passing certificate per constructor, at default parameters."""
    return [
        circle_line_annihilator(),
        circle_rational_lines_annihilator(3),
        circle_bessel_circle_annihilator(0, 1),
        hyperbola_line_annihilator(),
        expcurve_vertical_line_annihilator(),
        fourlines_annihilator(3, 0.0),
    ]


def anti_certificate_midpoint_radius(k: int, n: int) -> Certificate:
    """Deliberately broken variant: the test circle radius is moved to the
    midpoint between consecutive Bessel zeros, where the transform does not
    vanish.  Verification of this certificate must fail."""
    good = circle_bessel_circle_annihilator(k, n)
    mid_radius = 0.5 * (bessel_zero(k, n) + bessel_zero(k, n + 1)) / math.pi
    witness = (0.5 * (bessel_zero(k, n + 1) + bessel_zero(k, n + 2)) / math.pi, 0.0)
    opts = _quad_opts(RESIDUAL_TOL)
    points = sample_set(CircleSet(mid_radius), _BUILD_SAMPLES, good.window)
    residual = max(abs(ft.value) for ft in mu_hat_at_points(good.measure, points, opts))
    witness_mag = abs(mu_hat(good.measure, witness[0], witness[1], opts).value)
    return Certificate(
        good.measure,
        CircleSet(mid_radius),
        good.window,
        witness,
        residual,
        witness_mag,
        len(points),
        "anti-certificate: radius between zeros, residual must not vanish",
    )


def verify_certificate(cert: Certificate, n_lambda: int = 512, tol: float = RESIDUAL_TOL) -> VerifyReport:
    """Recompute the certificate's residual and witness from fresh samples.

    Passes iff the residual over ``n_lambda`` set samples stays below ``tol``
    and the witness magnitude exceeds the 0.05 floor.  Quadrature failures
    propagate; a failing certificate is reported, never silently accepted.
    """
    if n_lambda < 1:
        raise ValueError("n_lambda must be >= 1")
    opts = _quad_opts(tol)
    points = sample_set(cert.lam, n_lambda, cert.window)
    residual = max(abs(ft.value) for ft in mu_hat_at_points(cert.measure, points, opts))
    witness = abs(mu_hat(cert.measure, cert.witness_point[0], cert.witness_point[1], opts).value)
    ok = residual < tol and witness > WITNESS_THRESHOLD
    msg = ""
    if residual >= tol:
        msg = f"residual {residual:.3g} >= tol {tol:.3g}"
    elif witness <= WITNESS_THRESHOLD:
        msg = f"witness magnitude {witness:.3g} <= {WITNESS_THRESHOLD}"
    return VerifyReport(ok, residual, witness, len(points), tol, msg)


# ---------------------------------------------------------------------------
# verdict catalog


def _bessel_orders_checked(x: float, parity) -> str:
    bound = math.ceil(x)
    if isinstance(parity, AllIntegers):
        return f"integer orders 0..{bound}"
    start = (parity.n - 2) / 2.0
    return f"orders {start}, {start + 1}, ... up to {bound}"


def known_pair_verdict(pair: str, **params) -> Verdict:
    """HUP / NotHUP / Unknown for a cataloged (curve, test-set) pair.

    Pair names and parameters:

    - ``hyperbola-lattice-cross`` (alpha, beta)
    - ``circle-circle`` (radius)
    - ``circle-line``; ``circle-parallel-lines``
    - ``circle-lines`` (angle: Fraction for N concurrent lines at angle*pi)
    - ``circle-spiral``
    - ``parabola-line`` (direction=(dx, dy)); ``parabola-two-lines``
    - ``sphere-sphere`` (dim, radius)
    - ``paraboloid-hyperplane`` (dim, normal)
    - ``spiral-antispiral``
    - ``expcurve-hline``; ``expcurve-vline``; ``expcurve-two-vlines``
    - ``hyperbola-branch-reflected``; ``hyperbola-hline``;
      ``hyperbola-two-hlines``; ``hyperbola-angled-lines`` (alpha radians)
    - ``fourlines-constant-fiber`` (p, eta0)
    """
    name = pair.replace("_", "-").lower()
    if name in ("lattice-cross", "hyperbola-lattice-cross"):
        alpha, beta = float(params["alpha"]), float(params["beta"])
        if alpha <= 0 or beta <= 0:
            raise ValueError("alpha and beta must be positive")
        product = alpha * beta
        answer = "HUP" if product <= 1.0 else "NotHUP"
        return Verdict(
            answer,
            "Hedenmalm-Montes-Rodriguez lattice-cross characterization",
            f"alpha*beta = {product:.17g} {'<=' if product <= 1.0 else '>'} 1",
        )
    if name == "circle-circle":
        radius = float(params["radius"])
        if radius <= 0:
            raise ValueError("radius must be positive")
        arg = math.pi * radius
        ok = bessel_mod.all_orders_nonzero(arg, AllIntegers())
        return Verdict(
            "HUP" if ok else "NotHUP",
            "Lev-Sjolin circle criterion (argument pi*r under the pi-convention transform)",
            f"J_k({arg:.17g}) {'all nonzero' if ok else 'vanishes'} over {_bessel_orders_checked(arg, AllIntegers())}",
        )
    if name == "circle-line":
        return Verdict("NotHUP", "Lev-Sjolin: a single line never suffices for the circle",
                       "constructive annihilator: sin(theta) density")
    if name == "circle-parallel-lines":
        return Verdict("HUP", "Lev-Sjolin: two parallel lines suffice for the circle", "two distinct parallel lines")
    if name == "circle-lines":
        angle = params["angle"]
        if isinstance(angle, Fraction) or isinstance(angle, int):
            return Verdict(
                "NotHUP",
                "Lev-Sjolin concurrent-lines criterion",
                f"angle/pi = {Fraction(angle)} is rational: sin(j theta) annihilator exists",
            )
        return Verdict(
            "Unknown",
            "Lev-Sjolin concurrent-lines criterion",
            "rationality of a floating-point angle is not decidable; pass a Fraction for an exact verdict",
        )
    if name == "circle-spiral":
        return Verdict("HUP", "real-analytic continuation from the spiral accumulation point",
                       "spiral reaches the origin: zero set forces the analytic transform to vanish")
    if name == "parabola-line":
        dx, dy = params["direction"]
        parallel = float(dy) == 0.0 and float(dx) != 0.0
        return Verdict(
            "HUP" if parallel else "NotHUP",
            "Sjolin parabola results",
            f"line direction ({dx}, {dy}) is {'parallel' if parallel else 'not parallel'} to the x-axis",
        )
    if name == "parabola-two-lines":
        return Verdict("HUP", "Sjolin parabola results", "two distinct lines always suffice for the parabola")
    if name == "sphere-sphere":
        dim, radius = int(params["dim"]), float(params["radius"])
        if radius <= 0:
            raise ValueError("radius must be positive")
        arg = math.pi * radius
        parity = EvenHalfIntegers(dim)
        ok = bessel_mod.all_orders_nonzero(arg, parity)
        return Verdict(
            "HUP" if ok else "NotHUP",
            "Gonzalez Vieli sphere criterion (argument pi*r under the pi-convention transform)",
            f"J_nu({arg:.17g}) {'all nonzero' if ok else 'vanishes'} over {_bessel_orders_checked(arg, parity)}",
        )
    if name == "paraboloid-hyperplane":
        normal = tuple(float(v) for v in params["normal"])
        parallel = all(v == 0.0 for v in normal[:-1]) and normal[-1] != 0.0
        return Verdict(
            "HUP" if parallel else "NotHUP",
            "Gonzalez Vieli paraboloid criterion",
            f"hyperplane with normal {normal} is {'parallel' if parallel else 'not parallel'} to the base hyperplane",
        )
    if name == "spiral-antispiral":
        return Verdict("HUP", "one-sided convolution support argument for the spiral pair",
                       "kernel supported on a half-line has full spectral support")
    if name == "expcurve-hline":
        return Verdict("HUP", "horizontal line reads off the full one-dimensional transform of the density",
                       "line parallel to the x-axis")
    if name == "expcurve-vline":
        return Verdict("NotHUP", "odd-density argument against the even e^{t^2} phase",
                       "constructive annihilator: sin(t) e^{-t^2} density")
    if name == "expcurve-two-vlines":
        return Verdict("HUP", "two vertical lines force oddness twice, leaving only the zero density",
                       "two distinct vertical lines")
    if name == "hyperbola-branch-reflected":
        return Verdict("HUP", "one-sided convolution support argument on the reflected branch",
                       "kernel supported on a half-line has full spectral support")
    if name == "hyperbola-hline":
        return Verdict("NotHUP", "odd-density argument against the even cosh phase",
                       "constructive annihilator: sqrt(cosh 2t) sin(t) chi_(-pi,pi) density")
    if name == "hyperbola-two-hlines":
        return Verdict("HUP", "two horizontal lines force oddness twice, leaving only the zero density",
                       "two distinct horizontal lines")
    if name == "hyperbola-angled-lines":
        alpha = float(params["alpha"])
        if 0.0 < alpha < math.pi / 4.0:
            return Verdict("HUP", "reflection argument: the density becomes periodic and integrable, hence zero",
                           f"angle {alpha:.17g} lies in (0, pi/4)")
        return Verdict("Unknown", "reflection argument covers angles in (0, pi/4) only",
                       f"angle {alpha:.17g} outside (0, pi/4)")
    if name == "fourlines-constant-fiber":
        p = int(params["p"])
        eta0 = float(params.get("eta0", 0.0))
        return Verdict(
            "NotHUP",
            "constant-fiber cancellation on four parallel lines",
            f"constructive annihilator with weights (-e^(-i pi {eta0} {p}), 0, 0, 1)",
        )
    return Verdict("Unknown", "", f"pair {pair!r} is outside the verdict catalog")
