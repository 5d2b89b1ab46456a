"""Curve catalog, measures, and planar test sets.

Curves are closed-form parametrizations; densities live against the
parameter (d mu = g(t) dt), so any arc-length Jacobian is already absorbed
into g.  Measures on unbounded curves must declare a decay envelope, which
is the only truncation authority for downstream quadrature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Union

import numpy as np

from . import expr as expr_mod
from .expr import Expr
from .fourlines import Fiber

__all__ = [
    "CompactSupport",
    "ExpDecay",
    "GaussianDecay",
    "Decay",
    "ParamCurve",
    "circle",
    "hyperbola_branch",
    "hyperbola_full",
    "spiral",
    "anti_spiral",
    "exp_curve",
    "parabola",
    "parallel_lines",
    "expr_curve",
    "curve_point",
    "Density",
    "TabulatedDensity",
    "Measure",
    "Line",
    "CircleSet",
    "LatticeCross",
    "CurveSet",
    "FiberList",
    "Lines",
    "PlanarSet",
    "Window",
    "sample_set",
    "EmptyIntersectionError",
]

Window = tuple[float, float, float, float]  # xmin, xmax, ymin, ymax

INF = math.inf


# ---------------------------------------------------------------------------
# decay envelopes


@dataclass(frozen=True)
class CompactSupport:
    lo: float
    hi: float

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError(f"empty support ({self.lo}, {self.hi})")


@dataclass(frozen=True)
class ExpDecay:
    """|g(t)| <= amplitude * exp(-rate*|t|)."""

    rate: float
    amplitude: float = 1.0

    def __post_init__(self):
        if self.rate <= 0 or self.amplitude <= 0:
            raise ValueError("rate and amplitude must be positive")


@dataclass(frozen=True)
class GaussianDecay:
    """|g(t)| <= amplitude * exp(-rate*t^2)."""

    rate: float = 1.0
    amplitude: float = 1.0

    def __post_init__(self):
        if self.rate <= 0 or self.amplitude <= 0:
            raise ValueError("rate and amplitude must be positive")


Decay = Union[CompactSupport, ExpDecay, GaussianDecay]


# ---------------------------------------------------------------------------
# parametric curves

_CURVE_KINDS = (
    "circle",
    "hyperbola-branch",
    "hyperbola-full",
    "spiral",
    "anti-spiral",
    "exp-curve",
    "parabola",
    "parallel-lines",
    "expr",
)


@dataclass(frozen=True)
class ParamCurve:
    kind: str
    heights: tuple[float, ...] = ()
    x_expr: Optional[Expr] = None
    y_expr: Optional[Expr] = None
    expr_domain: Optional[tuple[float, float]] = None

    def __post_init__(self):
        if self.kind not in _CURVE_KINDS:
            raise ValueError(f"unknown curve kind {self.kind!r}")
        if self.kind == "parallel-lines" and not self.heights:
            raise ValueError("parallel-lines needs at least one height")
        if self.kind == "expr" and (self.x_expr is None or self.y_expr is None or self.expr_domain is None):
            raise ValueError("expr curve needs x_expr, y_expr and expr_domain")

    @property
    def n_components(self) -> int:
        return len(self.heights) if self.kind == "parallel-lines" else 1

    def domain(self, component: int = 0) -> tuple[float, float]:
        self._check_component(component)
        return {
            "circle": (-math.pi, math.pi),
            "hyperbola-branch": (0.0, INF),
            "hyperbola-full": (-INF, INF),
            "spiral": (0.0, INF),
            "anti-spiral": (-INF, 0.0),
            "exp-curve": (-INF, INF),
            "parabola": (-INF, INF),
            "parallel-lines": (-INF, INF),
            "expr": self.expr_domain,
        }[self.kind]

    def _check_component(self, component: int) -> None:
        if not 0 <= component < self.n_components:
            raise ValueError(f"component {component} out of range for {self.kind}")

    def xy(self, component: int, t: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Vectorized curve coordinates; t is trusted to lie in the domain."""
        self._check_component(component)
        k = self.kind
        if k == "circle":
            return np.cos(t), np.sin(t)
        if k in ("hyperbola-branch", "hyperbola-full"):
            return np.cosh(t), np.sinh(t)
        if k == "spiral":
            r = np.exp(-t)
            return r * np.cos(t), r * np.sin(t)
        if k == "anti-spiral":
            r = np.exp(t)
            return r * np.cos(t), r * np.sin(t)
        if k == "exp-curve":
            return np.asarray(t, dtype=float), np.exp(t * t)
        if k == "parabola":
            return np.asarray(t, dtype=float), np.asarray(t, dtype=float) ** 2
        if k == "parallel-lines":
            tt = np.asarray(t, dtype=float)
            return tt, np.full_like(tt, self.heights[component])
        xs = expr_mod.evaluate_array(self.x_expr, t)
        ys = expr_mod.evaluate_array(self.y_expr, t)
        return xs.real, ys.real

    def deriv_sup(self, component: int, lo: float, hi: float) -> tuple[float, float]:
        """Upper bounds for |x'| and |y'| over [lo, hi] (oscillation hints)."""
        self._check_component(component)
        k = self.kind
        m = max(abs(lo), abs(hi))
        if k == "circle":
            return 1.0, 1.0
        if k in ("hyperbola-branch", "hyperbola-full"):
            return math.sinh(m), math.cosh(m)
        if k == "spiral":
            peak = math.sqrt(2.0) * math.exp(-lo)
            return peak, peak
        if k == "anti-spiral":
            peak = math.sqrt(2.0) * math.exp(hi)
            return peak, peak
        if k == "exp-curve":
            return 1.0, 2.0 * m * math.exp(min(m * m, 700.0))
        if k == "parabola":
            return 1.0, 2.0 * m
        if k == "parallel-lines":
            return 1.0, 0.0
        # expr curve: coarse sampled finite-difference bound
        ts = np.linspace(lo, hi, 257)
        xs, ys = self.xy(component, ts)
        dt = ts[1] - ts[0]
        return (
            float(np.max(np.abs(np.diff(xs)) / dt)) * 2.0,
            float(np.max(np.abs(np.diff(ys)) / dt)) * 2.0,
        )


def circle() -> ParamCurve:
    return ParamCurve("circle")


def hyperbola_branch() -> ParamCurve:
    return ParamCurve("hyperbola-branch")


def hyperbola_full() -> ParamCurve:
    return ParamCurve("hyperbola-full")


def spiral() -> ParamCurve:
    return ParamCurve("spiral")


def anti_spiral() -> ParamCurve:
    return ParamCurve("anti-spiral")


def exp_curve() -> ParamCurve:
    return ParamCurve("exp-curve")


def parabola() -> ParamCurve:
    return ParamCurve("parabola")


def parallel_lines(heights: Sequence[float]) -> ParamCurve:
    return ParamCurve("parallel-lines", heights=tuple(float(h) for h in heights))


def expr_curve(x_expr: Expr, y_expr: Expr, domain: tuple[float, float]) -> ParamCurve:
    return ParamCurve("expr", x_expr=x_expr, y_expr=y_expr, expr_domain=(float(domain[0]), float(domain[1])))


def curve_point(curve: ParamCurve, component: int, t: float) -> tuple[float, float]:
    """Point on the curve at parameter t; t must lie in the component domain."""
    lo, hi = curve.domain(component)
    if not lo <= t <= hi:
        raise ValueError(f"t={t} outside domain [{lo}, {hi}] of {curve.kind}")
    x, y = curve.xy(component, np.asarray([t], dtype=float))
    return float(x[0]), float(y[0])


# ---------------------------------------------------------------------------
# densities and measures


@dataclass(frozen=True)
class TabulatedDensity:
    """Complex samples on a sorted grid, linearly interpolated, 0 outside."""

    ts: tuple[float, ...]
    values: tuple[complex, ...]

    def __post_init__(self):
        if len(self.ts) != len(self.values) or len(self.ts) < 2:
            raise ValueError("need matching ts/values with at least two samples")
        if any(b <= a for a, b in zip(self.ts, self.ts[1:])):
            raise ValueError("ts must be strictly increasing")

    def __call__(self, t: np.ndarray) -> np.ndarray:
        ts = np.asarray(self.ts)
        vals = np.asarray(self.values, dtype=np.complex128)
        re = np.interp(t, ts, vals.real, left=0.0, right=0.0)
        im = np.interp(t, ts, vals.imag, left=0.0, right=0.0)
        return re + 1j * im


Density = Union[Expr, TabulatedDensity, Callable[[np.ndarray], np.ndarray]]


def density_fn(density: Density) -> Callable[[np.ndarray], np.ndarray]:
    if isinstance(density, (expr_mod.Num, expr_mod.Var, expr_mod.Const, expr_mod.Neg,
                            expr_mod.BinOp, expr_mod.Call, expr_mod.Chi)):
        return lambda t: expr_mod.evaluate_array(density, t)
    return density


@dataclass(frozen=True)
class Measure:
    """Curve plus one complex parameter density per component.

    ``decay`` bounds every component density and is mandatory whenever any
    component domain is unbounded.
    """

    curve: ParamCurve
    densities: tuple[Density, ...]
    decay: Optional[Decay] = None

    def __post_init__(self):
        if len(self.densities) != self.curve.n_components:
            raise ValueError(
                f"{self.curve.kind} has {self.curve.n_components} component(s), "
                f"got {len(self.densities)} densities"
            )

    def density(self, component: int) -> Callable[[np.ndarray], np.ndarray]:
        return density_fn(self.densities[component])

    def check_envelope(self, n: int = 4096, slack: float = 1e-12) -> None:
        """Spot-check |g(t)| <= envelope(t) on a deterministic sample grid.

        Raises ValueError on the first violating component.  With a compact
        support the density must vanish outside it.
        """
        if self.decay is None:
            return
        decay = self.decay
        for comp in range(self.curve.n_components):
            lo, hi = self.curve.domain(comp)
            if isinstance(decay, CompactSupport):
                span = decay.hi - decay.lo
                grid_lo, grid_hi = decay.lo - 0.5 * span, decay.hi + 0.5 * span
            else:
                reach = 2.0 * (1.0 / decay.rate if isinstance(decay, ExpDecay) else 1.0 / math.sqrt(decay.rate))
                grid_lo, grid_hi = -8.0 * reach, 8.0 * reach
            ts = np.linspace(max(lo, grid_lo), min(hi, grid_hi), n)
            if isinstance(decay, CompactSupport):
                bound = np.where((ts > decay.lo) & (ts < decay.hi), np.inf, 0.0)
            elif isinstance(decay, ExpDecay):
                bound = decay.amplitude * np.exp(-decay.rate * np.abs(ts))
            else:
                bound = decay.amplitude * np.exp(-decay.rate * ts * ts)
            excess = np.abs(self.density(comp)(ts)) - bound
            if np.any(excess > slack):
                idx = int(np.argmax(excess))
                raise ValueError(
                    f"component {comp} density exceeds its declared envelope near t={ts[idx]:.6g}"
                )


# ---------------------------------------------------------------------------
# planar test sets


class EmptyIntersectionError(ValueError):
    pass


@dataclass(frozen=True)
class Line:
    point: tuple[float, float]
    direction: tuple[float, float]

    def __post_init__(self):
        if self.direction == (0.0, 0.0):
            raise ValueError("line direction must be nonzero")


@dataclass(frozen=True)
class Lines:
    """Finite union of straight lines."""

    lines: tuple[Line, ...]

    def __post_init__(self):
        if not self.lines:
            raise ValueError("need at least one line")


@dataclass(frozen=True)
class CircleSet:
    radius: float

    def __post_init__(self):
        if self.radius <= 0:
            raise ValueError("radius must be positive")


@dataclass(frozen=True)
class LatticeCross:
    alpha: float
    beta: float

    def __post_init__(self):
        if self.alpha <= 0 or self.beta <= 0:
            raise ValueError("alpha and beta must be positive")


@dataclass(frozen=True)
class CurveSet:
    curve: ParamCurve


@dataclass(frozen=True)
class FiberList:
    fibers: tuple[Fiber, ...]
    periodic2: bool = False


PlanarSet = Union[Line, Lines, CircleSet, LatticeCross, CurveSet, FiberList]


def _check_window(window: Window) -> Window:
    xmin, xmax, ymin, ymax = window
    if not (xmin < xmax and ymin < ymax):
        raise ValueError(f"degenerate window {window}")
    return window


def _inside(x: float, y: float, window: Window) -> bool:
    xmin, xmax, ymin, ymax = window
    return xmin <= x <= xmax and ymin <= y <= ymax


def _line_samples(line: Line, n: int, window: Window) -> list[tuple[float, float]]:
    (px, py), (dx, dy) = line.point, line.direction
    xmin, xmax, ymin, ymax = window
    s_lo, s_hi = -INF, INF
    for p, d, lo, hi in ((px, dx, xmin, xmax), (py, dy, ymin, ymax)):
        if d == 0:
            if not lo <= p <= hi:
                return []
            continue
        s0, s1 = (lo - p) / d, (hi - p) / d
        if s0 > s1:
            s0, s1 = s1, s0
        s_lo, s_hi = max(s_lo, s0), min(s_hi, s1)
    if s_lo > s_hi:
        return []
    if n == 1:
        ss = [0.5 * (s_lo + s_hi)]
    else:
        ss = [s_lo + (s_hi - s_lo) * j / (n - 1) for j in range(n)]
    return [(px + s * dx, py + s * dy) for s in ss]


def _curve_param_range(curve: ParamCurve, component: int, window: Window) -> Optional[tuple[float, float]]:
    xmin, xmax, ymin, ymax = window
    lo, hi = curve.domain(component)
    k = curve.kind
    if k == "circle":
        return lo, hi
    if k == "parallel-lines":
        if not ymin <= curve.heights[component] <= ymax:
            return None
        return max(lo, xmin), min(hi, xmax)
    if k in ("exp-curve", "parabola"):
        return max(lo, xmin), min(hi, xmax)
    if k in ("hyperbola-branch", "hyperbola-full"):
        if xmax < 1.0:
            return None
        tx = math.acosh(max(xmax, 1.0))
        ty_lo = math.asinh(ymin)
        ty_hi = math.asinh(ymax)
        return max(lo, -tx, ty_lo), min(hi, tx, ty_hi)
    corners = [(xmin, ymin), (xmin, ymax), (xmax, ymin), (xmax, ymax)]
    r_max = max(math.hypot(cx, cy) for cx, cy in corners)
    gap_x = 0.0 if xmin <= 0.0 <= xmax else min(abs(xmin), abs(xmax))
    gap_y = 0.0 if ymin <= 0.0 <= ymax else min(abs(ymin), abs(ymax))
    r_min = max(math.hypot(gap_x, gap_y), 1e-8)
    if k == "spiral":
        return max(lo, -math.log(r_max)), min(hi, -math.log(r_min))
    if k == "anti-spiral":
        return max(lo, math.log(r_min)), min(hi, math.log(r_max))
    return lo, hi  # expr curve: domain already finite


def sample_set(lam: PlanarSet, n: int, window: Window) -> list[tuple[float, float]]:
    """Deterministic sample of the set intersected with a closed window.

    Curves are sampled uniformly in parameter, the lattice cross is
    enumerated, periodic fiber lists are expanded height-by-height.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    _check_window(window)
    xmin, xmax, ymin, ymax = window
    points: list[tuple[float, float]] = []
    if isinstance(lam, Line):
        points = _line_samples(lam, n, window)
    elif isinstance(lam, Lines):
        per = max(1, -(-n // len(lam.lines)))
        for line in lam.lines:
            points.extend(_line_samples(line, per, window))
    elif isinstance(lam, CircleSet):
        for j in range(n):
            theta = 2.0 * math.pi * j / n
            x, y = lam.radius * math.cos(theta), lam.radius * math.sin(theta)
            if _inside(x, y, window):
                points.append((x, y))
    elif isinstance(lam, LatticeCross):
        for k in range(math.ceil(xmin / lam.alpha), math.floor(xmax / lam.alpha) + 1):
            if ymin <= 0.0 <= ymax:
                points.append((k * lam.alpha, 0.0))
        for k in range(math.ceil(ymin / lam.beta), math.floor(ymax / lam.beta) + 1):
            if xmin <= 0.0 <= xmax and not (k == 0 and ymin <= 0.0 <= ymax):
                points.append((0.0, k * lam.beta))
    elif isinstance(lam, FiberList):
        for fiber in lam.fibers:
            if not xmin <= fiber.xi <= xmax:
                continue
            for eta in fiber.sigma:
                if lam.periodic2:
                    k_lo = math.ceil((ymin - eta) / 2.0)
                    k_hi = math.floor((ymax - eta) / 2.0)
                    for k in range(k_lo, k_hi + 1):
                        points.append((fiber.xi, eta + 2.0 * k))
                elif ymin <= eta <= ymax:
                    points.append((fiber.xi, eta))
    elif isinstance(lam, CurveSet):
        curve = lam.curve
        per = max(2, -(-n // curve.n_components))
        for comp in range(curve.n_components):
            rng = _curve_param_range(curve, comp, window)
            if rng is None or rng[0] >= rng[1]:
                continue
            ts = np.linspace(rng[0], rng[1], per)
            xs, ys = curve.xy(comp, ts)
            for x, y in zip(xs, ys):
                if _inside(float(x), float(y), window):
                    points.append((float(x), float(y)))
    else:
        raise TypeError(f"not a PlanarSet: {lam!r}")
    if not points:
        raise EmptyIntersectionError(f"{type(lam).__name__} does not meet window {window}")
    return points
