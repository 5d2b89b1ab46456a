"""Command-line surface.

Subcommands: ``ft`` (transform on a grid or on test-set samples, from a JSON
config), ``annihilate`` (build and verify a certificate), ``fourlines``
(fiber classification and coefficient systems), ``bessel``, ``verdict``.

Exit codes: 0 ok, 2 configuration error, 3 numeric failure (the failing
point goes to stderr), 4 certificate verification failure.  Identical
invocations produce byte-identical output; HUPLAB_THREADS caps internal
parallelism without affecting results.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction
from typing import Any, Optional

from . import bessel as bessel_mod
from . import fourlines as fl
from . import witnesses
from .bessel import AllIntegers, EvenHalfIntegers, BesselError
from .expr import ExprSyntaxError, parse, pretty
from .geometry import (
    CircleSet,
    CompactSupport,
    CurveSet,
    Decay,
    EmptyIntersectionError,
    ExpDecay,
    FiberList,
    GaussianDecay,
    LatticeCross,
    Line,
    Lines,
    Measure,
    ParamCurve,
    PlanarSet,
    parallel_lines,
    sample_set,
)
from .quadrature import QuadOpts, QuadratureError
from .transform import mu_hat, mu_hat_at_points
from .witnesses import Certificate, verify_certificate

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3
EXIT_CERTIFICATE = 4


class ConfigError(ValueError):
    pass


class PointFailure(QuadratureError):
    """Quadrature failure tagged with the (xi, eta) point that triggered it."""

    def __init__(self, point: tuple[float, float], inner: Exception):
        super().__init__(f"at point (xi, eta) = ({point[0]:.17g}, {point[1]:.17g}): {inner}")
        self.point = point


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _check_keys(obj: dict, allowed: set[str], required: set[str], where: str) -> None:
    if not isinstance(obj, dict):
        raise ConfigError(f"{where} must be a JSON object")
    unknown = set(obj) - allowed
    if unknown:
        raise ConfigError(f"unknown key(s) {sorted(unknown)} in {where}")
    missing = required - set(obj)
    if missing:
        raise ConfigError(f"missing key(s) {sorted(missing)} in {where}")


def _parse_curve(desc: dict) -> ParamCurve:
    _check_keys(desc, {"kind", "heights", "x", "y", "domain"}, {"kind"}, "curve")
    kind = desc["kind"]
    if kind == "parallel-lines":
        return parallel_lines([float(h) for h in desc.get("heights", [])])
    if kind == "expr":
        for key in ("x", "y", "domain"):
            if key not in desc:
                raise ConfigError(f"expr curve needs {key!r}")
        dom = desc["domain"]
        return ParamCurve(
            "expr",
            x_expr=parse(desc["x"]),
            y_expr=parse(desc["y"]),
            expr_domain=(float(dom[0]), float(dom[1])),
        )
    try:
        return ParamCurve(kind)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def _parse_decay(desc: Optional[dict]) -> Optional[Decay]:
    if desc is None:
        return None
    _check_keys(desc, {"kind", "lo", "hi", "rate", "amplitude"}, {"kind"}, "decay")
    kind = desc["kind"]
    try:
        if kind == "compact":
            return CompactSupport(float(desc["lo"]), float(desc["hi"]))
        if kind == "exp":
            return ExpDecay(float(desc["rate"]), float(desc.get("amplitude", 1.0)))
        if kind == "gaussian":
            return GaussianDecay(float(desc.get("rate", 1.0)), float(desc.get("amplitude", 1.0)))
    except (KeyError, ValueError) as exc:
        raise ConfigError(f"bad decay: {exc}") from None
    raise ConfigError(f"unknown decay kind {kind!r}")


def _parse_set(desc: dict) -> PlanarSet:
    _check_keys(
        desc,
        {"kind", "point", "direction", "radius", "alpha", "beta", "lines", "curve", "fibers", "periodic2"},
        {"kind"},
        "lambda",
    )
    kind = desc["kind"]
    try:
        if kind == "line":
            return Line(tuple(map(float, desc["point"])), tuple(map(float, desc["direction"])))
        if kind == "lines":
            return Lines(
                tuple(
                    Line(tuple(map(float, item["point"])), tuple(map(float, item["direction"])))
                    for item in desc["lines"]
                )
            )
        if kind == "circle":
            return CircleSet(float(desc["radius"]))
        if kind == "lattice-cross":
            return LatticeCross(float(desc["alpha"]), float(desc["beta"]))
        if kind == "curve":
            return CurveSet(_parse_curve(desc["curve"]))
        if kind == "fibers":
            fibers = tuple(fl.Fiber(float(f["xi"]), tuple(map(float, f["sigma"]))) for f in desc["fibers"])
            return FiberList(fibers, bool(desc.get("periodic2", False)))
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"bad lambda: {exc}") from None
    raise ConfigError(f"unknown lambda kind {kind!r}")


def _load_config(path: str) -> dict:
    try:
        raw = sys.stdin.read() if path == "-" else open(path, "r", encoding="utf-8").read()
        cfg = json.loads(raw)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config: {exc}") from None
    _check_keys(
        cfg,
        {"curve", "density", "decay", "lambda", "grid", "samples", "window", "quad", "output"},
        {"curve", "density"},
        "config",
    )
    if ("grid" in cfg) == ("lambda" in cfg):
        raise ConfigError("config needs exactly one of 'grid' or 'lambda'")
    return cfg


def _grid_points(grid: dict) -> list[tuple[float, float]]:
    _check_keys(grid, {"xi", "eta"}, {"xi", "eta"}, "grid")
    axes = []
    for key in ("xi", "eta"):
        axis = grid[key]
        if not (isinstance(axis, list) and len(axis) == 3):
            raise ConfigError(f"grid.{key} must be [min, max, n]")
        lo, hi, n = float(axis[0]), float(axis[1]), int(axis[2])
        if n < 1:
            raise ConfigError(f"grid.{key} is empty (n = {n})")
        if n == 1:
            axes.append([lo])
        else:
            axes.append([lo + (hi - lo) * i / (n - 1) for i in range(n)])
    return [(x, y) for x in axes[0] for y in axes[1]]


def cmd_ft(args: argparse.Namespace) -> int:
    cfg = _load_config(args.config)
    curve = _parse_curve(cfg["curve"])
    density_sources = cfg["density"]
    if not isinstance(density_sources, list) or not all(isinstance(d, str) for d in density_sources):
        raise ConfigError("density must be a list of expression strings")
    try:
        densities = tuple(parse(d) for d in density_sources)
    except ExprSyntaxError as exc:
        raise ConfigError(f"bad density: {exc}") from None
    decay = _parse_decay(cfg.get("decay"))
    try:
        measure = Measure(curve, densities, decay)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    if decay is None:
        for comp in range(curve.n_components):
            lo, hi = curve.domain(comp)
            if math.isinf(lo) or math.isinf(hi):
                raise ConfigError(
                    f"curve {curve.kind!r} has an unbounded domain: the config must declare a decay envelope"
                )
    quad = cfg.get("quad", {})
    _check_keys(quad, {"abs_tol", "rel_tol"}, set(), "quad")
    try:
        opts = QuadOpts(
            abs_tol=float(quad.get("abs_tol", 1e-10)), rel_tol=float(quad.get("rel_tol", 1e-10))
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    if "grid" in cfg:
        points = _grid_points(cfg["grid"])
    else:
        lam = _parse_set(cfg["lambda"])
        window = cfg.get("window")
        if not (isinstance(window, list) and len(window) == 4):
            raise ConfigError("lambda evaluation needs 'window': [xmin, xmax, ymin, ymax]")
        n = int(cfg.get("samples", 256))
        try:
            points = sample_set(lam, n, tuple(map(float, window)))
        except (ValueError, EmptyIntersectionError) as exc:
            raise ConfigError(str(exc)) from None
    try:
        values = mu_hat_at_points(measure, points, opts)
    except QuadratureError:
        # rerun sequentially to find and report the failing point
        values = []
        for x, y in points:
            try:
                values.append(mu_hat(measure, x, y, opts))
            except QuadratureError as exc:
                raise PointFailure((x, y), exc) from exc
    output = args.output or cfg.get("output", "csv")
    if output not in ("csv", "json"):
        raise ConfigError(f"unknown output format {output!r}")
    rows = [
        (x, y, ft.value.real, ft.value.imag, abs(ft.value), ft.err_estimate)
        for (x, y), ft in zip(points, values)
    ]
    if output == "csv":
        print("xi,eta,re,im,abs,err")
        for row in rows:
            print(",".join(_fmt(v) for v in row))
    else:
        payload = {
            "schema_version": SCHEMA_VERSION,
            "command": "ft",
            "rows": [
                {"xi": r[0], "eta": r[1], "re": r[2], "im": r[3], "abs": r[4], "err": r[5]} for r in rows
            ],
        }
        print(json.dumps(payload, indent=2))
    return EXIT_OK


def _curve_to_dict(curve: ParamCurve) -> dict:
    out: dict[str, Any] = {"kind": curve.kind}
    if curve.kind == "parallel-lines":
        out["heights"] = list(curve.heights)
    if curve.kind == "expr":
        out["x"] = pretty(curve.x_expr)
        out["y"] = pretty(curve.y_expr)
        out["domain"] = list(curve.expr_domain)
    return out


def _decay_to_dict(decay: Optional[Decay]) -> Optional[dict]:
    if decay is None:
        return None
    if isinstance(decay, CompactSupport):
        return {"kind": "compact", "lo": decay.lo, "hi": decay.hi}
    if isinstance(decay, ExpDecay):
        return {"kind": "exp", "rate": decay.rate, "amplitude": decay.amplitude}
    return {"kind": "gaussian", "rate": decay.rate, "amplitude": decay.amplitude}


def _set_to_dict(lam: PlanarSet) -> dict:
    if isinstance(lam, Line):
        return {"kind": "line", "point": list(lam.point), "direction": list(lam.direction)}
    if isinstance(lam, Lines):
        return {
            "kind": "lines",
            "lines": [{"point": list(l.point), "direction": list(l.direction)} for l in lam.lines],
        }
    if isinstance(lam, CircleSet):
        return {"kind": "circle", "radius": lam.radius}
    if isinstance(lam, LatticeCross):
        return {"kind": "lattice-cross", "alpha": lam.alpha, "beta": lam.beta}
    if isinstance(lam, CurveSet):
        return {"kind": "curve", "curve": _curve_to_dict(lam.curve)}
    return {
        "kind": "fibers",
        "fibers": [{"xi": f.xi, "sigma": list(f.sigma)} for f in lam.fibers],
        "periodic2": lam.periodic2,
    }


def _certificate_to_dict(cert: Certificate) -> dict:
    return {
        "measure": {
            "curve": _curve_to_dict(cert.measure.curve),
            "densities": [pretty(d) for d in cert.measure.densities],
            "decay": _decay_to_dict(cert.measure.decay),
        },
        "lambda": _set_to_dict(cert.lam),
        "window": list(cert.window),
        "witness_point": list(cert.witness_point),
        "residual_on_lambda": cert.residual_on_lambda,
        "witness_magnitude": cert.witness_magnitude,
        "samples_used": cert.samples_used,
        "basis": cert.basis,
    }


def cmd_annihilate(args: argparse.Namespace) -> int:
    case = args.case
    if case == "circle-line":
        cert = witnesses.circle_line_annihilator()
    elif case == "circle-lines":
        cert = witnesses.circle_rational_lines_annihilator(args.j)
    elif case == "circle-bessel":
        cert = witnesses.circle_bessel_circle_annihilator(args.k, args.n)
    elif case == "hyperbola-line":
        cert = witnesses.hyperbola_line_annihilator()
    elif case == "expcurve-vline":
        cert = witnesses.expcurve_vertical_line_annihilator()
    elif case == "fourlines":
        cert = witnesses.fourlines_annihilator(args.p, args.eta0)
    else:  # pragma: no cover - argparse restricts choices
        raise ConfigError(f"unknown case {case!r}")
    report = verify_certificate(cert, n_lambda=args.samples, tol=args.tol)
    payload = {
        "schema_version": SCHEMA_VERSION,
        "command": "annihilate",
        "case": case,
        "certificate": _certificate_to_dict(cert),
        "verification": {
            "ok": report.ok,
            "residual": report.residual,
            "witness_magnitude": report.witness_magnitude,
            "samples_used": report.samples_used,
            "tol": report.tol,
            "message": report.message,
        },
    }
    print(json.dumps(payload, indent=2))
    return EXIT_OK if report.ok else EXIT_CERTIFICATE


def _cx(z: complex) -> list[float]:
    return [z.real, z.imag]


def _etas(text: str, count: int) -> list[float]:
    vals = [float(v) for v in text.split(",") if v.strip()]
    if len(vals) != count:
        raise ConfigError(f"expected {count} comma-separated heights, got {len(vals)}")
    return vals


def cmd_fourlines(args: argparse.Namespace) -> int:
    verb = args.verb
    payload: dict[str, Any] = {"schema_version": SCHEMA_VERSION, "command": f"fourlines {verb}"}
    if verb == "classify":
        cfg = fl.FourLinesConfig(args.p)
        if args.fibers:
            raw = sys.stdin.read() if args.fibers == "-" else open(args.fibers, "r", encoding="utf-8").read()
            try:
                doc = json.loads(raw)
            except json.JSONDecodeError as exc:
                raise ConfigError(f"bad fibers JSON: {exc}") from None
            if isinstance(doc, dict) and "points" in doc:
                fibers = fl.periodize([(float(x), float(y)) for x, y in doc["points"]])
            elif isinstance(doc, dict) and "fibers" in doc:
                try:
                    fibers = [fl.Fiber(float(f["xi"]), tuple(map(float, f["sigma"]))) for f in doc["fibers"]]
                except (KeyError, TypeError, ValueError) as exc:
                    raise ConfigError(f"bad fiber: {exc}") from None
            else:
                raise ConfigError("fibers JSON must contain 'points' or 'fibers'")
        else:
            raise ConfigError("classify needs --fibers FILE (or - for stdin)")
        payload["p"] = args.p
        payload["results"] = [
            {
                "xi": fiber.xi,
                "sigma": list(fiber.sigma),
                "class": (cls := fl.classify(fiber, cfg)).tag,
                "witness": list(cls.witness),
            }
            for fiber in fibers
        ]
    else:
        import cmath

        if verb == "delta":
            e0, e1 = _etas(args.etas, 2)
            a, b = cmath.exp(1j * math.pi * e0), cmath.exp(1j * math.pi * e1)
            d0, d1 = fl.solve_delta(a, b)
            payload.update({"etas": [e0, e1], "delta0": _cx(d0), "delta1": _cx(d1)})
        else:
            e0, e1, e2 = _etas(args.etas, 3)
            a, b, c = (cmath.exp(1j * math.pi * e) for e in (e0, e1, e2))
            payload["etas"] = [e0, e1, e2]
            if verb == "tau":
                t0, t1, t2 = fl.solve_tau(a, b, c, args.p)
                payload.update({"p": args.p, "tau0": _cx(t0), "tau1": _cx(t1), "tau2": _cx(t2)})
            elif verb == "e":
                v0, v1, v2 = fl.solve_e(a, b, c)
                payload.update({"e0": _cx(v0), "e1": _cx(v1), "e2": _cx(v2)})
            else:  # rho
                payload["rho"] = _cx(fl.rho(a, b, c))
    print(json.dumps(payload, indent=2))
    return EXIT_OK


def cmd_bessel(args: argparse.Namespace) -> int:
    payload: dict[str, Any] = {"schema_version": SCHEMA_VERSION, "command": f"bessel {args.verb}"}
    if args.verb == "j":
        order = bessel_mod.Order.of(args.order)
        payload.update({"order": str(order), "x": args.x, "value": bessel_mod.bessel_j(order, args.x)})
    elif args.verb == "zero":
        order = bessel_mod.Order.of(args.order)
        payload.update({"order": str(order), "n": args.n, "zero": bessel_mod.bessel_zero(order, args.n)})
    else:  # nonzero
        parity = AllIntegers() if args.parity == "integers" else EvenHalfIntegers(args.dim)
        payload.update(
            {
                "x": args.x,
                "parity": args.parity,
                "nonzero_for_all_orders": bessel_mod.all_orders_nonzero(args.x, parity),
            }
        )
        if args.parity == "half":
            payload["dim"] = args.dim
    print(json.dumps(payload, indent=2))
    return EXIT_OK


def _parse_angle(text: str):
    if "/" in text:
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise ConfigError(f"bad angle {text!r}: {exc}") from None
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        raise ConfigError(f"bad angle {text!r}") from None


def cmd_verdict(args: argparse.Namespace) -> int:
    params: dict[str, Any] = {}
    if args.alpha is not None:
        params["alpha"] = args.alpha
    if args.beta is not None:
        params["beta"] = args.beta
    if args.radius is not None:
        params["radius"] = args.radius
    if args.angle is not None:
        params["angle"] = _parse_angle(args.angle)
    if args.direction is not None:
        params["direction"] = tuple(float(v) for v in args.direction.split(","))
    if args.normal is not None:
        params["normal"] = tuple(float(v) for v in args.normal.split(","))
    if args.dim is not None:
        params["dim"] = args.dim
    if args.p is not None:
        params["p"] = args.p
    if args.eta0 is not None:
        params["eta0"] = args.eta0
    try:
        verdict = witnesses.known_pair_verdict(args.pair, **params)
    except KeyError as exc:
        raise ConfigError(f"missing parameter {exc} for pair {args.pair!r}") from None
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    payload = {
        "schema_version": SCHEMA_VERSION,
        "command": "verdict",
        "pair": args.pair,
        "params": {k: (str(v) if isinstance(v, Fraction) else v) for k, v in params.items()},
        "answer": verdict.answer,
        "source": verdict.source,
        "condition": verdict.condition,
    }
    print(json.dumps(payload, indent=2))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="huplab",
        description="Fourier transforms of measures on plane curves, annihilating-measure "
        "certificates, Bessel utilities, and four-parallel-lines fiber algebra.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_ft = sub.add_parser("ft", help="evaluate a measure transform on a grid or on test-set samples")
    p_ft.add_argument("--config", required=True, help="JSON config file, or - for stdin")
    p_ft.add_argument("--output", choices=("csv", "json"), default=None)
    p_ft.set_defaults(func=cmd_ft)

    p_ann = sub.add_parser("annihilate", help="construct and verify an annihilating-measure certificate")
    p_ann.add_argument(
        "case",
        choices=(
            "circle-line",
            "circle-lines",
            "circle-bessel",
            "hyperbola-line",
            "expcurve-vline",
            "fourlines",
        ),
    )
    p_ann.add_argument("--j", type=int, default=3, help="number of concurrent lines (circle-lines)")
    p_ann.add_argument("--k", type=int, default=0, help="circle coefficient order (circle-bessel)")
    p_ann.add_argument("--n", type=int, default=1, help="zero index (circle-bessel)")
    p_ann.add_argument("--p", type=int, default=3, help="fourth-line height (fourlines)")
    p_ann.add_argument("--eta0", type=float, default=0.0, help="fiber height in [0,2) (fourlines)")
    p_ann.add_argument("--samples", type=int, default=512)
    p_ann.add_argument("--tol", type=float, default=witnesses.RESIDUAL_TOL)
    p_ann.add_argument("--output", choices=("json",), default="json")
    p_ann.set_defaults(func=cmd_annihilate)

    p_fl = sub.add_parser("fourlines", help="fiber classification and coefficient systems")
    p_fl.add_argument("verb", choices=("classify", "tau", "delta", "e", "rho"))
    p_fl.add_argument("--p", type=int, default=3)
    p_fl.add_argument("--fibers", help="JSON file with 'fibers' or raw 'points' (- for stdin)")
    p_fl.add_argument("--etas", help="comma-separated heights in [0,2), e.g. 0,0.5,1")
    p_fl.add_argument("--output", choices=("json",), default="json")
    p_fl.set_defaults(func=cmd_fourlines)

    p_b = sub.add_parser("bessel", help="Bessel values, zeros, and all-orders checks")
    p_b.add_argument("verb", choices=("j", "zero", "nonzero"))
    p_b.add_argument("--order", default="0", help="integer or half-integer, e.g. 3 or 1/2")
    p_b.add_argument("--x", type=float, default=1.0)
    p_b.add_argument("--n", type=int, default=1)
    p_b.add_argument("--parity", choices=("integers", "half"), default="integers")
    p_b.add_argument("--dim", type=int, default=2, help="ambient dimension for half-integer orders")
    p_b.add_argument("--output", choices=("json",), default="json")
    p_b.set_defaults(func=cmd_bessel)

    p_v = sub.add_parser("verdict", help="HUP / NotHUP / Unknown for cataloged pairs")
    p_v.add_argument("pair")
    p_v.add_argument("--alpha", type=float)
    p_v.add_argument("--beta", type=float)
    p_v.add_argument("--radius", type=float)
    p_v.add_argument("--angle", help="exact rational like 1/3 for rationality checks; floats give Unknown")
    p_v.add_argument("--direction", help="dx,dy")
    p_v.add_argument("--normal", help="comma-separated components")
    p_v.add_argument("--dim", type=int)
    p_v.add_argument("--p", type=int)
    p_v.add_argument("--eta0", type=float)
    p_v.add_argument("--output", choices=("json",), default="json")
    p_v.set_defaults(func=cmd_verdict)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        code = args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ExprSyntaxError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (EmptyIntersectionError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except QuadratureError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except BesselError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
