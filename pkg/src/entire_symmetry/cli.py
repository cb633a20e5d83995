"""Command-line front end.

    entire-symmetry symmetries --f "z^3"
    entire-symmetry symmetries --f "z^4+z^2" --at "0.7071067811865476i"
    entire-symmetry verify --f "cos(z)" --map 1/1 --b 6.283185307179586
    entire-symmetry orbit --f "z^3" --at 1 --depth 3
    entire-symmetry roots --f "cos(z)" --box=-7,-1,7,1 --grid 40

Exit codes: 0 ran (a missing symmetry is a result, not an error), 1 usage
error, 2 numeric failure. Errors are reported in the output as well.
"""
from __future__ import annotations

import argparse
import json
import math
import re
import sys
from dataclasses import dataclass, field, replace
from typing import Optional, Union

from .expr import ExprSyntaxError, NotEntireError, fold_constant, format_expr, is_constant, parse, to_polynomial
from .gaussian import GaussianRational
from .roots import BoxRequired, ConstantFunctionError, NoConvergence, SearchBox, critical_points
from .series import AllCoefficientsVanish
from .symmetry import (
    NO_SYMMETRY_MESSAGE,
    AffineMap,
    NoMatchingRoot,
    OrderOne,
    RationalAngle,
    VerificationPolicy,
    cjson,
    fixed_point,
    fixed_point_derivative_check,
    group_closure,
    orbit,
    scan_anchor,
    theta_height,
    verify,
    _raw_zero_order,
)

MODES = ("symmetries", "verify", "orbit", "roots")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    mode: str
    function: str
    at: Optional[str] = None
    box: Optional[str] = None
    grid: int = 40
    theta: Optional[str] = None
    b: Optional[str] = None
    depth: int = 6
    cap: int = 64
    policy: VerificationPolicy = field(default_factory=VerificationPolicy)
    output: str = "json"

    def validate(self):
        if self.mode not in MODES:
            raise UsageError(f"unknown mode {self.mode!r}")
        if not self.function:
            raise UsageError("--f is required")
        if self.mode == "orbit" and self.at is None:
            raise UsageError("orbit needs a base point via --at")
        if self.mode == "verify" and self.theta is None and self.b is None:
            raise UsageError("verify needs --map and/or --b")
        if self.depth < 1 or self.cap < 1 or self.grid < 2:
            raise UsageError("--depth and --cap must be >= 1, --grid >= 2")
        if self.output not in ("json", "text"):
            raise UsageError("output must be json or text")


# ---------------------------------------------------------------- literals

_IMAG_SUFFIX = re.compile(r"(\d|\.)\s*i\b")


def parse_complex(text: str) -> Union[GaussianRational, complex]:
    """``a+bi`` literals (either part optional) or any constant expression such as ``2*pi*i``."""
    src = _IMAG_SUFFIX.sub(r"\1*i", text.strip())
    try:
        node = parse(src)
    except (ExprSyntaxError, NotEntireError) as exc:
        raise UsageError(f"invalid complex literal {text!r}: {exc}") from exc
    if not is_constant(node):
        raise UsageError(f"complex literal {text!r} must not contain z")
    c = fold_constant(node)
    return c.exact if c.exact is not None else c.value


def parse_box(text: str, grid: int) -> SearchBox:
    try:
        re0, im0, re1, im1 = (float(v) for v in text.split(","))
        return SearchBox(complex(re0, im0), complex(re1, im1), grid)
    except ValueError as exc:
        raise UsageError(f"invalid --box {text!r}: expected re0,im0,re1,im1 ({exc})") from exc


# ---------------------------------------------------------------- commands


def _finite(obj):
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else None
    if isinstance(obj, dict):
        return {k: _finite(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_finite(v) for v in obj]
    return obj


def _critical(f, cfg: RunConfig):
    box = parse_box(cfg.box, cfg.grid) if cfg.box else None
    return critical_points(f, box, order=cfg.policy.series_order)


def _discover(f, cfg: RunConfig):
    """Scan every critical point (or only --at); returns (scans, verified maps)."""
    if cfg.at is not None:
        anchors = [parse_complex(cfg.at)]
    else:
        anchors = [cp.exact if cp.exact is not None else cp.location for cp in _critical(f, cfg)]
    scans = [scan_anchor(f, a, cfg.policy) for a in anchors]
    found: list[AffineMap] = []
    for scan in scans:
        for m, _ in scan.verified:
            if not any(m.same_as(x) for x in found):
                found.append(m)
    return scans, found


def _cmd_symmetries(f, cfg: RunConfig) -> dict:
    scans, found = _discover(f, cfg)
    closure = group_closure(found, cfg.cap)
    return {
        "anchors": [s.to_dict() for s in scans],
        "symmetries": [m.to_dict() for m in found],
        "closure": closure.to_dict(),
        "message": None if found else NO_SYMMETRY_MESSAGE,
    }


def _user_map(cfg: RunConfig) -> AffineMap:
    try:
        angle = RationalAngle.parse(cfg.theta) if cfg.theta is not None else RationalAngle(0)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    b = parse_complex(cfg.b) if cfg.b is not None else GaussianRational(0)
    if isinstance(b, GaussianRational):
        return AffineMap(angle, complex(b), b)
    return AffineMap(angle, b)


def _cmd_verify(f, cfg: RunConfig) -> dict:
    phi = _user_map(cfg)
    anchor = parse_complex(cfg.at) if cfg.at is not None else None
    report = verify(f, phi, cfg.policy, None if anchor is None else complex(anchor))
    out = {"report": report.to_dict(), "theta_height": theta_height(phi.angle), "fixed_point": None,
           "fixed_point_derivative": None}
    if not phi.angle.is_zero():
        out["fixed_point"] = cjson(fixed_point(phi))
        if report.verified:
            try:
                n, k = fixed_point_derivative_check(f, phi, cfg.policy.series_order, cfg.policy.zero_tol)
                out["fixed_point_derivative"] = {"n": n, "k": k}
            except NoMatchingRoot as exc:
                out["fixed_point_derivative"] = {"error": str(exc)}
    return out


def _cmd_orbit(f, cfg: RunConfig) -> dict:
    base = complex(parse_complex(cfg.at))
    generators: list[AffineMap] = []
    if cfg.box is not None or to_polynomial(f) is not None:
        _, generators = _discover(f, replace(cfg, at=None))
    extra = None
    if cfg.theta is not None or cfg.b is not None:
        phi = _user_map(cfg)
        extra = verify(f, phi, cfg.policy, base)
        if extra.verified and not any(phi.same_as(g) for g in generators):
            generators.append(phi)
    rep = orbit(base, generators, cfg.depth)
    out = {"orbit": rep.to_dict()}
    if extra is not None:
        out["extra_generator"] = extra.to_dict()
    return out


def _cmd_roots(f, cfg: RunConfig) -> dict:
    pts = []
    for cp in _critical(f, cfg):
        pts.append({
            "location": cjson(cp.location),
            "exact": None if cp.exact is None else str(cp.exact),
            "residual": cp.residual,
            "multiplicity": cp.multiplicity,
            "zero_order": _raw_zero_order(f, cp.location, cfg.policy.series_order, cfg.policy.zero_tol),
        })
    return {"critical_points": pts, "count": len(pts)}


_COMMANDS = {
    "symmetries": _cmd_symmetries,
    "verify": _cmd_verify,
    "orbit": _cmd_orbit,
    "roots": _cmd_roots,
}


def run(cfg: RunConfig) -> tuple[int, dict]:
    """Execute one command; returns (exit code, report)."""
    head = {"command": cfg.mode, "function": cfg.function}
    try:
        cfg.validate()
        f = parse(cfg.function)
        head["parsed"] = format_expr(f)
        head["policy"] = cfg.policy.to_dict()
        body = _COMMANDS[cfg.mode](f, cfg)
    except (UsageError, ExprSyntaxError, NotEntireError, BoxRequired, OrderOne, ConstantFunctionError,
            ValueError) as exc:
        return 1, _finite({**head, "ok": False, "error": {"type": type(exc).__name__, "message": str(exc)}})
    except (NoConvergence, AllCoefficientsVanish, OverflowError, ArithmeticError) as exc:
        return 2, _finite({**head, "ok": False, "error": {"type": type(exc).__name__, "message": str(exc)}})
    return 0, _finite({**head, "ok": True, **body})


# ---------------------------------------------------------------- rendering


def render_json(report: dict) -> str:
    return json.dumps(report, indent=2, allow_nan=False) + "\n"


def _c(d) -> str:
    if d is None:
        return "-"
    return f"{d['re']:.12g}{d['im']:+.12g}i"


def _map_text(m: dict) -> str:
    return f"z -> e^(i*pi*{m['theta']}) z + {_c(m['b'])}"


def render_text(report: dict) -> str:
    lines = [f"{report['command']}: f(z) = {report.get('parsed', report['function'])}"]
    if not report.get("ok"):
        err = report["error"]
        lines.append(f"error ({err['type']}): {err['message']}")
        return "\n".join(lines) + "\n"
    cmd = report["command"]
    if cmd == "symmetries":
        for a in report["anchors"]:
            lines.append(f"critical point {_c(a['anchor'])}: zero order n = {a['zero_order']}")
            for c in a["candidates"]:
                lines.append(f"  {_map_text(c['map'])}: {c['status']} ({c['tier']}, residual {c['max_residual']})")
            if a["message"]:
                lines.append(f"  {a['message']}")
        clo = report["closure"]
        lines.append(f"verified symmetries: {len(report['symmetries'])}; "
                     f"group closure size {clo['size']}{' (truncated)' if clo['truncated'] else ''}")
        if report["message"]:
            lines.append(report["message"])
    elif cmd == "verify":
        r = report["report"]
        lines.append(f"{_map_text(r['map'])}: {r['status']} ({r['tier']} tier, max residual {r['max_residual']})")
        if r.get("witness"):
            lines.append(f"  witness z = {_c(r['witness'])}, residual {r['witness_residual']}")
        lines.append(f"  theta height {report['theta_height']}, fixed point {_c(report['fixed_point'])}")
        if report.get("fixed_point_derivative"):
            lines.append(f"  fixed-point multiplier: {report['fixed_point_derivative']}")
    elif cmd == "orbit":
        o = report["orbit"]
        lines.append(f"orbit of {_c(o['base'])} at depth {o['depth']}: {o['size']} points, "
                     f"min pairwise distance {o['min_pairwise_distance']}")
        for p in o["points"]:
            lines.append(f"  {_c(p)}")
    elif cmd == "roots":
        for p in report["critical_points"]:
            lines.append(f"  {_c(p['location'])}  multiplicity {p['multiplicity']}  "
                         f"zero order {p['zero_order']}  residual {p['residual']:.3g}")
        lines.append(f"{report['count']} critical point(s)")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- argv


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="entire-symmetry", description="Affine automorphic functions of entire functions.")
    sub = parser.add_subparsers(dest="mode", required=True, parser_class=_Parser)
    for mode in MODES:
        p = sub.add_parser(mode)
        p.add_argument("--f", dest="function", required=True, help="expression in z")
        p.add_argument("--at", help="critical point (symmetries), sampling anchor (verify) or base point (orbit)")
        p.add_argument("--box", help="search box re0,im0,re1,im1 for transcendental f (use --box=...)")
        p.add_argument("--grid", type=int, default=40, help="Newton seeds per axis")
        p.add_argument("--order", type=int, default=64, help="series truncation N for zero orders")
        p.add_argument("--check-order", type=int, default=32, help="series order M for verification")
        p.add_argument("--samples", type=int, default=32, help="random samples S for verification")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--radius", type=float, default=None, help="sampling radius (default 2(1+|z0|))")
        p.add_argument("--eps-accept", type=float, default=1e-10)
        p.add_argument("--eps-reject", type=float, default=1e-6)
        p.add_argument("--map", dest="theta", help="rotation angle theta = p/q (multiplier e^(i pi theta))")
        p.add_argument("--b", help="translation part, complex literal")
        p.add_argument("--depth", type=int, default=6)
        p.add_argument("--cap", type=int, default=64, help="maximum group closure size")
        fmt = p.add_mutually_exclusive_group()
        fmt.add_argument("--json", dest="output", action="store_const", const="json")
        fmt.add_argument("--text", dest="output", action="store_const", const="text")
        p.set_defaults(output="json")
    return parser


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    if ns.order < 1 or ns.check_order < 1 or ns.samples < 0 or ns.seed < 0:
        raise UsageError("--order/--check-order must be >= 1; --samples and --seed non-negative")
    policy = VerificationPolicy(
        series_order=ns.order, check_order=ns.check_order, samples=ns.samples, seed=ns.seed,
        radius=ns.radius, eps_accept=ns.eps_accept, eps_reject=ns.eps_reject,
    )
    return RunConfig(mode=ns.mode, function=ns.function, at=ns.at, box=ns.box, grid=ns.grid,
                     theta=ns.theta, b=ns.b, depth=ns.depth, cap=ns.cap, policy=policy, output=ns.output)


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        cfg = config_from_args(build_parser().parse_args(argv))
    except UsageError as exc:
        report = {"command": None, "function": None, "ok": False,
                  "error": {"type": "UsageError", "message": str(exc)}}
        sys.stdout.write(render_json(report))
        return 1
    code, report = run(cfg)
    sys.stdout.write(render_json(report) if cfg.output == "json" else render_text(report))
    return code


if __name__ == "__main__":
    sys.exit(main())
