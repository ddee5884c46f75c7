"""Command-line entry point: ``siegelcycle <subcommand> [flags]``.

Exit codes: 0 success, 1 domain failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import re
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import checks
from .angle import MatchError, NotOnGammaError, conformal_angle
from .boundary import BoundaryError, Traps, Verdict, boundary_curve, classify_parameter, orbit
from .dynamics import MapParams, critical_points, eval_f
from .gamma import trace_gamma, verify_gamma
from .linearization import SmallDivisorError, build_linearizer, functional_residual
from .render import FIGURE1_RECT, Rect, render_julia, render_param_plane, write_png, write_ppm, write_sidecar
from .rotation import RotationNumber, golden, parse_cf

MIN_ORBIT_N = 2000
MIN_SERIES_ORDER = 32

_NUM = r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_COMPLEX = re.compile(rf"^(?P<re>[+-]?{_NUM})(?P<im>[+-]{_NUM})i$")
_REAL = re.compile(rf"^[+-]?{_NUM}$")
_IMAG = re.compile(rf"^(?P<im>[+-]?{_NUM})i$")


def parse_complex(text: str) -> complex:
    """Parse ``a+bi`` / ``a-bi`` (also plain ``a`` or ``bi``); no spaces."""
    t = text.strip()
    m = _COMPLEX.match(t)
    if m:
        z = complex(float(m["re"]), float(m["im"]))
    elif _REAL.match(t):
        z = complex(float(t), 0.0)
    elif (m := _IMAG.match(t)):
        z = complex(0.0, float(m["im"]))
    else:
        raise ValueError(f"malformed complex literal {text!r} (expected a+bi)")
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError(f"non-finite complex literal {text!r}")
    return z


def format_complex(z: complex) -> str:
    """Inverse of parse_complex; repr keeps every bit."""
    im = z.imag
    sign = "-" if math.copysign(1.0, im) < 0 else "+"
    return f"{z.real!r}{sign}{abs(im)!r}i"


def _complex_arg(text):
    try:
        return parse_complex(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _rect_arg(text):
    try:
        return Rect.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _size_arg(text):
    m = re.fullmatch(r"(\d+)x(\d+)", text)
    if not m or int(m[1]) < 1 or int(m[2]) < 1:
        raise argparse.ArgumentTypeError(f"size must look like 200x185, got {text!r}")
    return int(m[1]), int(m[2])


def _cf_arg(text):
    try:
        return parse_cf(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


@dataclass
class RunConfig:
    command: str
    theta: str
    theta_value: float
    alpha: str | None = None
    rect: list[float] | None = None
    resolution: list[int] | None = None
    orbit_n: int = 20000
    render_n: int = 20000
    series_order: int = 128
    tol: float = 1e-3
    match_factor: float = 10.0
    rays: int = 64
    out: str = ""
    threads: int = 1
    seed: int = 0
    quick: bool = False
    extra: dict = field(default_factory=dict)

    def validate(self):
        if self.orbit_n < MIN_ORBIT_N:
            raise ValueError(f"orbit N must be >= {MIN_ORBIT_N}")
        if self.series_order < MIN_SERIES_ORDER:
            raise ValueError(f"series order must be >= {MIN_SERIES_ORDER}")
        if self.rect is not None:
            Rect(*self.rect)
        if self.threads < 1:
            raise ValueError("threads must be >= 1")


class UsageError(Exception):
    pass


class DomainFailure(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    th = common.add_mutually_exclusive_group()
    th.add_argument("--theta-golden", action="store_true", help="theta = (sqrt 5 - 1)/2 (default)")
    th.add_argument("--theta-cf", type=_cf_arg, metavar="PRE:PERIOD",
                    help="eventually periodic continued fraction, e.g. 20:1")
    common.add_argument("--N", type=int, default=None, help="orbit length per critical point (>= 2000)")
    common.add_argument("--series-order", type=int, default=128)
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--quick", action="store_true", help="desk-scale budgets")
    common.add_argument("--out", default=None, help="output path prefix (default: ./<command>)")

    p = argparse.ArgumentParser(prog="siegelcycle", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, help_):
        return sub.add_parser(name, parents=[common], help=help_)

    s = add("classify", "classify a parameter (ExteriorType / InteriorType / OnGamma / Undetermined)")
    s.add_argument("--alpha", type=_complex_arg, required=True)

    s = add("angle", "conformal angles A and A~ of an OnGamma parameter")
    s.add_argument("--alpha", type=_complex_arg, required=True)

    s = add("trace-boundary", "angle-sorted boundary polyline traced by a critical orbit, as CSV")
    s.add_argument("--alpha", type=_complex_arg, required=True)
    s.add_argument("--critical", choices=("c1", "c2"), default="c1")

    s = add("dump-linearizer", "Taylor coefficients and trap radius of a linearizer")
    s.add_argument("--alpha", type=_complex_arg, required=True)
    s.add_argument("--center", choices=("zero", "infinity"), default="zero")

    s = add("trace-gamma", "trace the curve Gamma along rays and verify it")
    s.add_argument("--rays", type=int, default=None, help="ray count M (>= 8)")
    s.add_argument("--tol", type=float, default=1e-3)

    s = add("param-plane", "render the parameter plane")
    s.add_argument("--rect", type=_rect_arg, default=FIGURE1_RECT, metavar="XMIN,XMAX,YMIN,YMAX")
    s.add_argument("--size", type=_size_arg, default=None, metavar="WxH")
    s.add_argument("--png", action="store_true", help="also write a PNG")

    s = add("julia", "render the dynamical plane")
    s.add_argument("--alpha", type=_complex_arg, required=True)
    s.add_argument("--rect", type=_rect_arg, default=Rect(-3.0, 3.0, -3.0, 3.0), metavar="XMIN,XMAX,YMIN,YMAX")
    s.add_argument("--size", type=_size_arg, default=None, metavar="WxH")
    s.add_argument("--png", action="store_true")

    add("verify", "run the property suite and print a pass/fail table")
    return p


def _join_negative_values(argv: list[str]) -> list[str]:
    # "--rect -2,2,..." would otherwise be read as an option
    out, i = [], 0
    while i < len(argv):
        a = argv[i]
        if a in ("--rect", "--alpha") and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"{a}={argv[i + 1]}")
            i += 2
            continue
        out.append(a)
        i += 1
    return out


def _theta(args) -> RotationNumber:
    return args.theta_cf if args.theta_cf is not None else golden()


def make_config(args) -> RunConfig:
    theta = _theta(args)
    cfg = RunConfig(args.command, theta.label(), float(theta))
    alpha = getattr(args, "alpha", None)
    cfg.alpha = format_complex(alpha) if alpha is not None else None
    cfg.quick = args.quick
    cfg.series_order = args.series_order
    cfg.threads = args.threads
    cfg.seed = args.seed
    cfg.out = args.out or f"./{args.command}"
    if args.N is not None:
        cfg.orbit_n = cfg.render_n = args.N
    elif args.quick:
        cfg.orbit_n = cfg.render_n = 5000
    if hasattr(args, "rect"):
        cfg.rect = args.rect.as_list()
    if hasattr(args, "size"):
        cfg.resolution = list(args.size or ((64, 59) if args.quick else (200, 185)))
    if hasattr(args, "tol"):
        cfg.tol = args.tol
    if hasattr(args, "rays"):
        cfg.rays = args.rays or (16 if args.quick else 64)
        if cfg.rays < 8:
            raise ValueError("--rays must be >= 8")
    cfg.validate()
    return cfg


def _write_json(path: Path, obj) -> None:
    path.write_text(json.dumps(obj, indent=2, sort_keys=True, default=_json_default) + "\n")


def _json_default(o):
    if isinstance(o, complex):
        return [o.real, o.imag]
    if isinstance(o, (np.floating, np.integer)):
        return o.item()
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(type(o).__name__)


def _emit(cfg: RunConfig, result: dict, stdout: bool = True) -> None:
    doc = {"config": asdict(cfg), "result": result}
    _write_json(Path(cfg.out + ".json"), doc)
    if stdout:
        print(json.dumps(result, sort_keys=True, default=_json_default))


def cmd_classify(cfg, theta, args):
    c = classify_parameter(MapParams(theta, args.alpha), cfg.orbit_n, series_order=cfg.series_order)
    _emit(cfg, c.as_dict())
    if c.verdict is Verdict.UNDETERMINED:
        raise DomainFailure("classification is Undetermined")


def cmd_angle(cfg, theta, args):
    p = MapParams(theta, args.alpha)
    try:
        m = conformal_angle(p, cfg.orbit_n)
    except (NotOnGammaError, MatchError, BoundaryError) as exc:
        _emit(cfg, {"alpha": [p.alpha.real, p.alpha.imag], "error": str(exc)})
        raise DomainFailure(str(exc)) from exc
    _emit(cfg, {"alpha": [p.alpha.real, p.alpha.imag], "A": m.A, "A_tilde": m.A_tilde, "theta": float(theta),
                "match_error": max(m.match_error, m.match_error_tilde), "N": m.samples_used})


def cmd_trace_boundary(cfg, theta, args):
    p = MapParams(theta, args.alpha)
    cp = critical_points(theta)
    if args.critical == "c1":
        seed, chart = cp.c1, "zero"
    else:
        seed, chart = cp.c2, "infinity"
    tr = orbit(p, seed, cfg.orbit_n, Traps.build(p, cfg.series_order), chart)
    try:
        curve = boundary_curve(tr, theta)
    except BoundaryError as exc:
        _emit(cfg, {"error": str(exc), "trap_entry": tr.trap_entry})
        raise DomainFailure(str(exc)) from exc
    path = Path(cfg.out + ".csv")
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["n", "frac", "re_w", "im_w"])
        for n, fr, z in zip(curve.indices, curve.fracs, curve.points):
            w.writerow([int(n), repr(float(fr)), repr(float(z.real)), repr(float(z.imag))])
    rmin, rmax = curve.radii()
    _emit(cfg, {"csv": str(path), "chart": chart, "points": len(curve), "simple": curve.is_simple(),
                "winding": curve.winding(), "rmin": rmin, "rmax": rmax})


def cmd_dump_linearizer(cfg, theta, args):
    p = MapParams(theta, args.alpha)
    try:
        lin = build_linearizer(p, args.center, cfg.series_order)
    except SmallDivisorError as exc:
        raise DomainFailure(str(exc)) from exc
    res = None
    if lin.radius_estimate is not None:
        res = functional_residual(lin, p, lin.radius_estimate / 3)
    _emit(cfg, {
        "center": lin.center,
        "scale": lin.scale,
        "coefficients_scaled": [[c.real, c.imag] for c in lin.coefficients],
        "radius_estimate": lin.radius_estimate,
        "trap_radius": lin.trap_radius,
        "residual_at_third_radius": res,
    }, stdout=False)
    print(json.dumps({"center": lin.center, "radius_estimate": lin.radius_estimate, "trap_radius": lin.trap_radius,
                      "residual_at_third_radius": res, "json": cfg.out + ".json"}))
    if lin.trap_radius is None:
        raise DomainFailure("trap construction failed")


def cmd_trace_gamma(cfg, theta, args):
    curve = trace_gamma(theta, cfg.rays, cfg.tol, cfg.orbit_n, threads=cfg.threads)
    path = Path(cfg.out + ".csv")
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["phi", "re_alpha", "im_alpha", "A", "bracket_width"])
        for r in curve.records:
            if r.is_gap:
                w.writerow([repr(r.phi), "gap", "gap", "gap", "gap"])
            else:
                w.writerow([repr(r.phi), repr(r.alpha.real), repr(r.alpha.imag), repr(r.A), repr(r.width)])
    rep = verify_gamma(curve)
    _emit(cfg, {"csv": str(path), "gaps": curve.gaps, "verify": rep.as_dict()})
    if not rep.ok:
        raise DomainFailure("gamma verification failed")


def _render_outputs(cfg, img, args):
    ppm = write_ppm(img, cfg.out + ".ppm")
    outs = {"ppm": str(ppm)}
    if args.png:
        outs["png"] = str(write_png(img, cfg.out + ".png"))
    write_sidecar(img, cfg.out + ".json", {"config": asdict(cfg), "outputs": outs})
    print(json.dumps({**outs, "json": cfg.out + ".json", "counts": img.counts()}))


def cmd_param_plane(cfg, theta, args):
    w, h = cfg.resolution
    img = render_param_plane(theta, Rect(*cfg.rect), w, h, cfg.render_n, cfg.threads)
    _render_outputs(cfg, img, args)


def cmd_julia(cfg, theta, args):
    w, h = cfg.resolution
    try:
        img = render_julia(MapParams(theta, args.alpha), Rect(*cfg.rect), w, h, cfg.render_n, cfg.threads,
                           cfg.series_order)
    except RuntimeError as exc:
        raise DomainFailure(str(exc)) from exc
    _render_outputs(cfg, img, args)


def cmd_verify(cfg, theta, args):
    results = checks.run_suite(theta, cfg.quick, cfg.seed)
    width = max(len(r.name) for r in results)
    for r in results:
        print(f"{'PASS' if r.passed else 'FAIL'}  {r.name:<{width}}  {r.seconds:7.2f}s  {r.detail}")
    _emit(cfg, {"checks": [asdict(r) for r in results]}, stdout=False)
    if not all(r.passed for r in results):
        raise DomainFailure("some checks failed")


COMMANDS = {
    "classify": cmd_classify,
    "angle": cmd_angle,
    "trace-boundary": cmd_trace_boundary,
    "dump-linearizer": cmd_dump_linearizer,
    "trace-gamma": cmd_trace_gamma,
    "param-plane": cmd_param_plane,
    "julia": cmd_julia,
    "verify": cmd_verify,
}


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(_join_negative_values(argv))
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = make_config(args)
    except ValueError as exc:
        parser.print_usage(sys.stderr)
        print(f"siegelcycle: error: {exc}", file=sys.stderr)
        return 2
    try:
        COMMANDS[args.command](cfg, _theta(args), args)
    except DomainFailure as exc:
        print(f"siegelcycle: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"siegelcycle: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
