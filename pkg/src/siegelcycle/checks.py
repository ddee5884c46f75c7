"""Desk-scale property suite behind the ``verify`` subcommand."""

from __future__ import annotations

import cmath
import math
import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import dynamics as dyn
from .angle import circle_distance, conformal_angle
from .boundary import Verdict, boundary_curve, classify_parameter, orbit, Traps
from .linearization import build_linearizer, functional_residual
from .rotation import RotationNumber, from_quotients, golden

FIG3_THETA = from_quotients([20], [1])
FIG3_ALPHA = 0.30689283 + 0.11243024j


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str
    seconds: float


def _random_alphas(rng, n):
    return [cmath.exp(complex(rng.uniform(-1.5, 1.5), rng.uniform(0, 2 * math.pi))) for _ in range(n)]


def check_symmetry(theta, rng):
    worst = 0.0
    for _ in range(100):
        a = cmath.exp(complex(rng.uniform(-2, 2), rng.uniform(0, 2 * math.pi)))
        z = complex(rng.normal(), rng.normal()) * 2
        p = dyn.MapParams(theta, a)
        q = dyn.symmetric_param(p)
        lhs = dyn.tau(theta, dyn.eval_f(p, z))
        rhs = dyn.eval_f(q, dyn.tau(theta, z))
        worst = max(worst, dyn.chordal(lhs, rhs))
    return worst < 1e-10, f"max chordal defect {worst:.2e}"


def check_multiplier(theta, rng):
    worst = 0.0
    h = 1e-6
    for a in _random_alphas(rng, 10):
        p = dyn.MapParams(theta, a)
        d = (dyn.eval_f2(p, h).affine() - dyn.eval_f2(p, -h).affine()) / (2 * h)
        worst = max(worst, abs(d - theta.multiplier))
    return worst < 1e-6, f"max |(f^2)'(0) - lambda| {worst:.2e}"


def check_critical(theta, rng):
    worst = 0.0
    thetas = [theta] + [from_quotients([], [k]) for k in range(2, 11)]
    for t in thetas[:10]:
        lam = t.multiplier
        cp = dyn.critical_points(t)
        worst = max(worst, abs(cp.c1 + cp.c2 + 2 / lam), abs(cp.c1 * cp.c2 - 1 / lam),
                    abs(dyn.tau(t, cp.c1).affine() - cp.c2))
    return worst < 1e-12, f"max identity defect {worst:.2e}"


def check_linearizer(theta, rng):
    p = dyn.MapParams(theta, 1.0)
    lin = build_linearizer(p, "zero", 128)
    if lin.radius_estimate is None:
        return False, "radius estimate unavailable"
    r = functional_residual(lin, p, lin.radius_estimate / 3)
    return r < 1e-8, f"residual {r:.2e} at radius {lin.radius_estimate / 3:.4f}"


def check_limits(theta, rng):
    big = dyn.limit_convergence_check(theta, 1e6, dyn.admissible_circle_samples(theta, 1e6, 50, rng),
                                      phase=rng.uniform(0, 2 * math.pi))
    small = dyn.limit_convergence_check(theta, 1e-6, dyn.admissible_circle_samples(theta, 1e-6, 50, rng),
                                        phase=rng.uniform(0, 2 * math.pi))
    return max(big, small) < 1e-4, f"|alpha|=1e6: {big:.2e}, |alpha|=1e-6: {small:.2e}"


def check_figure3(theta, rng):
    p = dyn.MapParams(FIG3_THETA, FIG3_ALPHA)
    c1 = dyn.critical_points(FIG3_THETA).c1
    z = dyn.SpherePoint.of(c1)
    for _ in range(3):
        z = dyn.eval_f(p, z)
    d = dyn.chordal(z, c1)
    return d < 1e-5, f"chordal |f^3(c1) - c1| = {d:.2e}"


def check_figure3_julia(theta, rng):
    from .kernels import julia_tile
    from .linearization import build_traps

    p = dyn.MapParams(FIG3_THETA, FIG3_ALPHA)
    r0, rinf = build_traps(p)
    tags = np.empty(1, dtype=np.int64)
    steps = np.empty(1, dtype=np.int64)
    julia_tile(p.alpha, p.lam, np.array([dyn.critical_points(FIG3_THETA).c1]), 100_000, r0, rinf, tags, steps)
    return tags[0] == 2 and r0 > 0 and rinf > 0, f"c1: no trap entry in {steps[0] - 1} steps" if tags[0] == 2 \
        else f"c1 hit a trap at step {steps[0]}"


def check_boundary(theta, rng, N=20000):
    p = dyn.MapParams(theta, 3.0)
    traps = Traps.build(p)
    tr = orbit(p, dyn.critical_points(theta).c1, N, traps)
    if tr.trap_entry is not None:
        return False, f"c1 orbit entered a trap at {tr.trap_entry}"
    curve = boundary_curve(tr, theta)
    simple, w = curve.is_simple(), curve.winding()
    v1 = classify_parameter(p, N).verdict
    v2 = classify_parameter(dyn.MapParams(theta, theta.multiplier ** -3 / 3), N).verdict
    ok = simple and w == 1 and v1 is Verdict.EXTERIOR and v2 is Verdict.INTERIOR
    return ok, f"simple={simple} winding={w} alpha=3: {v1.value}, iota(3): {v2.value}"


def check_alpha_star(theta, rng, N=20000):
    p = dyn.MapParams(theta, dyn.alpha_star(theta))
    c = classify_parameter(p, N)
    if c.verdict is not Verdict.ON_GAMMA:
        return False, f"alpha_* classifies as {c.verdict.value}"
    m = conformal_angle(p, N, c)
    a = circle_distance(m.A, 0.0)
    return a < 1e-2, f"|A(alpha_*)| = {a:.2e}, relation defect {m.relation_defect:.2e}"


def check_gamma(theta, rng, M=64, tol=1e-3):
    from .gamma import trace_gamma, verify_gamma

    curve = trace_gamma(theta, M, tol)
    rep = verify_gamma(curve)
    failed = [k for k, v in rep.checks.items() if v["pass"] is False]
    defects = [circle_distance(r.A - r.A_tilde, 2 * math.pi * float(theta)) for r in curve.records if r.A is not None]
    ok = rep.ok and max(defects) < 5e-3
    return ok, f"M={M}: failed={failed or 'none'}, max angle-relation defect {max(defects):.2e}"


GOLDEN_SUITE: list[tuple[str, Callable, bool]] = [
    # (name, check, included in --quick)
    ("conjugacy symmetry", check_symmetry, True),
    ("multiplier", check_multiplier, True),
    ("critical identities", check_critical, True),
    ("linearizer residual", check_linearizer, True),
    ("limit maps", check_limits, True),
    ("figure-3 anchor", check_figure3, True),
    ("boundary tracer", check_boundary, True),
    ("alpha_* anchor", check_alpha_star, True),
    ("gamma M=16", lambda t, r: check_gamma(t, r, M=16), True),
    ("gamma M=64", check_gamma, False),
]

GENERIC_SUITE = GOLDEN_SUITE[:5]


def run_suite(theta: RotationNumber, quick: bool = False, seed: int = 0) -> list[CheckResult]:
    """Run the suite for ``theta``. Non-golden rotation numbers get the algebraic checks plus the
    figure-3 anchor when theta is [0; 20, 1, 1, ...]."""
    if theta == golden():
        suite = [s for s in GOLDEN_SUITE if s[2] or not quick]
        if not quick:
            suite = [s for s in suite if s[0] != "gamma M=16"]
    else:
        suite = list(GENERIC_SUITE)
        if theta == FIG3_THETA:
            suite.append(("figure-3 anchor", check_figure3, True))
            suite.append(("figure-3 c1 in Julia set", check_figure3_julia, True))
    out = []
    for name, fn, _ in suite:
        rng = np.random.default_rng(seed)
        t0 = time.perf_counter()
        try:
            ok, detail = fn(theta, rng)
        except Exception as exc:  # report, never crash the table
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        out.append(CheckResult(name, bool(ok), detail, time.perf_counter() - t0))
    return out
