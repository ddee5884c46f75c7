"""Tracing the curve Gamma in the parameter plane by bisection along rays.

Along a ray alpha = t e^{i phi} the classifier reads InteriorType for small t
and ExteriorType for large t. Between the two sits a thin band where both
critical orbits still look like boundary orbits at the finite budget N. Both
edges of the band are bisected in log radius and their log-mean is reported.
Under alpha -> e^{-6 pi i theta}/alpha a ray maps to its mirrored ray with
radii inverted; since the classifier commutes with that map, the bisection
on the mirrored ray visits exactly the inverted radii and the traced curve
comes out symmetric.
"""

from __future__ import annotations

import cmath
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import geometry
from .angle import TWO_PI, conformal_angle
from .boundary import DEFAULT_ORBIT_N, Traps, Verdict, classify_parameter
from .dynamics import MapParams, alpha_star
from .rotation import RotationNumber

DEFAULT_TOL = 1e-3
IOTA_THRESHOLD = 1e-2
PROBE_OFFSET = 0.03
MONOTONE_FRACTION = 0.95


class BracketError(ValueError):
    """A bracket endpoint does not carry the verdict the bisection needs."""


def iota(theta: RotationNumber, alpha):
    """The parameter involution alpha -> e^{-6 pi i theta} / alpha."""
    return theta.multiplier ** -3 / np.asarray(alpha)


class _RayOracle:
    """Cached classification of the radii t e^{i phi} on a single ray."""

    def __init__(self, theta, phi, N, full):
        self.theta, self.phi, self.N, self.full = theta, phi, N, full
        self.cache: dict[float, Verdict] = {}
        self.undetermined = 0

    def alpha(self, t: float) -> complex:
        return t * cmath.exp(1j * self.phi)

    def __call__(self, t: float) -> Verdict:
        v = self.cache.get(t)
        if v is None:
            v = classify_parameter(MapParams(self.theta, self.alpha(t)), self.N, full=self.full).verdict
            self.cache[t] = v
            if v is Verdict.UNDETERMINED:
                self.undetermined += 1
        return v


def _bisect(oracle, lo: float, hi: float, inside, tol: float, nudge: int, retries: int = 3) -> tuple[float, float]:
    """Bisect in log radius: inside(lo) holds, inside(hi) fails.

    Stops once the bracket is narrower than tol / max(t, 1/t) in log units,
    which is below tol in radius and invariant under t -> 1/t. Undetermined
    midpoints are nudged, first in direction ``nudge`` (+1 or -1).
    """
    x, y = math.log(lo), math.log(hi)
    while (y - x) * max(math.exp(y), math.exp(-x)) >= tol:
        mid = 0.5 * (x + y)
        v = oracle(math.exp(mid))
        k = 0
        while v is Verdict.UNDETERMINED and k < retries:
            k += 1
            sign = nudge if k % 2 else -nudge
            m2 = mid + sign * (y - x) * k / 16
            v = oracle(math.exp(m2))
            if v is not Verdict.UNDETERMINED:
                mid = m2
        if inside(v):
            x = mid
        else:
            y = mid
    return math.exp(x), math.exp(y)


@dataclass(frozen=True)
class SwitchResult:
    phi: float
    alpha: complex
    t: float
    interior_edge: tuple[float, float]   # (last InteriorType radius, first non-Interior radius)
    exterior_edge: tuple[float, float]   # (last non-Exterior radius, first ExteriorType radius)
    undetermined_hits: int

    @property
    def width(self) -> float:
        """Largest final bisection bracket."""
        return max(self.interior_edge[1] - self.interior_edge[0], self.exterior_edge[1] - self.exterior_edge[0])

    @property
    def band(self) -> tuple[float, float]:
        """Radii known to classify as InteriorType and ExteriorType."""
        return self.interior_edge[0], self.exterior_edge[1]


def switchover_on_ray(theta: RotationNumber, phi: float, t_lo: float = 1 / 3, t_hi: float = 3.0,
                      tol: float = DEFAULT_TOL, N: int = DEFAULT_ORBIT_N, full: bool = True) -> SwitchResult:
    """Radius where the ray at angle ``phi`` crosses from InteriorType to ExteriorType.

    Both band edges are bisected from the full bracket; with a bracket of the
    form (1/T, T) the sampled radii on the mirrored ray are exactly inverted.
    """
    if not 0 < t_lo < t_hi:
        raise ValueError("need 0 < t_lo < t_hi")
    if tol <= 0:
        raise ValueError("tol must be positive")
    oracle = _RayOracle(theta, phi, N, full)
    v_lo, v_hi = oracle(t_lo), oracle(t_hi)
    if v_lo is not Verdict.INTERIOR or v_hi is not Verdict.EXTERIOR:
        raise BracketError(f"phi={phi:.6f}: bracket verdicts {v_lo.value} at t={t_lo}, {v_hi.value} at t={t_hi}")
    ie = _bisect(oracle, t_lo, t_hi, lambda v: v is Verdict.INTERIOR, tol, +1)
    ee = _bisect(oracle, t_lo, t_hi, lambda v: v is not Verdict.EXTERIOR, tol, -1)
    t = math.exp(sum(math.log(r) for r in (*ie, *ee)) / 4)
    return SwitchResult(phi, oracle.alpha(t), t, ie, ee, oracle.undetermined)


def ray_crossings(theta: RotationNumber, phi: float, t_lo: float = 1 / 3, t_hi: float = 3.0,
                  subdivisions: int = 8, N: int = DEFAULT_ORBIT_N) -> list[tuple[float, float]]:
    """Sub-brackets (geometric subdivision) whose endpoint verdicts differ between Interior and Exterior."""
    ts = np.geomspace(t_lo, t_hi, subdivisions + 1)
    oracle = _RayOracle(theta, phi, N, False)
    vs = [oracle(float(t)) for t in ts]
    out = []
    last = None
    for t, v in zip(ts, vs):
        if v in (Verdict.INTERIOR, Verdict.EXTERIOR):
            if last is not None and last[1] is not v:
                out.append((last[0], float(t)))
            last = (float(t), v)
    return out


@dataclass
class GammaRecord:
    phi: float
    alpha: complex | None            # None marks a gap
    A: float | None = None
    A_tilde: float | None = None
    width: float | None = None
    verdict: str | None = None
    band: tuple[float, float] | None = None
    crossings: int | None = None
    error: str | None = None

    @property
    def is_gap(self) -> bool:
        return self.alpha is None


@dataclass
class GammaCurve:
    theta: RotationNumber
    records: list[GammaRecord]
    tol: float = DEFAULT_TOL
    N: int = DEFAULT_ORBIT_N
    monotone_violations: list[int] = field(default_factory=list)

    @property
    def gaps(self) -> list[int]:
        return [i for i, r in enumerate(self.records) if r.is_gap]

    @property
    def alphas(self) -> np.ndarray:
        return np.array([r.alpha for r in self.records if not r.is_gap], dtype=complex)

    def max_spacing(self) -> float:
        return geometry.max_spacing(self.alphas)

    def reversed(self) -> "GammaCurve":
        return GammaCurve(self.theta, self.records[::-1], self.tol, self.N, [])


def ray_angles(theta: RotationNumber, M: int) -> np.ndarray:
    """M equally spaced ray angles, mapped onto themselves by the involution.

    The involution sends phi to -6 pi theta - phi, which fixes the set
    {-3 pi theta + pi k/M + 2 pi j/M} for each k. Of the two choices of k
    parity, the one putting a ray closest to arg alpha_* is used.
    """
    a = cmath.phase(alpha_star(theta))
    base = -3 * math.pi * float(theta)
    n = round((a - base) * M / math.pi)
    phi0 = base + math.pi * (n % 2) / M
    phis = (phi0 + TWO_PI * np.arange(M) / M) % TWO_PI
    return np.sort(phis)


def angle_monotonicity(values) -> tuple[float, list[int]]:
    """Fraction of consecutive (cyclic) steps sharing the dominant sign, and the violating edge indices."""
    a = np.asarray(values, dtype=float)
    d = np.angle(np.exp(1j * (np.roll(a, -1) - a)))
    sign = 1.0 if d.sum() >= 0 else -1.0
    bad = [int(i) for i in np.nonzero(d * sign <= 0)[0]]
    return 1.0 - len(bad) / len(a), bad


def _trace_ray(theta, phi, t_lo, t_hi, tol, N) -> GammaRecord:
    try:
        sw = switchover_on_ray(theta, phi, t_lo, t_hi, tol, N)
    except BracketError as exc:
        return GammaRecord(float(phi), None, error=str(exc))
    p = MapParams(theta, sw.alpha)
    cls = classify_parameter(p, N)
    m = conformal_angle(p, N, cls, strict=False)
    return GammaRecord(float(phi), sw.alpha, m.A, m.A_tilde, sw.width, cls.verdict.value, sw.band)


def trace_gamma(theta: RotationNumber, M: int = 64, tol: float = DEFAULT_TOL, N: int = DEFAULT_ORBIT_N,
                t_lo: float = 1 / 3, t_hi: float = 3.0, threads: int = 1, crossings: bool = False) -> GammaCurve:
    """Trace Gamma on M rays. Rays whose bracket fails become explicit gap records."""
    if M < 8:
        raise ValueError("M must be >= 8")
    phis = ray_angles(theta, M)
    with ThreadPoolExecutor(max(1, threads)) as ex:
        records = list(ex.map(lambda ph: _trace_ray(theta, ph, t_lo, t_hi, tol, N), phis))
    if crossings:
        for r in records:
            r.crossings = len(ray_crossings(theta, r.phi, t_lo, t_hi, 8, N))
    curve = GammaCurve(theta, records, tol, N)
    As = [r.A for r in records if not r.is_gap]
    if len(As) >= 3:
        _, curve.monotone_violations = angle_monotonicity(As)
    return curve


@dataclass
class GammaReport:
    checks: dict

    @property
    def ok(self) -> bool:
        return all(c["pass"] for c in self.checks.values() if c["pass"] is not None)

    def as_dict(self) -> dict:
        return {"ok": self.ok, "checks": self.checks}


def verify_gamma(curve: GammaCurve, probes: int = 8, probe_offset: float = PROBE_OFFSET,
                 iota_threshold: float = IOTA_THRESHOLD, N: int | None = None) -> GammaReport:
    """Winding, simplicity, involution invariance, A monotonicity and probe checks."""
    N = N or curve.N
    checks: dict = {}
    if curve.gaps:
        checks["no_gaps"] = {"pass": False, "gaps": curve.gaps}
        return GammaReport(checks)
    checks["no_gaps"] = {"pass": True}
    pts = curve.alphas
    crossing = geometry.first_crossing(pts)
    checks["simple"] = {"pass": crossing is None, "crossing": crossing}
    w = geometry.winding_number(pts)
    checks["winding"] = {"pass": abs(w) == 1, "value": w}
    d = geometry.polyline_hausdorff(pts, iota(curve.theta, pts))
    checks["iota_invariance"] = {"pass": d < iota_threshold, "hausdorff": d, "threshold": iota_threshold}
    As = [r.A for r in curve.records]
    if all(a is not None for a in As):
        frac, bad = angle_monotonicity(As)
        octants = sorted({int(a // (TWO_PI / 8)) % 8 for a in As})
        checks["A_monotone"] = {"pass": frac >= MONOTONE_FRACTION, "fraction": frac, "violations": bad}
        checks["A_octants"] = {"pass": len(octants) == 8, "octants": octants}
    else:
        checks["A_monotone"] = {"pass": None, "reason": "no angles recorded"}
    idx = np.linspace(0, len(pts), probes, endpoint=False).astype(int)
    results = []
    for i in idx:
        a = pts[i]
        inner = classify_parameter(MapParams(curve.theta, a * (1 - probe_offset)), N).verdict
        outer = classify_parameter(MapParams(curve.theta, a * (1 + probe_offset)), N).verdict
        results.append({"index": int(i), "inner": inner.value, "outer": outer.value,
                        "pass": inner is Verdict.INTERIOR and outer is Verdict.EXTERIOR})
    checks["probes"] = {"pass": all(r["pass"] for r in results), "rays": results}
    return GammaReport(checks)


def circle_curve(theta: RotationNumber, radius: float, M: int) -> GammaCurve:
    """A round circle in GammaCurve form (used as a negative control)."""
    phis = ray_angles(theta, M)
    return GammaCurve(theta, [GammaRecord(float(ph), radius * cmath.exp(1j * ph)) for ph in phis])
