"""The family f_alpha(z) = alpha (1 + lambda z) / (z + z^2) on the Riemann sphere.

Points are handled in homogeneous coordinates (u : v), z = u/v, so that the
2-cycle {0, oo} and the poles {0, -1} are ordinary points.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .rotation import RotationNumber


def _scale(w: complex, e: int) -> complex:
    return complex(math.ldexp(w.real, e), math.ldexp(w.imag, e))


@dataclass(frozen=True)
class SpherePoint:
    """Homogeneous point (u : v) with max(|u|, |v|) in [1/2, 1)."""

    u: complex
    v: complex

    def __post_init__(self):
        u, v = complex(self.u), complex(self.v)
        m = max(abs(u), abs(v))
        if m == 0 or not math.isfinite(m):
            raise ValueError(f"invalid homogeneous point ({u}, {v})")
        # power-of-two scaling keeps the chart value bit-exact
        _, e = math.frexp(m)
        object.__setattr__(self, "u", _scale(u, -e))
        object.__setattr__(self, "v", _scale(v, -e))

    @classmethod
    def of(cls, z) -> "SpherePoint":
        if isinstance(z, SpherePoint):
            return z
        z = complex(z)
        if cmath.isinf(z):
            return cls(1.0, 0.0)
        return cls(z, 1.0)

    @property
    def is_infinity(self) -> bool:
        return self.v == 0

    def affine(self) -> complex:
        """z = u/v (complex infinity for the point at oo)."""
        if self.v == 0:
            return complex(math.inf, 0.0)
        return self.u / self.v

    def chart(self, center: str) -> complex:
        """Coordinate w = z in the chart of 0, or w = 1/z in the chart of oo."""
        if center == "zero":
            return self.affine()
        if self.u == 0:
            return complex(math.inf, 0.0)
        return self.v / self.u


INFINITY = SpherePoint(1.0, 0.0)
ZERO = SpherePoint(0.0, 1.0)


def chordal(a, b) -> float:
    """Chordal distance 2|z - w| / sqrt((1+|z|^2)(1+|w|^2)), valid at oo."""
    a, b = SpherePoint.of(a), SpherePoint.of(b)
    num = abs(a.u * b.v - b.u * a.v)
    den = math.hypot(abs(a.u), abs(a.v)) * math.hypot(abs(b.u), abs(b.v))
    return 2.0 * num / den


@dataclass(frozen=True)
class MapParams:
    theta: RotationNumber
    alpha: complex

    def __post_init__(self):
        alpha = complex(self.alpha)
        if alpha == 0 or not cmath.isfinite(alpha):
            raise ValueError("alpha must be a nonzero finite complex number")
        object.__setattr__(self, "alpha", alpha)
        lam = self.theta.multiplier
        if abs(abs(lam) - 1.0) >= 1e-14 or lam == 1:
            raise ValueError("multiplier must lie on the unit circle and differ from 1")

    @property
    def lam(self) -> complex:
        return self.theta.multiplier


@dataclass(frozen=True)
class CriticalPair:
    c1: complex
    c2: complex


def eval_f(p: MapParams, z) -> SpherePoint:
    z = SpherePoint.of(z)
    u, v = z.u, z.v
    return SpherePoint(p.alpha * v * (v + p.lam * u), u * (v + u))


def eval_f2(p: MapParams, z) -> SpherePoint:
    # f^2 = (Q/P) (Q + alpha lambda P)/(Q + alpha P) with Q = z + z^2, P = 1 + lambda z
    z = SpherePoint.of(z)
    u, v = z.u, z.v
    q = u * (u + v)
    pp = v * (v + p.lam * u)
    return SpherePoint(q * (q + p.alpha * p.lam * pp), pp * (q + p.alpha * pp))


def df(p: MapParams, z: complex) -> complex:
    """f'(z) = -alpha (lambda z^2 + 2 z + 1) / (z + z^2)^2 for finite z."""
    z = complex(z)
    return -p.alpha * (p.lam * z * z + 2 * z + 1) / (z + z * z) ** 2


def df2(p: MapParams, z: complex) -> complex:
    return df(p, eval_f(p, z).affine()) * df(p, z)


def _sqrt_marked(w: complex) -> complex:
    # branch with Re > 0; on the cut fall back to Im > 0
    s = cmath.sqrt(w)
    if abs(s.real) < 1e-14:
        s = complex(0.0, abs(s.imag))
    elif s.real < 0:
        s = -s
    return s


def critical_points(theta: RotationNumber) -> CriticalPair:
    """Roots of lambda z^2 + 2 z + 1, marked by Re sqrt(1 - lambda) > 0."""
    lam = theta.multiplier
    s = _sqrt_marked(1 - lam)
    return CriticalPair(-1 / (1 + s), -1 / (1 - s))


def tau(theta: RotationNumber, z) -> SpherePoint:
    """The involution tau(z) = 1/(lambda z)."""
    z = SpherePoint.of(z)
    return SpherePoint(z.v, theta.multiplier * z.u)


class Limit(str, Enum):
    AT_ZERO = "at_zero"
    AT_INFINITY = "at_infinity"


def limit_map(which, theta: RotationNumber, z) -> SpherePoint:
    """g_oo(z) = lambda (z + z^2)/(1 + lambda z) or g_0(z) = (z + z^2)/(1 + lambda z)."""
    which = Limit(which)
    z = SpherePoint.of(z)
    lam = theta.multiplier
    u, v = z.u, z.v
    num = u * (u + v)
    if which is Limit.AT_INFINITY:
        num = lam * num
    return SpherePoint(num, v * (v + lam * u))


def symmetric_param(p: MapParams) -> MapParams:
    """alpha' = exp(-6 pi i theta)/alpha, so that tau f_alpha tau^-1 = f_alpha'."""
    return MapParams(p.theta, p.lam ** -3 / p.alpha)


def alpha_star(theta: RotationNumber) -> complex:
    """The parameter with f_alpha(c2) = c1, i.e. c1 / f_1(c2)."""
    cp = critical_points(theta)
    lam = theta.multiplier
    f1 = (1 + lam * cp.c2) / (cp.c2 + cp.c2 * cp.c2)
    return cp.c1 / f1


def preimages(p: MapParams, w) -> tuple[SpherePoint, SpherePoint]:
    """Both solutions of f_alpha(z) = w, with multiplicity."""
    w = SpherePoint.of(w)
    s, t = w.u, w.v
    # alpha t v (v + lambda u) - s u (u + v) = 0
    a = -s
    b = p.alpha * p.lam * t - s
    c = p.alpha * t
    return _binary_quadratic_roots(a, b, c)


def _binary_quadratic_roots(a, b, c) -> tuple[SpherePoint, SpherePoint]:
    # a u^2 + b u v + c v^2 = 0
    scale = max(abs(a), abs(b), abs(c))
    a, b, c = a / scale, b / scale, c / scale
    if abs(a) >= abs(c):
        if abs(a) < 1e-300:
            raise ValueError("degenerate quadratic")
        # roots in z = u/v
        disc = cmath.sqrt(b * b - 4 * a * c)
        qv = -0.5 * (b + disc if (b.conjugate() * disc).real >= 0 else b - disc)
        r1 = SpherePoint(qv, a)
        r2 = SpherePoint(c, qv) if qv != 0 else SpherePoint(0.0, 1.0)
        return r1, r2
    # roots in 1/z = v/u; swap roles
    disc = cmath.sqrt(b * b - 4 * a * c)
    qv = -0.5 * (b + disc if (b.conjugate() * disc).real >= 0 else b - disc)
    r1 = SpherePoint(c, qv)
    r2 = SpherePoint(qv, a) if qv != 0 else SpherePoint(1.0, 0.0)
    return r1, r2


def critical_set_f2(p: MapParams) -> list[SpherePoint]:
    """{c1, c2} together with f^-1(c1) and f^-1(c2): six points with multiplicity."""
    cp = critical_points(p.theta)
    pts = [SpherePoint.of(cp.c1), SpherePoint.of(cp.c2)]
    pts += list(preimages(p, cp.c1))
    pts += list(preimages(p, cp.c2))
    return pts


def limit_excluded_points(theta: RotationNumber, alpha_magnitude: float) -> tuple[SpherePoint, SpherePoint]:
    """Points where f_alpha^2 does not converge to its limit map: {oo, -1/lambda} or {0, -1}."""
    if alpha_magnitude > 1:
        return INFINITY, SpherePoint.of(-1 / theta.multiplier)
    return ZERO, SpherePoint.of(-1.0)


def admissible_circle_samples(theta: RotationNumber, alpha_magnitude: float, n: int, rng: np.random.Generator,
                              radius: float = 1.0, margin: float = 0.1) -> np.ndarray:
    """n random points of |z| = radius at chordal distance >= 2 margin from the excluded points."""
    excluded = limit_excluded_points(theta, alpha_magnitude)
    out = []
    while len(out) < n:
        z = radius * cmath.exp(2j * math.pi * rng.random())
        if min(chordal(z, e) for e in excluded) >= 2 * margin:
            out.append(z)
    return np.array(out)


def limit_convergence_check(theta: RotationNumber, alpha_magnitude: float, sample_set, phase: float = 0.0,
                            margin: float = 0.1) -> float:
    """Largest chordal distance between f_alpha^2 and its limit map over the samples.

    |alpha| > 1 compares against g_oo, otherwise against g_0. Samples closer
    than ``margin`` (chordally) to the excluded points raise ValueError.
    """
    if alpha_magnitude <= 0:
        raise ValueError("alpha_magnitude must be positive")
    which = Limit.AT_INFINITY if alpha_magnitude > 1 else Limit.AT_ZERO
    excluded = limit_excluded_points(theta, alpha_magnitude)
    p = MapParams(theta, alpha_magnitude * cmath.exp(1j * phase))
    worst = 0.0
    bad = []
    for z in sample_set:
        z = SpherePoint.of(z)
        if min(chordal(z, e) for e in excluded) < margin:
            bad.append(z.affine())
            continue
        worst = max(worst, chordal(eval_f2(p, z), limit_map(which, theta, z)))
    if bad:
        raise ValueError(f"{len(bad)} samples violate the chordal margin {margin}: {bad[:3]}")
    return worst


def random_sphere_points(rng: np.random.Generator, n: int, radius: float = 3.0) -> list[complex]:
    """Points uniform in |z| <= radius; used by property checks."""
    r = radius * np.sqrt(rng.random(n))
    t = 2 * np.pi * rng.random(n)
    return list(r * np.exp(1j * t))
