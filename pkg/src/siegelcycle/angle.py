"""Conformal angles of the critical values on the two Siegel boundaries.

On the boundary of the disk about 0, f^2 acts as the rotation by 2 pi theta
in the linearizing coordinate normalized so that c1 sits at angle 0. The
orbit point z_n therefore sits at angle 2 pi {n theta}. The angle of any
other boundary point follows by locating it among the angle-sorted orbit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .boundary import (DEFAULT_ORBIT_N, Classification, Traps, Verdict, boundary_curve,
                       classify_parameter, orbit)
from .dynamics import MapParams, SpherePoint, critical_points, eval_f

TWO_PI = 2 * math.pi


class NotOnGammaError(ValueError):
    pass


class MatchError(RuntimeError):
    """The target point is too far from the traced boundary."""


@dataclass(frozen=True)
class CurveMatch:
    angle: float          # in [0, 2 pi)
    error: float          # chart distance from target to the interpolated curve point
    nearest_index: int    # orbit index n* of the nearest sample
    spacing: float        # max adjacent spacing of the sorted curve


def locate_on_curve(points: np.ndarray, fracs: np.ndarray, indices: np.ndarray, target: complex) -> CurveMatch:
    """Interpolated boundary angle of ``target`` given angle-sorted samples.

    ``points`` must be sorted by ``fracs`` (fractions of a turn in [0, 1)).
    """
    n = len(points)
    if n < 3:
        raise ValueError("need at least 3 curve samples")
    d = np.abs(points - target)
    j = int(np.argmin(d))
    best = (float(d[j]), float(fracs[j]))
    for k in (j - 1, j + 1):
        a, b = (points[k % n], points[j]) if k < j else (points[j], points[k % n])
        fa, fb = (fracs[k % n], fracs[j]) if k < j else (fracs[j], fracs[k % n])
        if fb < fa:                      # segment crosses angle 0
            fb += 1.0
        ab = b - a
        L2 = abs(ab) ** 2
        if L2 == 0:
            continue
        t = min(1.0, max(0.0, ((target - a) * ab.conjugate()).real / L2))
        err = abs(a + t * ab - target)
        if err < best[0]:
            best = (err, fa + t * (fb - fa))
    spacing = float(np.max(np.abs(np.diff(np.append(points, points[0])))))
    ang = (best[1] % 1.0) * TWO_PI
    if ang >= TWO_PI:
        ang = 0.0
    return CurveMatch(float(ang), float(best[0]), int(indices[j]), spacing)


@dataclass(frozen=True)
class AngleMeasurement:
    A: float
    A_tilde: float
    match_error: float
    samples_used: int
    match_error_tilde: float = 0.0
    spacing: float = 0.0
    spacing_tilde: float = 0.0
    nearest_index: int = 0
    theta: float = 0.0

    @property
    def relation_defect(self) -> float:
        """Distance of A - A_tilde - 2 pi theta from 0 on the circle."""
        return circle_distance(self.A - self.A_tilde - TWO_PI * self.theta, 0.0)

    def as_dict(self) -> dict:
        return {
            "A": self.A,
            "A_tilde": self.A_tilde,
            "match_error": self.match_error,
            "match_error_tilde": self.match_error_tilde,
            "N": self.samples_used,
            "relation_defect": self.relation_defect,
        }


def circle_distance(a: float, b: float) -> float:
    d = (a - b) % TWO_PI
    return min(d, TWO_PI - d)


def _measure(p: MapParams, seed, chart: str, target, N: int, traps: Traps, offset: int = 0) -> CurveMatch:
    tr = orbit(p, seed, N + offset, traps, chart)
    if offset:
        tr.points = tr.points[offset:]
    curve = boundary_curve(tr, p.theta)
    tgt = SpherePoint.of(target).chart(chart)
    m = locate_on_curve(curve.points, curve.fracs, curve.indices, tgt)
    return m


def conformal_angle(p: MapParams, N: int = DEFAULT_ORBIT_N, classification: Classification | None = None,
                    strict: bool = True, traps: Traps | None = None, offset: int = 0) -> AngleMeasurement:
    """A(alpha) and its counterpart on the boundary about oo.

    With ``strict`` the parameter must classify as OnGamma and both matches
    must lie within 10 curve spacings. ``offset`` k re-seeds both orbits at
    their k-th point; the angle origin stays at the original seed.
    """
    if traps is None:
        traps = classification.traps if classification is not None else Traps.build(p)
    if strict:
        if classification is None:
            classification = classify_parameter(p, N, traps)
        if classification.verdict is not Verdict.ON_GAMMA:
            raise NotOnGammaError(f"alpha={p.alpha} classifies as {classification.verdict.value}")
    cp = critical_points(p.theta)
    m0 = _measure(p, cp.c1, "zero", eval_f(p, cp.c2), N, traps, offset)
    mi = _measure(p, eval_f(p, cp.c1), "infinity", cp.c2, N, traps, offset)
    if offset:
        # the re-seeded orbit was sorted by {n theta}; shift back to the original origin
        shift = TWO_PI * float(np.modf(offset * float(p.theta.value))[0])
        m0 = CurveMatch((m0.angle + shift) % TWO_PI, m0.error, m0.nearest_index + offset, m0.spacing)
        mi = CurveMatch((mi.angle + shift) % TWO_PI, mi.error, mi.nearest_index + offset, mi.spacing)
    if strict:
        for name, m in (("A", m0), ("A_tilde", mi)):
            if not m.error < 10 * m.spacing:
                raise MatchError(f"{name}: match error {m.error:.3g} exceeds 10 x spacing {m.spacing:.3g}")
    return AngleMeasurement(m0.angle, mi.angle, m0.error, N, mi.error, m0.spacing, mi.spacing,
                            m0.nearest_index, float(p.theta))
