"""Siegel-disk boundaries traced by critical orbits, and the parameter classifier.

A critical point is accepted as lying on the boundary of its Siegel disk when
its f^2-orbit

* never enters a trap disk,
* stays in a bounded chart annulus,
* keeps returning closer to the seed (closest return over steps [N/2, N]
  is small and clearly below the closest return over [N/8, N/4]), and
* (full mode) sorted by {n theta} gives a simple closed polyline winding
  once around the center.

An orbit captured by a Fatou component lands on an invariant curve at a
fixed distance from the seed, so its returns stop improving; that is what
the third test detects.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from . import geometry, kernels
from .dynamics import MapParams, SpherePoint, critical_points
from .linearization import build_traps
from .rotation import RotationNumber

DEFAULT_ORBIT_N = 20_000
MIN_BOUNDARY_POINTS = 2000
ANNULUS = (1e-4, 1e4)
RECURRENCE_MAX = 0.15
DECAY_MAX = 0.75


class Verdict(str, Enum):
    EXTERIOR = "ExteriorType"
    INTERIOR = "InteriorType"
    ON_GAMMA = "OnGamma"
    UNDETERMINED = "Undetermined"


class BoundaryError(ValueError):
    """The trace cannot be a Siegel boundary (trap entry or too few points)."""


@dataclass(frozen=True)
class Traps:
    """Chart radii of the round trap disks about 0 (w = z) and oo (w = 1/z); 0 disables."""

    r0: float = 0.0
    rinf: float = 0.0

    @classmethod
    def build(cls, p: MapParams, order: int = 128, fraction: float = 0.5) -> "Traps":
        return cls(*build_traps(p, order, fraction))


@dataclass
class OrbitTrace:
    seed: SpherePoint
    chart: str
    points: np.ndarray                 # chart coordinates of z_0, z_1, ... (empty if not stored)
    trap_entry: tuple[int, str] | None
    annulus_ok: bool
    rho_early: float
    rho_late: float
    steps: int
    rmin: float
    rmax: float

    @property
    def recurrence(self) -> float:
        """Closest late return to the seed relative to the seed's chart modulus."""
        return self.rho_late / abs(self.seed.chart(self.chart))

    @property
    def decay(self) -> float:
        return self.rho_late / self.rho_early if self.rho_early > 0 else math.inf

    def sphere_points(self) -> list[SpherePoint]:
        if self.chart == "zero":
            return [SpherePoint.of(w) for w in self.points]
        return [SpherePoint(1.0, w) for w in self.points]


def orbit(p: MapParams, seed, N: int, traps: Traps | None = None, chart: str = "zero",
          annulus=ANNULUS, store: bool = True) -> OrbitTrace:
    """Iterate f^2 from ``seed`` for N steps, testing both traps before every step."""
    if N < 1:
        raise ValueError("N must be >= 1")
    if chart not in ("zero", "infinity"):
        raise ValueError(f"unknown chart {chart!r}")
    traps = traps or Traps()
    seed = SpherePoint.of(seed)
    out = np.empty(N + 1 if store else 0, dtype=np.complex128)
    status = np.empty(8)
    kernels.orbit_kernel(p.alpha, p.lam, seed.u, seed.v, chart == "infinity", N,
                         traps.r0, traps.rinf, annulus[0], annulus[1], out, status)
    steps = int(status[kernels.STEPS])
    trap = None
    if status[kernels.TRAP_STEP] >= 0:
        which = "zero" if status[kernels.TRAP_WHICH] == kernels.TRAP_ZERO else "infinity"
        trap = (int(status[kernels.TRAP_STEP]), which)
    return OrbitTrace(seed, chart, out[: steps + 1] if store else out, trap,
                      bool(status[kernels.ANNULUS_OK]), float(status[kernels.RHO_EARLY]),
                      float(status[kernels.RHO_LATE]), steps,
                      float(status[kernels.RMIN]), float(status[kernels.RMAX]))


@dataclass
class BoundaryCurve:
    """Orbit points sorted by {n theta}: a closed polyline in the chart of ``center``."""

    center: str
    indices: np.ndarray
    fracs: np.ndarray
    points: np.ndarray

    def __len__(self):
        return len(self.points)

    def first_crossing(self):
        return geometry.first_crossing(self.points)

    def is_simple(self) -> bool:
        return self.first_crossing() is None

    def winding(self) -> int:
        return geometry.winding_number(self.points)

    def radii(self) -> tuple[float, float]:
        r = np.abs(self.points)
        return float(r.min()), float(r.max())

    def max_spacing(self) -> float:
        return geometry.max_spacing(self.points)


def _fracs(theta, n: int) -> np.ndarray:
    if isinstance(theta, RotationNumber):
        return theta.frac_multiples(n)
    k = np.arange(n, dtype=np.float64) * float(theta)
    return k - np.floor(k)


def boundary_curve(trace: OrbitTrace, theta, min_points: int = MIN_BOUNDARY_POINTS) -> BoundaryCurve:
    """Sort the trace by the rotation angle {n theta} it would have on the boundary.

    ``theta`` may be a RotationNumber or a plain float (used for negative controls).
    """
    if trace.trap_entry is not None:
        raise BoundaryError(f"trace entered the {trace.trap_entry[1]} trap at step {trace.trap_entry[0]}")
    if len(trace.points) < min_points:
        raise BoundaryError(f"need at least {min_points} orbit points, got {len(trace.points)}")
    fr = _fracs(theta, len(trace.points))
    order = np.argsort(fr, kind="stable")
    return BoundaryCurve(trace.chart, order, fr[order], trace.points[order])


@dataclass
class CriticalEvidence:
    name: str
    chart: str
    on_boundary: bool
    reason: str
    trap_entry: tuple[int, str] | None
    recurrence: float
    decay: float
    annulus_ok: bool
    simple: bool | None = None
    winding: int | None = None

    def as_dict(self) -> dict:
        return {
            "on_boundary": self.on_boundary,
            "reason": self.reason,
            "chart": self.chart,
            "trap_entry": list(self.trap_entry) if self.trap_entry else None,
            "recurrence": _finite(self.recurrence),
            "decay": _finite(self.decay),
            "annulus_ok": self.annulus_ok,
            "simple": self.simple,
            "winding": self.winding,
        }


def _finite(x):
    return float(x) if math.isfinite(x) else None


def assess(p: MapParams, seed, chart: str, N: int, traps: Traps, full: bool = True, name: str = "c") -> CriticalEvidence:
    """Decide whether ``seed`` lies on the boundary of the Siegel disk centred in ``chart``."""
    tr = orbit(p, seed, N, traps, chart, store=full)
    ev = CriticalEvidence(name, chart, False, "", tr.trap_entry, tr.recurrence, tr.decay, tr.annulus_ok)
    if tr.trap_entry is not None:
        ev.reason = f"entered {tr.trap_entry[1]} trap at step {tr.trap_entry[0]}"
        return ev
    if not tr.annulus_ok:
        ev.reason = "left the chart annulus"
        return ev
    if not (tr.recurrence < RECURRENCE_MAX and tr.decay < DECAY_MAX):
        ev.reason = "returns to the seed stopped improving"
        return ev
    if full:
        curve = boundary_curve(tr, p.theta)
        ev.simple = curve.is_simple()
        ev.winding = curve.winding()
        if not ev.simple:
            ev.reason = "angle-sorted polyline self-intersects"
            return ev
        if ev.winding != 1:
            ev.reason = f"winding number {ev.winding} about the center"
            return ev
    ev.on_boundary = True
    ev.reason = "on boundary"
    return ev


@dataclass
class Classification:
    verdict: Verdict
    evidence: dict = field(default_factory=dict)
    alpha: complex = 0j
    N: int = 0
    traps: Traps = field(default_factory=Traps)

    def as_dict(self) -> dict:
        return {
            "verdict": self.verdict.value,
            "alpha": [self.alpha.real, self.alpha.imag],
            "N": self.N,
            "traps": {"r0": self.traps.r0, "rinf": self.traps.rinf},
            "evidence": {k: v.as_dict() for k, v in self.evidence.items()},
        }


def verdict_from(on1: bool, on2: bool) -> Verdict:
    if on1 and on2:
        return Verdict.ON_GAMMA
    if on1:
        return Verdict.EXTERIOR
    if on2:
        return Verdict.INTERIOR
    return Verdict.UNDETERMINED


def classify_parameter(p: MapParams, N: int = DEFAULT_ORBIT_N, traps: Traps | None = None, full: bool = True,
                       series_order: int = 128, fraction: float = 0.5) -> Classification:
    """Which critical point sits on which Siegel boundary at this parameter.

    c1 is tested against the disk about 0 (chart w = z), c2 against the disk
    about oo (chart w = 1/z).
    """
    if full and N < MIN_BOUNDARY_POINTS:
        raise ValueError(f"N must be >= {MIN_BOUNDARY_POINTS} for the full classifier")
    if traps is None:
        traps = Traps.build(p, series_order, fraction)
    cp = critical_points(p.theta)
    e1 = assess(p, cp.c1, "zero", N, traps, full, "c1")
    e2 = assess(p, cp.c2, "infinity", N, traps, full, "c2")
    return Classification(verdict_from(e1.on_boundary, e2.on_boundary), {"c1": e1, "c2": e2}, p.alpha, N, traps)


def hausdorff(a: BoundaryCurve, b: BoundaryCurve) -> float:
    """Symmetric Hausdorff distance between the two curves' point sets in their chart."""
    if a.center != b.center:
        raise ValueError("curves live in different charts")
    return geometry.point_set_hausdorff(a.points, b.points)
