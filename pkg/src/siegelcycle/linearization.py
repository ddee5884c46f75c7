"""Linearizers of f_alpha^2 at the Siegel points 0 and oo.

The return map F is expanded as a power series in the chart of its center
(w = z at 0, w = 1/z at oo) and the conjugacy h(lambda zeta) = F(h(zeta)),
h(zeta) = zeta + b_2 zeta^2 + ..., is solved coefficient by coefficient.

Both series are stored in a rescaled chart w = s * x so that coefficients
stay in floating-point range when the Siegel disk is tiny (|alpha| very
large or very small).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dynamics import MapParams
from .kernels import linearizer_core

CENTERS = ("zero", "infinity")


class SmallDivisorError(ArithmeticError):
    """lambda^n - lambda is too small to divide by at the requested order."""


class TrapError(RuntimeError):
    pass


def _series_div(num, den, order):
    # coefficients of num/den up to x^order; den[0] != 0
    out = np.zeros(order + 1, dtype=complex)
    num = np.concatenate([num, np.zeros(max(0, order + 1 - len(num)), dtype=complex)])
    for n in range(order + 1):
        acc = num[n]
        for j in range(1, min(n, len(den) - 1) + 1):
            acc -= den[j] * out[n - j]
        out[n] = acc / den[0]
    return out


def _pmul(*polys):
    out = np.array([1.0 + 0j])
    for q in polys:
        out = np.convolve(out, np.asarray(q, dtype=complex))
    return out


def _padd(a, b):
    n = max(len(a), len(b))
    out = np.zeros(n, dtype=complex)
    out[: len(a)] += a
    out[: len(b)] += b
    return out


def return_map_polys(p: MapParams, center: str):
    """Numerator and denominator of f^2 in the chart of ``center`` (ascending powers)."""
    lam, a = p.lam, p.alpha
    if center == "zero":
        q = np.array([0, 1, 1], dtype=complex)            # z + z^2
        pp = np.array([1, lam], dtype=complex)            # 1 + lambda z
        num = _pmul(q, _padd(q, a * lam * pp))
        den = _pmul(pp, _padd(q, a * pp))
        return num, den
    if center == "infinity":
        # z = 1/w: F(w) = w(w+lam)[(1+w) + a w(w+lam)] / ((1+w)[(1+w) + a lam w(w+lam)])
        one_w = np.array([1, 1], dtype=complex)
        wwl = np.array([0, lam, 1], dtype=complex)        # w (w + lambda)
        num = _pmul(wwl, _padd(one_w, a * wwl))
        den = _pmul(one_w, _padd(one_w, a * lam * wwl))
        return num, den
    raise ValueError(f"center must be one of {CENTERS}, got {center!r}")


def eval_return_map(p: MapParams, center: str, w):
    """Exact F(w) in the chart (vectorized)."""
    num, den = return_map_polys(p, center)
    w = np.asarray(w, dtype=complex)
    return np.polyval(num[::-1], w) / np.polyval(den[::-1], w)


def default_scale(p: MapParams, center: str) -> float:
    """min(1, distance from the center to the nearest pole of F in the chart)."""
    _, den = return_map_polys(p, center)
    roots = np.roots(np.trim_zeros(den[::-1], "f"))
    if len(roots) == 0:
        return 1.0
    return float(min(1.0, np.min(np.abs(roots))))


@dataclass(frozen=True)
class TaylorSeries:
    """F(w) = s * sum_k a~_k (w/s)^k; ``coefficients`` holds a~_0 = 0, a~_1, ..., a~_N."""

    coefficients: np.ndarray
    center: str
    scale: float = 1.0

    @property
    def order(self) -> int:
        return len(self.coefficients) - 1

    def unscaled(self) -> np.ndarray:
        """a_k = a~_k s^(1-k); may overflow for tiny scales."""
        k = np.arange(len(self.coefficients))
        with np.errstate(over="ignore"):
            return self.coefficients * self.scale ** (1.0 - k)

    def __call__(self, w):
        x = np.asarray(w, dtype=complex) / self.scale
        return self.scale * np.polyval(self.coefficients[::-1], x)


def taylor_f2(p: MapParams, center: str, order: int = 128, scale: float | None = None) -> TaylorSeries:
    if order < 2:
        raise ValueError("order must be >= 2")
    if scale is None:
        scale = default_scale(p, center)
    num, den = return_map_polys(p, center)
    # F~(x) = F(s x)/s
    num = num * scale ** np.arange(len(num)) / scale
    den = den * scale ** np.arange(len(den))
    return TaylorSeries(_series_div(num, den, order), center, float(scale))


@dataclass(frozen=True)
class Linearizer:
    """h(zeta) = s * sum_n b~_n (zeta/s)^n with b~_1 = 1.

    ``radius_estimate`` and ``trap_radius`` are in unscaled chart units.
    """

    coefficients: np.ndarray   # b~_0 = 0, b~_1 = 1, ..., b~_N
    center: str
    radius_estimate: float | None
    lam: complex = 1.0
    scale: float = 1.0
    trap_radius: float | None = None

    def __call__(self, zeta):
        x = np.asarray(zeta, dtype=complex) / self.scale
        return self.scale * np.polyval(self.coefficients[::-1], x)

    @property
    def order(self) -> int:
        return len(self.coefficients) - 1

    def unscaled(self) -> np.ndarray:
        k = np.arange(len(self.coefficients))
        with np.errstate(over="ignore"):
            return self.coefficients * self.scale ** (1.0 - k)


def _fit_radius(b, min_usable=16):
    # root test: least-squares slope of log|b_n| over the top third of indices
    n = np.arange(len(b))
    top = n >= len(b) - 1 - (len(b) - 1) // 3
    mag = np.abs(b)
    use = top & (mag > 1e-300) & np.isfinite(mag)
    if use.sum() < min_usable:
        return None
    slope, _ = np.polyfit(n[use], np.log(mag[use]), 1)
    return float(np.exp(-slope))


def solve_linearizer(ts: TaylorSeries, order: int | None = None, lam: complex | None = None) -> Linearizer:
    """Solve h(lambda zeta) = F(h(zeta)) with h'(0) = 1.

    b_n (lambda^n - lambda) = [zeta^n] sum_{k>=2} a_k h(zeta)^k, which only
    involves b_1 .. b_{n-1}. Works in the series' scaled chart.
    """
    a = np.ascontiguousarray(ts.coefficients, dtype=complex)
    N = ts.order if order is None else min(order, ts.order)
    if lam is None:
        lam = a[1]
    b, bad = linearizer_core(a, complex(lam), N)
    if bad:
        raise SmallDivisorError(f"|lambda^{bad} - lambda| below 1e-12")
    r = _fit_radius(b)
    return Linearizer(b, ts.center, None if r is None else r * ts.scale, complex(lam), ts.scale)


def functional_residual(lin: Linearizer, p: MapParams, rho: float, samples: int = 256) -> float:
    """sup over |zeta| = rho of |F(h(zeta)) - h(lambda zeta)| with F evaluated exactly."""
    zeta = rho * np.exp(2j * np.pi * np.arange(samples) / samples)
    lhs = eval_return_map(p, lin.center, lin(zeta))
    return float(np.max(np.abs(lhs - lin(lin.lam * zeta))))


def trap_disk(lin: Linearizer, fraction: float = 0.5, angles: int = 256) -> float:
    """Chart radius of a round disk about the center inside h(|zeta| < fraction R)."""
    if not 0 < fraction <= 0.6:
        raise ValueError("fraction must lie in (0, 0.6]")
    if lin.radius_estimate is None:
        raise TrapError("radius estimate unavailable (fewer than 16 usable coefficients)")
    rho = fraction * lin.radius_estimate
    zeta = rho * np.exp(2j * np.pi * np.arange(angles) / angles)
    return float(np.min(np.abs(lin(zeta))))


def build_linearizer(p: MapParams, center: str, order: int = 128, fraction: float = 0.5) -> Linearizer:
    """Series, linearizer and trap radius together; trap_radius is None if the fit failed."""
    lin = solve_linearizer(taylor_f2(p, center, order), lam=p.lam)
    try:
        r = trap_disk(lin, fraction)
    except TrapError:
        r = None
    if r is not None and not np.isfinite(r):
        r = None
    return Linearizer(lin.coefficients, lin.center, lin.radius_estimate, lin.lam, lin.scale, r)


def build_traps(p: MapParams, order: int = 128, fraction: float = 0.5) -> tuple[float, float]:
    """(r0, rinf) trap radii; 0.0 disables a trap whose construction failed."""
    out = []
    for center in CENTERS:
        try:
            out.append(build_linearizer(p, center, order, fraction).trap_radius or 0.0)
        except SmallDivisorError:
            out.append(0.0)
    return out[0], out[1]
