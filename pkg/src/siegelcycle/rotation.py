"""Bounded-type rotation numbers given by eventually periodic continued fractions."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from fractions import Fraction


def _block_matrix(quotients):
    """Convergent matrix [[p_{m-1}, p_m], [q_{m-1}, q_m]] of [0; a_1, ..., a_m]."""
    p_prev, p = 1, 0
    q_prev, q = 0, 1
    for a in quotients:
        p_prev, p = p, a * p + p_prev
        q_prev, q = q, a * q + q_prev
    return p_prev, p, q_prev, q


def _tail_value(period, ctx=None):
    # purely periodic x = [0; period, period, ...] solves
    # q_{m-1} x^2 + (q_m - p_{m-1}) x - p_m = 0, positive root
    p_prev, p, q_prev, q = _block_matrix(period)
    a, b, c = q_prev, q - p_prev, -p
    if ctx is None:
        if a == 0:
            return -c / b
        disc = math.sqrt(b * b - 4 * a * c)
        # c < 0 < a, so the stable form avoids cancellation
        return (2 * -c) / (b + disc)
    a, b, c = Decimal(a), Decimal(b), Decimal(c)
    if a == 0:
        return -c / b
    disc = ctx.sqrt(b * b - 4 * a * c)
    return (2 * -c) / (b + disc)


def _fold(preperiod, x):
    for a in reversed(preperiod):
        x = 1 / (a + x)
    return x


@dataclass(frozen=True)
class RotationNumber:
    """theta = [0; preperiod, period, period, ...] with all quotients >= 1.

    ``value`` is the binary64 value; ``value_lo`` is the residual so that
    ``value + value_lo`` is a double-double approximation of theta.
    """

    preperiod: tuple[int, ...]
    period: tuple[int, ...]
    value: float = field(init=False)
    value_lo: float = field(init=False)

    def __post_init__(self):
        if not self.period:
            raise ValueError("period must be nonempty")
        for a in self.preperiod + self.period:
            if not isinstance(a, int) or a <= 0:
                raise ValueError(f"partial quotients must be positive integers, got {a!r}")
        object.__setattr__(self, "value", _fold(self.preperiod, _tail_value(self.period)))
        hi_prec = self.high_precision(40)
        lo = float(hi_prec - Decimal(self.value))
        object.__setattr__(self, "value_lo", lo)

    def high_precision(self, digits: int) -> Decimal:
        with localcontext() as ctx:
            ctx.prec = digits + 5
            x = _tail_value(self.period, ctx)
            x = _fold([Decimal(a) for a in self.preperiod], x)
        return +x

    @property
    def max_quotient(self) -> int:
        return max(self.preperiod + self.period)

    def quotients(self, n: int) -> list[int]:
        """First n partial quotients a_1, ..., a_n."""
        out = list(self.preperiod[:n])
        k = 0
        while len(out) < n:
            out.append(self.period[k % len(self.period)])
            k += 1
        return out

    @property
    def multiplier(self) -> complex:
        """lambda = exp(2 pi i theta), using the double-double value."""
        base = complex(math.cos(2 * math.pi * self.value), math.sin(2 * math.pi * self.value))
        return base * complex(1.0, 2 * math.pi * self.value_lo)

    def frac_multiples(self, n: int):
        """Fractional parts {k theta} for k = 0..n-1 as a float64 array."""
        import numpy as np

        k = np.arange(n, dtype=np.float64)
        hi = k * self.value
        frac = hi - np.floor(hi) + k * self.value_lo
        return frac - np.floor(frac)

    def label(self) -> str:
        pre = ",".join(map(str, self.preperiod))
        per = ",".join(map(str, self.period))
        return f"{pre}:{per}"

    def __float__(self) -> float:
        return self.value


def from_quotients(preperiod, period) -> RotationNumber:
    return RotationNumber(tuple(int(a) for a in preperiod), tuple(int(a) for a in period))


def golden() -> RotationNumber:
    """(sqrt(5) - 1)/2 = [0; 1, 1, 1, ...]."""
    return from_quotients([], [1])


def parse_cf(text: str) -> RotationNumber:
    """Parse ``pre:period`` where each side is a comma separated list, e.g. ``20:1``."""
    if ":" not in text:
        raise ValueError(f"expected 'preperiod:period', got {text!r}")
    pre, per = text.split(":", 1)
    try:
        pre_q = [int(s) for s in pre.split(",") if s.strip()]
        per_q = [int(s) for s in per.split(",") if s.strip()]
    except ValueError as exc:
        raise ValueError(f"bad continued fraction {text!r}") from exc
    return from_quotients(pre_q, per_q)


def convergents(rn: RotationNumber, n: int) -> list[Fraction]:
    """The convergents p_k/q_k, k = 1..n, of [0; a_1, a_2, ...]."""
    if n < 1:
        raise ValueError("n must be >= 1")
    out = []
    p_prev, p = 1, 0
    q_prev, q = 0, 1
    for a in rn.quotients(n):
        p_prev, p = p, a * p + p_prev
        q_prev, q = q, a * q + q_prev
        out.append(Fraction(p, q))
    return out
