import math
from decimal import Decimal, getcontext
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from siegelcycle.rotation import convergents, from_quotients, golden, parse_cf


def cf_value(quotients):
    # exact value of the finite continued fraction [0; a_1, ..., a_n]
    x = Fraction(0)
    for a in reversed(quotients):
        x = 1 / (a + x)
    return x


def test_golden_value():
    assert golden().value == pytest.approx((math.sqrt(5) - 1) / 2, rel=1e-15)


def test_figure3_rotation_number():
    # [0; 20, 1, 1, ...] = 2 / (39 + sqrt 5)
    assert from_quotients([20], [1]).value == pytest.approx(2 / (39 + math.sqrt(5)), rel=1e-15)


def test_double_double_residual():
    getcontext().prec = 50
    exact = (Decimal(5).sqrt() - 1) / 2
    g = golden()
    assert abs(Decimal(g.value) + Decimal(g.value_lo) - exact) < Decimal("1e-30")


def test_golden_convergents_are_fibonacci_ratios():
    fib = [1, 1]
    while len(fib) < 20:
        fib.append(fib[-1] + fib[-2])
    cs = convergents(golden(), 15)
    assert cs == [Fraction(fib[k], fib[k + 1]) for k in range(15)]


def test_parse_cf():
    assert parse_cf("20:1") == from_quotients([20], [1])
    assert parse_cf(":1") == golden()
    assert parse_cf("1,2:3,4").quotients(6) == [1, 2, 3, 4, 3, 4]
    for bad in ["20", "a:1", "1:", "1:0", "1:-2"]:
        with pytest.raises(ValueError):
            parse_cf(bad)


def test_multiplier_on_unit_circle():
    lam = golden().multiplier
    assert abs(abs(lam) - 1) < 1e-15
    assert abs(lam - complex(math.cos(2 * math.pi * golden().value), math.sin(2 * math.pi * golden().value))) < 1e-15


def test_frac_multiples_against_high_precision():
    g = golden()
    x = g.high_precision(60)
    n = np.arange(0, 20000, 37)
    fr = g.frac_multiples(20000)[n]
    ref = np.array([float((k * x) % 1) for k in n])
    assert np.max(np.abs(fr - ref)) < 1e-11


quotients = st.lists(st.integers(1, 30), min_size=1, max_size=4)


@given(quotients, quotients)
def test_value_matches_convergents(pre, per):
    rn = from_quotients(pre, per)
    assert 0 < rn.value < 1
    seq = rn.quotients(12)
    assert seq[: len(pre)] == pre
    cs = convergents(rn, 12)
    assert cs[-1] == cf_value(seq)
    for c in cs[:8]:
        # classical bound |x - p/q| < 1/q^2
        assert abs(Fraction(rn.value) - c) < Fraction(1, c.denominator ** 2) + Fraction(1, 10 ** 15)


@given(quotients, quotients)
def test_label_round_trip(pre, per):
    rn = from_quotients(pre, per)
    assert parse_cf(rn.label()) == rn


@pytest.mark.parametrize("pre,per", [([], [1]), ([20], [1]), ([], [2]), ([3, 1], [2, 5])])
def test_value_within_two_ulp(pre, per):
    rn = from_quotients(pre, per)
    exact = rn.high_precision(50)
    assert abs(Decimal(rn.value) - exact) <= 2 * Decimal(math.ulp(rn.value))
