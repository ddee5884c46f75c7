import cmath
import math

import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

from siegelcycle import dynamics as dyn
from siegelcycle.rotation import from_quotients, golden

TH = golden()
LAM = TH.multiplier


def f_affine(alpha, z):
    return alpha * (1 + LAM * z) / (z + z * z)


finite = st.complex_numbers(max_magnitude=50, allow_nan=False, allow_infinity=False)
alphas = st.builds(lambda r, t: cmath.rect(math.exp(r), t), st.floats(-3, 3), st.floats(0, 2 * math.pi))


def test_sphere_point_normalization_is_exact():
    p = dyn.SpherePoint(3 + 4j, 1e-300)
    assert 0.5 <= max(abs(p.u), abs(p.v)) < 1
    q = dyn.SpherePoint.of(0.1 + 0.7j)
    assert q.affine() == 0.1 + 0.7j
    assert dyn.SpherePoint.of(complex("inf")).is_infinity
    with pytest.raises(ValueError):
        dyn.SpherePoint(0, 0)


def test_chordal_metric():
    assert dyn.chordal(0, complex("inf")) == pytest.approx(2.0)
    assert dyn.chordal(1, -1) == pytest.approx(2.0)
    assert dyn.chordal(1j, 1j) == 0
    # classical formula
    z, w = 0.3 - 1.2j, -2 + 0.5j
    ref = 2 * abs(z - w) / math.sqrt((1 + abs(z) ** 2) * (1 + abs(w) ** 2))
    assert dyn.chordal(z, w) == pytest.approx(ref, rel=1e-14)


@given(finite, finite, finite)
def test_chordal_triangle(a, b, c):
    assert dyn.chordal(a, c) <= dyn.chordal(a, b) + dyn.chordal(b, c) + 1e-12


def test_special_values():
    p = dyn.MapParams(TH, 1.7 - 0.2j)
    assert dyn.eval_f(p, 0).is_infinity
    assert dyn.eval_f(p, -1).is_infinity
    assert dyn.eval_f(p, complex("inf")).affine() == 0
    assert dyn.eval_f2(p, 0).affine() == 0
    assert dyn.eval_f(p, -1 / LAM).affine() == 0


@given(alphas, finite)
def test_eval_matches_affine_formula(alpha, z):
    assume(abs(z) > 1e-3 and abs(z + 1) > 1e-3)
    p = dyn.MapParams(TH, alpha)
    assert dyn.chordal(dyn.eval_f(p, z), f_affine(alpha, z)) < 1e-12
    w = f_affine(alpha, z)
    assume(abs(w) > 1e-3 and abs(w + 1) > 1e-3 and abs(w) < 1e6)
    assert dyn.chordal(dyn.eval_f2(p, z), f_affine(alpha, w)) < 1e-10


def test_map_params_validation():
    with pytest.raises(ValueError):
        dyn.MapParams(TH, 0)
    with pytest.raises(ValueError):
        dyn.MapParams(TH, complex("nan"))


@pytest.mark.parametrize("k", range(1, 11))
def test_critical_points(k):
    th = from_quotients([], [k])
    lam = th.multiplier
    cp = dyn.critical_points(th)
    for c in (cp.c1, cp.c2):
        assert abs(lam * c * c + 2 * c + 1) < 1e-13
    assert abs(cp.c1 + cp.c2 + 2 / lam) < 1e-12
    assert abs(cp.c1 * cp.c2 - 1 / lam) < 1e-12
    assert abs(dyn.tau(th, cp.c1).affine() - cp.c2) < 1e-12
    # marking: c1 = -1/(1+s) with Re s > 0
    s = -1 / cp.c1 - 1
    assert s.real > 0


def test_df_vanishes_at_critical_points():
    p = dyn.MapParams(TH, 0.8 + 0.3j)
    cp = dyn.critical_points(TH)
    assert abs(dyn.df(p, cp.c1)) < 1e-12
    assert abs(dyn.df(p, cp.c2)) < 1e-12
    z, h = 0.4 - 0.9j, 1e-6
    fd = (f_affine(p.alpha, z + h) - f_affine(p.alpha, z - h)) / (2 * h)
    assert abs(dyn.df(p, z) - fd) < 1e-7


@given(finite)
def test_tau_is_an_involution(z):
    assert dyn.chordal(dyn.tau(TH, dyn.tau(TH, z)), z) < 1e-14


@given(alphas, finite)
def test_conjugacy_symmetry(alpha, z):
    p = dyn.MapParams(TH, alpha)
    q = dyn.symmetric_param(p)
    assert dyn.chordal(dyn.tau(TH, dyn.eval_f(p, z)), dyn.eval_f(q, dyn.tau(TH, z))) < 1e-10


def test_symmetric_param_is_involution():
    p = dyn.MapParams(TH, 2 - 1j)
    assert abs(dyn.symmetric_param(dyn.symmetric_param(p)).alpha - p.alpha) < 1e-14


def test_multiplier_at_zero_and_infinity():
    p = dyn.MapParams(TH, -0.6 + 1.1j)
    h = 1e-7
    d0 = (dyn.eval_f2(p, h).affine() - dyn.eval_f2(p, -h).affine()) / (2 * h)
    assert abs(d0 - LAM) < 1e-6
    # at oo in the chart w = 1/z
    g = lambda w: 1 / dyn.eval_f2(p, 1 / w).affine()
    dinf = (g(h) - g(-h)) / (2 * h)
    assert abs(dinf - LAM) < 1e-6


def test_alpha_star():
    a = dyn.alpha_star(TH)
    assert a == pytest.approx(0.45546954 - 2.31093665j, abs=1e-7)
    p = dyn.MapParams(TH, a)
    cp = dyn.critical_points(TH)
    assert dyn.chordal(dyn.eval_f(p, cp.c2), cp.c1) < 1e-14


@given(alphas, finite)
def test_preimages(alpha, w):
    p = dyn.MapParams(TH, alpha)
    for z in dyn.preimages(p, w):
        assert dyn.chordal(dyn.eval_f(p, z), w) < 1e-8


def test_preimages_of_infinity():
    p = dyn.MapParams(TH, 1.0)
    pts = sorted(abs(z.affine()) for z in dyn.preimages(p, complex("inf")))
    assert pts == pytest.approx([0.0, 1.0])


def test_critical_set_of_f2():
    p = dyn.MapParams(TH, 0.7 + 0.7j)
    pts = dyn.critical_set_f2(p)
    assert len(pts) == 6
    for z in pts:
        zz = z.affine()
        h = 1e-5
        d = (dyn.eval_f2(p, zz + h).affine() - dyn.eval_f2(p, zz - h).affine()) / (2 * h)
        assert abs(d) < 1e-4 * max(1, abs(dyn.eval_f2(p, zz).affine()))


def test_limit_maps():
    rng = np.random.default_rng(1)
    big = dyn.limit_convergence_check(TH, 1e6, dyn.admissible_circle_samples(TH, 1e6, 50, rng))
    small = dyn.limit_convergence_check(TH, 1e-6, dyn.admissible_circle_samples(TH, 1e-6, 50, rng))
    assert big < 1e-4 and small < 1e-4
    # the deviation shrinks roughly like 1/|alpha| and |alpha|
    zs = dyn.admissible_circle_samples(TH, 1e6, 50, rng)
    assert dyn.limit_convergence_check(TH, 1e3, zs) > 10 * dyn.limit_convergence_check(TH, 1e6, zs)


def test_limit_check_rejects_excluded_points():
    with pytest.raises(ValueError):
        dyn.limit_convergence_check(TH, 1e6, [complex("inf")])
    with pytest.raises(ValueError):
        dyn.limit_convergence_check(TH, 1e-6, [-1.0])
    with pytest.raises(ValueError):
        dyn.limit_convergence_check(TH, 0.0, [1.0])


def test_limit_map_formulas():
    z = 0.3 + 0.4j
    g0 = (z + z * z) / (1 + LAM * z)
    assert abs(dyn.limit_map("at_zero", TH, z).affine() - g0) < 1e-15
    assert abs(dyn.limit_map("at_infinity", TH, z).affine() - LAM * g0) < 1e-15
