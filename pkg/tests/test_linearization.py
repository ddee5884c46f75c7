import numpy as np
import pytest
from hypothesis import given, strategies as st

from siegelcycle.dynamics import MapParams
from siegelcycle.linearization import (SmallDivisorError, TaylorSeries, build_linearizer, build_traps,
                                       eval_return_map, functional_residual, solve_linearizer, taylor_f2,
                                       trap_disk)
from siegelcycle.rotation import golden

TH = golden()
LAM = TH.multiplier


def cauchy_coefficients(F, r, order, M=1024):
    # a_k = (1/2 pi i) \oint F(w) w^{-k-1} dw on |w| = r, via FFT
    w = r * np.exp(2j * np.pi * np.arange(M) / M)
    c = np.fft.fft(F(w)) / M
    return c[: order + 1] / r ** np.arange(order + 1)


@pytest.mark.parametrize("center", ["zero", "infinity"])
@pytest.mark.parametrize("alpha", [1.0, 2.5 - 1j, 0.3j])
def test_taylor_matches_cauchy_integral(center, alpha):
    p = MapParams(TH, alpha)
    ts = taylor_f2(p, center, 24)
    r = 0.3 * ts.scale
    ref = cauchy_coefficients(lambda w: eval_return_map(p, center, w), r, 24)
    got = ts.unscaled()
    for k in range(25):
        assert abs(got[k] - ref[k]) < 1e-9 * max(1.0, r ** -k)
    assert abs(got[1] - LAM) < 1e-13
    assert got[0] == 0


def mobius_series(lam, order):
    # F(w) = lam w / (1 + (1 - lam) w) = h(lam h^{-1}(w)) with h(z) = z/(1 - z);
    # stored in the chart scaled by the pole distance s = 1/|1 - lam|
    s = 1 / abs(1 - lam)
    n = np.arange(order + 1)
    a = lam * ((lam - 1) * s) ** (n - 1.0)
    a[0] = 0
    return TaylorSeries(a.astype(complex), "zero", s)


def test_linearizer_of_conjugated_rotation():
    ts = mobius_series(LAM, 96)
    lin = solve_linearizer(ts, lam=LAM)
    n = np.arange(1, 97)
    # b~_n = b_n s^(n-1) with every b_n = 1
    rel = np.abs(lin.coefficients[1:] / ts.scale ** (n - 1.0) - 1)
    # the image of the linearizing disk is a half-plane here, so high orders cancel badly
    assert np.max(rel[:16]) < 1e-6


def naive_linearizer(a, lam, order):
    # truncated power-series arithmetic with numpy convolutions, one power at a time
    b = np.zeros(order + 1, dtype=complex)
    b[1] = 1
    for n in range(2, order + 1):
        acc = 0j
        hk = b.copy()
        for k in range(2, n + 1):
            hk = np.convolve(hk, b)[: order + 1]
            acc += a[k] * hk[n]
        b[n] = acc / (lam ** n - lam)
    return b


def test_linearizer_of_quadratic_polynomial():
    # P(w) = lam w + w^2 has a bounded Siegel disk for golden theta
    a = np.zeros(41, dtype=complex)
    a[1], a[2] = LAM, 1
    lin = solve_linearizer(TaylorSeries(a, "zero", 1.0), lam=LAM)
    ref = naive_linearizer(a, LAM, 40)
    assert np.max(np.abs(lin.coefficients - ref) / np.maximum(1, np.abs(ref))) < 1e-12
    zeta = 0.2 * np.exp(2j * np.pi * np.arange(64) / 64)
    hz = lin(zeta)
    assert np.max(np.abs(LAM * hz + hz ** 2 - lin(LAM * zeta))) < 1e-10


def test_small_divisor_detected():
    lam = np.exp(2j * np.pi / 3)
    with pytest.raises(SmallDivisorError):
        solve_linearizer(mobius_series(lam, 10), lam=lam)


def test_residual_and_radius_regression():
    p = MapParams(TH, 1.0)
    lin = build_linearizer(p, "zero", 128)
    assert lin.radius_estimate == pytest.approx(0.2412, abs=2e-3)
    assert functional_residual(lin, p, lin.radius_estimate / 3) < 1e-8
    # the functional equation degrades near the radius, not inside
    assert functional_residual(lin, p, lin.radius_estimate / 2) < 1e-6


def test_symmetric_linearizers_agree():
    # tau conjugates f_alpha to f_alpha'; in the charts this is w -> lambda w
    p = MapParams(TH, 2.0 + 0.5j)
    q = MapParams(TH, LAM ** -3 / p.alpha)
    a = build_linearizer(p, "zero")
    b = build_linearizer(q, "infinity")
    assert a.radius_estimate == pytest.approx(b.radius_estimate, rel=1e-6)
    # the trap minimum is sampled at 256 angles, rotated by lambda between the two charts
    assert a.trap_radius == pytest.approx(b.trap_radius, rel=1e-4)


@given(st.floats(-5, 5), st.floats(0, 6.28))
def test_traps_exist_over_a_wide_range(logr, phase):
    p = MapParams(TH, np.exp(logr + 1j * phase))
    r0, rinf = build_traps(p, 64)
    assert r0 > 0 and rinf > 0
    # trap disk lies inside the disk of convergence image
    for c, r in (("zero", r0), ("infinity", rinf)):
        lin = build_linearizer(p, c, 64)
        assert r <= 1.01 * lin.radius_estimate


def test_scaled_series_for_huge_alpha():
    p = MapParams(TH, 1e5)
    lin = build_linearizer(p, "infinity", 128)
    assert np.all(np.isfinite(lin.coefficients))
    rho = lin.radius_estimate / 3
    assert functional_residual(lin, p, rho) < 1e-8 * rho


def test_trap_disk_points_stay_trapped():
    p = MapParams(TH, 3.0)
    lin = build_linearizer(p, "zero")
    r = lin.trap_radius
    w = 0.99 * r * np.exp(2j * np.pi * np.arange(64) / 64)
    for _ in range(200):
        w = eval_return_map(p, "zero", w)
    # f^2 is a rotation in the linearizing coordinate, so orbits stay inside h(|zeta| < R/2)
    assert np.max(np.abs(w)) < np.max(np.abs(lin(0.5 * lin.radius_estimate * np.exp(2j * np.pi * np.arange(256) / 256))))


def test_trap_disk_validation():
    lin = build_linearizer(MapParams(TH, 1.0), "zero")
    with pytest.raises(ValueError):
        trap_disk(lin, 0.9)
    with pytest.raises(ValueError):
        taylor_f2(MapParams(TH, 1.0), "middle")
