"""Compiled inner loops. Everything here is a pure function of its arguments."""

import math

import numpy as np
from numba import njit

# orbit_kernel status slots
TRAP_STEP, TRAP_WHICH, ANNULUS_OK, RHO_EARLY, RHO_LATE, STEPS, RMIN, RMAX = range(8)
NO_TRAP = -1
TRAP_ZERO = 0
TRAP_INF = 1


@njit(cache=True, nogil=True)
def renormalize(u, v):
    m = max(abs(u.real), abs(u.imag), abs(v.real), abs(v.imag))
    _, e = math.frexp(m)
    s = math.ldexp(1.0, -e)
    return u * s, v * s


@njit(cache=True, nogil=True)
def f_step(a, lam, u, v):
    return renormalize(a * v * (v + lam * u), u * (v + u))


@njit(cache=True, nogil=True)
def f2_step(a, lam, u, v):
    q = u * (u + v)
    pp = v * (v + lam * u)
    return renormalize(q * (q + a * lam * pp), pp * (q + a * pp))


@njit(cache=True, nogil=True)
def _chart(u, v, inf_chart):
    if inf_chart:
        if u == 0:
            return complex(np.inf, 0.0)
        return v / u
    if v == 0:
        return complex(np.inf, 0.0)
    return u / v


@njit(cache=True, nogil=True)
def orbit_kernel(a, lam, u0, v0, inf_chart, n_steps, r0, rinf, rmin, rmax, out, status):
    """Iterate f^2 from (u0 : v0) for n_steps steps.

    Stores chart coordinates in ``out`` (if it has length > 0) and fills
    ``status`` with trap entry, annulus flag, and the closest returns to the
    seed over the windows [N/8, N/4) and [N/2, N]. Stops on trap entry.
    """
    u, v = renormalize(u0, v0)
    w0 = _chart(u, v, inf_chart)
    store = out.shape[0] > 0
    early_lo, early_hi, late_lo = n_steps // 8, n_steps // 4, n_steps // 2
    rho_e = np.inf
    rho_l = np.inf
    lo = np.inf
    hi = 0.0
    ann = True
    trap_step = NO_TRAP
    trap_which = NO_TRAP
    n = 0
    while True:
        if abs(u) < r0 * abs(v):
            trap_step, trap_which = n, TRAP_ZERO
        elif abs(v) < rinf * abs(u):
            trap_step, trap_which = n, TRAP_INF
        w = _chart(u, v, inf_chart)
        r = abs(w)
        if store:
            out[n] = w
        if r < lo:
            lo = r
        if r > hi:
            hi = r
        if not (rmin <= r <= rmax):
            ann = False
        if n > 0:
            d = abs(w - w0)
            if early_lo <= n < early_hi and d < rho_e:
                rho_e = d
            if n >= late_lo and d < rho_l:
                rho_l = d
        if trap_step != NO_TRAP or n == n_steps:
            break
        u, v = f2_step(a, lam, u, v)
        n += 1
    status[TRAP_STEP] = trap_step
    status[TRAP_WHICH] = trap_which
    status[ANNULUS_OK] = 1.0 if ann else 0.0
    status[RHO_EARLY] = rho_e
    status[RHO_LATE] = rho_l
    status[STEPS] = n
    status[RMIN] = lo
    status[RMAX] = hi


@njit(cache=True, nogil=True)
def linearizer_core(a, lam, order):
    """b_n (lambda^n - lambda) = [x^n] sum_{k>=2} a_k h^k; returns (b, failing index or 0)."""
    n_max = order
    powers = np.zeros((n_max + 1, n_max + 1), dtype=np.complex128)
    b = np.zeros(n_max + 1, dtype=np.complex128)
    b[1] = 1.0
    powers[1, 1] = 1.0
    lam_n = lam
    for n in range(2, n_max + 1):
        lam_n = lam_n * lam
        div = lam_n - lam
        if abs(div) < 1e-12:
            return b, n
        rhs = 0j
        for k in range(2, n + 1):
            acc = 0j
            # powers[k, n] = sum_{j=1}^{n-k+1} b_j powers[k-1, n-j]
            for j in range(1, n - k + 2):
                acc += b[j] * powers[k - 1, n - j]
            powers[k, n] = acc
            rhs += a[k] * acc
        b[n] = rhs / div
        powers[1, n] = b[n]
    return b, 0


@njit(cache=True, nogil=True)
def julia_tile(a, lam, zs, max_steps, r0, rinf, tags, steps):
    """First trap hit under single steps of f for each z in ``zs``.

    tags: 0 = 0-trap at even step or oo-trap at odd step (Delta^0 family),
          1 = the other parity (Delta^oo family), 2 = no hit.
    """
    for i in range(zs.shape[0]):
        z = zs[i]
        if np.isinf(z.real) or np.isinf(z.imag):
            u, v = 1.0 + 0j, 0j
        else:
            u, v = renormalize(z, 1.0 + 0j)
        tag = 2
        k = 0
        while k <= max_steps:
            if abs(u) < r0 * abs(v):
                tag = k % 2
                break
            if abs(v) < rinf * abs(u):
                tag = 1 - k % 2
                break
            u, v = f_step(a, lam, u, v)
            k += 1
        tags[i] = tag
        steps[i] = k
