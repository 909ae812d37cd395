"""Numba-compiled twins of ``_numpy_kernels``.

Same signatures, same arithmetic per element; loops run under ``prange`` and
never reduce across pairs, so results do not depend on the thread count.
"""

import math
import os

import numba as nb
import numpy as np

from ._numpy_kernels import (
    ERASER,
    GOLDEN,
    HIT_D1,
    HIT_D2,
    HIT_D3,
    HIT_D4,
    I10,
    I21,
    I22,
    I23,
    I24,
    INV_2_53,
    LOST,
    MIX1,
    MIX2,
    N_COLS,
    N_STREAMS,
    R01,
    R02,
    R03,
    R04,
    S_ETA,
    S_GAUSS1,
    S_GAUSS2,
    S_OUTCOME,
    S_THETA_ID,
    S_ZETA_ID,
    S_ZETA_S,
    TWO_PI,
    WHICHWAY_B,
)

if "NUMBA_THREADING_LAYER" not in os.environ:
    # Skip the TBB probe; it only warns on this platform.
    nb.config.THREADING_LAYER_PRIORITY = ["omp", "workqueue", "tbb"]

_ONE = np.uint64(1)
_SH30 = np.uint64(30)
_SH27 = np.uint64(27)
_SH31 = np.uint64(31)
_SH11 = np.uint64(11)


@nb.njit(cache=True, inline="always")
def _mix64(z):
    z = (z ^ (z >> _SH30)) * MIX1
    z = (z ^ (z >> _SH27)) * MIX2
    return z ^ (z >> _SH31)


@nb.njit(cache=True, inline="always")
def _uniform(key, index, stream):
    counter = np.uint64(index) * N_STREAMS + np.uint64(stream) + _ONE
    z = _mix64(key + counter * GOLDEN)
    return np.float64(z >> _SH11) * INV_2_53


@nb.njit(cache=True, inline="always")
def _uniform_phase(u):
    x = TWO_PI * u
    return 0.0 if x >= TWO_PI else x


@nb.njit(cache=True, inline="always")
def _phasor(x):
    return complex(math.cos(x), math.sin(x))


@nb.njit(cache=True, inline="always")
def _kept(a_x, a_y, b_x, b_y, sign):
    t_ab = 0.5 * a_x * b_y
    t_ba = 0.5 * a_y * b_x
    cross = (t_ab * t_ba.conjugate()).real
    return abs(t_ab) ** 2 + abs(t_ba) ** 2 + 2.0 * sign * cross


@nb.njit(cache=True, parallel=True)
def uniforms(key, start, n, stream):
    out = np.empty(n)
    k = np.uint64(key)
    for i in nb.prange(n):
        out[i] = _uniform(k, start + i, stream)
    return out


@nb.njit(cache=True, parallel=True)
def draw_pairs(key, start, n, sigma):
    delta_f = np.empty(n)
    eta = np.empty(n)
    zeta_s = np.empty(n)
    zeta_id = np.empty(n)
    theta_id = np.empty(n)
    k = np.uint64(key)
    for i in nb.prange(n):
        idx = start + i
        if sigma > 0.0:
            u1 = _uniform(k, idx, S_GAUSS1)
            u2 = _uniform(k, idx, S_GAUSS2)
            delta_f[i] = sigma * math.sqrt(-2.0 * math.log1p(-u1)) * math.cos(TWO_PI * u2)
        else:
            delta_f[i] = 0.0
        eta[i] = _uniform_phase(_uniform(k, idx, S_ETA))
        zeta_s[i] = _uniform_phase(_uniform(k, idx, S_ZETA_S))
        zeta_id[i] = _uniform_phase(_uniform(k, idx, S_ZETA_ID))
        theta_id[i] = _uniform_phase(_uniform(k, idx, S_THETA_ID))
    return delta_f, eta, zeta_s, zeta_id, theta_id


@nb.njit(cache=True, inline="always")
def _fill_row(out, i, delta_f, eta, zeta_s, zeta_id, theta_id, phi, psi, tau, sign):
    shift = delta_f * tau
    phi_j = phi + shift
    psi_j = psi - shift
    g_s = _phasor(zeta_s)
    g_id = _phasor(zeta_id)
    g_th = _phasor(theta_id)
    sig_a = g_s
    sig_b = g_s * _phasor(eta + phi_j)
    w = _phasor(eta - psi_j)
    d1_a = g_id
    d1_b = 1j * g_id * w
    d2_a = 1j * g_id
    d2_b = g_id * w
    zero = 0j
    out[i, I10] = 0.5 * abs(sig_a + sig_b) ** 2
    out[i, I21] = 0.5 * abs(d1_a + d1_b) ** 2
    out[i, I22] = 0.5 * abs(d2_a + d2_b) ** 2
    out[i, I23] = 0.5 * abs(g_th) ** 2
    out[i, I24] = 0.5 * abs(g_th) ** 2
    out[i, R01] = _kept(sig_a, sig_b, d1_a, d1_b, sign)
    out[i, R02] = _kept(sig_a, sig_b, d2_a, d2_b, sign)
    out[i, R03] = _kept(sig_a, sig_b, zero, g_th, sign)
    out[i, R04] = _kept(sig_a, sig_b, g_th, zero, sign)


@nb.njit(cache=True, parallel=True)
def pair_values(delta_f, eta, zeta_s, zeta_id, theta_id, phi, psi, tau, sign):
    n = eta.shape[0]
    out = np.empty((n, N_COLS))
    for i in nb.prange(n):
        _fill_row(out, i, delta_f[i], eta[i], zeta_s[i], zeta_id[i], theta_id[i], phi, psi, tau, sign)
    return out


@nb.njit(cache=True, inline="always")
def _outcome(values, i, u, mode):
    if mode == ERASER:
        p1 = min(max(0.5 * values[i, R01], 0.0), 1.0)
        p2 = min(max(0.5 * values[i, R02], 0.0), 1.0)
        if u < p1:
            return HIT_D1
        if u < p1 + p2:
            return HIT_D2
        return LOST
    if mode == WHICHWAY_B:
        p = min(max(2.0 * values[i, R03], 0.0), 1.0)
        return HIT_D3 if u < p else LOST
    p = min(max(2.0 * values[i, R04], 0.0), 1.0)
    return HIT_D4 if u < p else LOST


@nb.njit(cache=True, parallel=True)
def draw_outcomes(values, u, mode):
    n = u.shape[0]
    out = np.empty(n, dtype=np.int8)
    for i in nb.prange(n):
        out[i] = _outcome(values, i, u[i], mode)
    return out


@nb.njit(cache=True, parallel=True)
def simulate(key, start, n, sigma, phi, psi, tau, sign, mode):
    values = np.empty((n, N_COLS))
    outcomes = np.empty(n, dtype=np.int8)
    k = np.uint64(key)
    for i in nb.prange(n):
        idx = start + i
        if sigma > 0.0:
            u1 = _uniform(k, idx, S_GAUSS1)
            u2 = _uniform(k, idx, S_GAUSS2)
            df = sigma * math.sqrt(-2.0 * math.log1p(-u1)) * math.cos(TWO_PI * u2)
        else:
            df = 0.0
        eta = _uniform_phase(_uniform(k, idx, S_ETA))
        zs = _uniform_phase(_uniform(k, idx, S_ZETA_S))
        zi = _uniform_phase(_uniform(k, idx, S_ZETA_ID))
        th = _uniform_phase(_uniform(k, idx, S_THETA_ID))
        _fill_row(values, i, df, eta, zs, zi, th, phi, psi, tau, sign)
        outcomes[i] = _outcome(values, i, _uniform(k, idx, S_OUTCOME), mode)
    return values, outcomes
