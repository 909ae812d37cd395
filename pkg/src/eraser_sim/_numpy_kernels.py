"""Pure-numpy implementations of the hot per-pair kernels.

Every function here has a twin in ``_numba_kernels`` with the same signature
and the same arithmetic, so the two backends are interchangeable.
"""

import numpy as np

GOLDEN = np.uint64(0x9E3779B97F4A7C15)
MIX1 = np.uint64(0xBF58476D1CE4E5B9)
MIX2 = np.uint64(0x94D049BB133111EB)
N_STREAMS = np.uint64(8)
TWO_PI = 2.0 * np.pi
INV_2_53 = 1.0 / 9007199254740992.0

# Stream slots inside one pair's counter block.
S_GAUSS1, S_GAUSS2, S_ETA, S_ZETA_S, S_ZETA_ID, S_THETA_ID, S_OUTCOME = range(7)

# Column layout of pair_values output.
I10, I21, I22, I23, I24, R01, R02, R03, R04 = range(9)
N_COLS = 9

ERASER, WHICHWAY_B, WHICHWAY_A = 0, 1, 2
LOST, HIT_D1, HIT_D2, HIT_D3, HIT_D4 = 0, 1, 2, 3, 4


def _mix64(z):
    z = (z ^ (z >> np.uint64(30))) * MIX1
    z = (z ^ (z >> np.uint64(27))) * MIX2
    return z ^ (z >> np.uint64(31))


def seed_key(seed):
    with np.errstate(over="ignore"):
        return _mix64(np.asarray(np.uint64(seed) + GOLDEN, dtype=np.uint64))


def uniforms(key, start, n, stream):
    """Uniform [0, 1) draws for pair indices ``start .. start+n-1``."""
    with np.errstate(over="ignore"):
        idx = np.arange(start, start + n, dtype=np.uint64)
        counter = idx * N_STREAMS + np.uint64(stream) + np.uint64(1)
        z = _mix64(np.uint64(key) + counter * GOLDEN)
    return (z >> np.uint64(11)).astype(np.float64) * INV_2_53


def _uniform_phase(u):
    x = TWO_PI * u
    return np.where(x >= TWO_PI, 0.0, x)


def draw_pairs(key, start, n, sigma):
    """Return (delta_f, eta, zeta_s, zeta_id, theta_id) arrays."""
    u1 = uniforms(key, start, n, S_GAUSS1)
    u2 = uniforms(key, start, n, S_GAUSS2)
    if sigma > 0.0:
        delta_f = sigma * np.sqrt(-2.0 * np.log1p(-u1)) * np.cos(TWO_PI * u2)
    else:
        delta_f = np.zeros(n)
    eta = _uniform_phase(uniforms(key, start, n, S_ETA))
    zeta_s = _uniform_phase(uniforms(key, start, n, S_ZETA_S))
    zeta_id = _uniform_phase(uniforms(key, start, n, S_ZETA_ID))
    theta_id = _uniform_phase(uniforms(key, start, n, S_THETA_ID))
    return delta_f, eta, zeta_s, zeta_id, theta_id


def _phasor(x):
    return np.cos(x) + 1j * np.sin(x)


def _kept(a_x, a_y, b_x, b_y, sign):
    # Cross-label terms V_A.H_B and V_B.H_A with prefactor (1/sqrt2)**2.
    t_ab = 0.5 * a_x * b_y
    t_ba = 0.5 * a_y * b_x
    cross = (t_ab * np.conj(t_ba)).real
    return np.abs(t_ab) ** 2 + np.abs(t_ba) ** 2 + 2.0 * sign * cross


def pair_values(delta_f, eta, zeta_s, zeta_id, theta_id, phi, psi, tau, sign):
    """Per-pair local intensities and selected coincidence rates, shape (n, 9)."""
    shift = delta_f * tau
    phi_j = phi + shift
    psi_j = psi - shift
    g_s = _phasor(zeta_s)
    g_id = _phasor(zeta_id)
    g_th = _phasor(theta_id)
    sig_a = g_s
    sig_b = g_s * _phasor(eta + phi_j)
    w = _phasor(eta - psi_j)
    d1_a, d1_b = g_id, 1j * g_id * w
    d2_a, d2_b = 1j * g_id, g_id * w
    zero = np.zeros_like(g_th)

    out = np.empty((eta.shape[0], N_COLS))
    out[:, I10] = 0.5 * np.abs(sig_a + sig_b) ** 2
    out[:, I21] = 0.5 * np.abs(d1_a + d1_b) ** 2
    out[:, I22] = 0.5 * np.abs(d2_a + d2_b) ** 2
    out[:, I23] = 0.5 * np.abs(g_th) ** 2
    out[:, I24] = 0.5 * np.abs(g_th) ** 2
    out[:, R01] = _kept(sig_a, sig_b, d1_a, d1_b, sign)
    out[:, R02] = _kept(sig_a, sig_b, d2_a, d2_b, sign)
    out[:, R03] = _kept(sig_a, sig_b, zero, g_th, sign)
    out[:, R04] = _kept(sig_a, sig_b, g_th, zero, sign)
    return out


def draw_outcomes(values, u, mode):
    """One coincidence outcome per pair from its selection probabilities."""
    n = u.shape[0]
    out = np.full(n, LOST, dtype=np.int8)
    if mode == ERASER:
        # Total incoherent product weight over D1 and D2 is 2.
        p1 = np.clip(0.5 * values[:, R01], 0.0, 1.0)
        p2 = np.clip(0.5 * values[:, R02], 0.0, 1.0)
        out[u < p1] = HIT_D1
        out[(u >= p1) & (u < p1 + p2)] = HIT_D2
    else:
        col, hit = (R03, HIT_D3) if mode == WHICHWAY_B else (R04, HIT_D4)
        # Total incoherent product weight for a single which-way arm is 1/2.
        p = np.clip(2.0 * values[:, col], 0.0, 1.0)
        out[u < p] = hit
    return out


def simulate(key, start, n, sigma, phi, psi, tau, sign, mode):
    draws = draw_pairs(key, start, n, sigma)
    values = pair_values(*draws, phi, psi, tau, sign)
    u = uniforms(key, start, n, S_OUTCOME)
    return values, draw_outcomes(values, u, mode)
