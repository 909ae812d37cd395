import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from eraser_sim.correlator import coincidence_values, local_intensity
from eraser_sim.ensemble import EnsembleSpec, sample_block
from eraser_sim.model import PhotonPairSample, Pol, SetupConfig, phase_factor, state_norm_sq
from eraser_sim.optics import beam_splitter, build_amplitudes, per_photon_phases

finite = st.floats(-20.0, 20.0, allow_nan=False)


def _random_samples(n=1000, seed=5, delta=2.0):
    return [sample_block(EnsembleSpec(n, seed, delta))[i] for i in range(n)]


def test_zero_detuning_keeps_control_phases():
    s = PhotonPairSample(0, 0.0, 1.0, 0.0, 0.0, 0.0)
    assert per_photon_phases(s, SetupConfig(phi=0.7, psi=-0.2)) == (0.7, -0.2)


def test_detuning_shift_example():
    # delta_f * tau = 0.2
    s = PhotonPairSample(0, 0.1, 0.0, 0.0, 0.0, 0.0)
    phi_j, psi_j = per_photon_phases(s, SetupConfig(phi=0.3, psi=0.5, tau=2.0))
    assert (phi_j, psi_j) == (0.5, 0.3)
    assert phi_j + psi_j == 0.8 == 0.3 + 0.5


def test_detuning_cancels_in_sum():
    cfg = SetupConfig(phi=1.1, psi=-0.4, tau=3.0)
    for s in _random_samples():
        phi_j, psi_j = per_photon_phases(s, cfg)
        scale = max(abs(cfg.phi), abs(cfg.psi), abs(s.delta_f * cfg.tau))
        # Exact in real arithmetic; floating point leaves a few ulp.
        assert abs((phi_j + psi_j) - (cfg.phi + cfg.psi)) <= 4 * math.ulp(scale)


def test_all_zero_phase_amplitudes():
    amps = build_amplitudes(PhotonPairSample(0, 0.0, 0.0, 0.0, 0.0, 0.0), SetupConfig(phi=0, psi=0))
    assert (amps.e10.coeff_A, amps.e10.coeff_B) == (1, 1)
    assert (amps.e21.coeff_A, amps.e21.coeff_B) == (1, 1j)
    assert (amps.e22.coeff_A, amps.e22.coeff_B) == (1j, 1)
    assert amps.e10.pol is Pol.V
    assert all(a.pol is Pol.H for a in (amps.e21, amps.e22, amps.e23, amps.e24))
    assert amps.e10.prefactor == pytest.approx(1 / math.sqrt(2), abs=1e-16)


def test_which_way_amplitudes_have_single_term():
    cfg = SetupConfig(phi=0.3, psi=1.0)
    for s in _random_samples(200):
        amps = build_amplitudes(s, cfg)
        assert amps.e23.coeff_A == 0 and abs(abs(amps.e23.coeff_B) - 1) < 1e-15
        assert amps.e24.coeff_B == 0 and abs(abs(amps.e24.coeff_A) - 1) < 1e-15
        for st_ in (amps.e10, amps.e21, amps.e22):
            assert abs(abs(st_.coeff_A) - 1) < 1e-15 and abs(abs(st_.coeff_B) - 1) < 1e-15


def test_beam_splitter_norm_balance():
    cfg = SetupConfig(phi=0.9, psi=2.2, tau=1.7)
    for s in _random_samples():
        a = build_amplitudes(s, cfg)
        lhs = state_norm_sq(a.e21) + state_norm_sq(a.e22)
        rhs = 2 * state_norm_sq(a.e23) + 2 * state_norm_sq(a.e24)
        assert abs(lhs - rhs) < 1e-12
        # Per path label, the two splitter outputs carry weight 2.
        assert abs(abs(a.e21.coeff_A) ** 2 + abs(a.e22.coeff_A) ** 2 - 2) < 1e-12
        assert abs(abs(a.e21.coeff_B) ** 2 + abs(a.e22.coeff_B) ** 2 - 2) < 1e-12


@given(finite, finite, finite, finite)
def test_beam_splitter_is_unitary(ra, pa, rb, pb):
    arm_a, arm_b = ra * phase_factor(pa), rb * phase_factor(pb)
    (d1a, d1b), (d2a, d2b) = beam_splitter(arm_a, arm_b)
    n_in = abs(arm_a) ** 2 + abs(arm_b) ** 2
    n_out = abs(d1a) ** 2 + abs(d1b) ** 2 + abs(d2a) ** 2 + abs(d2b) ** 2
    assert abs(n_out - n_in) <= 1e-12 * max(1.0, n_in)


def test_beam_splitter_matrix_unitary():
    (t, r1), (r2, t2) = beam_splitter(1.0, 1.0)
    u = np.array([[t, r1], [r2, t2]])
    np.testing.assert_allclose(u @ u.conj().T, np.eye(2), atol=1e-15)


@given(finite, finite, finite, finite, finite)
def test_parameter_locality(phi, psi, other, eta, df):
    s = PhotonPairSample(0, df, eta, 0.0, 0.0, 0.0)
    a = build_amplitudes(s, SetupConfig(phi=phi, psi=psi))
    b = build_amplitudes(s, SetupConfig(phi=phi, psi=other))
    c = build_amplitudes(s, SetupConfig(phi=other, psi=psi))
    assert a.e10 == b.e10
    assert a.e21 == c.e21 and a.e22 == c.e22


@given(finite, finite, finite)
def test_global_phases_are_unobservable(zs, zi, th):
    cfg = SetupConfig(phi=0.4, psi=1.3, tau=0.9)
    base = PhotonPairSample(0, 0.3, 2.0, 0.0, 0.0, 0.0)
    moved = PhotonPairSample(0, 0.3, 2.0, zs, zi, th)
    li, lj = local_intensity(base, cfg), local_intensity(moved, cfg)
    ci, cj = coincidence_values(base, cfg), coincidence_values(moved, cfg)
    for name in ("i10", "i21", "i22", "i23", "i24"):
        assert abs(getattr(li, name) - getattr(lj, name)) < 1e-12
    for name in ("r01", "r02", "r03", "r04", "discarded_weight"):
        assert abs(getattr(ci, name) - getattr(cj, name)) < 1e-12
