"""Detector-bound amplitudes for one photon pair.

Conventions:

* the pair's detuning phase ``delta_f * tau`` is added to the signal's slit-B
  term and subtracted from the idler's, so ``phi_j + psi_j`` equals
  ``phi + psi`` up to rounding;
* the idler beam splitter transmits with 1 and reflects with ``i``:
  D1 sees ``A + i*w*B`` and D2 sees ``i*A + w*B`` with ``w = exp(i(eta - psi_j))``;
* D3 keeps only the B-labelled idler term, D4 only the A-labelled one.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import INV_SQRT2, PathState, PhotonPairSample, Pol, SetupConfig, phase_factor


@dataclass(frozen=True)
class DetectorAmplitudes:
    e10: PathState
    e21: PathState
    e22: PathState
    e23: PathState
    e24: PathState

    def idler(self, detector: str) -> PathState:
        return {"D1": self.e21, "D2": self.e22, "D3": self.e23, "D4": self.e24}[detector]


def per_photon_phases(sample: PhotonPairSample, config: SetupConfig) -> tuple[float, float]:
    shift = sample.delta_f * config.tau
    return config.phi + shift, config.psi - shift


def beam_splitter(arm_a: complex, arm_b: complex, scale: float = INV_SQRT2):
    """Balanced 50:50 splitter acting on the two idler arms.

    Returns the (A, B) path coefficients arriving at D1 and at D2. With the
    default ``scale`` the map is unitary.
    """
    return ((arm_a * scale, 1j * arm_b * scale),
            (1j * arm_a * scale, arm_b * scale))


def build_amplitudes(sample: PhotonPairSample, config: SetupConfig) -> DetectorAmplitudes:
    phi_j, psi_j = per_photon_phases(sample, config)
    pref = config.e0 * INV_SQRT2
    g_s = phase_factor(sample.zeta_s)
    g_id = phase_factor(sample.zeta_id)
    g_th = phase_factor(sample.theta_id)

    e10 = PathState(Pol.V, g_s, g_s * phase_factor(sample.eta + phi_j), pref)
    # Each output port keeps the E0/sqrt2 prefactor of the incoming idler.
    (d1_a, d1_b), (d2_a, d2_b) = beam_splitter(
        g_id, g_id * phase_factor(sample.eta - psi_j), scale=1.0)
    e21 = PathState(Pol.H, d1_a, d1_b, pref)
    e22 = PathState(Pol.H, d2_a, d2_b, pref)
    e23 = PathState(Pol.H, 0j, g_th, pref)
    e24 = PathState(Pol.H, g_th, 0j, pref)
    return DetectorAmplitudes(e10, e21, e22, e23, e24)
