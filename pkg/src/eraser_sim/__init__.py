"""Coherence-model simulator for the delayed-choice quantum eraser.

Signal photons reach D0; idler photons reach D1/D2 through a beam splitter
(eraser) or D3/D4 directly (which-way). Local intensities are uniform once the
random slit phase is averaged out, while coincidences selected on cross-labelled
path products show fringes in the joint phase ``phi + psi``.
"""

from .analysis import FringeFit, ScanSeries, complementarity_test, fit_fringe, flatness_test
from .correlator import (
    CoincidenceValues,
    EventTally,
    LocalIntensities,
    coincidence_values,
    full_product_expansion,
    local_intensity,
    mean_local_intensities,
    monte_carlo_run,
)
from .ensemble import CoherenceReport, EnsembleSpec, coherence_report, sample_pair
from .model import Mode, PathState, PhotonPairSample, SetupConfig, phase_factor, state_norm_sq
from .optics import DetectorAmplitudes, build_amplitudes, per_photon_phases
from .oracle import Observable, analytic_value, brute_force_expectation

__version__ = "0.1.0"

__all__ = [
    "CoherenceReport", "CoincidenceValues", "DetectorAmplitudes", "EnsembleSpec", "EventTally",
    "FringeFit", "LocalIntensities", "Mode", "Observable", "PathState", "PhotonPairSample",
    "ScanSeries", "SetupConfig", "analytic_value", "brute_force_expectation",
    "build_amplitudes", "coherence_report", "coincidence_values", "complementarity_test",
    "fit_fringe", "flatness_test", "full_product_expansion", "local_intensity",
    "mean_local_intensities", "monte_carlo_run", "per_photon_phases", "phase_factor",
    "sample_pair", "state_norm_sq",
]
