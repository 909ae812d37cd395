"""Local intensities and selectively measured coincidence rates.

A coincidence between D0 and an idler detector expands the product of the two
path amplitudes over the four label pairs AA, AB, BA, BB. Only the
cross-labelled pairs (signal A with idler B, signal B with idler A) are
counted; the same-label pairs are discarded, which costs half of the
incoherent product weight for every pair.

``FRINGE_SIGN`` fixes the sign with which the interference between the two
kept terms enters the rate. The literal term expansion with the beam-splitter
convention of :mod:`eraser_sim.optics` gives ``(1 + sin(phi + psi)) / 2`` at
D1; the published fringes are ``(1 - sin(phi + psi)) / 2`` at D1 and the
opposite at D2, which is what the default ``-1`` reproduces. Either sign keeps
``r01 + r02 = 1`` and the dependence on ``phi + psi`` alone.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import kernels
from .ensemble import EnsembleSpec, sample_block
from .model import InputError, Mode, PhotonPairSample, SetupConfig
from .optics import build_amplitudes

FRINGE_SIGN = -1.0

IDLER_DETECTORS = ("D1", "D2", "D3", "D4")
LABELS = ("AA", "AB", "BA", "BB")
KEPT_LABELS = frozenset({"AB", "BA"})


@dataclass(frozen=True)
class LocalIntensities:
    i10: float
    i21: float
    i22: float
    i23: float
    i24: float


@dataclass(frozen=True)
class CoincidenceValues:
    r01: float
    r02: float
    r03: float
    r04: float
    discarded_weight: float

    def rate(self, detector: str) -> float:
        return getattr(self, "r0" + detector[1])


@dataclass(frozen=True)
class EventTally:
    n01: int
    n02: int
    n03: int
    n04: int
    n_lost: int
    n_pairs: int

    @property
    def loss_fraction(self) -> float:
        return self.n_lost / self.n_pairs

    def count(self, detector: str) -> int:
        return getattr(self, "n0" + detector[1])

    def rate_estimate(self, detector: str) -> float:
        """Coincidence rate (units I0**2) implied by the counts at one detector."""
        return self.count(detector) * _TOTAL_WEIGHT[detector] / self.n_pairs

    def __add__(self, other: EventTally) -> EventTally:
        return EventTally(*(a + b for a, b in zip(_astuple(self), _astuple(other))))


def _astuple(t: EventTally):
    return (t.n01, t.n02, t.n03, t.n04, t.n_lost, t.n_pairs)


# Incoherent product weight norm(e10) * norm(e2k) summed over a mode's live
# detectors; outcome probabilities are rates divided by it.
_TOTAL_WEIGHT = {"D1": 2.0, "D2": 2.0, "D3": 0.5, "D4": 0.5}


class ProductTerm(NamedTuple):
    label: str
    amplitude: complex

    @property
    def kept(self) -> bool:
        return self.label in KEPT_LABELS


def _expand(signal, idler) -> list[ProductTerm]:
    scale = signal.prefactor * idler.prefactor
    sig = {"A": signal.coeff_A, "B": signal.coeff_B}
    idl = {"A": idler.coeff_A, "B": idler.coeff_B}
    return [ProductTerm(lab, scale * sig[lab[0]] * idl[lab[1]]) for lab in LABELS]


def _selected_rate(terms: list[ProductTerm], fringe_sign: float) -> float:
    t_ab, t_ba = terms[1].amplitude, terms[2].amplitude
    cross = (t_ab * t_ba.conjugate()).real
    return abs(t_ab) ** 2 + abs(t_ba) ** 2 + 2.0 * fringe_sign * cross


def _check_detector(config: SetupConfig, detector: str):
    if detector not in IDLER_DETECTORS:
        raise InputError(f"unknown idler detector {detector!r}")
    if detector not in config.live_detectors:
        raise InputError(f"{detector} is not live in {config.mode.name} mode")


def full_product_expansion(sample: PhotonPairSample, config: SetupConfig,
                           idler_detector: str) -> list[ProductTerm]:
    """All four path-product terms of D0 with one idler detector, unfiltered."""
    _check_detector(config, idler_detector)
    amps = build_amplitudes(sample, config)
    return _expand(amps.e10, amps.idler(idler_detector))


def local_intensity(sample: PhotonPairSample, config: SetupConfig) -> LocalIntensities:
    amps = build_amplitudes(sample, config)

    def intensity(s):
        return s.prefactor ** 2 * abs(s.coeff_A + s.coeff_B) ** 2

    return LocalIntensities(intensity(amps.e10), intensity(amps.e21), intensity(amps.e22),
                            intensity(amps.e23), intensity(amps.e24))


def coincidence_values(sample: PhotonPairSample, config: SetupConfig,
                       fringe_sign: float = FRINGE_SIGN) -> CoincidenceValues:
    """Selected coincidence rates for one pair, in units of I0**2.

    Rates are reported for all four idler detectors; ``discarded_weight`` is the
    fraction of the incoherent product weight dropped over the live ones.
    """
    amps = build_amplitudes(sample, config)
    rates = {}
    kept = dropped = 0.0
    for det in IDLER_DETECTORS:
        terms = _expand(amps.e10, amps.idler(det))
        rates[det] = _selected_rate(terms, fringe_sign)
        if det in config.live_detectors:
            for t in terms:
                w = abs(t.amplitude) ** 2
                if t.kept:
                    kept += w
                else:
                    dropped += w
    return CoincidenceValues(rates["D1"], rates["D2"], rates["D3"], rates["D4"],
                             dropped / (kept + dropped))


def kept_weight_ratio(sample: PhotonPairSample, config: SetupConfig) -> float:
    """Kept incoherent product weight over the total, across live detectors."""
    return 1.0 - coincidence_values(sample, config).discarded_weight


# --- ensembles -------------------------------------------------------------

@dataclass(frozen=True)
class PointResult:
    """Everything one Monte-Carlo run at fixed phases produces."""

    means: LocalIntensities
    mean_rates: CoincidenceValues
    tally: EventTally


def _column_means(values: np.ndarray) -> np.ndarray:
    # Rows of the transposed copy are contiguous, so numpy sums them pairwise.
    return np.ascontiguousarray(values.T).sum(axis=1) / values.shape[0]


def _means(values: np.ndarray) -> tuple[LocalIntensities, CoincidenceValues]:
    m = [float(x) for x in _column_means(values)]
    loc = LocalIntensities(*m[kernels.I10:kernels.I24 + 1])
    rates = CoincidenceValues(*m[kernels.R01:kernels.R04 + 1], discarded_weight=0.5)
    return loc, rates


def _tally(outcomes: np.ndarray, n: int) -> EventTally:
    c = np.bincount(outcomes.astype(np.intp), minlength=5)
    return EventTally(int(c[kernels.HIT_D1]), int(c[kernels.HIT_D2]), int(c[kernels.HIT_D3]),
                      int(c[kernels.HIT_D4]), int(c[kernels.LOST]), n)


def ensemble_values(spec: EnsembleSpec, config: SetupConfig,
                    fringe_sign: float = FRINGE_SIGN) -> np.ndarray:
    """Per-pair local intensities and rates as an (n_pairs, 9) array."""
    b = sample_block(spec)
    return kernels.pair_values(b.delta_f, b.eta, b.zeta_s, b.zeta_id, b.theta_id,
                               config.phi, config.psi, config.tau, fringe_sign)


def mean_local_intensities(spec: EnsembleSpec, config: SetupConfig) -> LocalIntensities:
    return _means(ensemble_values(spec, config))[0]


def run_point(spec: EnsembleSpec, config: SetupConfig,
              fringe_sign: float = FRINGE_SIGN) -> PointResult:
    values, outcomes = kernels.simulate(spec.key, 0, spec.n_pairs, spec.sigma, config.phi,
                                        config.psi, config.tau, fringe_sign, int(config.mode))
    loc, rates = _means(values)
    return PointResult(loc, rates, _tally(outcomes, spec.n_pairs))


def monte_carlo_run(spec: EnsembleSpec, config: SetupConfig) -> EventTally:
    """Draw one coincidence outcome per pair and count them.

    Eraser mode: D1 with probability r01/2, D2 with r02/2, discarded otherwise.
    Which-way modes: the live detector with probability 2*r03 (or 2*r04), which
    is 1/2, discarded otherwise.
    """
    return run_point(spec, config).tally


def outcome_probabilities(config: SetupConfig, rates: CoincidenceValues) -> dict[str, float]:
    probs = {det: rates.rate(det) / _TOTAL_WEIGHT[det] for det in config.live_detectors}
    probs["lost"] = 1.0 - sum(probs.values())
    return probs


__all__ = [
    "FRINGE_SIGN", "LocalIntensities", "CoincidenceValues", "EventTally", "ProductTerm",
    "PointResult", "Mode", "local_intensity", "coincidence_values", "full_product_expansion",
    "kept_weight_ratio", "mean_local_intensities", "monte_carlo_run", "run_point",
    "ensemble_values", "outcome_probabilities",
]
