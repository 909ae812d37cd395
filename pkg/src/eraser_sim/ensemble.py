"""Pair ensembles drawn from the Gaussian detuning spectrum.

Each pair's draws are a pure function of ``(seed, index)``: a SplitMix64 hash
of the counter ``index * 8 + stream`` under a seed-derived key. Any split of an
index range across workers therefore reproduces the single-worker sequence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .model import InputError, PhotonPairSample

FWHM_TO_SIGMA = 1.0 / (2.0 * math.sqrt(2.0 * math.log(2.0)))
MAX_SEED = 2**64 - 1


class UndefinedCoherenceError(ValueError):
    """Coherence times need a nonzero bandwidth."""


@dataclass(frozen=True)
class EnsembleSpec:
    n_pairs: int
    seed: int
    delta: float

    def __post_init__(self):
        if int(self.n_pairs) != self.n_pairs or self.n_pairs < 1:
            raise InputError(f"n_pairs must be a positive integer, got {self.n_pairs}")
        if int(self.seed) != self.seed or not 0 <= self.seed <= MAX_SEED:
            raise InputError(f"seed must be an integer in [0, 2**64), got {self.seed}")
        if not math.isfinite(self.delta) or self.delta < 0:
            raise InputError(f"delta must be finite and >= 0, got {self.delta}")

    @property
    def sigma(self) -> float:
        """Standard deviation of the detuning distribution (``delta`` is its FWHM)."""
        return self.delta * FWHM_TO_SIGMA

    @property
    def key(self) -> np.uint64:
        return kernels.seed_key(self.seed)


@dataclass(frozen=True)
class PairBlock:
    """Column arrays for a contiguous run of pair indices."""

    start: int
    delta_f: np.ndarray
    eta: np.ndarray
    zeta_s: np.ndarray
    zeta_id: np.ndarray
    theta_id: np.ndarray

    def __len__(self):
        return len(self.eta)

    def __getitem__(self, i) -> PhotonPairSample:
        return PhotonPairSample(self.start + i, float(self.delta_f[i]), float(self.eta[i]),
                                float(self.zeta_s[i]), float(self.zeta_id[i]),
                                float(self.theta_id[i]))


@dataclass(frozen=True)
class CoherenceReport:
    tau_0: float
    tau_j_min: float


def sample_block(spec: EnsembleSpec, start: int = 0, stop: int | None = None) -> PairBlock:
    stop = spec.n_pairs if stop is None else stop
    if not 0 <= start <= stop <= spec.n_pairs:
        raise InputError(f"index range [{start}, {stop}) outside [0, {spec.n_pairs})")
    arrays = kernels.draw_pairs(spec.key, start, stop - start, spec.sigma)
    return PairBlock(start, *arrays)


def sample_pair(spec: EnsembleSpec, index: int) -> PhotonPairSample:
    if int(index) != index or not 0 <= index < spec.n_pairs:
        raise InputError(f"pair index {index} outside [0, {spec.n_pairs})")
    return sample_block(spec, index, index + 1)[0]


def coherence_report(spec: EnsembleSpec, gamma_ratio: float) -> CoherenceReport:
    """Ensemble coherence time ``1/delta`` against a single photon's.

    ``gamma_ratio`` is the per-photon linewidth as a fraction of the ensemble
    bandwidth; inhomogeneous broadening means it is below one.
    """
    if spec.delta == 0:
        raise UndefinedCoherenceError("coherence time is undefined for zero bandwidth")
    if not 0 < gamma_ratio <= 1:
        raise InputError(f"gamma_ratio must lie in (0, 1], got {gamma_ratio}")
    return CoherenceReport(tau_0=1.0 / spec.delta, tau_j_min=1.0 / (gamma_ratio * spec.delta))


def derive_seed(seed: int, *path: int) -> int:
    """Independent child seed for, e.g., one scan point of a run."""
    ss = np.random.SeedSequence(entropy=seed, spawn_key=tuple(path))
    return int(ss.generate_state(1, dtype=np.uint64)[0])
