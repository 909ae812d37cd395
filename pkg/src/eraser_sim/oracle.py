"""Closed-form observables and a deterministic grid-average cross-check."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import kernels
from .correlator import FRINGE_SIGN, kept_weight_ratio
from .ensemble import FWHM_TO_SIGMA
from .model import TWO_PI, InputError, PhotonPairSample, SetupConfig


class Observable(enum.Enum):
    I10 = "I10"
    I21 = "I21"
    I22 = "I22"
    R01 = "R01"
    R02 = "R02"
    R03 = "R03"
    R04 = "R04"

    @classmethod
    def parse(cls, name) -> Observable:
        if isinstance(name, Observable):
            return name
        try:
            return cls(str(name).upper())
        except ValueError:
            raise InputError(f"unknown observable {name!r}") from None


_COLUMN = {
    Observable.I10: kernels.I10,
    Observable.I21: kernels.I21,
    Observable.I22: kernels.I22,
    Observable.R01: kernels.R01,
    Observable.R02: kernels.R02,
    Observable.R03: kernels.R03,
    Observable.R04: kernels.R04,
}


def analytic_value(observable, phi: float, psi: float) -> float:
    """Ensemble-averaged value: I0 units for intensities, I0**2 for rates."""
    obs = Observable.parse(observable)
    if obs in (Observable.I10, Observable.I21, Observable.I22):
        return 1.0
    if obs is Observable.R01:
        return (1.0 - math.sin(phi + psi)) / 2.0
    if obs is Observable.R02:
        return (1.0 + math.sin(phi + psi)) / 2.0
    return 0.25


@dataclass(frozen=True)
class AnalyticCurves:
    i10: Callable[[float], float] = lambda phi: 1.0
    r01: Callable[[float, float], float] = lambda phi, psi: analytic_value("R01", phi, psi)
    r02: Callable[[float, float], float] = lambda phi, psi: analytic_value("R02", phi, psi)
    r03: Callable[[float, float], float] = lambda phi, psi: 0.25
    r04: Callable[[float, float], float] = lambda phi, psi: 0.25


def nuisance_grid(config: SetupConfig, grid_n: int):
    """Quadrature over (eta, delta_f): uniform eta points times Gauss-Hermite detunings.

    Returns flattened ``eta``, ``delta_f`` and normalized ``weights``.
    """
    if grid_n < 8:
        raise InputError(f"grid_n must be >= 8, got {grid_n}")
    eta = TWO_PI * np.arange(grid_n) / grid_n
    sigma = config.delta * FWHM_TO_SIGMA
    if sigma > 0:
        nodes, w = np.polynomial.hermite_e.hermegauss(grid_n)
        df = sigma * nodes
        w = w / w.sum()
    else:
        df, w = np.zeros(1), np.ones(1)
    eta_g, df_g = np.meshgrid(eta, df, indexing="ij")
    weights = np.outer(np.full(grid_n, 1.0 / grid_n), w)
    return eta_g.ravel(), df_g.ravel(), weights.ravel()


def brute_force_expectation(observable, config: SetupConfig, grid_n: int = 64) -> float:
    """Average the per-pair formula over an explicit nuisance grid (no sampling)."""
    obs = Observable.parse(observable)
    eta, df, w = nuisance_grid(config, grid_n)
    zeros = np.zeros_like(eta)
    # Always the numpy layer: keeps this check off the compiled Monte-Carlo path.
    values = kernels.pair_values(df, eta, zeros, zeros, zeros, config.phi, config.psi,
                                 config.tau, FRINGE_SIGN, name="numpy")
    return math.fsum(w * values[:, _COLUMN[obs]])


def brute_force_kept_ratio(config: SetupConfig, grid_n: int = 8) -> float:
    """Grid average of the kept-weight fraction using the scalar amplitude path."""
    eta, df, w = nuisance_grid(config, grid_n)
    return math.fsum(
        wk * kept_weight_ratio(PhotonPairSample(k, float(d), float(e), 0.0, 0.0, 0.0), config)
        for k, (e, d, wk) in enumerate(zip(eta, df, w))
    )
