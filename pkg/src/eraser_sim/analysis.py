"""Fringe extraction from phase scans.

Scans are fitted with the linear model ``y = c + a*sin(x) + b*cos(x)``, which
has a closed-form least-squares solution. Visibility is ``hypot(a, b) / c`` and
the fringe phase ``p`` is defined by ``y = c + A*sin(x + p)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .model import InputError


class FitError(ValueError):
    pass


class UnderdeterminedError(FitError):
    pass


class DegenerateDesignError(FitError):
    pass


@dataclass(frozen=True)
class ScanSeries:
    x: np.ndarray
    y: np.ndarray
    y_err: np.ndarray | None = None

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        y = np.asarray(self.y, dtype=float)
        if x.ndim != 1 or x.shape != y.shape:
            raise InputError("x and y must be 1-d and of equal length")
        if len(x) < 4:
            raise InputError(f"a scan needs at least 4 points, got {len(x)}")
        if np.any(np.diff(x) <= 0):
            raise InputError("scan x must be strictly increasing")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)
        if self.y_err is not None:
            e = np.asarray(self.y_err, dtype=float)
            if e.shape != y.shape or np.any(e <= 0):
                raise InputError("y_err must be positive and match y")
            object.__setattr__(self, "y_err", e)


@dataclass(frozen=True)
class FringeFit:
    c: float
    a: float
    b: float
    visibility: float
    phase: float
    residual_rms: float
    raw_visibility: float
    visibility_err: float = math.nan
    amplitude_err: float = math.nan
    covariance: np.ndarray = field(default=None, repr=False, compare=False)

    @property
    def amplitude(self) -> float:
        return math.hypot(self.a, self.b)


def _raw_visibility(y: np.ndarray) -> float:
    hi, lo = float(y.max()), float(y.min())
    return (hi - lo) / (hi + lo) if hi + lo != 0 else math.nan


def fit_fringe(s) -> FringeFit:
    """Least-squares sinusoid fit of a ScanSeries.

    A bare ``(x, y)`` or ``(x, y, y_err)`` tuple is also accepted, without the
    ScanSeries ordering and length checks.
    """
    if not isinstance(s, ScanSeries):
        x, y, *rest = s
        err = rest[0] if rest else None
        s = object.__new__(ScanSeries)
        object.__setattr__(s, "x", np.asarray(x, dtype=float))
        object.__setattr__(s, "y", np.asarray(y, dtype=float))
        object.__setattr__(s, "y_err", None if err is None else np.asarray(err, dtype=float))
    x, y = s.x, s.y
    if len(np.unique(x)) < 3:
        raise UnderdeterminedError("need at least 3 distinct phase values")
    design = np.column_stack([np.ones_like(x), np.sin(x), np.cos(x)])
    if s.y_err is not None:
        wts = 1.0 / s.y_err
        lhs, rhs = design * wts[:, None], y * wts
    else:
        lhs, rhs = design, y
    sv = np.linalg.svd(lhs, compute_uv=False)
    if sv[-1] <= sv[0] * 1e-10:
        raise DegenerateDesignError("sin/cos design is singular for these phases")
    coef, *_ = np.linalg.lstsq(lhs, rhs, rcond=None)
    c, a, b = (float(v) for v in coef)

    resid = y - design @ coef
    rms = float(np.sqrt(np.mean(resid**2)))
    inv = np.linalg.inv(lhs.T @ lhs)
    if s.y_err is not None:
        cov = inv
    else:
        dof = len(x) - 3
        cov = inv * (float(resid @ resid) / dof if dof > 0 else math.nan)

    amp = math.hypot(a, b)
    if c != 0:
        vis = amp / c
    else:
        vis = math.inf if amp > 0 else 0.0
    # Linearized error propagation through hypot(a, b) / c.
    if amp > 0 and c != 0:
        grad_amp = np.array([0.0, a / amp, b / amp])
        grad_vis = np.array([-amp / c**2, a / (amp * c), b / (amp * c)])
        amp_err = math.sqrt(max(grad_amp @ cov @ grad_amp, 0.0))
        vis_err = math.sqrt(max(grad_vis @ cov @ grad_vis, 0.0))
    else:
        amp_err = math.sqrt(max(0.5 * (cov[1, 1] + cov[2, 2]), 0.0))
        vis_err = amp_err / abs(c) if c else math.nan
    return FringeFit(c, a, b, vis, math.atan2(b, a), rms, _raw_visibility(y),
                     vis_err, amp_err, cov)


def flatness_test(s: ScanSeries, threshold: float) -> tuple[bool, float]:
    """Pass when the fitted fringe visibility does not exceed ``threshold``."""
    if not threshold > 0:
        raise InputError("threshold must be positive")
    vis = fit_fringe(s).visibility
    return vis <= threshold, vis


def amplitude_flatness_test(s: ScanSeries, n_sigma: float = 3.0) -> tuple[bool, float]:
    """Pass when the fitted sinusoid amplitude is within ``n_sigma`` of zero.

    Needs ``y_err`` (e.g. binomial errors) so the amplitude error is known.
    Returns the amplitude in units of its standard error.
    """
    if s.y_err is None:
        raise InputError("amplitude flatness needs per-point errors")
    fit = fit_fringe(s)
    if fit.amplitude == 0:
        return True, 0.0
    z = fit.amplitude / fit.amplitude_err if fit.amplitude_err > 0 else math.inf
    return z <= n_sigma, z


def complementarity_test(s01: ScanSeries, s02: ScanSeries, tol: float) -> tuple[bool, float]:
    """Pass when ``|y01 + y02 - 1| <= tol`` at every scan point."""
    if s01.x.shape != s02.x.shape or not np.array_equal(s01.x, s02.x):
        raise InputError("complementary scans must share the same x grid")
    dev = float(np.max(np.abs(s01.y + s02.y - 1.0)))
    return dev <= tol, dev
