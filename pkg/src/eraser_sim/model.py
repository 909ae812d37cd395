"""Shared domain types and physical conventions.

Frequencies never appear on their own: a pair's detuning only enters through
the phase ``delta_f * tau`` (radians). Field amplitudes use ``E0 = 1`` so local
intensities come out in units of ``I0`` and coincidence rates in units of
``I0**2``.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass

TWO_PI = 2.0 * math.pi
E0 = 1.0
INV_SQRT2 = 1.0 / math.sqrt(2.0)


class InputError(ValueError):
    """Raised for arguments outside an operation's domain."""


class Mode(enum.IntEnum):
    """Which idler detectors are live."""

    ERASER = 0
    WHICHWAY_B = 1
    WHICHWAY_A = 2

    @property
    def live_detectors(self) -> tuple[str, ...]:
        return _LIVE[self]

    @classmethod
    def parse(cls, text: str | Mode) -> Mode:
        if isinstance(text, Mode):
            return text
        key = str(text).strip().lower().replace("_", "-")
        try:
            return _MODE_NAMES[key]
        except KeyError:
            raise InputError(f"unknown mode {text!r}") from None


_LIVE = {
    Mode.ERASER: ("D1", "D2"),
    Mode.WHICHWAY_B: ("D3",),
    Mode.WHICHWAY_A: ("D4",),
}
_MODE_NAMES = {
    "eraser": Mode.ERASER,
    "whichway-b": Mode.WHICHWAY_B,
    "whichway-a": Mode.WHICHWAY_A,
}


class Pol(enum.Enum):
    H = "H"
    V = "V"


@dataclass(frozen=True)
class PhotonPairSample:
    """Random draws for one down-converted pair.

    The signal carries ``+delta_f`` and the idler ``-delta_f``, so the pair's
    detunings sum to zero by construction.
    """

    pair_id: int
    delta_f: float
    eta: float
    zeta_s: float
    zeta_id: float
    theta_id: float


@dataclass(frozen=True)
class SetupConfig:
    delta: float = 1.0
    tau: float = 1.0
    phi: float = 0.0
    psi: float = 0.0
    mode: Mode = Mode.ERASER
    e0: float = E0

    def __post_init__(self):
        if not math.isfinite(self.delta) or self.delta < 0:
            raise InputError(f"bandwidth must be finite and >= 0, got {self.delta}")
        if self.e0 != E0:
            raise InputError("field amplitude e0 is fixed at 1")
        for name in ("tau", "phi", "psi"):
            if not math.isfinite(getattr(self, name)):
                raise InputError(f"{name} must be finite")
        object.__setattr__(self, "mode", Mode.parse(self.mode))

    @property
    def live_detectors(self) -> tuple[str, ...]:
        return self.mode.live_detectors


@dataclass(frozen=True)
class PathState:
    """Detector-bound amplitude: ``prefactor * (coeff_A |A> + coeff_B |B>)``.

    Global phases are folded into the two coefficients.
    """

    pol: Pol
    coeff_A: complex
    coeff_B: complex
    prefactor: float = E0 * INV_SQRT2

    def scaled(self, factor: complex) -> PathState:
        return PathState(self.pol, self.coeff_A * factor, self.coeff_B * factor, self.prefactor)


def phase_factor(angle: float) -> complex:
    """Unit phasor ``exp(i*angle)``."""
    if not math.isfinite(angle):
        raise InputError(f"phase angle must be finite, got {angle}")
    return complex(math.cos(angle), math.sin(angle))


def state_norm_sq(s: PathState) -> float:
    """Incoherent path weight ``prefactor**2 * (|coeff_A|**2 + |coeff_B|**2)``."""
    return s.prefactor * s.prefactor * (abs(s.coeff_A) ** 2 + abs(s.coeff_B) ** 2)


def wrap_phase(angle: float) -> float:
    """Reduce an angle to [0, 2pi)."""
    w = math.fmod(angle, TWO_PI)
    if w < 0:
        w += TWO_PI
    return 0.0 if w >= TWO_PI else w


def phase_of(z: complex) -> float:
    return cmath.phase(z)
