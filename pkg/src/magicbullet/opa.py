"""Closed-form output statistics of a doubly resonant, lossless OPA.

All frequencies are the dimensionless detuning ``x = ω/Γ``.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike, NDArray

from magicbullet.errors import AboveThresholdError, ValidationError

logger = logging.getLogger(__name__)

# Nearer threshold the spectra diverge and downstream quadratures lose accuracy.
G2_CEILING = 0.99


@dataclass(frozen=True)
class OpaParams:
    g2: float
    gamma: float = 1.0

    def __post_init__(self):
        if not math.isfinite(self.g2) or self.g2 < 0:
            raise ValidationError(f"g2 must be a non-negative number, got {self.g2}")
        if self.g2 >= 1.0:
            raise AboveThresholdError(
                f"g2 = {self.g2} is at or above the oscillation threshold"
            )
        if self.g2 > G2_CEILING:
            raise AboveThresholdError(
                f"g2 = {self.g2} exceeds the supported ceiling {G2_CEILING}"
            )
        if not math.isfinite(self.gamma) or self.gamma <= 0:
            raise ValidationError(f"gamma must be positive, got {self.gamma}")

    @property
    def gain(self) -> float:
        return math.sqrt(self.g2)


@dataclass(frozen=True)
class TwoModeSqueezedState:
    nbar: float

    def __post_init__(self):
        if not math.isfinite(self.nbar) or self.nbar < 0:
            raise ValidationError(f"nbar must be non-negative, got {self.nbar}")


def _denominator(g2: float, x: NDArray[np.float64]) -> NDArray[np.float64]:
    # |1 - G² - x² - 2ix|², written in x² so that it is exactly even
    x2 = x * x
    real = 1.0 - g2 - x2
    return real * real + 4.0 * x2


def fluorescence_spectrum(p: OpaParams, x: ArrayLike) -> NDArray[np.float64]:
    """Normally ordered spectrum S⁽ⁿ⁾(x), the mean photon number per mode."""
    x = np.asarray(x, dtype=float)
    return 4.0 * p.g2 / _denominator(p.g2, x)


def phase_sensitive_spectrum(p: OpaParams, x: ArrayLike) -> NDArray[np.float64]:
    """Signal-idler cross spectrum S⁽ᵖ⁾(x); real and non-negative for this source."""
    x = np.asarray(x, dtype=float)
    return 2.0 * p.gain * (1.0 + p.g2 + x * x) / _denominator(p.g2, x)


def spectra_table(
    p: OpaParams, xs: ArrayLike
) -> tuple[NDArray[np.float64], NDArray[np.float64], NDArray[np.float64]]:
    xs = np.asarray(xs, dtype=float)
    return xs, fluorescence_spectrum(p, xs), phase_sensitive_spectrum(p, xs)


def mode_pair_state(p: OpaParams, dx: float) -> TwoModeSqueezedState:
    """Joint state of the signal mode at +dx and its idler partner at -dx."""
    return TwoModeSqueezedState(nbar=float(fluorescence_spectrum(p, dx)))


def schmidt_coefficients(s: TwoModeSqueezedState, n_max: int) -> NDArray[np.float64]:
    """
    Bose-Einstein Schmidt coefficients √(N̄ⁿ/(N̄+1)ⁿ⁺¹) for n = 0..n_max.

    The squares sum to 1 - (N̄/(N̄+1))^(n_max+1); the remainder is the
    truncated tail.
    """
    if n_max < 0:
        raise ValidationError(f"n_max must be non-negative, got {n_max}")
    ratio = s.nbar / (s.nbar + 1.0)
    n = np.arange(n_max + 1)
    return np.sqrt(np.power(ratio, n) / (s.nbar + 1.0))


def tail_mass(nbar: float, n_max: int) -> float:
    return (nbar / (nbar + 1.0)) ** (n_max + 1)


def truncation_for(nbar: float, eps: float = 1e-12) -> int:
    """
    Smallest n_max whose truncated Bose-Einstein tail mass is below ``eps``.

    :param nbar: Mean photon number per mode
    :param eps: Tail mass target
    :return: Truncation index n_max
    """
    if nbar <= 0:
        return 0
    n_max = max(math.ceil(math.log(eps) / math.log(nbar / (nbar + 1.0))) - 1, 0)
    # ceil() can land exactly on the boundary, where the tail equals eps
    while tail_mass(nbar, n_max) >= eps:
        n_max += 1
    logger.debug("truncation for nbar=%g at eps=%g: n_max=%d", nbar, eps, n_max)
    return n_max
