"""Low-flux signal-idler photon pairs over the Fourier modes of a counting
window, and projection of the signal photon onto a chosen wavepacket."""

import logging
import math
from dataclasses import dataclass, field

import numpy as np
from numpy.typing import ArrayLike, NDArray

from magicbullet.errors import (
    DimensionMismatchError,
    OrthogonalProjectionError,
    PreconditionError,
    ValidationError,
    WindowTooShortError,
)
from magicbullet.opa import OpaParams, fluorescence_spectrum

logger = logging.getLogger(__name__)

NORM_TOL = 1e-12
MIN_GAMMA_T = 50.0
# Conditioning below this probability is treated as conditioning on nothing.
MIN_PROBABILITY = 1e-30


def _normalized(amps: NDArray[np.complex128], what: str) -> NDArray[np.complex128]:
    norm = float(np.sum(np.abs(amps) ** 2))
    if abs(norm - 1.0) > NORM_TOL:
        raise ValidationError(f"{what} is not normalized: Σ|amp|² = {norm!r}")
    return amps


@dataclass(frozen=True)
class PairState:
    """Σ ψ_n |1⟩_S(n) |1⟩_I(n); mode n sits at normalized detuning 2πn/(ΓT)."""

    n_modes: int
    psi: NDArray[np.complex128] = field(repr=False)
    mode_freqs: NDArray[np.float64] = field(repr=False)

    def __post_init__(self):
        psi = np.asarray(self.psi, dtype=complex)
        freqs = np.asarray(self.mode_freqs, dtype=float)
        if psi.shape != (self.n_modes,) or freqs.shape != (self.n_modes,):
            raise DimensionMismatchError(
                f"amplitudes {psi.shape} and frequencies {freqs.shape} do not match "
                f"{self.n_modes} modes"
            )
        object.__setattr__(self, "psi", _normalized(psi, "pair state"))
        object.__setattr__(self, "mode_freqs", freqs)

    @property
    def mode_indices(self) -> NDArray[np.int64]:
        half = (self.n_modes - 1) // 2
        return np.arange(-half, half + 1)


@dataclass(frozen=True)
class WavepacketState:
    n_modes: int
    phi: NDArray[np.complex128] = field(repr=False)

    def __post_init__(self):
        phi = np.asarray(self.phi, dtype=complex)
        if phi.shape != (self.n_modes,):
            raise DimensionMismatchError(
                f"wavepacket of shape {phi.shape} does not match {self.n_modes} modes"
            )
        object.__setattr__(self, "phi", _normalized(phi, "wavepacket"))


def build_pair_state(
    p: OpaParams,
    t_window: float,
    n_modes: int,
    phase: ArrayLike | None = None,
) -> PairState:
    """
    Pair amplitudes ψ_n ∝ √S⁽ⁿ⁾(2πn/(ΓT)) on a symmetric odd mode grid.

    ``t_window`` is in units of the OPA cavity lifetime 1/Γ unless ``p.gamma``
    says otherwise; ``phase`` optionally overrides the real-positive phases.
    """
    gamma_t = p.gamma * t_window
    if not math.isfinite(gamma_t) or gamma_t < MIN_GAMMA_T:
        raise WindowTooShortError(
            f"ΓT = {gamma_t:g} is below {MIN_GAMMA_T:g}; modes would not be independent"
        )
    if int(n_modes) != n_modes or n_modes < 1 or n_modes % 2 == 0:
        raise PreconditionError(f"n_modes must be a positive odd integer, got {n_modes}")
    half = (n_modes - 1) // 2
    n = np.arange(-half, half + 1)
    freqs = 2.0 * math.pi * n / gamma_t
    magnitude = np.sqrt(fluorescence_spectrum(p, freqs))
    if phase is not None:
        phase = np.asarray(phase, dtype=float)
        if phase.shape != (n_modes,):
            raise DimensionMismatchError(f"phase profile of shape {phase.shape}")
        magnitude = magnitude * np.exp(1j * phase)
    norm = math.sqrt(float(np.sum(np.abs(magnitude) ** 2)))
    if norm == 0:
        # zero pump: no pairs to shape, fall back to a flat profile
        magnitude, norm = np.ones(n_modes), math.sqrt(n_modes)
    return PairState(n_modes=n_modes, psi=magnitude / norm, mode_freqs=freqs)


def project_signal(
    pair: PairState, phi: WavepacketState
) -> tuple[float, WavepacketState]:
    """
    Condition on the signal photon being found in ``phi``.

    Returns the success probability Σ|ψ_n|²|φ_n|² and the idler state
    ψ_n φ_n*/√prob left behind.
    """
    if pair.n_modes != phi.n_modes:
        raise DimensionMismatchError(
            f"wavepacket of {phi.n_modes} modes on a pair of {pair.n_modes} modes"
        )
    idler = pair.psi * phi.phi.conj()
    prob = float(np.sum(np.abs(idler) ** 2))
    if prob < MIN_PROBABILITY:
        raise OrthogonalProjectionError(
            f"projection probability {prob:.3e} is indistinguishable from zero"
        )
    idler = idler / math.sqrt(prob)
    # rescale so the idler passes the norm check after the division round-off
    idler = idler / math.sqrt(float(np.sum(np.abs(idler) ** 2)))
    logger.debug("signal projection onto %d modes: prob=%.6e", pair.n_modes, prob)
    return prob, WavepacketState(n_modes=pair.n_modes, phi=idler)


def conjugate_fidelity(idler: WavepacketState, phi: WavepacketState) -> float:
    """|⟨φ*|idler⟩|²; the global phase drops out."""
    if idler.n_modes != phi.n_modes:
        raise DimensionMismatchError(
            f"idler of {idler.n_modes} modes against a wavepacket of {phi.n_modes}"
        )
    overlap = complex(np.sum(idler.phi * phi.phi))
    return min(max(abs(overlap) ** 2, 0.0), 1.0)


def gaussian_wavepacket(
    pair: PairState, center: float, rms_width: float
) -> WavepacketState:
    """Wavepacket with |φ|² a Gaussian of rms width ``rms_width`` in x."""
    if not math.isfinite(rms_width) or rms_width <= 0:
        raise ValidationError(f"rms_width must be positive, got {rms_width}")
    offset = pair.mode_freqs - center
    phi = np.exp(-(offset * offset) / (4.0 * rms_width * rms_width))
    norm = float(np.sum(phi * phi))
    if norm < MIN_PROBABILITY:
        raise OrthogonalProjectionError(
            f"wavepacket at {center} has no weight on the mode grid"
        )
    return WavepacketState(n_modes=pair.n_modes, phi=phi / math.sqrt(norm))


def flat_wavepacket(pair: PairState, half_width: float) -> WavepacketState:
    """Equal amplitudes on every mode with |x| ≤ half_width."""
    support = np.abs(pair.mode_freqs) <= half_width * (1.0 + 1e-12)
    count = int(np.count_nonzero(support))
    if count == 0:
        raise ValidationError(f"no mode lies within |x| ≤ {half_width}")
    return WavepacketState(
        n_modes=pair.n_modes, phi=support.astype(complex) / math.sqrt(count)
    )


def half_power_width(p: OpaParams) -> float:
    """Half width of S⁽ⁿ⁾ at half its peak; the pair band used by the CLI."""
    # in y = x²: y² + (4 - 2b)y + b² = 2b² with b = 1 - G²
    b = 1.0 - p.g2
    y = -(2.0 - b) + math.sqrt((2.0 - b) ** 2 + b * b)
    return math.sqrt(y)
