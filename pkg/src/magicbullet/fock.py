"""Brute-force Fock-space oracle.

Certifies the closed forms of :mod:`magicbullet.quadrature` and
:mod:`magicbullet.counting` by exact number counting on truncated two-mode
squeezed states, without ever using Gaussian moment factoring.
"""

import logging
import math
from dataclasses import dataclass, field

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy import stats
from scipy.integrate import quad

from magicbullet.config import envConfig
from magicbullet.counting import (
    CavityConfig,
    FilterConfig,
    breakpoints,
    butterworth_transmission,
    cavity_transmission,
    kernel_bandwidth,
    quadrature_limit,
)
from magicbullet.errors import CoverageError, TruncationError, ValidationError
from magicbullet.opa import (
    OpaParams,
    TwoModeSqueezedState,
    fluorescence_spectrum,
    phase_sensitive_spectrum,
    schmidt_coefficients,
    tail_mass,
    truncation_for,
)

logger = logging.getLogger(__name__)

NORM_TOL = 1e-10
DEFAULT_BINS = 2001
MIN_BINS = 101
MIN_CAPTURED = 0.9999
# target for spans chosen by resolve_grid
DEFAULT_CAPTURED = 0.99999
# largest photon number the oracle will hold per mode
MAX_FOCK = 600


@dataclass(frozen=True)
class TruncatedTwoModeState:
    n_max: int
    amps: NDArray[np.complex128] = field(repr=False)

    def __post_init__(self):
        amps = np.asarray(self.amps, dtype=complex)
        if amps.shape != (self.n_max + 1, self.n_max + 1):
            raise ValidationError(
                f"amplitudes of shape {amps.shape} do not match n_max {self.n_max}"
            )
        norm = float(np.sum(np.abs(amps) ** 2))
        if not 1.0 - NORM_TOL <= norm <= 1.0 + 1e-14:
            raise TruncationError(f"truncated state norm {norm!r} is outside tolerance")
        object.__setattr__(self, "amps", amps)

    @property
    def number_distribution(self) -> NDArray[np.float64]:
        """P[n_S, n_I]."""
        return np.abs(self.amps) ** 2


@dataclass(frozen=True)
class NumberMoments:
    mean_s: float
    mean_i: float
    second_s: float
    second_i: float
    cross: float
    pair_moment: complex = 0j

    @property
    def difference_second_moment(self) -> float:
        """⟨(n_S - n_I)²⟩."""
        return self.second_s + self.second_i - 2.0 * self.cross

    @property
    def sigma2(self) -> float:
        total = self.mean_s + self.mean_i
        if total <= 0:
            return 1.0
        return self.difference_second_moment / total


@dataclass(frozen=True)
class Bin:
    center: float
    weight: float
    cross_weight: float
    transmission: float


@dataclass(frozen=True)
class BinDecomposition:
    bins: tuple[Bin, ...]
    bin_width: float

    def __post_init__(self):
        if self.bin_width <= 0:
            raise ValidationError("bin width must be positive")
        if any(not 0.0 <= b.transmission <= 1.0 for b in self.bins):
            raise ValidationError("bin transmissions must lie in [0, 1]")

    @property
    def centers(self) -> NDArray[np.float64]:
        return np.array([b.center for b in self.bins])

    @property
    def weights(self) -> NDArray[np.float64]:
        return np.array([b.weight for b in self.bins])

    @property
    def cross_weights(self) -> NDArray[np.float64]:
        return np.array([b.cross_weight for b in self.bins])

    @property
    def transmissions(self) -> NDArray[np.float64]:
        return np.array([b.transmission for b in self.bins])


def make_tmss(nbar: float, n_max: int | None = None) -> TruncatedTwoModeState:
    """Truncated two-mode squeezed vacuum, diagonal in |n⟩_S|n⟩_I."""
    eps = envConfig.MAGICBULLET_TAIL_EPS
    if n_max is None:
        n_max = truncation_for(nbar, eps)
    elif nbar > 0 and tail_mass(nbar, n_max) >= eps:
        raise TruncationError(
            f"n_max = {n_max} leaves tail mass {tail_mass(nbar, n_max):.3e} for "
            f"nbar = {nbar}, above {eps:.0e}"
        )
    coefficients = schmidt_coefficients(TwoModeSqueezedState(nbar=nbar), n_max)
    return TruncatedTwoModeState(n_max=n_max, amps=np.diag(coefficients).astype(complex))


def _pair_moment(state: TruncatedTwoModeState) -> complex:
    # ⟨â_S â_I⟩ = Σ c*_{n,m} c_{n+1,m+1} √((n+1)(m+1))
    amps = state.amps
    root = np.sqrt(np.arange(1, state.n_max + 1))
    shifted = amps[1:, 1:] * np.outer(root, root)
    return complex(np.sum(amps[:-1, :-1].conj() * shifted))


def attenuate(
    state: TruncatedTwoModeState, eta_s: float, eta_i: float
) -> NumberMoments:
    """
    Exact photon-number moments after coupling each mode to vacuum.

    Each photon survives independently (Bernoulli thinning), so the thinned
    joint distribution is Bsᵀ P Bi with Bs[n, k] = Binom(k; n, η_s).
    """
    for name, eta in (("eta_s", eta_s), ("eta_i", eta_i)):
        if not 0.0 <= eta <= 1.0:
            raise ValidationError(f"{name} must lie in [0, 1], got {eta}")
    n = np.arange(state.n_max + 1)
    thin_s = stats.binom.pmf(n[None, :], n[:, None], eta_s)
    thin_i = stats.binom.pmf(n[None, :], n[:, None], eta_i)
    joint = thin_s.T @ state.number_distribution @ thin_i
    marginal_s = joint.sum(axis=1)
    marginal_i = joint.sum(axis=0)
    return NumberMoments(
        mean_s=float(n @ marginal_s),
        mean_i=float(n @ marginal_i),
        second_s=float((n * n) @ marginal_s),
        second_i=float((n * n) @ marginal_i),
        cross=float(n @ joint @ n),
        pair_moment=math.sqrt(eta_s * eta_i) * _pair_moment(state),
    )


def homodyne_moments(state: TruncatedTwoModeState) -> tuple[float, float]:
    """
    Marginal variance and cross covariance of the â₁ = (â + â†)/2 quadratures.

    Both are computed from the Fock amplitudes with ladder matrices one level
    larger than the state, so that x̂² is exact on the kept levels; the means
    vanish for the squeezed vacuum.
    """
    n_max = state.n_max
    lowering = np.diag(np.sqrt(np.arange(1, n_max + 2)), k=1)
    x_ext = (lowering + lowering.T) / 2.0
    x = x_ext[: n_max + 1, : n_max + 1]
    x2 = (x_ext @ x_ext)[: n_max + 1, : n_max + 1]
    amps = state.amps
    marg_var = float(np.real(np.sum(amps.conj() * (x2 @ amps))))
    cross_cov = float(np.real(np.sum(amps.conj() * (x @ amps @ x.T))))
    return marg_var, cross_cov


def equivalent_tmss(n: float, q: float) -> tuple[float, float]:
    """
    (N̄, η) such that a two-mode squeezed state of occupation N̄, attenuated
    by η on both modes, has mean occupation ``n`` and cross moment ``q``.

    Two-mode Gaussian states are fixed by these moments, so the number
    statistics of the pair follow exactly from :func:`attenuate`.
    """
    if n <= 0:
        return 0.0, 0.0
    excess = q * q - n * n
    if excess <= 0:
        raise ValidationError(f"cross moment {q} is not above the mean occupation {n}")
    nbar = n * n / excess
    eta = min(excess / n, 1.0)
    return nbar, eta


def _bin_centers(n_bins: int, span: float) -> tuple[NDArray[np.float64], float]:
    width = span / n_bins
    return (np.arange(n_bins) - (n_bins - 1) / 2) * width, width


def _kernel_transmission(
    kernel: CavityConfig | FilterConfig, u: ArrayLike
) -> NDArray[np.float64]:
    if isinstance(kernel, CavityConfig):
        return cavity_transmission(u, kernel.gc_over_g)
    return butterworth_transmission(u, kernel.wc_over_g, kernel.k_order)


def _captured(weighted, half_span: float, points: list[float] | None) -> float:
    inside = quad(weighted, -half_span, half_span, points=points, limit=500)[0]
    outside = (
        quad(weighted, half_span, np.inf, limit=500)[0]
        + quad(weighted, -np.inf, -half_span, limit=500)[0]
    )
    total = inside + outside
    return 1.0 if total <= 0 else inside / total


def captured_fraction(
    p: OpaParams, kernel: CavityConfig | FilterConfig, half_span: float
) -> float:
    """
    Share of the kernel-weighted spectra inside ±half_span.

    Both the occupation S⁽ⁿ⁾ and the cross moment S⁽ᵖ⁾ are weighted; the
    smaller fraction is returned. S⁽ᵖ⁾ has the slower tails.
    """
    dx = abs(kernel.dx)
    points = breakpoints(kernel_bandwidth(kernel), dx, half_span) or None
    fractions = []
    for spectrum in (fluorescence_spectrum, phase_sensitive_spectrum):

        def weighted(u: float, spectrum=spectrum) -> float:
            return float(_kernel_transmission(kernel, u) * spectrum(p, u + dx))

        fractions.append(_captured(weighted, half_span, points))
    return min(fractions)


def resolve_grid(
    p: OpaParams,
    kernel: CavityConfig | FilterConfig,
    n_bins: int | None = None,
    span: float | None = None,
) -> tuple[int, float]:
    """
    Fill in a missing bin count or span.

    The span doubles from 40 kernel bandwidths until it captures
    DEFAULT_CAPTURED of both weighted spectra; bins are then made four times
    narrower than the kernel or the unit spectral linewidth, whichever is
    finer.
    """
    bandwidth = kernel_bandwidth(kernel)
    if span is None:
        limit = quadrature_limit(bandwidth)
        half = min(20.0 * bandwidth, limit)
        while half < limit and captured_fraction(p, kernel, half) < DEFAULT_CAPTURED:
            half = min(2.0 * half, limit)
        span = 2.0 * half
    if n_bins is None:
        resolution = min(bandwidth, 1.0) / 4.0
        n_bins = max(DEFAULT_BINS, math.ceil(span / resolution))
        n_bins += 1 - n_bins % 2
    return n_bins, span


def decompose(
    p: OpaParams,
    kernel: CavityConfig | FilterConfig,
    n_bins: int | None = None,
    span: float | None = None,
) -> BinDecomposition:
    """
    Split the stationary field into independent frequency-bin mode pairs.

    Bin j holds a signal mode at kernel offset u_j paired with its idler
    partner; its occupation and cross moment come from the spectra at
    u_j + dx and its transmission from the measurement kernel.
    """
    n_bins, span = resolve_grid(p, kernel, n_bins, span)
    if n_bins < MIN_BINS or n_bins % 2 == 0:
        raise CoverageError(f"n_bins must be odd and at least {MIN_BINS}, got {n_bins}")
    if not math.isfinite(span) or span <= 0:
        raise ValidationError(f"span must be positive, got {span}")
    bandwidth = kernel_bandwidth(kernel)
    centers, width = _bin_centers(n_bins, span)
    if width > 2.0 * bandwidth:
        raise CoverageError(
            f"bin width {width:.3e} does not resolve kernel bandwidth {bandwidth:.3e}"
        )
    if p.g2 > 0:
        captured = captured_fraction(p, kernel, span / 2.0)
        if captured < MIN_CAPTURED:
            raise CoverageError(f"span {span} misses kernel-weighted spectrum", captured)
    dx = abs(kernel.dx)
    weights = fluorescence_spectrum(p, centers + dx)
    cross = phase_sensitive_spectrum(p, centers + dx)
    transmissions = _kernel_transmission(kernel, centers)
    bins = tuple(
        Bin(center=float(c), weight=float(w), cross_weight=float(x), transmission=float(t))
        for c, w, x, t in zip(centers, weights, cross, transmissions)
    )
    return BinDecomposition(bins=bins, bin_width=width)


def oracle_state(nbar: float) -> TruncatedTwoModeState:
    n_max = truncation_for(nbar, envConfig.MAGICBULLET_TAIL_EPS)
    if n_max > MAX_FOCK:
        raise TruncationError(
            f"nbar = {nbar:.4g} needs n_max = {n_max}, above the oracle limit {MAX_FOCK}"
        )
    return make_tmss(nbar, n_max)


def _cavity_sigma2(decomposition: BinDecomposition, gc_over_g: float) -> float:
    # the cavity holds a single mode: bins add coherently into one occupation
    # and one cross moment, whose counting statistics are then exact
    coupling = decomposition.transmissions * decomposition.bin_width / (math.pi * gc_over_g)
    n = float(np.sum(coupling * decomposition.weights))
    q = float(np.sum(coupling * decomposition.cross_weights))
    nbar, eta = equivalent_tmss(n, q)
    return attenuate(oracle_state(nbar), eta, eta).sigma2


def _filter_sigma2(decomposition: BinDecomposition) -> float:
    # bins are independent and hold a number of modes proportional to the
    # bin width; long counts add their variances and covariances
    mean = variance = covariance = 0.0
    for b in decomposition.bins:
        if b.weight <= 0 or b.transmission <= 0:
            continue
        nbar, eta = equivalent_tmss(b.weight, b.cross_weight)
        m = attenuate(oracle_state(nbar), eta * b.transmission, eta * b.transmission)
        mean += m.mean_s + m.mean_i
        variance += m.second_s - m.mean_s**2 + m.second_i - m.mean_i**2
        covariance += m.cross - m.mean_s * m.mean_i
    if mean <= 0:
        return 1.0
    return (variance - 2.0 * covariance) / mean


def bin_sigma2(
    p: OpaParams,
    kernel: CavityConfig | FilterConfig,
    n_bins: int | None = None,
    span: float | None = None,
) -> float:
    """
    Normalized photocount-difference variance by exact per-bin number counting.

    Converges to the closed forms of :mod:`magicbullet.counting` as n_bins
    grows at fixed span. Missing grid parameters come from :func:`resolve_grid`.
    """
    if p.g2 == 0:
        return 1.0
    decomposition = decompose(p, kernel, n_bins=n_bins, span=span)
    if isinstance(kernel, CavityConfig):
        sigma2 = _cavity_sigma2(decomposition, kernel.gc_over_g)
    else:
        sigma2 = _filter_sigma2(decomposition)
    logger.debug(
        "bin oracle %s with %d bins of width %.3e: sigma2=%.9f",
        type(kernel).__name__,
        len(decomposition.bins),
        decomposition.bin_width,
        sigma2,
    )
    return sigma2
