"""Photocount-difference statistics behind a measurement cavity or a pair of
Butterworth filters, by spectral integration and Gaussian moment factoring.

For a zero-mean Gaussian state ⟨n̂²⟩ = 2N² + N and ⟨n̂_S n̂_I⟩ = N_S N_I + |q|².
The :mod:`magicbullet.fock` oracle checks these formulas by exact counting.
"""

import asyncio
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Any, Awaitable, Callable, Iterable, Sequence, TypeVar

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.integrate import quad

from magicbullet.config import envConfig
from magicbullet.errors import IntegrationError, PreconditionError, ValidationError
from magicbullet.opa import OpaParams, fluorescence_spectrum, phase_sensitive_spectrum

logger = logging.getLogger(__name__)

EPSREL = 1e-9
EPSABS = 1e-15
# quad may flag round-off while still meeting this relative error; that is accepted.
ACCEPTED_RELERR = 1e-6
QUAD_LIMIT = 1000

T = TypeVar("T")


@dataclass(frozen=True)
class CavityConfig:
    gc_over_g: float
    dx: float = 0.0
    steady_state: bool = True
    gc_tc: float | None = None

    def __post_init__(self):
        if not math.isfinite(self.gc_over_g) or self.gc_over_g <= 0:
            raise ValidationError(f"gc_over_g must be positive, got {self.gc_over_g}")
        if not math.isfinite(self.dx):
            raise ValidationError(f"dx must be finite, got {self.dx}")
        if self.gc_tc is not None and self.gc_tc <= 0:
            raise ValidationError(f"gc_tc must be positive, got {self.gc_tc}")

    @property
    def transient_bound(self) -> float:
        """Bound e^(-Γc T_c) on the dropped vacuum initial-condition terms."""
        return 0.0 if self.gc_tc is None else math.exp(-self.gc_tc)


@dataclass(frozen=True)
class FilterConfig:
    k_order: int
    wc_over_g: float
    dx: float = 0.0
    long_count: bool = True

    def __post_init__(self):
        if int(self.k_order) != self.k_order or self.k_order < 1:
            raise ValidationError(f"k_order must be an integer ≥ 1, got {self.k_order}")
        if not math.isfinite(self.wc_over_g) or self.wc_over_g <= 0:
            raise ValidationError(f"wc_over_g must be positive, got {self.wc_over_g}")
        if not math.isfinite(self.dx):
            raise ValidationError(f"dx must be finite, got {self.dx}")


@dataclass(frozen=True)
class CountStatistics:
    """
    Count moments and the normalized difference variance σ².

    Cavity statistics are single-mode photon numbers and ``q2`` = |⟨â_S â_I⟩|².
    Filter statistics are per unit of normalized counting time ΓT: ``n_s`` and
    ``n_i`` are mean count rates, ``q2`` the signal-idler covariance rate and
    ``excess`` the excess (super-Poissonian) variance rate of each arm.
    """

    n_s: float
    n_i: float
    q2: float
    sigma2: float
    excess: float | None = None
    transient_bound: float = 0.0

    def within_quantum_bound(self, slack: float = 1e-6) -> bool:
        if self.excess is None:
            bound = self.n_s * self.n_i + min(self.n_s, self.n_i)
        else:
            bound = self.excess + min(self.n_s, self.n_i)
        return self.q2 <= bound * (1.0 + slack) + EPSABS


def shot_noise_reference() -> float:
    """σ² of two independent coherent-state beams."""
    return 1.0


def cavity_transmission(u: ArrayLike, gc_over_g: float) -> NDArray[np.float64]:
    """Peak-normalized Lorentzian power transmission of the measurement cavity."""
    u = np.asarray(u, dtype=float)
    return gc_over_g * gc_over_g / (gc_over_g * gc_over_g + u * u)


def cavity_kernel(u: ArrayLike, gc_over_g: float) -> NDArray[np.float64]:
    """Cavity power kernel ℓ(u); integrates to one over the real line."""
    return cavity_transmission(u, gc_over_g) / (math.pi * gc_over_g)


def butterworth_transmission(
    u: ArrayLike, wc_over_g: float, k_order: int
) -> NDArray[np.float64]:
    u = np.asarray(u, dtype=float)
    with np.errstate(over="ignore"):
        return 1.0 / (1.0 + np.power(np.abs(u / wc_over_g), 2 * k_order))


def kernel_bandwidth(config: CavityConfig | FilterConfig) -> float:
    if isinstance(config, CavityConfig):
        return config.gc_over_g
    return config.wc_over_g


def quadrature_limit(bandwidth: float) -> float:
    return max(50.0, 100.0 * bandwidth)


def breakpoints(bandwidth: float, dx: float, limit: float) -> list[float]:
    """Kernel and spectrum features that the adaptive quadrature must not miss."""
    candidates = {0.0, -dx, -dx - 1.0, -dx + 1.0}
    for decade in (1.0, 10.0, 100.0, 1000.0):
        candidates.update((decade * bandwidth, -decade * bandwidth))
    return sorted(c for c in candidates if -limit < c < limit)


def integrate(
    integrand: Callable[[float], float], bandwidth: float, dx: float
) -> float:
    """
    Adaptive quadrature of ``integrand`` over u ∈ [-U, U].

    U = max(50, 100·bandwidth). Raises IntegrationError when QUADPACK stops
    short and its error estimate is above ACCEPTED_RELERR.
    """
    limit = quadrature_limit(bandwidth)
    points = breakpoints(bandwidth, dx, limit)
    result = quad(
        integrand,
        -limit,
        limit,
        points=points,
        epsabs=EPSABS,
        epsrel=EPSREL,
        limit=QUAD_LIMIT,
        full_output=1,
    )
    value, abserr = float(result[0]), float(result[1])
    if len(result) > 3:
        if abserr > ACCEPTED_RELERR * abs(value) + EPSABS:
            raise IntegrationError(f"quadrature failed: {result[3]}", abserr)
        logger.warning(
            "quadrature reported %r but met %.1e relative error",
            result[3],
            ACCEPTED_RELERR,
        )
    logger.debug(
        "∫ over ±%g with %d breakpoints: %.12e ± %.2e",
        limit,
        len(points),
        value,
        abserr,
    )
    return value


def difference_variance(n_s: float, n_i: float, q2: float) -> float:
    """
    ⟨(n̂_S - n̂_I)²⟩/(⟨n̂_S⟩ + ⟨n̂_I⟩) for a zero-mean Gaussian mode pair.

    Reported as the shot-noise value at zero flux.
    """
    total = n_s + n_i
    if total <= 0:
        return shot_noise_reference()
    second = 2 * n_s * n_s + n_s + 2 * n_i * n_i + n_i - 2 * n_s * n_i - 2 * q2
    return max(second, 0.0) / total


def cavity_moments(p: OpaParams, c: CavityConfig) -> CountStatistics:
    """Steady-state single-mode counts of a pair of detuned measurement cavities."""
    if not c.steady_state:
        raise PreconditionError("cavity statistics require Γc·T_c ≫ 1 (steady state)")
    if p.g2 == 0:
        return CountStatistics(
            n_s=0.0,
            n_i=0.0,
            q2=0.0,
            sigma2=shot_noise_reference(),
            transient_bound=c.transient_bound,
        )
    # every kernel and spectrum is even, so σ²(dx) = σ²(-dx) exactly
    dx = abs(c.dx)
    a = c.gc_over_g

    def mean(u: float) -> float:
        return float(cavity_kernel(u, a) * fluorescence_spectrum(p, u + dx))

    def cross(u: float) -> float:
        return float(cavity_kernel(u, a) * phase_sensitive_spectrum(p, u + dx))

    n = integrate(mean, a, dx)
    q = integrate(cross, a, dx)
    q2 = q * q
    return CountStatistics(
        n_s=n,
        n_i=n,
        q2=q2,
        sigma2=difference_variance(n, n, q2),
        transient_bound=c.transient_bound,
    )


def filter_moments(p: OpaParams, f: FilterConfig) -> CountStatistics:
    """
    Long-count statistics behind matched K-th order Butterworth filters.

    σ² = 1 + (e - c)/r with r the mean rate, e the excess variance rate and
    c the covariance rate; for a narrow flat-topped passband σ² → 1/(2K).
    """
    if not f.long_count:
        raise PreconditionError("filter statistics require ω_c·T ≫ 1 (long counts)")
    if p.g2 == 0:
        return CountStatistics(
            n_s=0.0, n_i=0.0, q2=0.0, sigma2=shot_noise_reference(), excess=0.0
        )
    dx = abs(f.dx)
    w, k = f.wc_over_g, f.k_order

    def rate(u: float) -> float:
        return float(butterworth_transmission(u, w, k) * fluorescence_spectrum(p, u + dx))

    def excess(u: float) -> float:
        return float(
            butterworth_transmission(u, w, k) ** 2 * fluorescence_spectrum(p, u + dx) ** 2
        )

    def covariance(u: float) -> float:
        return float(
            butterworth_transmission(u, w, k) ** 2
            * phase_sensitive_spectrum(p, u + dx) ** 2
        )

    r = integrate(rate, w, dx) / (2 * math.pi)
    e = integrate(excess, w, dx) / (2 * math.pi)
    cov = integrate(covariance, w, dx) / (2 * math.pi)
    sigma2 = max(1.0 + (e - cov) / r, 0.0) if r > 0 else shot_noise_reference()
    return CountStatistics(n_s=r, n_i=r, q2=cov, sigma2=sigma2, excess=e)


def butterworth_law(k_order: int) -> float:
    return 1.0 / (2 * k_order)


async def sweep(
    evaluate: Callable[..., T],
    arguments: Sequence[tuple[Any, ...]],
    workers: int | None = None,
) -> list[T]:
    """
    Evaluate ``evaluate(*args)`` for every argument tuple.

    Results come back in argument order whatever order the evaluations finish
    in. With more than one worker they run in a process pool.
    """
    workers = envConfig.MAGICBULLET_WORKERS if workers is None else workers
    if workers <= 1 or len(arguments) <= 1:
        return [evaluate(*args) for args in arguments]
    loop = asyncio.get_running_loop()
    with ProcessPoolExecutor(max_workers=workers) as pool:
        tasks: Iterable[Awaitable[T]] = [
            loop.run_in_executor(pool, evaluate, *args) for args in arguments
        ]
        return list(await asyncio.gather(*tasks))


def _cavity_sigma2(p: OpaParams, gc_over_g: float, dx: float) -> float:
    return cavity_moments(p, CavityConfig(gc_over_g=gc_over_g, dx=dx)).sigma2


def _filter_sigma2(p: OpaParams, k_order: int, wc_over_g: float, dx: float) -> float:
    return filter_moments(p, FilterConfig(k_order=k_order, wc_over_g=wc_over_g, dx=dx)).sigma2


def fig3_sweep(
    p: OpaParams,
    dx_list: Sequence[float],
    gc_grid: Sequence[float],
    workers: int | None = None,
) -> list[tuple[float, float, float]]:
    """Rows (dx, gc_over_g, sigma2) of the cavity-linewidth sweep."""
    grid = [(float(dx), float(gc)) for dx in dx_list for gc in gc_grid]
    logger.info("cavity sweep over %d grid points", len(grid))
    values = asyncio.run(
        sweep(_cavity_sigma2, [(p, gc, dx) for dx, gc in grid], workers)
    )
    return [(dx, gc, sigma2) for (dx, gc), sigma2 in zip(grid, values)]


def filter_sweep(
    p: OpaParams,
    k_orders: Sequence[int],
    wc_over_g: float,
    dx: float = 0.0,
    workers: int | None = None,
) -> list[tuple[int, float, float, float]]:
    """Rows (K, wc_over_g, sigma2, 1/2K) of the filter-order sweep."""
    logger.info("filter sweep over %d orders", len(k_orders))
    values = asyncio.run(
        sweep(_filter_sigma2, [(p, int(k), wc_over_g, dx) for k in k_orders], workers)
    )
    return [
        (int(k), float(wc_over_g), sigma2, butterworth_law(int(k)))
        for k, sigma2 in zip(k_orders, values)
    ]
