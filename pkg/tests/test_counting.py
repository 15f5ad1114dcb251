import numpy as np
import pytest
from scipy.integrate import quad

from magicbullet.counting import (
    CavityConfig,
    CountStatistics,
    FilterConfig,
    butterworth_law,
    butterworth_transmission,
    cavity_kernel,
    cavity_moments,
    difference_variance,
    fig3_sweep,
    filter_moments,
    filter_sweep,
    shot_noise_reference,
    sweep,
)
from magicbullet.errors import PreconditionError, ValidationError
from magicbullet.opa import OpaParams
from magicbullet.utils import parse_log_grid

P = OpaParams(g2=0.01)


def test_shot_noise_reference():
    assert shot_noise_reference() == 1.0
    assert difference_variance(0.0, 0.0, 0.0) == 1.0
    # independent thermal beams are super-Poissonian
    assert difference_variance(0.5, 0.5, 0.0) > 1.0


def test_config_validation():
    with pytest.raises(ValidationError):
        CavityConfig(gc_over_g=0.0)
    with pytest.raises(ValidationError):
        FilterConfig(k_order=0, wc_over_g=0.1)
    with pytest.raises(ValidationError):
        FilterConfig(k_order=1.5, wc_over_g=0.1)
    with pytest.raises(ValidationError):
        FilterConfig(k_order=2, wc_over_g=-1.0)
    with pytest.raises(PreconditionError):
        cavity_moments(P, CavityConfig(gc_over_g=0.1, steady_state=False))
    with pytest.raises(PreconditionError):
        filter_moments(P, FilterConfig(k_order=1, wc_over_g=0.1, long_count=False))


def test_transient_bound():
    assert CavityConfig(gc_over_g=0.1).transient_bound == 0.0
    stats = cavity_moments(P, CavityConfig(gc_over_g=0.1, gc_tc=20.0))
    assert stats.transient_bound == pytest.approx(np.exp(-20.0))


def test_cavity_kernel_is_normalized():
    area, _ = quad(lambda u: float(cavity_kernel(u, 0.5)), -np.inf, np.inf)
    assert area == pytest.approx(1.0, abs=1e-9)


def test_butterworth_transmission():
    assert float(butterworth_transmission(0.0, 0.1, 4)) == 1.0
    assert float(butterworth_transmission(0.1, 0.1, 4)) == pytest.approx(0.5)
    assert float(butterworth_transmission(1e6, 1e-3, 8)) < 1e-100
    assert float(butterworth_transmission(1e30, 1e-3, 8)) == 0.0


def test_zero_flux():
    quiet = OpaParams(g2=0.0)
    assert cavity_moments(quiet, CavityConfig(gc_over_g=0.1)).sigma2 == 1.0
    assert filter_moments(quiet, FilterConfig(k_order=2, wc_over_g=0.1)).sigma2 == 1.0


def test_narrow_cavity_shows_magic_bullet():
    stats = cavity_moments(P, CavityConfig(gc_over_g=1e-3))
    assert stats.sigma2 < 0.05
    assert stats.within_quantum_bound()


def test_broad_cavity_approaches_shot_noise():
    stats = cavity_moments(P, CavityConfig(gc_over_g=1e3))
    assert stats.sigma2 == pytest.approx(1.0, abs=0.01)


@pytest.mark.parametrize("dx", [0.0, 1.0, 2.0])
def test_cavity_sweep_is_monotone(dx):
    grid = parse_log_grid("1e-3:1:13")
    sigma2 = [s for _, _, s in fig3_sweep(P, [dx], grid, workers=1)]
    assert all(b >= a - 1e-9 for a, b in zip(sigma2, sigma2[1:]))
    assert all(0.0 <= s <= 1.0 for s in sigma2)


def test_detuning_symmetry():
    plus = cavity_moments(P, CavityConfig(gc_over_g=0.3, dx=0.7))
    minus = cavity_moments(P, CavityConfig(gc_over_g=0.3, dx=-0.7))
    assert plus == minus
    plus = filter_moments(P, FilterConfig(k_order=2, wc_over_g=0.3, dx=1.1))
    minus = filter_moments(P, FilterConfig(k_order=2, wc_over_g=0.3, dx=-1.1))
    assert plus == minus


@pytest.mark.parametrize("k_order", [1, 2, 4, 8])
def test_butterworth_law(k_order):
    stats = filter_moments(P, FilterConfig(k_order=k_order, wc_over_g=1e-3))
    assert stats.sigma2 / butterworth_law(k_order) == pytest.approx(1.0, abs=0.05)
    assert stats.within_quantum_bound()


def test_filter_statistics_fields():
    stats = filter_moments(P, FilterConfig(k_order=2, wc_over_g=0.1))
    assert isinstance(stats, CountStatistics)
    assert stats.n_s == stats.n_i > 0
    assert stats.excess is not None
    assert stats.sigma2 == pytest.approx(1.0 + (stats.excess - stats.q2) / stats.n_s)


def test_filter_sweep_rows():
    rows = filter_sweep(P, [1, 2], 1e-3, workers=1)
    assert [row[0] for row in rows] == [1, 2]
    assert [row[3] for row in rows] == [0.5, 0.25]


def _square(x: float) -> float:
    return x * x


@pytest.mark.asyncio
async def test_sweep_keeps_argument_order():
    values = await sweep(_square, [(3.0,), (1.0,), (2.0,)], workers=1)
    assert values == [9.0, 1.0, 4.0]


@pytest.mark.asyncio
async def test_sweep_in_process_pool():
    values = await sweep(_square, [(float(i),) for i in range(6)], workers=2)
    assert values == [float(i * i) for i in range(6)]


def test_parallel_fig3_sweep_matches_serial():
    grid = [1e-2, 1e-1, 1.0]
    serial = fig3_sweep(P, [0.0, 1.0], grid, workers=1)
    parallel = fig3_sweep(P, [0.0, 1.0], grid, workers=2)
    assert serial == parallel


def test_empty_grid_gives_empty_table():
    assert fig3_sweep(P, [0.0], []) == []
    assert fig3_sweep(P, [], [1e-3, 1e-2]) == []
