import math

import numpy as np
import pytest

from magicbullet.errors import (
    DimensionMismatchError,
    OrthogonalProjectionError,
    PreconditionError,
    WindowTooShortError,
)
from magicbullet.opa import OpaParams, fluorescence_spectrum
from magicbullet.pairs import (
    PairState,
    WavepacketState,
    build_pair_state,
    conjugate_fidelity,
    flat_wavepacket,
    gaussian_wavepacket,
    half_power_width,
    project_signal,
)


def _random_wavepacket(n_modes: int, seed: int) -> WavepacketState:
    rng = np.random.default_rng(seed)
    phi = rng.standard_normal(n_modes) + 1j * rng.standard_normal(n_modes)
    return WavepacketState(n_modes=n_modes, phi=phi / np.linalg.norm(phi))


def test_build_pair_state():
    pair = build_pair_state(OpaParams(g2=0.01), t_window=100.0, n_modes=201)
    assert np.sum(np.abs(pair.psi) ** 2) == pytest.approx(1.0, abs=1e-12)
    assert np.array_equal(pair.psi, pair.psi[::-1])
    assert pair.mode_freqs[101] == pytest.approx(2 * math.pi / 100)
    assert pair.mode_indices[0] == -100


def test_single_mode_pair():
    pair = build_pair_state(OpaParams(g2=0.01), t_window=100.0, n_modes=1)
    np.testing.assert_allclose(pair.psi, [1.0])
    prob, idler = project_signal(pair, WavepacketState(n_modes=1, phi=np.array([1.0])))
    assert prob == pytest.approx(1.0)
    np.testing.assert_allclose(idler.phi, [1.0])


def test_weak_pump_profile():
    pair = build_pair_state(OpaParams(g2=1e-6), t_window=200.0, n_modes=101)
    x = pair.mode_freqs
    profile = 1.0 / (1.0 + x * x) ** 2
    np.testing.assert_allclose(
        np.abs(pair.psi) ** 2, profile / profile.sum(), rtol=1e-5
    )


def test_build_pair_state_preconditions():
    with pytest.raises(WindowTooShortError):
        build_pair_state(OpaParams(g2=0.01), t_window=10.0, n_modes=11)
    with pytest.raises(PreconditionError):
        build_pair_state(OpaParams(g2=0.01), t_window=100.0, n_modes=10)


def test_flat_pair_returns_exact_conjugate():
    n_modes = 64
    pair = PairState(
        n_modes=n_modes,
        psi=np.full(n_modes, 1 / math.sqrt(n_modes)),
        mode_freqs=np.arange(n_modes, dtype=float),
    )
    phi = _random_wavepacket(n_modes, seed=0)
    prob, idler = project_signal(pair, phi)
    assert prob == pytest.approx(1 / n_modes)
    np.testing.assert_allclose(idler.phi, phi.phi.conj(), atol=1e-12)
    assert conjugate_fidelity(idler, phi) == pytest.approx(1.0, abs=1e-12)


def test_flat_over_support_is_exact():
    pair = build_pair_state(OpaParams(g2=0.01), t_window=100.0, n_modes=101)
    psi = pair.psi.copy()
    psi[45:56] = psi[50]
    psi = psi / np.linalg.norm(psi)
    flat = PairState(n_modes=101, psi=psi, mode_freqs=pair.mode_freqs)
    phi = np.zeros(101, dtype=complex)
    phi[45:56] = np.exp(1j * np.linspace(0, 3, 11))
    phi = WavepacketState(n_modes=101, phi=phi / np.linalg.norm(phi))
    _, idler = project_signal(flat, phi)
    assert conjugate_fidelity(idler, phi) == pytest.approx(1.0, abs=1e-12)


def test_narrow_gaussian_wavepacket():
    pair = build_pair_state(OpaParams(g2=0.01), t_window=100.0, n_modes=201)
    phi = gaussian_wavepacket(pair, center=0.0, rms_width=0.05)
    prob, idler = project_signal(pair, phi)
    assert conjugate_fidelity(idler, phi) > 0.999
    assert prob <= np.max(np.abs(pair.psi) ** 2)


def test_central_band_projection():
    p = OpaParams(g2=0.01)
    pair = build_pair_state(p, t_window=1000.0, n_modes=2001)
    # the band is the half-power width of the fluorescence spectrum
    phi = flat_wavepacket(pair, 0.1 * half_power_width(p))
    prob, idler = project_signal(pair, phi)
    assert conjugate_fidelity(idler, phi) > 0.99
    assert prob < 0.2
    assert prob <= np.max(np.abs(pair.psi) ** 2)


def test_fidelity_degrades_with_support():
    pair = build_pair_state(OpaParams(g2=0.01), t_window=1000.0, n_modes=2001)
    fidelities = []
    for half_width in (0.05, 0.2, 0.5, 1.0, 2.0):
        phi = flat_wavepacket(pair, half_width)
        _, idler = project_signal(pair, phi)
        fidelities.append(conjugate_fidelity(idler, phi))
    assert all(a > b for a, b in zip(fidelities, fidelities[1:]))


def test_fidelity_bounds():
    phi = _random_wavepacket(8, seed=1)
    conj = WavepacketState(n_modes=8, phi=phi.phi.conj())
    assert conjugate_fidelity(conj, phi) == pytest.approx(1.0)

    phi = WavepacketState(n_modes=2, phi=np.array([1.0, 0.0]))
    orthogonal = WavepacketState(n_modes=2, phi=np.array([0.0, 1.0]))
    assert conjugate_fidelity(orthogonal, phi) == 0.0


def test_orthogonal_projection():
    pair = PairState(
        n_modes=3, psi=np.array([1.0, 0.0, 0.0]), mode_freqs=np.array([-1.0, 0.0, 1.0])
    )
    phi = WavepacketState(n_modes=3, phi=np.array([0.0, 1.0, 0.0]))
    with pytest.raises(OrthogonalProjectionError):
        project_signal(pair, phi)
    with pytest.raises(DimensionMismatchError):
        project_signal(pair, WavepacketState(n_modes=2, phi=np.array([1.0, 0.0])))


def test_half_power_width():
    for g2 in (0.01, 0.3, 0.9):
        p = OpaParams(g2=g2)
        width = half_power_width(p)
        assert float(fluorescence_spectrum(p, width)) == pytest.approx(
            float(fluorescence_spectrum(p, 0.0)) / 2, rel=1e-12
        )
