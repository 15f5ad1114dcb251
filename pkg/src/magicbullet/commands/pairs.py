from typing import Any, Mapping

import numpy as np

from magicbullet.commands.checks import (
    check_g2,
    check_gamma_t,
    check_odd_modes,
    check_positive,
)
from magicbullet.opa import OpaParams
from magicbullet.pairs import (
    build_pair_state,
    conjugate_fidelity,
    gaussian_wavepacket,
    half_power_width,
    project_signal,
)
from magicbullet.types import Command, CommandResult, CommandSpec, Parameter

PairsCommand = CommandSpec(
    name=Command.PAIRS,
    description="Project the signal photon of a pair onto a Gaussian wavepacket.",
    parameters={
        "g2": Parameter(float, 0.01, "Pump power normalized to threshold.", check_g2),
        "gamma_t": Parameter(float, 100.0, "Counting window ΓT.", check_gamma_t),
        "modes": Parameter(int, 201, "Odd number of Fourier modes.", check_odd_modes),
        "phi_center": Parameter(float, 0.0, "Wavepacket center ω/Γ."),
        "phi_width": Parameter(
            float, 0.05, "Wavepacket rms width in ω/Γ.", check_positive
        ),
    },
)


def pairs(params: Mapping[str, Any], seed: int, with_oracle: bool) -> CommandResult:
    opa = OpaParams(g2=params["g2"])
    pair = build_pair_state(opa, params["gamma_t"], params["modes"])
    phi = gaussian_wavepacket(pair, params["phi_center"], params["phi_width"])
    prob, idler = project_signal(pair, phi)
    fidelity = conjugate_fidelity(idler, phi)
    psi2 = np.abs(pair.psi) ** 2
    phi2 = np.abs(phi.phi) ** 2
    idler2 = np.abs(idler.phi) ** 2
    rows = [
        (int(n), float(x), float(a), float(b), float(c), fidelity)
        for n, x, a, b, c in zip(pair.mode_indices, pair.mode_freqs, psi2, phi2, idler2)
    ]
    return CommandResult(
        columns=["n", "x", "psi2", "phi2", "idler2", "fidelity"],
        rows=rows,
        summary={
            "prob": prob,
            "fidelity": fidelity,
            "band_half_width": half_power_width(opa),
            "max_psi2": float(psi2.max()),
        },
        frequency_columns={"x": "detuning_hz"},
    )
