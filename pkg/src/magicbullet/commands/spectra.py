from typing import Any, Mapping

import numpy as np

from magicbullet.commands.checks import check_g2, check_positive_int
from magicbullet.errors import ValidationError
from magicbullet.opa import OpaParams, spectra_table
from magicbullet.types import Command, CommandResult, CommandSpec, Parameter

SpectraCommand = CommandSpec(
    name=Command.SPECTRA,
    description="Fluorescence and phase-sensitive spectra on a detuning grid.",
    parameters={
        "g2": Parameter(float, 0.01, "Pump power normalized to threshold.", check_g2),
        "x_min": Parameter(float, -5.0, "Lowest normalized detuning ω/Γ."),
        "x_max": Parameter(float, 5.0, "Highest normalized detuning ω/Γ."),
        "points": Parameter(int, 1001, "Number of grid points.", check_positive_int),
    },
)


def spectra(params: Mapping[str, Any], seed: int, with_oracle: bool) -> CommandResult:
    if params["x_max"] < params["x_min"]:
        raise ValidationError("x_max must not be below x_min")
    xs = np.linspace(params["x_min"], params["x_max"], params["points"])
    xs, s_n, s_p = spectra_table(OpaParams(g2=params["g2"]), xs)
    return CommandResult(
        columns=["x", "s_n", "s_p"],
        rows=[(float(x), float(n), float(p)) for x, n, p in zip(xs, s_n, s_p)],
        frequency_columns={"x": "detuning_hz"},
    )
