from typing import Any, Mapping

import numpy as np

from magicbullet.commands.checks import check_non_negative_int, check_positive_int
from magicbullet.epr import (
    apply_bilateral_scattering,
    make_maximally_entangled,
    measure_correlated,
    random_basis,
    random_unitary,
)
from magicbullet.types import Command, CommandResult, CommandSpec, Parameter
from magicbullet.utils import child_seeds

EprDemoCommand = CommandSpec(
    name=Command.EPR_DEMO,
    description="Scatter both halves of an EPR pair and measure conjugate bases.",
    parameters={
        "d": Parameter(int, 4, "Dimension of each particle.", check_positive_int),
        "trials": Parameter(
            int, 10000, "Number of joint measurements.", check_non_negative_int
        ),
    },
    table=False,
)


def epr_demo(params: Mapping[str, Any], seed: int, with_oracle: bool) -> CommandResult:
    d, trials = params["d"], params["trials"]
    scatter_seed, basis_seed, trial_seed = child_seeds(seed, 3)
    pair = apply_bilateral_scattering(
        make_maximally_entangled(d), random_unitary(d, scatter_seed)
    )
    outcomes = measure_correlated(pair, random_basis(d, basis_seed), trials, trial_seed)
    matches = int(np.count_nonzero(outcomes[:, 0] == outcomes[:, 1]))
    return CommandResult(
        summary={
            "d": d,
            "trials": trials,
            "seed": seed,
            "matches": matches,
            "match_fraction": matches / trials if trials else 1.0,
            "outcome_counts": np.bincount(outcomes[:, 0], minlength=d).tolist(),
        }
    )
