import math
from typing import Any, Mapping

import numpy as np

from magicbullet.commands.checks import check_nbar, check_non_negative_int
from magicbullet.fock import homodyne_moments, oracle_state
from magicbullet.opa import TwoModeSqueezedState
from magicbullet.quadrature import conditional_stats, epr_limit_deviation, sample_homodyne
from magicbullet.types import Command, CommandResult, CommandSpec, Parameter

ORACLE_TOLERANCE = 1e-6

QuadratureCommand = CommandSpec(
    name=Command.QUADRATURE,
    description="Sample homodyne outcome pairs of a two-mode squeezed state.",
    parameters={
        "nbar": Parameter(float, 1.0, "Mean photon number per mode.", check_nbar),
        "trials": Parameter(int, 10000, "Number of samples.", check_non_negative_int),
    },
    supports_oracle=True,
)


def quadrature(
    params: Mapping[str, Any], seed: int, with_oracle: bool
) -> CommandResult:
    state = TwoModeSqueezedState(nbar=params["nbar"])
    samples = sample_homodyne(state, params["trials"], seed)
    stats = conditional_stats(state)
    summary: dict[str, Any] = {
        "nbar": state.nbar,
        "trials": len(samples),
        "seed": seed,
        "marg_var": stats.marg_var,
        "cond_var": stats.cond_var,
        "mean_coeff": stats.mean_coeff,
        "epr_limit_deviation": epr_limit_deviation(state),
    }
    if len(samples) > 1:
        residual = samples.a_i1 - stats.mean_coeff * samples.a_s1
        summary["sample_marg_var"] = float(np.var(samples.a_s1))
        summary["sample_cross_cov"] = float(np.mean(samples.a_s1 * samples.a_i1))
        summary["sample_cond_var"] = float(np.var(residual))
    if with_oracle:
        marg_var, cross_cov = homodyne_moments(oracle_state(state.nbar))
        agrees = math.isclose(
            marg_var, stats.marg_var, rel_tol=0, abs_tol=ORACLE_TOLERANCE
        ) and math.isclose(
            cross_cov, stats.cross_cov, rel_tol=0, abs_tol=ORACLE_TOLERANCE
        )
        summary["oracle_marg_var"] = marg_var
        summary["oracle_cross_cov"] = cross_cov
        summary["oracle_agrees"] = agrees
    return CommandResult(
        columns=["trial", "a_s1", "a_i1"],
        rows=[(trial, s.a_s1, s.a_i1) for trial, s in enumerate(samples)],
        summary=summary,
    )
