from typing import Any, Mapping

from magicbullet.commands.checks import check_g2, check_grid, check_not_empty
from magicbullet.counting import CavityConfig, fig3_sweep
from magicbullet.fock import bin_sigma2
from magicbullet.opa import OpaParams
from magicbullet.types import Command, CommandResult, CommandSpec, Parameter
from magicbullet.utils import parse_float_list, parse_log_grid

ORACLE_TOLERANCE = 1e-3

Fig3Command = CommandSpec(
    name=Command.FIG3,
    description="Count-difference variance behind detuned measurement cavities.",
    parameters={
        "g2": Parameter(float, 0.01, "Pump power normalized to threshold.", check_g2),
        "dx": Parameter(
            parse_float_list, [0.0, 1.0, 2.0], "Cavity detunings Δω/Γ.", check_not_empty
        ),
        "gc_grid": Parameter(
            parse_log_grid,
            parse_log_grid("1e-3:1e1:25"),
            "Cavity linewidths Γc/Γ as start:stop:count.",
            check_grid,
        ),
    },
    supports_oracle=True,
)


def fig3(params: Mapping[str, Any], seed: int, with_oracle: bool) -> CommandResult:
    opa = OpaParams(g2=params["g2"])
    rows: list[tuple] = list(fig3_sweep(opa, params["dx"], params["gc_grid"]))
    columns = ["dx", "gc_over_g", "sigma2"]
    if with_oracle:
        columns += ["oracle_sigma2", "oracle_agrees"]
        checked = []
        for dx, gc, sigma2 in rows:
            oracle = bin_sigma2(opa, CavityConfig(gc_over_g=gc, dx=dx))
            agrees = abs(oracle - sigma2) <= ORACLE_TOLERANCE
            checked.append((dx, gc, sigma2, oracle, agrees))
        rows = checked
    return CommandResult(
        columns=columns, rows=rows, frequency_columns={"gc_over_g": "gc_hz"}
    )
