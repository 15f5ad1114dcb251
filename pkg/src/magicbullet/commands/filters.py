from typing import Any, Mapping

from magicbullet.commands.checks import check_g2, check_orders, check_positive
from magicbullet.counting import FilterConfig, filter_sweep
from magicbullet.fock import bin_sigma2
from magicbullet.opa import OpaParams
from magicbullet.types import Command, CommandResult, CommandSpec, Parameter
from magicbullet.utils import parse_int_list

ORACLE_TOLERANCE = 1e-3

FiltersCommand = CommandSpec(
    name=Command.FILTERS,
    description="Count-difference variance behind matched Butterworth filters.",
    parameters={
        "g2": Parameter(float, 0.01, "Pump power normalized to threshold.", check_g2),
        "k": Parameter(parse_int_list, [1, 2, 4, 8], "Filter orders K.", check_orders),
        "wc_over_g": Parameter(float, 1e-3, "Cutoff ω_c/Γ.", check_positive),
        "dx": Parameter(float, 0.0, "Filter detuning Δω/Γ."),
    },
    supports_oracle=True,
)


def filters(params: Mapping[str, Any], seed: int, with_oracle: bool) -> CommandResult:
    opa = OpaParams(g2=params["g2"])
    rows: list[tuple] = list(
        filter_sweep(opa, params["k"], params["wc_over_g"], params["dx"])
    )
    columns = ["K", "wc_over_g", "sigma2", "law_1_over_2K"]
    if with_oracle:
        columns += ["oracle_sigma2", "oracle_agrees"]
        checked = []
        for k, wc, sigma2, law in rows:
            oracle = bin_sigma2(
                opa, FilterConfig(k_order=k, wc_over_g=wc, dx=params["dx"])
            )
            agrees = abs(oracle - sigma2) <= ORACLE_TOLERANCE
            checked.append((k, wc, sigma2, law, oracle, agrees))
        rows = checked
    return CommandResult(
        columns=columns, rows=rows, frequency_columns={"wc_over_g": "wc_hz"}
    )
