from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, NamedTuple


class Command(Enum):
    SPECTRA = "spectra"
    QUADRATURE = "quadrature"
    PAIRS = "pairs"
    FIG3 = "fig3"
    FILTERS = "filters"
    EPR_DEMO = "epr-demo"


class Side(Enum):
    FIRST = 1
    SECOND = 2


class Parameter(NamedTuple):
    parse: Callable[[Any], Any]
    default: Any
    description: str
    check: Callable[[Any], None] | None = None


@dataclass(frozen=True)
class CommandSpec:
    name: Command
    description: str
    parameters: dict[str, Parameter]
    supports_oracle: bool = False
    # commands without a table write only a JSON summary
    table: bool = True


@dataclass
class CommandResult:
    """Rows for the CSV table and/or scalars for the JSON summary."""

    columns: list[str] = field(default_factory=list)
    rows: list[tuple] = field(default_factory=list)
    summary: dict[str, Any] | None = None
    # normalized frequency column -> name of the column added by --gamma-hz
    frequency_columns: dict[str, str] = field(default_factory=dict)
