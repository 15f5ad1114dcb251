from typing import Any, Callable, Mapping, Sequence, TypedDict

from magicbullet.commands.epr_demo import EprDemoCommand, epr_demo
from magicbullet.commands.fig3 import Fig3Command, fig3
from magicbullet.commands.filters import FiltersCommand, filters
from magicbullet.commands.pairs import PairsCommand, pairs
from magicbullet.commands.quadrature import QuadratureCommand, quadrature
from magicbullet.commands.spectra import SpectraCommand, spectra
from magicbullet.errors import ValidationError
from magicbullet.types import Command, CommandResult, CommandSpec


class CommandDefinition(TypedDict):
    command: CommandSpec
    callable: Callable[[Mapping[str, Any], int, bool], CommandResult]


available: Sequence[CommandDefinition] = [
    {"command": SpectraCommand, "callable": spectra},
    {"command": QuadratureCommand, "callable": quadrature},
    {"command": PairsCommand, "callable": pairs},
    {"command": Fig3Command, "callable": fig3},
    {"command": FiltersCommand, "callable": filters},
    {"command": EprDemoCommand, "callable": epr_demo},
]


def get_definition(command: Command | str) -> CommandDefinition:
    try:
        command = Command(command)
    except ValueError:
        raise ValidationError(f"unknown command {command!r}")
    return next(d for d in available if d["command"].name is command)
