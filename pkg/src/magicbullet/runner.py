"""Turn command-line options and config files into a validated RunConfig and
execute it."""

import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping

from dotenv import dotenv_values

from magicbullet.commands import get_definition
from magicbullet.config import envConfig, parse_bool
from magicbullet.errors import ConfigError, MagicBulletError, ValidationError
from magicbullet.export import default_output, with_frequency_labels, write_result
from magicbullet.types import Command

logger = logging.getLogger(__name__)

COMMON_KEYS = ("seed", "output", "with_oracle", "gamma_hz")


@dataclass(frozen=True)
class RunConfig:
    command: Command
    params: dict[str, Any]
    seed: int = 0
    output_path: Path = field(default=Path("."))
    with_oracle: bool = False
    gamma_hz: float | None = None

    def header(self) -> dict[str, Any]:
        """Everything that determines the output, i.e. all but the output path."""
        return {
            "command": self.command.value,
            "params": self.params,
            "seed": self.seed,
            "with_oracle": self.with_oracle,
            "gamma_hz": self.gamma_hz,
        }


def _normalize_key(key: str) -> str:
    return key.strip().lower().replace("-", "_")


def _read_config_file(path: Path) -> dict[str, Any]:
    if not path.is_file():
        raise ConfigError("config", f"no such file {path}")
    values: dict[str, Any] = {}
    for key, value in dotenv_values(path).items():
        if value is None:
            raise ConfigError(_normalize_key(key), "missing value")
        values[_normalize_key(key)] = value
    return values


def _parse_seed(value: Any) -> int:
    seed = int(value)
    if seed < 0:
        raise ValidationError(f"must be non-negative, got {seed}")
    return seed


def _parse_gamma_hz(value: Any) -> float:
    gamma_hz = float(value)
    if not math.isfinite(gamma_hz) or gamma_hz <= 0:
        raise ValidationError(f"must be positive, got {gamma_hz}")
    return gamma_hz


def _convert(key: str, value: Any, parse) -> Any:
    try:
        return parse(value)
    except ValidationError as e:
        raise ConfigError(key, str(e))
    except (TypeError, ValueError):
        raise ConfigError(key, f"malformed value {value!r}")


def parse_config(
    command: Command | str,
    options: Mapping[str, Any] | None = None,
    config_file: Path | None = None,
) -> RunConfig:
    """
    Merge config-file values and command-line options into a RunConfig.

    :param command: Command name
    :param options: Values given on the command line; None means not given
    :param config_file: Optional ``key = value`` file
    :return: A RunConfig whose parameters passed every range check
    """
    definition = get_definition(command)
    command_spec = definition["command"]
    values = _read_config_file(config_file) if config_file is not None else {}
    values.update(
        {_normalize_key(k): v for k, v in (options or {}).items() if v is not None}
    )
    unknown = sorted(set(values) - set(command_spec.parameters) - set(COMMON_KEYS))
    if unknown:
        raise ConfigError(unknown[0], f"unknown key for {command_spec.name.value}")

    params: dict[str, Any] = {}
    for key, parameter in command_spec.parameters.items():
        if key not in values:
            params[key] = parameter.default
            continue
        value = _convert(key, values[key], parameter.parse)
        if parameter.check is not None:
            _convert(key, value, parameter.check)
        params[key] = value

    if "output" in values:
        output_path = Path(values["output"])
    else:
        output_path = default_output(
            envConfig.MAGICBULLET_OUTPUT_DIR, command_spec.name.value, not command_spec.table
        )
    config = RunConfig(
        command=command_spec.name,
        params=params,
        seed=_convert("seed", values.get("seed", 0), _parse_seed),
        output_path=output_path,
        with_oracle=parse_bool(values.get("with_oracle", False)),
        gamma_hz=(
            _convert("gamma_hz", values["gamma_hz"], _parse_gamma_hz)
            if "gamma_hz" in values
            else None
        ),
    )
    logger.debug("parsed %r", config)
    return config


def run(config: RunConfig) -> int:
    """Execute ``config``, write its files and return the process exit status."""
    definition = get_definition(config.command)
    command_spec = definition["command"]
    if config.with_oracle and not command_spec.supports_oracle:
        logger.warning("%s has no oracle cross-check; ignoring", command_spec.name.value)
    try:
        result = definition["callable"](config.params, config.seed, config.with_oracle)
        result = with_frequency_labels(result, config.gamma_hz)
        write_result(config.output_path, config.header(), result)
    except MagicBulletError as e:
        logger.error("%s failed: %s", command_spec.name.value, e)
        return e.exit_code
    return 0
