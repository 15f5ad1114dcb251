from typing import Sequence

import numpy as np


def parse_log_grid(grid: str) -> list[float]:
    """
    Parse a log-spaced grid written as ``start:stop:count``.

    ``1e-3:1e1:25`` yields 25 points from 1e-3 to 10, equally spaced in log10.
    A single number yields a one-point grid.

    :param grid: Grid specification
    :type grid: str
    :return: Grid points in increasing order of index
    :rtype: list[float]
    """
    parts = [part.strip() for part in grid.split(":")]
    if len(parts) == 1:
        value = float(parts[0])
        if value <= 0:
            raise ValueError(f"grid point must be positive, got {value}")
        return [value]
    if len(parts) != 3:
        raise ValueError(f"expected start:stop:count, got {grid!r}")
    start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
    if start <= 0 or stop <= 0:
        raise ValueError("log grid bounds must be positive")
    if count < 0:
        raise ValueError("grid count must be non-negative")
    return [float(v) for v in np.logspace(np.log10(start), np.log10(stop), count)]


def parse_float_list(values: str | Sequence[float]) -> list[float]:
    """
    Parse a comma separated list of floats, e.g. ``0,1,2``.

    :param values: Comma separated string or an already parsed sequence
    :type values: str | Sequence[float]
    :return: Parsed floats
    :rtype: list[float]
    """
    if isinstance(values, str):
        return [float(v) for v in values.split(",") if v.strip()]
    return [float(v) for v in values]


def parse_int_list(values: str | Sequence[int]) -> list[int]:
    """
    Parse a comma separated list of integers, e.g. ``1,2,4,8``.

    :param values: Comma separated string or an already parsed sequence
    :type values: str | Sequence[int]
    :return: Parsed integers
    :rtype: list[int]
    """
    if isinstance(values, str):
        return [int(v) for v in values.split(",") if v.strip()]
    return [int(v) for v in values]


def trial_generator(seed: int) -> np.random.Generator:
    """
    Return the random generator every sampling operation draws from.

    :param seed: Explicit seed; identical seeds give identical streams
    :type seed: int
    :return: A PCG64 backed numpy generator
    :rtype: np.random.Generator
    """
    return np.random.default_rng(np.random.SeedSequence(seed))


def child_seeds(seed: int, count: int) -> list[int]:
    """
    Derive independent seeds for the separate random stages of one run.

    :param seed: Run seed
    :type seed: int
    :param count: Number of seeds to derive
    :type count: int
    :return: Seeds, identical for identical inputs
    :rtype: list[int]
    """
    return [int(s) for s in np.random.SeedSequence(seed).generate_state(count)]
