import math

import pytest

from magicbullet.utils import (
    child_seeds,
    parse_float_list,
    parse_int_list,
    parse_log_grid,
    trial_generator,
)


def test_parse_log_grid():
    grid = parse_log_grid("1e-3:1e1:25")
    assert len(grid) == 25
    assert grid[0] == pytest.approx(1e-3)
    assert grid[-1] == pytest.approx(10.0)
    steps = [math.log10(b / a) for a, b in zip(grid, grid[1:])]
    assert steps == pytest.approx([4 / 24] * 24)

    assert parse_log_grid("0.5") == [0.5]
    assert parse_log_grid("1:10:0") == []


@pytest.mark.parametrize("grid", ["1:10", "0:1:5", "1:-1:5", "1:10:-2", "-3", "a:b:c"])
def test_parse_log_grid_rejects(grid):
    with pytest.raises(ValueError):
        parse_log_grid(grid)


def test_parse_lists():
    assert parse_float_list("0,1, 2") == [0.0, 1.0, 2.0]
    assert parse_float_list([0, 1]) == [0.0, 1.0]
    assert parse_int_list("1,2,4,8") == [1, 2, 4, 8]
    assert parse_int_list("4") == [4]
    with pytest.raises(ValueError):
        parse_int_list("1.5")


def test_seeding():
    assert trial_generator(7).random(5).tolist() == trial_generator(7).random(5).tolist()
    assert trial_generator(7).random() != trial_generator(8).random()
    seeds = child_seeds(42, 3)
    assert seeds == child_seeds(42, 3)
    assert len(set(seeds)) == 3
