import json
from pathlib import Path

import pytest

from magicbullet.errors import ConfigError, ValidationError
from magicbullet.runner import RunConfig, parse_config, run
from magicbullet.types import Command
from magicbullet.utils import parse_log_grid


def test_parse_fig3(output_dir):
    config = parse_config(
        "fig3", {"g2": 0.01, "dx": "0", "gc_grid": "1e-3:1e1:25", "seed": None}
    )
    assert config.command is Command.FIG3
    assert config.params == {
        "g2": 0.01,
        "dx": [0.0],
        "gc_grid": parse_log_grid("1e-3:1e1:25"),
    }
    assert config.seed == 0
    assert config.with_oracle is False
    assert config.output_path == output_dir / "fig3.csv"


def test_defaults_fill_missing_parameters(output_dir):
    config = parse_config(Command.EPR_DEMO)
    assert config.params == {"d": 4, "trials": 10000}
    assert config.output_path == output_dir / "epr-demo.json"


def test_parse_filters_orders():
    config = parse_config("filters", {"k": "4", "wc_over_g": 1e-3})
    assert config.params["k"] == [4]
    assert config.params["dx"] == 0.0


def test_dashed_keys_are_normalized():
    config = parse_config("spectra", {"x-min": "-1", "X_MAX": "1"})
    assert (config.params["x_min"], config.params["x_max"]) == (-1.0, 1.0)


@pytest.mark.parametrize(
    "command,options,key",
    [
        ("fig3", {"g2": 1.5}, "g2"),
        ("fig3", {"gc_grid": "1:10"}, "gc_grid"),
        ("filters", {"k": "0,2"}, "k"),
        ("quadrature", {"nbar": -1.0}, "nbar"),
        ("quadrature", {"trials": "many"}, "trials"),
        ("epr-demo", {"d": 0}, "d"),
        ("pairs", {"gamma_t": 10.0}, "gamma_t"),
        ("pairs", {"modes": 200}, "modes"),
        ("spectra", {"seed": -1}, "seed"),
        ("spectra", {"gamma_hz": 0.0}, "gamma_hz"),
        ("spectra", {"nbar": 1.0}, "nbar"),
    ],
)
def test_invalid_options(command, options, key):
    with pytest.raises(ConfigError) as e:
        parse_config(command, options)
    assert e.value.key == key
    assert e.value.exit_code == 2
    assert str(e.value).startswith(f"{key}:")


def test_unknown_command():
    with pytest.raises(ValidationError):
        parse_config("fig4")


def test_config_file_with_override(config_file, tmp_path):
    path = config_file("g2 = 0.5\nk = 1,2\nseed = 3\nwith-oracle = true\n")
    config = parse_config("filters", {"g2": 0.25, "output": tmp_path / "f.csv"}, path)
    assert config.params["g2"] == 0.25
    assert config.params["k"] == [1, 2]
    assert config.seed == 3
    assert config.with_oracle is True
    assert config.output_path == tmp_path / "f.csv"


def test_config_file_errors(config_file, tmp_path):
    with pytest.raises(ConfigError) as e:
        parse_config("spectra", config_file=tmp_path / "missing.env")
    assert e.value.key == "config"
    with pytest.raises(ConfigError) as e:
        parse_config("spectra", config_file=config_file("points = 11\nbogus = 1\n"))
    assert e.value.key == "bogus"


def test_header_excludes_output_path(tmp_path):
    a = parse_config("spectra", {"output": tmp_path / "a.csv"})
    b = parse_config("spectra", {"output": tmp_path / "b.csv"})
    assert a.header() == b.header()
    assert a.header()["command"] == "spectra"


def test_run_writes_table(tmp_path):
    config = parse_config(
        "spectra", {"points": 3, "x_min": -1, "x_max": 1, "gamma_hz": 2.0}
    )
    assert run(config) == 0
    lines = config.output_path.read_text(encoding="utf-8").splitlines()
    assert lines[0].startswith("# magicbullet ")
    assert json.loads(lines[0].split(" ", 3)[3]) == config.header()
    assert lines[1] == "x,s_n,s_p,detuning_hz"
    assert len(lines) == 5


def test_run_writes_summary_only(output_dir):
    assert run(parse_config("epr-demo", {"d": 3, "trials": 100})) == 0
    document = json.loads((output_dir / "epr-demo.json").read_text(encoding="utf-8"))
    assert document["summary"]["match_fraction"] == 1.0


def test_run_maps_errors_to_exit_codes(tmp_path):
    spectra = RunConfig(
        command=Command.SPECTRA,
        params={"g2": 0.01, "x_min": 1.0, "x_max": -1.0, "points": 5},
        output_path=tmp_path / "s.csv",
    )
    assert run(spectra) == 2
    assert not Path(tmp_path / "s.csv").exists()

    quadrature = RunConfig(
        command=Command.QUADRATURE,
        params={"nbar": 1e4, "trials": 10},
        output_path=tmp_path / "q.csv",
        with_oracle=True,
    )
    assert run(quadrature) == 4


def test_oracle_flag_ignored_for_unsupported_command(tmp_path, caplog):
    config = parse_config(
        "spectra", {"points": 3, "with_oracle": True, "output": tmp_path / "s.csv"}
    )
    assert run(config) == 0
    assert "no oracle cross-check" in caplog.text
