import csv
import json

import pytest
from typer.testing import CliRunner

from magicbullet.cli.magicbullet import cli


@pytest.fixture
def invoke():
    runner = CliRunner()

    def call(*args: str):
        return runner.invoke(cli, [str(a) for a in args])

    return call


@pytest.fixture
def read_table():
    def read(path):
        with open(path, encoding="utf-8") as file:
            header = file.readline()
            assert header.startswith("# magicbullet ")
            return list(csv.DictReader(file))

    return read


@pytest.fixture
def read_summary():
    def read(path):
        with open(path, encoding="utf-8") as file:
            return json.load(file)["summary"]

    return read
