import pytest

from magicbullet.config import envConfig


@pytest.fixture(autouse=True)
def output_dir(tmp_path, monkeypatch):
    monkeypatch.setattr(envConfig, "MAGICBULLET_OUTPUT_DIR", tmp_path)
    yield tmp_path


@pytest.fixture
def config_file(tmp_path):
    def write(text: str):
        path = tmp_path / "run.env"
        path.write_text(text, encoding="utf-8")
        return path

    return write
