import csv
import json
import logging
import re
import unicodedata
from importlib import metadata
from pathlib import Path
from typing import Any, Mapping

from magicbullet.types import CommandResult

logger = logging.getLogger(__name__)


def slugify(value):
    """
    Taken from https://github.com/django/django/blob/master/django/utils/text.py
    """
    value = str(value)
    value = (
        unicodedata.normalize("NFKD", value).encode("ascii", "ignore").decode("ascii")
    )
    value = re.sub(r"[^\w\s-]", "", value.lower())
    return re.sub(r"[-\s]+", "-", value).strip("-_")


def artifact_version() -> str:
    try:
        return metadata.version("magicbullet")
    except metadata.PackageNotFoundError:
        return "0+unknown"


def header_line(run: Mapping[str, Any]) -> str:
    """``# magicbullet <version> <run configuration as sorted JSON>``."""
    return f"# magicbullet {artifact_version()} {json.dumps(run, sort_keys=True)}"


def default_output(directory: Path, command: str, summary_only: bool) -> Path:
    suffix = ".json" if summary_only else ".csv"
    return directory / f"{slugify(command)}{suffix}"


def summary_path(output: Path) -> Path:
    return output.with_suffix(".summary.json")


def with_frequency_labels(
    result: CommandResult, gamma_hz: float | None
) -> CommandResult:
    """Append ``*_hz`` copies of the normalized frequency columns."""
    if gamma_hz is None or not result.columns:
        return result
    sources = [
        result.columns.index(column)
        for column in result.frequency_columns
        if column in result.columns
    ]
    columns = result.columns + [
        result.frequency_columns[result.columns[i]] for i in sources
    ]
    rows = [tuple(row) + tuple(row[i] * gamma_hz for i in sources) for row in result.rows]
    return CommandResult(columns=columns, rows=rows, summary=result.summary)


def write_csv(path: Path, run: Mapping[str, Any], result: CommandResult) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as file:
        file.write(header_line(run) + "\n")
        writer = csv.writer(file, lineterminator="\n")
        writer.writerow(result.columns)
        writer.writerows(result.rows)
    logger.info("wrote %d rows to %s", len(result.rows), path)
    return path


def write_json(path: Path, run: Mapping[str, Any], summary: Mapping[str, Any]) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    document = {"magicbullet": artifact_version(), "run": run, "summary": summary}
    with open(path, "w", encoding="utf-8") as file:
        json.dump(document, file, sort_keys=True, indent=2)
        file.write("\n")
    logger.info("wrote summary to %s", path)
    return path


def write_result(
    output: Path, run: Mapping[str, Any], result: CommandResult
) -> list[Path]:
    """
    Write the table to ``output`` and the summary next to it.

    A command without a table writes its summary to ``output`` itself.
    """
    if not result.columns:
        return [write_json(output, run, result.summary or {})]
    written = [write_csv(output, run, result)]
    if result.summary is not None:
        written.append(write_json(summary_path(output), run, result.summary))
    return written
