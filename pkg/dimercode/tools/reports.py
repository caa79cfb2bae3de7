"""Serialization of tables and check reports to CSV, JSON and JSON-lines."""

import csv
import io
import json
import sys
from pathlib import Path
from typing import Any, Iterable, Optional, Sequence

from dimercode.models.report import CheckRecord, OutputFormat

#: Significant digits of floats in tables.
TABLE_DIGITS = 10


def _cell(value: Any) -> Any:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, f".{TABLE_DIGITS}g")
    return value


def _json_cell(value: Any) -> Any:
    if isinstance(value, float):
        return float(format(value, f".{TABLE_DIGITS}g"))
    return value


def render_csv(rows: Iterable[dict], columns: Sequence[str]) -> str:
    """CSV text with a header row and ``\\n`` line endings; floats keep TABLE_DIGITS digits."""
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=list(columns), lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({key: _cell(row[key]) for key in columns})
    return buffer.getvalue()


def render_json(payload: Any) -> str:
    return json.dumps(payload, indent=2) + "\n"


def render_table(rows: Sequence[dict], columns: Sequence[str], fmt: OutputFormat) -> str:
    """
    A table as CSV, or as a JSON array of records with the same field names.
    """
    if fmt is OutputFormat.JSON:
        return render_json([{key: _json_cell(row[key]) for key in columns} for row in rows])
    return render_csv(rows, columns)


def render_json_lines(records: Iterable[CheckRecord]) -> str:
    return "".join(record.to_json_line() + "\n" for record in records)


def write_output(text: str, out: Optional[Path]) -> dict:
    """
    Write text to a file, or to stdout when ``out`` is None.

    Args:
        text: Document to write
        out: Target path; parent directories are created

    Returns:
        Dict with success status, path and error message
    """
    if out is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return {"success": True, "path": None, "error": None}

    try:
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(text, encoding="utf-8")
        return {"success": True, "path": str(out), "error": None}
    except OSError as e:
        return {"success": False, "path": str(out), "error": str(e)}
