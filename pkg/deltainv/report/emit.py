"""JSON and CSV emitters for report records.

JSON output is an array of records in emission order, keys in declaration order,
``None`` values pruned, two-space indent and a trailing newline, so identical runs
give byte-identical files. CSV is a flat projection with ``details`` JSON-encoded
in one column.
"""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path
from typing import Any, Iterable, Sequence

from deltainv.exceptions import SpecValidationError
from deltainv.report.model import ReportRecord
from deltainv.spec.schema import validate_report_json

CSV_COLUMNS = (
    "check",
    "name",
    "point",
    "tuple",
    "lhs",
    "rhs",
    "margin",
    "passed",
    "tolerance",
    "certified",
    "restarts",
    "seed",
    "timestamp",
    "verdict",
    "details",
)


def _prune(value: Any) -> Any:
    """Recursively drop ``None`` values from dicts; lists and empty dicts are kept."""
    if isinstance(value, dict):
        return {key: _prune(item) for key, item in value.items() if item is not None}
    if isinstance(value, list):
        return [_prune(item) for item in value]
    return value


def to_wire_list(records: Iterable[ReportRecord]) -> list[dict[str, Any]]:
    return [_prune(record.model_dump(by_alias=True, exclude_none=True)) for record in records]


def to_json(records: Iterable[ReportRecord], *, indent: int = 2) -> str:
    return json.dumps(to_wire_list(records), indent=indent, ensure_ascii=False) + "\n"


def to_csv(records: Iterable[ReportRecord]) -> str:
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for wire in to_wire_list(records):
        optimizer = wire.pop("optimizer", {})
        row = {
            **wire,
            "point": json.dumps(wire.get("point")) if "point" in wire else "",
            "tuple": json.dumps(wire.get("tuple")) if "tuple" in wire else "",
            "restarts": optimizer.get("restarts", ""),
            "seed": optimizer.get("seed", ""),
            "details": json.dumps(wire.get("details", {}), sort_keys=True),
        }
        writer.writerow({column: row.get(column, "") for column in CSV_COLUMNS})
    return buffer.getvalue()


def render(records: Sequence[ReportRecord], fmt: str = "json") -> str:
    if fmt == "json":
        return to_json(records)
    if fmt == "csv":
        return to_csv(records)
    raise ValueError(f"Unknown report format '{fmt}'")


def write_report(records: Sequence[ReportRecord], path: str | Path, fmt: str = "json") -> Path:
    out = Path(path)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(render(records, fmt), encoding="utf-8")
    return out


def read_report(path: str | Path) -> list[ReportRecord]:
    """Load a JSON report written by :func:`write_report`.

    Raises
    ------
    SpecValidationError
        If the file is not a valid report.
    """
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise SpecValidationError([f"(root): invalid JSON at line {exc.lineno} column {exc.colno}"], str(path))
    errors = validate_report_json(data)
    if errors:
        raise SpecValidationError(errors, str(path))
    return [ReportRecord.model_validate(item) for item in data]
