"""Reading spec files from disk."""

from __future__ import annotations

import json
import logging
from pathlib import Path

from pydantic import ValidationError

from deltainv.exceptions import SpecValidationError
from deltainv.spec.model import SpecDocument
from deltainv.spec.schema import validate_spec_json

logger = logging.getLogger(__name__)


def _pydantic_errors(exc: ValidationError) -> list[str]:
    out = []
    for err in exc.errors():
        where = "/".join(map(str, err["loc"])) or "(root)"
        message = err["msg"].removeprefix("Value error, ")
        out.append(f"{where}: {message}")
    return out


def parse_spec(data, source: str | None = None) -> SpecDocument:
    """Validate a raw spec dict against the schema, then build the document.

    Raises
    ------
    SpecValidationError
        On schema violations, structural problems or expressions that do not parse.
    """
    errors = validate_spec_json(data)
    if errors:
        raise SpecValidationError(errors, source)
    try:
        return SpecDocument.model_validate(data)
    except ValidationError as exc:
        raise SpecValidationError(_pydantic_errors(exc), source) from exc


def load_spec(path: str | Path) -> SpecDocument:
    """Load and validate a JSON spec file.

    Raises
    ------
    FileNotFoundError
        If ``path`` does not exist.
    SpecValidationError
        If the file is not JSON or fails validation.
    """
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecValidationError([f"(root): invalid JSON at line {exc.lineno} column {exc.colno}"], str(path))
    document = parse_spec(data, str(path))
    logger.info(f"Loaded {document.kind} spec '{document.name}' (dim {document.dim}) from {path}")
    return document
