"""Manifold spec documents: schema, model and loader."""

from deltainv.spec.loader import load_spec, parse_spec
from deltainv.spec.model import SpecDocument
from deltainv.spec.schema import SCHEMA_PATH, validate_spec_json

__all__ = ["SCHEMA_PATH", "SpecDocument", "load_spec", "parse_spec", "validate_spec_json"]
