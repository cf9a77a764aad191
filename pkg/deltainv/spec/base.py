"""Pydantic base for spec documents and report records.

Wire names are the snake_case attribute names; unknown keys are rejected so a typo
in a spec file fails loudly instead of being ignored.
"""

from pydantic import BaseModel, ConfigDict


class WireModel(BaseModel):
    """Pydantic v2 base for every JSON document the package reads or writes."""

    model_config = ConfigDict(
        extra="forbid",
        validate_assignment=True,
    )
