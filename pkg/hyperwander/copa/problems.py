"""
COPA-style problem files.

One JSON object per line:

    {"id": 65, "asks": "cause", "text": "The family took their dog to the veterinarian.",
     "premise": {"symbols": ["family", "take", "dog", "veterinarian"]},
     "alternatives": [{"formula": "exists A (dog(A) & ...)"}, {"symbols": ["dog", "injure", "paw"]}],
     "gold": 2}

See docs/copa_format.md.
"""

from __future__ import annotations

import json
import logging
from pathlib import Path

from django.db.models import TextChoices
from django.utils.translation import gettext_lazy as _
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from ..exceptions import CopaFormatError, HyperwanderError
from ..logic.formulas import Formula, symbols_of
from ..logic.parser import parse_formula
from ..logic.terms import canonical_symbol
from ..wander.clustering import focus_formula

log = logging.getLogger(__name__)


class Ask(TextChoices):
    CAUSE = "cause", _("What was the cause?")
    EFFECT = "effect", _("What happened as a result?")


class Statement(BaseModel):
    """A premise or alternative, as a formula or as a symbol set."""

    model_config = ConfigDict(frozen=True)

    formula: str | None = None
    symbols: tuple[str, ...] | None = None

    @field_validator("symbols")
    @classmethod
    def _canonical(cls, value):
        if value is None:
            return None
        symbols = tuple(sorted({canonical_symbol(s) for s in value if s.strip()}))
        if not symbols:
            raise ValueError("symbol list is empty")
        return symbols

    @model_validator(mode="after")
    def _exactly_one(self):
        if (self.formula is None) == (self.symbols is None):
            raise ValueError("give exactly one of 'formula' or 'symbols'")
        return self

    def to_formula(self) -> Formula:
        if self.formula is not None:
            return parse_formula(self.formula)
        return focus_formula(self.symbols)

    def symbol_set(self) -> frozenset[str]:
        if self.symbols is not None:
            return frozenset(self.symbols)
        return symbols_of(self.to_formula())


class CopaProblem(BaseModel):
    model_config = ConfigDict(frozen=True)

    id: int
    asks: Ask
    text: str | None = None
    premise: Statement
    alternatives: tuple[Statement, Statement]
    gold: int | None = Field(default=None, ge=1, le=2)


def record_to_problem(record: dict) -> CopaProblem:
    if not isinstance(record, dict):
        raise CopaFormatError("problem record must be a JSON object")
    problem_id = record.get("id")

    alternatives = record.get("alternatives")
    if not isinstance(alternatives, list) or len(alternatives) != 2:
        found = len(alternatives) if isinstance(alternatives, list) else 0
        raise CopaFormatError(f"expected exactly two alternatives, found {found}", problem_id)

    try:
        problem = CopaProblem.model_validate(record)
    except ValidationError as err:
        raise CopaFormatError(str(err), problem_id) from err

    # formulas are parsed up front so bad syntax is reported against the problem
    for statement in (problem.premise, *problem.alternatives):
        try:
            statement.to_formula()
        except HyperwanderError as err:
            raise CopaFormatError(str(err), problem_id) from err
    return problem


def parse_copa(path: str | Path) -> list[CopaProblem]:
    problems = []
    seen: set[int] = set()
    with Path(path).open(encoding="utf-8") as fh:
        for line_number, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as err:
                raise CopaFormatError(f"line {line_number}: invalid JSON ({err.msg})") from err

            problem = record_to_problem(record)
            if problem.id in seen:
                raise CopaFormatError("duplicate problem id", problem.id)
            seen.add(problem.id)
            problems.append(problem)

    log.info("read %d problems from %s", len(problems), path)
    return problems


def read_gold(path: str | Path) -> dict[int, int]:
    """Gold labels, one `<id> <label>` pair per line."""
    gold = {}
    with Path(path).open(encoding="utf-8") as fh:
        for line_number, line in enumerate(fh, start=1):
            fields = line.split()
            if not fields or fields[0].startswith("#"):
                continue
            if len(fields) != 2 or not fields[0].isdigit() or fields[1] not in ("1", "2"):
                raise CopaFormatError(f"{path}, line {line_number}: expected '<id> <1|2>'")
            gold[int(fields[0])] = int(fields[1])
    return gold
