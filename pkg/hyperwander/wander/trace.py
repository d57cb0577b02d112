from __future__ import annotations

from pathlib import Path
from typing import IO, Iterable

from ..exceptions import TraceFormatError
from .loop import TRACE_SCHEMA, Round


def dump_round(record: Round) -> str:
    return record.model_dump_json(by_alias=True)


def write_trace(rounds: Iterable[Round], target: str | Path | IO[str]):
    """One JSON object per round, in round order."""
    lines = "".join(f"{dump_round(r)}\n" for r in rounds)
    if isinstance(target, (str, Path)):
        Path(target).write_text(lines, encoding="utf-8")
    else:
        target.write(lines)


def read_trace(path: str | Path) -> list[Round]:
    rounds = []
    with Path(path).open(encoding="utf-8") as fh:
        for line_number, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            record = Round.model_validate_json(line)
            if record.trace_schema != TRACE_SCHEMA:
                raise TraceFormatError(
                    f"{path}, line {line_number}: trace schema {record.trace_schema}, expected {TRACE_SCHEMA}"
                )
            rounds.append(record)
    return rounds
