"""
Answer COPA-style problems by wandering from each alternative and choosing
the one whose wandering ends up closer to the premise.
"""

from __future__ import annotations

import json
import logging
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Callable, Iterable, Sequence

import numpy as np
from django.db.models import TextChoices
from django.utils.translation import gettext_lazy as _
from pydantic import BaseModel, ConfigDict, Field

from ..embed.store import EmbeddingStore, embed_symbols
from ..exceptions import HyperwanderError, ScoreUndefinedError
from ..instrument import instrument
from ..kb.store import KnowledgeBase
from ..logic.formulas import Formula
from ..wander.loop import wander
from ..wander.params import WanderParams
from .problems import Ask, CopaProblem

log = logging.getLogger(__name__)


class ScoringStrategy(TextChoices):
    FINAL = "final", _("Final focus set")
    UNION = "union", _("Union of the chain")
    DISCOUNTED = "discounted", _("Chain discounted towards the start")


class CopaParams(BaseModel):
    model_config = ConfigDict(frozen=True)

    wander: WanderParams = Field(default_factory=WanderParams)
    scoring: ScoringStrategy = ScoringStrategy.FINAL
    # weight of a chain element is discount ** (distance from the end)
    discount: float = Field(default=0.5, gt=0.0, le=1.0)
    workers: int = Field(default=1, ge=1)


class AlternativeOutcome(BaseModel):
    chain: list[list[str]] = Field(default_factory=list)
    score: float | None = None
    error: str | None = None


class CopaRow(BaseModel):
    id: int
    asks: Ask
    choice: int | None = None
    scores: list[float | None]
    chains: list[list[list[str]]]
    tie: bool = False
    unscored: bool = False
    errors: list[str | None] = Field(default_factory=list)
    gold: int | None = None
    correct: bool | None = None


class CopaReport(BaseModel):
    rows: list[CopaRow]
    problems: int
    unscored: int
    accuracy: float | None = None


# ---------- scoring ----------


def score_symbols(premise: Iterable[str], symbols: Iterable[str], store: EmbeddingStore) -> float:
    """
    Mean, over the embedded `symbols`, of the best cosine to any embedded
    premise symbol.
    """
    _premise, premise_matrix, _missing = embed_symbols(store, premise)
    if not len(premise_matrix):
        raise ScoreUndefinedError("no premise symbol has an embedding vector")
    present, matrix, _missing = embed_symbols(store, symbols)
    if not present:
        raise ScoreUndefinedError("no focus symbol has an embedding vector")

    best = np.clip(np.max(matrix @ premise_matrix.T, axis=1), -1.0, 1.0)
    return float(np.mean(best))


def score_chain(
    premise: Iterable[str],
    chain: Sequence[Iterable[str]],
    store: EmbeddingStore,
    strategy: ScoringStrategy = ScoringStrategy.FINAL,
    discount: float = 0.5,
) -> float:
    premise = frozenset(premise)
    chain = [frozenset(element) for element in chain]
    if not chain:
        raise ScoreUndefinedError("empty chain")
    union = frozenset().union(*chain)

    match strategy:
        case ScoringStrategy.FINAL:
            try:
                return score_symbols(premise, chain[-1], store)
            except ScoreUndefinedError:
                return score_symbols(premise, union, store)
        case ScoringStrategy.UNION:
            return score_symbols(premise, union, store)
        case ScoringStrategy.DISCOUNTED:
            total, weights = 0.0, 0.0
            for distance, element in enumerate(reversed(chain)):
                try:
                    score = score_symbols(premise, element, store)
                except ScoreUndefinedError:
                    continue
                weight = discount**distance
                total += weight * score
                weights += weight
            if not weights:
                raise ScoreUndefinedError("no chain element could be scored")
            return total / weights
    raise ValueError(f"unknown scoring strategy: {strategy}")


def run_alternative(
    premise: Iterable[str],
    alternative: Formula,
    kb: KnowledgeBase,
    store: EmbeddingStore,
    params: CopaParams,
) -> AlternativeOutcome:
    outcome = AlternativeOutcome()
    try:
        result = wander(alternative, kb, store, params.wander)
        outcome.chain = [sorted(element) for element in result.chain]
        outcome.score = score_chain(premise, result.chain, store, params.scoring, params.discount)
    except HyperwanderError as err:
        log.warning("alternative could not be scored: %s", err)
        outcome.error = str(err)
    return outcome


def score_alternative(
    premise_syms: Iterable[str],
    alt: Formula,
    kb: KnowledgeBase,
    store: EmbeddingStore,
    params: CopaParams | None = None,
) -> float:
    """Score of one alternative; raises `ScoreUndefinedError` when there is none."""
    outcome = run_alternative(premise_syms, alt, kb, store, params or CopaParams())
    if outcome.score is None:
        raise ScoreUndefinedError(outcome.error or "alternative could not be scored")
    return outcome.score


def _annotate_row(span, row: CopaRow):
    span.set_attribute("copa.choice", row.choice or 0)
    span.set_attribute("copa.unscored", row.unscored)


@instrument(skip_args={"kb", "store", "params", "score_transform"}, on_result=_annotate_row)
def solve(
    problem: CopaProblem,
    kb: KnowledgeBase,
    store: EmbeddingStore,
    params: CopaParams | None = None,
    score_transform: Callable[[float], float] | None = None,
) -> CopaRow:
    """
    Choose the alternative with the higher score; exact ties go to
    alternative 1 and are flagged. A problem with an unscorable alternative
    is marked unscored and gets no choice.
    """
    params = params or CopaParams()
    premise = problem.premise.symbol_set()
    outcomes = [
        run_alternative(premise, alternative.to_formula(), kb, store, params)
        for alternative in problem.alternatives
    ]

    scores = [o.score for o in outcomes]
    if score_transform is not None:
        scores = [None if s is None else score_transform(s) for s in scores]

    row = CopaRow(
        id=problem.id,
        asks=problem.asks,
        scores=scores,
        chains=[o.chain for o in outcomes],
        errors=[o.error for o in outcomes],
        gold=problem.gold,
    )
    if any(s is None for s in scores):
        row.unscored = True
    else:
        first, second = scores
        row.choice = 2 if second > first else 1
        row.tie = first == second
    if row.gold is not None and row.choice is not None:
        row.correct = row.choice == row.gold
    return row


def run_copa(
    problems: Iterable[CopaProblem],
    kb: KnowledgeBase,
    store: EmbeddingStore,
    params: CopaParams | None = None,
    gold: dict[int, int] | None = None,
) -> CopaReport:
    """
    Solve every problem and assemble the report in problem id order.

    Labels in `gold` take precedence over labels inside the problem file.
    Accuracy counts unscored problems as wrong and is only reported when at
    least one problem has a label.
    """
    params = params or CopaParams()
    problems = sorted(problems, key=lambda p: p.id)
    if gold:
        problems = [p.model_copy(update={"gold": gold.get(p.id, p.gold)}) for p in problems]

    if params.workers > 1:
        with ThreadPoolExecutor(max_workers=params.workers) as pool:
            rows = list(pool.map(lambda p: solve(p, kb, store, params), problems))
    else:
        rows = [solve(p, kb, store, params) for p in problems]

    labelled = [r for r in rows if r.gold is not None]
    accuracy = sum(1 for r in labelled if r.correct) / len(labelled) if labelled else None
    report = CopaReport(
        rows=rows,
        problems=len(rows),
        unscored=sum(1 for r in rows if r.unscored),
        accuracy=accuracy,
    )
    log.info("copa: %d problems, %d unscored, accuracy %s", report.problems, report.unscored, accuracy)
    return report


def write_report(report: CopaReport, path: str | Path):
    """One JSON object per problem followed by a summary object."""
    summary = {"problems": report.problems, "unscored": report.unscored, "accuracy": report.accuracy}
    lines = [row.model_dump_json() for row in report.rows]
    lines.append(json.dumps({"summary": summary}))
    Path(path).write_text("".join(f"{line}\n" for line in lines), encoding="utf-8")
