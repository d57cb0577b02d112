"""
The wandering loop.

Each round selects knowledge for the current context, saturates it together
with the current focus formula, takes the unary predicate symbols of the
resulting interpretation that are new, clusters them, and moves the context
to one of the clusters (plus its similar symbols). The run stops after
`max_rounds` rounds or when a round yields nothing new.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from typing import Iterable

from pydantic import BaseModel, ConfigDict, Field

from ..embed.store import EmbeddingStore, embed_symbols
from ..engine.tableau import saturate
from ..exceptions import HyperwanderError, RangeRestrictionError
from ..instrument import instrument
from ..kb.store import KnowledgeBase
from ..logic.clausify import clausify
from ..logic.formulas import Formula, symbols_of
from ..logic.terms import check_range_restricted
from ..selection.params import SelectionMode
from ..selection.select import expand_context, semantic_select, syntactic_select
from .clustering import Cluster, choose_k, focus_formula, kmeans, order_clusters, pick_index, rank_clusters
from .params import ClusterPick, WanderParams

log = logging.getLogger(__name__)

TRACE_SCHEMA = 1


class ClusterRecord(BaseModel):
    members: list[str]
    similarity: float


class Round(BaseModel):
    """One line of a wander trace."""

    model_config = ConfigDict(populate_by_name=True)

    trace_schema: int = Field(default=TRACE_SCHEMA, alias="schema")
    round: int
    context: list[str]
    selected: list[int] = Field(default_factory=list)
    status: str | None = None
    model_size: int = 0
    extensions: int = 0
    extracted: list[str] = Field(default_factory=list)
    unembedded: list[str] = Field(default_factory=list)
    # ranked, most similar to the context first
    clusters: list[ClusterRecord] = Field(default_factory=list)
    focus: list[str] | None = None
    terminated: bool = False
    error: str | None = None


@dataclass(frozen=True)
class WanderState:
    context: frozenset[str]
    formula: Formula
    round: int = 0
    visited: frozenset[str] = frozenset()
    trace: tuple[Round, ...] = ()
    chain: tuple[frozenset[str], ...] = ()
    terminated: bool = False

    @classmethod
    def start(cls, formula: Formula) -> WanderState:
        symbols = symbols_of(formula)
        return cls(context=symbols, formula=formula, chain=(symbols,))


@dataclass(frozen=True)
class WanderResult:
    chain: list[frozenset[str]]
    trace: list[Round]
    state: WanderState = field(repr=False)


def _select(context: frozenset[str], kb: KnowledgeBase, store: EmbeddingStore, params: WanderParams) -> list[int]:
    if params.selection_mode == SelectionMode.SYNTACTIC:
        return syntactic_select(context, kb, params.selection)
    return semantic_select(context, kb, store, params.selection)


def _stop(state: WanderState, record: Round) -> WanderState:
    record.terminated = True
    return replace(
        state,
        round=record.round,
        trace=state.trace + (record,),
        terminated=True,
    )


def _annotate_round(span, state: WanderState):
    record = state.trace[-1]
    span.set_attribute("wander.round", record.round)
    span.set_attribute("wander.extracted", len(record.extracted))
    span.set_attribute("wander.terminated", record.terminated)


@instrument(skip_args={"state", "kb", "store", "params"}, on_result=_annotate_round)
def wander_step(
    state: WanderState,
    kb: KnowledgeBase,
    store: EmbeddingStore,
    params: WanderParams,
) -> WanderState:
    if not state.context:
        raise ValueError("wander step needs a non-empty context")

    number = state.round + 1
    record = Round(round=number, context=sorted(state.context))

    try:
        record.selected = _select(state.context, kb, store, params)
        clauses = clausify(state.formula) + kb.clauses_for(record.selected)
        result = saturate(clauses, params.limits)
    except HyperwanderError as err:
        log.warning("round %d failed: %s", number, err, exc_info=True)
        record.error = str(err)
        return _stop(state, record)

    record.status = str(result.status)
    record.model_size = len(result.model)
    record.extensions = result.stats.extensions

    excluded = state.context | state.visited if params.accumulate_visited else state.context
    derived = {a.predicate for a in result.model if a.arity == 1} - excluded
    embedded, vectors, missing = embed_symbols(store, derived)
    record.extracted = embedded
    record.unembedded = missing
    if missing:
        log.info("round %d: %d derived symbols have no vector: %s", number, len(missing), ", ".join(missing))

    if not embedded:
        log.info("round %d derived no new symbols, stopping", number)
        return _stop(state, record)

    try:
        k = choose_k(len(embedded), params.cluster_divisor)
        clusters = kmeans(list(zip(embedded, vectors)), k, params.seed + number)
        ranked = rank_clusters(clusters, state.context, store, params.cluster_similarity)
        focus_cluster = ranked[pick_index(len(ranked), params.cluster_pick, params.pick_index)]
        formula = focus_formula(focus_cluster.members)
    except HyperwanderError as err:
        log.warning("round %d failed: %s", number, err, exc_info=True)
        record.error = str(err)
        return _stop(state, record)

    record.clusters = [ClusterRecord(members=list(c.members), similarity=c.similarity) for c in ranked]
    record.focus = list(focus_cluster.members)

    focus = focus_cluster.symbols
    next_context = focus | expand_context(focus, store, params.selection.expand_threshold, kb.vocabulary)
    log.info(
        "round %d: %d new symbols in %d clusters, focus {%s}",
        number,
        len(embedded),
        len(ranked),
        ", ".join(focus_cluster.members),
    )
    return replace(
        state,
        context=frozenset(next_context),
        formula=formula,
        round=number,
        visited=state.visited | state.context,
        trace=state.trace + (record,),
        chain=state.chain + (focus,),
    )


def wander(f: Formula, kb: KnowledgeBase, store: EmbeddingStore, params: WanderParams | None = None) -> WanderResult:
    """
    Wander from formula `f` for at most `params.max_rounds` rounds.

    The chain starts with the symbols of `f` and gains one focus set per
    completed round.
    """
    params = params or WanderParams()
    violations = check_range_restricted(clausify(f))
    if violations:
        raise RangeRestrictionError(violations)

    state = WanderState.start(f)
    while not state.terminated and state.round < params.max_rounds:
        state = wander_step(state, kb, store, params)

    return WanderResult(chain=list(state.chain), trace=list(state.trace), state=state)


def replay_round(record: Round, strategy: ClusterPick = ClusterPick.MIDDLE, index: int = 0) -> list[str] | None:
    """Focus recomputed from a round's recorded clusters and similarities."""
    if not record.clusters:
        return None
    ordered = order_clusters(Cluster(tuple(c.members), c.similarity) for c in record.clusters)
    return list(ordered[pick_index(len(ordered), strategy, index)].members)


def render_chain(chain: Iterable[Iterable[str]]) -> str:
    return " -> ".join("{" + ", ".join(sorted(symbols)) + "}" for symbols in chain)
