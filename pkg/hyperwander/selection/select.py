"""
Premise selection over the knowledge base.

Semantic selection keeps the axioms around the (similarity-expanded) context
whose remaining symbols all lie within a cosine interval of it. Syntactic
selection follows SInE: a symbol triggers the axioms in which it is not much
more frequent than their rarest symbol, level by level from the context.
"""

from __future__ import annotations

import logging
from typing import Iterable

import numpy as np

from ..embed.store import EmbeddingStore, embed_symbols, has_vector, lookup_vector, similar_symbols
from ..instrument import instrument
from ..kb.store import KnowledgeBase
from .params import SelectionParams

log = logging.getLogger(__name__)


def expand_context(
    ctx: Iterable[str],
    store: EmbeddingStore,
    threshold: float,
    kb_symbols: Iterable[str] | None = None,
) -> frozenset[str]:
    """
    `ctx` plus every symbol with cosine at least `threshold` to some context
    symbol. Candidates are the embedding vocabulary, narrowed to `kb_symbols`
    when given (multi-word KB symbols reach the store through the underscore
    fallback). Context symbols without a vector are kept but not expanded.
    """
    ctx = frozenset(ctx)
    allowed = frozenset(kb_symbols) if kb_symbols is not None else None
    composite = sorted(s for s in allowed if s not in store and "_" in s) if allowed is not None else []

    expanded = set(ctx)
    for symbol in sorted(ctx):
        if not has_vector(store, symbol):
            continue
        for neighbour, _score in similar_symbols(store, symbol, threshold):
            if allowed is None or neighbour in allowed:
                expanded.add(neighbour)
        if composite:
            expanded.update(s for s, _score in similar_symbols(store, symbol, threshold, restrict_to=composite))
    return frozenset(expanded)


class _ContextSimilarity:
    """Best cosine of a symbol to any embedded context symbol, memoised."""

    def __init__(self, store: EmbeddingStore, ctx: Iterable[str]):
        self.store = store
        _present, self.matrix, _missing = embed_symbols(store, ctx)
        self.cache: dict[str, float | None] = {}

    def best(self, symbol: str) -> float | None:
        if symbol not in self.cache:
            vector = lookup_vector(self.store, symbol)
            if vector is None or not len(self.matrix):
                self.cache[symbol] = None
            else:
                self.cache[symbol] = float(np.clip(np.max(self.matrix @ vector), -1.0, 1.0))
        return self.cache[symbol]


def _annotate_selection(span, result: list[int]):
    span.set_attribute("selection.axioms", len(result))


@instrument(skip_args={"ctx", "kb", "store"}, on_result=_annotate_selection)
def semantic_select(
    ctx: Iterable[str],
    kb: KnowledgeBase,
    store: EmbeddingStore,
    params: SelectionParams | None = None,
) -> list[int]:
    """
    Axiom ids chosen by similarity.

    An axiom is a candidate when it contains an expanded-context symbol and
    survives when each of its other symbols has a best context cosine inside
    `[sim_low, sim_high]`. Survivors are ranked by their highest such cosine
    (1.0 when every symbol is in the context), ties by id, and cut at
    `max_axioms`.
    """
    params = params or SelectionParams()
    ctx = frozenset(ctx)
    if not ctx:
        raise ValueError("semantic selection needs a non-empty context")

    expanded = expand_context(ctx, store, params.expand_threshold, kb.vocabulary)
    candidates = sorted({axiom_id for s in expanded for axiom_id in kb.formulas_containing(s)})
    similarity = _ContextSimilarity(store, expanded)

    scored: list[tuple[float, int]] = []
    for axiom_id in candidates:
        others = kb.symbols(axiom_id) - expanded
        if params.exempt_relations:
            others = {s for s in others if kb.arities.get(s) != 2}

        best = 1.0 if not others else -1.0
        keep = True
        for symbol in others:
            score = similarity.best(symbol)
            if score is None:
                if params.oov_pass:
                    continue
                keep = False
                break
            if not params.sim_low <= score <= params.sim_high:
                keep = False
                break
            best = max(best, score)
        if keep:
            scored.append((best, axiom_id))

    scored.sort(key=lambda pair: (-pair[0], pair[1]))
    selected = [axiom_id for _score, axiom_id in scored[: params.max_axioms]]
    log.debug(
        "semantic selection: context %d (expanded %d), %d candidates, %d selected",
        len(ctx),
        len(expanded),
        len(candidates),
        len(selected),
    )
    return selected


@instrument(skip_args={"ctx", "kb"}, on_result=_annotate_selection)
def syntactic_select(ctx: Iterable[str], kb: KnowledgeBase, params: SelectionParams | None = None) -> list[int]:
    """
    SInE-style selection: `s` triggers axiom `a` when `s` occurs in `a` and
    occurrence_count(s) <= sine_tolerance * the smallest count among the symbols
    of `a`. Starting from `ctx`, each of up to `sine_depth` levels adds the
    axioms triggered by the symbols reached so far. Ids come back level by
    level, ascending within a level, cut at `max_axioms`.
    """
    params = params or SelectionParams()
    ctx = frozenset(ctx)
    if not ctx:
        raise ValueError("syntactic selection needs a non-empty context")

    counts = kb.occurrence_count
    reached = set(ctx)
    frontier = set(ctx)
    selected: list[int] = []
    chosen: set[int] = set()

    for level in range(1, params.sine_depth + 1):
        triggered = set()
        for symbol in frontier:
            for axiom_id in kb.formulas_containing(symbol):
                if axiom_id in chosen or axiom_id in triggered:
                    continue
                rarest = min(counts[s] for s in kb.symbols(axiom_id))
                if counts[symbol] <= params.sine_tolerance * rarest:
                    triggered.add(axiom_id)

        if not triggered:
            break
        level_ids = sorted(triggered)
        selected.extend(level_ids)
        chosen.update(level_ids)

        new_symbols = {s for axiom_id in level_ids for s in kb.symbols(axiom_id)} - reached
        reached |= new_symbols
        frontier = new_symbols
        log.debug("sine level %d: %d axioms, %d new symbols", level, len(level_ids), len(new_symbols))

    return selected[: params.max_axioms]
