"""
Knowledge base of first-order axioms derived from ConceptNet-style triples.

A triple (dog, hasA, fur) becomes

    all X (dog(X) => exists Y (hasA(X,Y) & fur(Y)))

Axioms are numbered from 1 and indexed by the predicate symbols they contain.
Triple-shaped axioms are stored as the triple itself and only turned into
formulae and clauses on demand.
"""

from __future__ import annotations

import logging
from collections import Counter, defaultdict
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator

from pydantic import BaseModel

from ..exceptions import (
    ArityError,
    HyperwanderError,
    KnowledgeBaseFormatError,
    MalformedRecordError,
)
from ..instrument import instrument
from ..logic.clausify import clausify
from ..logic.formulas import And, AtomicFormula, Exists, Forall, Formula, Implies, predicate_arities, render_formula
from ..logic.parser import ParseSession, parse_formula
from ..logic.terms import (
    KEYWORDS,
    Atom,
    Clause,
    RangeViolation,
    Term,
    canonical_relation,
    canonical_symbol,
    is_reserved_symbol,
)

log = logging.getLogger(__name__)

KB_FORMAT_VERSION = 1
KB_HEADER = "% hyperwander-kb"

_X, _Y = Term.var("X"), Term.var("Y")


@dataclass(frozen=True, slots=True)
class Triple:
    subject: str
    relation: str
    object: str

    def __post_init__(self):
        for part in (self.subject, self.relation, self.object):
            if not part:
                raise ValueError(f"triple fields must be non-empty: {self!r}")

    @classmethod
    def of(cls, subject: str, relation: str, obj: str) -> Triple:
        return cls(canonical_symbol(subject), canonical_relation(relation), canonical_symbol(obj))

    @property
    def symbols(self) -> frozenset[str]:
        return frozenset((self.subject, self.relation, self.object))

    def __str__(self):
        return f"({self.subject}, {self.relation}, {self.object})"


def triple_to_axiom(t: Triple) -> Formula:
    return Forall(
        ("X",),
        Implies(
            AtomicFormula(Atom(t.subject, (_X,))),
            Exists(
                ("Y",),
                And((AtomicFormula(Atom(t.relation, (_X, _Y))), AtomicFormula(Atom(t.object, (_Y,))))),
            ),
        ),
    )


def axiom_to_triple(f: Formula) -> Triple | None:
    """Inverse of `triple_to_axiom` for formulae of exactly that shape."""
    match f:
        case Forall(
            variables=(x,),
            body=Implies(
                left=AtomicFormula(atom=Atom(predicate=subject, args=(sx,))),
                right=Exists(
                    variables=(y,),
                    body=And(
                        parts=(
                            AtomicFormula(atom=Atom(predicate=relation, args=(rx, ry))),
                            AtomicFormula(atom=Atom(predicate=obj, args=(oy,))),
                        )
                    ),
                ),
            ),
        ) if x != y and sx == rx == Term.var(x) and ry == oy == Term.var(y):
            return Triple(subject, relation, obj)
    return None


class IngestReport(BaseModel):
    records: int = 0
    added: int = 0
    duplicates: int = 0
    malformed: int = 0
    filtered: int = 0


class KnowledgeBase:
    """
    Indexed axiom collection.

    `symbol_index[s]` lists the ids of axioms containing predicate symbol `s`
    in ascending order, and `occurrence_count[s]` is the length of that list.
    """

    def __init__(self):
        self._entries: list[Triple | Formula] = []
        self._ids: dict[Triple | str, int] = {}
        self._clause_cache: dict[int, list[Clause]] = {}
        self.symbol_index: dict[str, list[int]] = defaultdict(list)
        self.occurrence_count: Counter[str] = Counter()
        self.arities: dict[str, int] = {}
        self.last_ingest: IngestReport | None = None

    def __len__(self):
        return len(self._entries)

    def __contains__(self, axiom_id: int) -> bool:
        return 1 <= axiom_id <= len(self._entries)

    def ids(self) -> range:
        return range(1, len(self._entries) + 1)

    @property
    def vocabulary(self) -> frozenset[str]:
        return frozenset(self.symbol_index)

    # ---------- building ----------

    def _check_arities(self, arities: dict[str, int]):
        for symbol, arity in arities.items():
            known = self.arities.get(symbol, arity)
            if known != arity:
                raise ArityError(symbol, known, arity)

    def _register(self, entry: Triple | Formula, key: Triple | str, symbols: Iterable[str], arities: dict[str, int]) -> int:
        self._entries.append(entry)
        axiom_id = len(self._entries)
        self._ids[key] = axiom_id
        self.arities.update(arities)
        for symbol in sorted(set(symbols)):
            self.symbol_index[symbol].append(axiom_id)
            self.occurrence_count[symbol] += 1
        return axiom_id

    def add_triple(self, t: Triple) -> int | None:
        """Id of the new axiom, or None if the triple is already present."""
        if t in self._ids:
            return None
        arities = {t.relation: 2, t.subject: 1, t.object: 1}
        if t.relation in (t.subject, t.object):
            raise ArityError(t.relation, 2, 1)
        self._check_arities(arities)
        return self._register(t, t, t.symbols, arities)

    def add_formula(self, f: Formula) -> int | None:
        t = axiom_to_triple(f)
        if t is not None:
            return self.add_triple(t)
        key = render_formula(f)
        if key in self._ids:
            return None
        arities = predicate_arities(f)
        self._check_arities(arities)
        return self._register(f, key, arities, arities)

    # ---------- reading ----------

    def _entry(self, axiom_id: int) -> Triple | Formula:
        if axiom_id not in self:
            raise KeyError(axiom_id)
        return self._entries[axiom_id - 1]

    def triple(self, axiom_id: int) -> Triple | None:
        entry = self._entry(axiom_id)
        return entry if isinstance(entry, Triple) else None

    def axiom(self, axiom_id: int) -> Formula:
        entry = self._entry(axiom_id)
        return triple_to_axiom(entry) if isinstance(entry, Triple) else entry

    def symbols(self, axiom_id: int) -> frozenset[str]:
        entry = self._entry(axiom_id)
        if isinstance(entry, Triple):
            return entry.symbols
        return frozenset(a.predicate for a in entry.atoms())

    def clauses(self, axiom_id: int, cache: bool = True) -> list[Clause]:
        """Clauses of one axiom; Skolem symbols are `sk<id>_1, sk<id>_2, ...`."""
        cached = self._clause_cache.get(axiom_id)
        if cached is not None:
            return cached
        result = clausify(self.axiom(axiom_id), skolem_prefix=f"sk{axiom_id}_", label=str(axiom_id))
        if cache:
            self._clause_cache[axiom_id] = result
        return result

    def clauses_for(self, axiom_ids: Iterable[int]) -> list[Clause]:
        return [c for axiom_id in axiom_ids for c in self.clauses(axiom_id)]

    def formulas_containing(self, symbol: str) -> list[int]:
        return list(self.symbol_index.get(symbol, ()))

    def check_range_restricted(self) -> list[RangeViolation]:
        """Range-restriction report over every axiom; clause sets are not cached."""
        violations = []
        for axiom_id in self.ids():
            for clause in self.clauses(axiom_id, cache=False):
                unbound = clause.unbound_head_variables()
                if unbound:
                    violations.append(RangeViolation(axiom_id - 1, clause, tuple(unbound)))
        return violations

    def items(self) -> Iterator[tuple[int, Formula]]:
        for axiom_id in self.ids():
            yield axiom_id, self.axiom(axiom_id)


def formulas_containing(kb: KnowledgeBase, symbol: str) -> list[int]:
    return kb.formulas_containing(symbol)


# ---------- triple ingestion ----------


def check_triple_symbols(t: Triple, record_number: int):
    """Reject symbols the logic layer cannot take back: Skolem names and bare keywords."""
    for symbol in (t.subject, t.relation, t.object):
        if is_reserved_symbol(symbol):
            raise MalformedRecordError(record_number, f"symbol '{symbol}' is in the reserved Skolem namespace")
        if symbol in KEYWORDS:
            raise MalformedRecordError(record_number, f"symbol '{symbol}' is a formula keyword")


def parse_triple_record(line: str, record_number: int) -> Triple | None:
    """
    One triple record. Accepted shapes:

        relation,subject,object
        relation<TAB>subject<TAB>object
        /a/[...]<TAB>/r/HasA<TAB>/c/en/dog<TAB>/c/en/fur<TAB>{...}

    Returns None for ConceptNet rows outside the English part.
    """
    if "\t" in line:
        fields = line.split("\t")
        if len(fields) >= 4 and fields[1].startswith("/r/"):
            relation, subject, obj = fields[1], fields[2], fields[3]
            if not (subject.startswith("/c/en/") and obj.startswith("/c/en/")):
                return None
            subject, obj = subject.split("/")[3], obj.split("/")[3]
        elif len(fields) == 3:
            relation, subject, obj = fields
        else:
            raise MalformedRecordError(record_number, f"expected 3 tab-separated fields, found {len(fields)}")
    else:
        fields = line.split(",")
        if len(fields) != 3:
            raise MalformedRecordError(record_number, f"expected 3 comma-separated fields, found {len(fields)}")
        relation, subject, obj = fields

    try:
        t = Triple.of(subject, relation, obj)
    except ValueError:
        raise MalformedRecordError(record_number, "empty field") from None

    check_triple_symbols(t, record_number)
    return t


def _records(source) -> Iterator[tuple[int, str | Triple]]:
    if isinstance(source, (str, Path)):
        with Path(source).open(encoding="utf-8") as fh:
            yield from enumerate((line.rstrip("\r\n") for line in fh), start=1)
    else:
        yield from enumerate(source, start=1)


def _annotate_ingest(span, kb: KnowledgeBase):
    span.set_attribute("kb.axioms", len(kb))
    if kb.last_ingest is not None:
        span.set_attribute("kb.added", kb.last_ingest.added)
        span.set_attribute("kb.malformed", kb.last_ingest.malformed)


@instrument(skip_args={"source", "kb"}, on_result=_annotate_ingest)
def ingest_triples(source, skip_bad: bool = False, kb: KnowledgeBase | None = None) -> KnowledgeBase:
    """
    Stream triple records into a knowledge base (a new one unless `kb` is given).

    `source` is a file path or an iterable of record lines / `Triple` values.
    Blank lines and `#` comments are ignored. A malformed record raises
    `MalformedRecordError` unless `skip_bad` is set, in which case it is
    counted and logged.
    """
    kb = kb if kb is not None else KnowledgeBase()
    report = IngestReport()

    for record_number, record in _records(source):
        if isinstance(record, str):
            record = record.strip()
            if not record or record.startswith("#"):
                continue
        report.records += 1
        try:
            if isinstance(record, Triple):
                t = record
                check_triple_symbols(t, record_number)
            else:
                t = parse_triple_record(record, record_number)
            if t is None:
                report.filtered += 1
                continue
            try:
                added = kb.add_triple(t)
            except ArityError as err:
                raise MalformedRecordError(record_number, str(err)) from err
        except MalformedRecordError as err:
            if not skip_bad:
                raise
            report.malformed += 1
            log.warning("skipping %s", err)
            continue

        if added is None:
            report.duplicates += 1
        else:
            report.added += 1

    kb.last_ingest = report
    log.info(
        "ingested %d records: %d added, %d duplicates, %d malformed, %d filtered",
        report.records,
        report.added,
        report.duplicates,
        report.malformed,
        report.filtered,
    )
    return kb


# ---------- persistence ----------


def save_kb(kb: KnowledgeBase, path: str | Path):
    with Path(path).open("w", encoding="utf-8") as fh:
        fh.write(f"{KB_HEADER} {KB_FORMAT_VERSION}\n")
        for axiom_id, formula in kb.items():
            fh.write(f"{axiom_id}\t{render_formula(formula)}\n")


def load_kb(path: str | Path) -> KnowledgeBase:
    kb = KnowledgeBase()
    session = ParseSession()

    with Path(path).open(encoding="utf-8") as fh:
        header = fh.readline().split()
        if header[:2] != KB_HEADER.split() or len(header) != 3:
            raise KnowledgeBaseFormatError(f"{path}: missing '{KB_HEADER} <version>' header")
        if header[2] != str(KB_FORMAT_VERSION):
            raise KnowledgeBaseFormatError(f"{path}: unsupported knowledge base version {header[2]}")

        for line_number, line in enumerate(fh, start=2):
            line = line.strip()
            if not line or line.startswith("%"):
                continue
            axiom_id, sep, text = line.partition("\t")
            if not sep or not axiom_id.isdigit():
                raise KnowledgeBaseFormatError(f"{path}, line {line_number}: expected '<id>\\t<formula>'")
            if int(axiom_id) != len(kb) + 1:
                raise KnowledgeBaseFormatError(
                    f"{path}, line {line_number}: axiom id {axiom_id} out of sequence"
                )
            try:
                added = kb.add_formula(parse_formula(text, session))
            except HyperwanderError as err:
                raise KnowledgeBaseFormatError(f"{path}, line {line_number}: {err}") from err
            if added is None:
                raise KnowledgeBaseFormatError(f"{path}, line {line_number}: duplicate axiom")

    log.info("loaded %d axioms over %d symbols from %s", len(kb), len(kb.symbol_index), path)
    return kb
