from .store import (
    KB_FORMAT_VERSION,
    IngestReport,
    KnowledgeBase,
    Triple,
    axiom_to_triple,
    canonical_relation,
    formulas_containing,
    ingest_triples,
    load_kb,
    parse_triple_record,
    save_kb,
    triple_to_axiom,
)

__all__ = [
    "KB_FORMAT_VERSION",
    "IngestReport",
    "KnowledgeBase",
    "Triple",
    "axiom_to_triple",
    "canonical_relation",
    "formulas_containing",
    "ingest_triples",
    "load_kb",
    "parse_triple_record",
    "save_kb",
    "triple_to_axiom",
]
