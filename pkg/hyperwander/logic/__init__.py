from .clausify import clausify, skolemize, to_nnf
from .formulas import (
    And,
    AtomicFormula,
    Exists,
    Forall,
    Formula,
    Iff,
    Implies,
    Not,
    Or,
    predicate_arities,
    render_formula,
    symbols_of,
)
from .parser import ParseSession, iter_clauses, parse_clause, parse_clauses, parse_formula, render_clause
from .terms import (
    KEYWORDS,
    Atom,
    Clause,
    RangeViolation,
    Term,
    TermKind,
    canonical_relation,
    canonical_symbol,
    check_range_restricted,
    is_reserved_symbol,
)

__all__ = [
    "KEYWORDS",
    "And",
    "Atom",
    "AtomicFormula",
    "Clause",
    "Exists",
    "Forall",
    "Formula",
    "Iff",
    "Implies",
    "Not",
    "Or",
    "ParseSession",
    "RangeViolation",
    "Term",
    "TermKind",
    "canonical_relation",
    "canonical_symbol",
    "check_range_restricted",
    "clausify",
    "is_reserved_symbol",
    "iter_clauses",
    "parse_clause",
    "parse_clauses",
    "parse_formula",
    "predicate_arities",
    "render_clause",
    "render_formula",
    "skolemize",
    "to_nnf",
]
