from .harness import (
    AlternativeOutcome,
    CopaParams,
    CopaReport,
    CopaRow,
    ScoringStrategy,
    run_alternative,
    run_copa,
    score_alternative,
    score_chain,
    score_symbols,
    solve,
    write_report,
)
from .problems import Ask, CopaProblem, Statement, parse_copa, read_gold, record_to_problem

__all__ = [
    "AlternativeOutcome",
    "Ask",
    "CopaParams",
    "CopaProblem",
    "CopaReport",
    "CopaRow",
    "ScoringStrategy",
    "Statement",
    "parse_copa",
    "read_gold",
    "record_to_problem",
    "run_alternative",
    "run_copa",
    "score_alternative",
    "score_chain",
    "score_symbols",
    "solve",
    "write_report",
]
