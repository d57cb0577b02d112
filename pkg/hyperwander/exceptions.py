"""
Error hierarchy shared by every hyperwander module.

Commands catch `HyperwanderError` and turn it into a `CommandError`; library
callers can catch the narrower classes.
"""


class HyperwanderError(Exception):
    pass


# ---------- logic ----------


class ParseError(HyperwanderError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class ReservedSymbolError(ParseError):
    pass


class ArityError(HyperwanderError):
    def __init__(self, symbol: str, expected: int, found: int):
        super().__init__(
            f"symbol '{symbol}' used with arity {found}, previously {expected}"
        )
        self.symbol = symbol
        self.expected = expected
        self.found = found


class FreeVariableError(HyperwanderError):
    def __init__(self, variables):
        self.variables = tuple(sorted(variables))
        super().__init__(f"formula has free variables: {', '.join(self.variables)}")


class FragmentError(HyperwanderError):
    pass


class RangeRestrictionError(HyperwanderError):
    def __init__(self, violations):
        self.violations = list(violations)
        shown = "; ".join(str(v) for v in self.violations[:5])
        super().__init__(
            f"{len(self.violations)} clause(s) are not range-restricted: {shown}"
        )


# ---------- knowledge base ----------


class MalformedRecordError(HyperwanderError):
    def __init__(self, record_number: int, reason: str):
        super().__init__(f"record {record_number}: {reason}")
        self.record_number = record_number
        self.reason = reason


class KnowledgeBaseFormatError(HyperwanderError):
    pass


# ---------- embeddings ----------


class EmbeddingFormatError(HyperwanderError):
    pass


class DimensionMismatchError(EmbeddingFormatError):
    pass


class EmptyEmbeddingFileError(EmbeddingFormatError):
    pass


class UnknownSymbolError(HyperwanderError, KeyError):
    def __init__(self, symbol: str):
        super().__init__(symbol)
        self.symbol = symbol

    def __str__(self):
        return f"no vector for symbol '{self.symbol}'"


# ---------- wandering / copa ----------


class ClusteringError(HyperwanderError):
    pass


class FocusError(HyperwanderError):
    pass


class CopaFormatError(HyperwanderError):
    def __init__(self, message: str, problem_id=None):
        prefix = f"problem {problem_id}: " if problem_id is not None else ""
        super().__init__(f"{prefix}{message}")
        self.problem_id = problem_id


class ScoreUndefinedError(HyperwanderError):
    pass


class TraceFormatError(HyperwanderError):
    pass
