"""
Concrete syntax for clauses and formulae.

Clauses (one per line in clause files, `%` starts a comment):

    animal(X) :- dog(X).
    herbivore(X) ; carnivore(X) :- animal(X).
    false :- plant(X), bone(X).

Formulae:

    exists A (dog(A) & exists B, C (r1on(C,B) & bone(B)))
    all X (dog(X) => exists Y (hasA(X,Y) & fur(Y)))

Uppercase identifiers are variables, everything else is a symbol. The full
grammar is in docs/grammar.md.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterator

from ..exceptions import ArityError, FreeVariableError, ParseError, ReservedSymbolError
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
    render_formula,
)
from .terms import KEYWORDS, Atom, Clause, Term, is_reserved_symbol

_TOKEN_SPEC = [
    ("NEWLINE", r"\n"),
    ("SKIP", r"[ \t\r]+"),
    ("COMMENT", r"%[^\n]*"),
    ("IMPLIED_BY", r":-"),
    ("IFF", r"<=>"),
    ("IMPLIES", r"=>"),
    ("AND", r"&"),
    ("OR", r"\|"),
    ("NOT", r"~"),
    ("SEMI", r";"),
    ("COMMA", r","),
    ("DOT", r"\."),
    ("LPAREN", r"\("),
    ("RPAREN", r"\)"),
    ("VARIABLE", r"[A-Z][A-Za-z0-9_]*"),
    ("NAME", r"[a-z0-9_][A-Za-z0-9_]*"),
    ("MISMATCH", r"."),
]
_TOKEN_RE = re.compile("|".join(f"(?P<{name}>{pattern})" for name, pattern in _TOKEN_SPEC))


@dataclass(frozen=True, slots=True)
class Token:
    kind: str
    text: str
    line: int
    column: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    line, line_start = 1, 0
    for match in _TOKEN_RE.finditer(text):
        kind = match.lastgroup
        column = match.start() - line_start + 1
        if kind == "NEWLINE":
            line += 1
            line_start = match.end()
            continue
        if kind in ("SKIP", "COMMENT"):
            continue
        if kind == "MISMATCH":
            raise ParseError(f"unexpected character {match.group()!r}", line, column)
        tokens.append(Token(kind, match.group(), line, column))
    tokens.append(Token("EOF", "", line, len(text) - line_start + 1))
    return tokens


@dataclass
class ParseSession:
    """
    Arity bookkeeping shared by several parse calls.

    Predicates and function symbols live in separate tables; a symbol reused
    with another arity inside one session is an `ArityError`.
    """

    allow_reserved: bool = False
    predicates: dict[str, int] = field(default_factory=dict)
    functions: dict[str, int] = field(default_factory=dict)

    def register_predicate(self, name: str, arity: int):
        _register(self.predicates, name, arity)

    def register_function(self, name: str, arity: int):
        _register(self.functions, name, arity)


def _register(table: dict[str, int], name: str, arity: int):
    known = table.setdefault(name, arity)
    if known != arity:
        raise ArityError(name, known, arity)


class _Parser:
    def __init__(self, text: str, session: ParseSession):
        self.tokens = tokenize(text)
        self.pos = 0
        self.session = session

    # ---------- token helpers ----------

    @property
    def current(self) -> Token:
        return self.tokens[self.pos]

    def _error(self, message: str, token: Token | None = None) -> ParseError:
        token = token or self.current
        found = token.text or "end of input"
        return ParseError(f"{message}, found {found!r}", token.line, token.column)

    def accept(self, kind: str, text: str | None = None) -> Token | None:
        tok = self.current
        if tok.kind == kind and (text is None or tok.text == text):
            self.pos += 1
            return tok
        return None

    def expect(self, kind: str, what: str) -> Token:
        tok = self.accept(kind)
        if tok is None:
            raise self._error(f"expected {what}")
        return tok

    def at_end(self) -> bool:
        return self.current.kind == "EOF"

    # ---------- terms and atoms ----------

    def symbol(self) -> Token:
        tok = self.current
        if tok.kind != "NAME" or tok.text in KEYWORDS:
            raise self._error("expected a symbol")
        if not self.session.allow_reserved and is_reserved_symbol(tok.text):
            raise ReservedSymbolError(
                f"symbol {tok.text!r} is in the reserved Skolem namespace",
                tok.line,
                tok.column,
            )
        self.pos += 1
        return tok

    def term(self) -> Term:
        var = self.accept("VARIABLE")
        if var is not None:
            return Term.var(var.text)
        name = self.symbol()
        args = self.arguments()
        self.session.register_function(name.text, len(args))
        return Term.fn(name.text, *args)

    def arguments(self) -> tuple[Term, ...]:
        if not self.accept("LPAREN"):
            return ()
        args = [self.term()]
        while self.accept("COMMA"):
            args.append(self.term())
        self.expect("RPAREN", "')' closing the argument list")
        return tuple(args)

    def atom(self) -> Atom:
        name = self.symbol()
        args = self.arguments()
        self.session.register_predicate(name.text, len(args))
        return Atom(name.text, args)

    # ---------- clauses ----------

    def clause(self, clause_id: str | None = None) -> Clause:
        head: list[Atom] = []
        if self.accept("NAME", "false") is None:
            head.append(self.atom())
            while self.accept("SEMI"):
                head.append(self.atom())

        body: list[Atom] = []
        if self.accept("IMPLIED_BY"):
            if self.accept("NAME", "true") is None:
                body.append(self.atom())
                while self.accept("COMMA"):
                    body.append(self.atom())

        self.expect("DOT", "'.' ending the clause")
        return Clause(tuple(head), tuple(body), clause_id)

    # ---------- formulae ----------

    def formula(self) -> Formula:
        return self.iff()

    def iff(self) -> Formula:
        left = self.implies()
        if self.accept("IFF"):
            return Iff(left, self.iff())
        return left

    def implies(self) -> Formula:
        left = self.disjunction()
        if self.accept("IMPLIES"):
            return Implies(left, self.implies())
        return left

    def disjunction(self) -> Formula:
        parts = [self.conjunction()]
        while self.accept("OR"):
            parts.append(self.conjunction())
        return parts[0] if len(parts) == 1 else Or(tuple(parts))

    def conjunction(self) -> Formula:
        parts = [self.unary()]
        while self.accept("AND"):
            parts.append(self.unary())
        return parts[0] if len(parts) == 1 else And(tuple(parts))

    def unary(self) -> Formula:
        if self.accept("NOT"):
            return Not(self.unary())
        if self.accept("LPAREN"):
            inner = self.formula()
            self.expect("RPAREN", "')'")
            return inner
        for word, node in (("all", Forall), ("exists", Exists)):
            if self.accept("NAME", word):
                variables = [self.expect("VARIABLE", "a quantified variable").text]
                while self.accept("COMMA"):
                    variables.append(self.expect("VARIABLE", "a quantified variable").text)
                self.expect("LPAREN", "'(' opening the quantifier scope")
                body = self.formula()
                self.expect("RPAREN", "')' closing the quantifier scope")
                return node(tuple(variables), body)
        return AtomicFormula(self.atom())


def parse_clause(text: str, session: ParseSession | None = None, clause_id: str | None = None) -> Clause:
    parser = _Parser(text, session or ParseSession())
    clause = parser.clause(clause_id)
    if not parser.at_end():
        raise parser._error("expected end of clause")
    return clause


def iter_clauses(text: str, session: ParseSession | None = None) -> Iterator[Clause]:
    """Clauses of a clause file in order; ids are 1-based ordinals."""
    parser = _Parser(text, session or ParseSession())
    ordinal = 0
    while not parser.at_end():
        ordinal += 1
        yield parser.clause(str(ordinal))


def parse_clauses(text: str, session: ParseSession | None = None) -> list[Clause]:
    return list(iter_clauses(text, session))


def parse_formula(text: str, session: ParseSession | None = None) -> Formula:
    parser = _Parser(text, session or ParseSession())
    formula = parser.formula()
    # a trailing '.' is tolerated so formula files may be written like clauses
    parser.accept("DOT")
    if not parser.at_end():
        raise parser._error("expected end of formula")

    free = formula.free_variables()
    if free:
        raise FreeVariableError(free)
    return formula


def render_clause(clause: Clause) -> str:
    return str(clause)


__all__ = [
    "ParseSession",
    "Token",
    "iter_clauses",
    "parse_clause",
    "parse_clauses",
    "parse_formula",
    "render_clause",
    "render_formula",
    "tokenize",
]
