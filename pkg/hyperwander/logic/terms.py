from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterator, Mapping

from django.db.models import TextChoices
from django.utils.translation import gettext_lazy as _

# Skolem symbols are drawn from `sk<digit>...`; user input may not use them
SKOLEM_PATTERN = re.compile(r"sk[0-9]")

# words the formula grammar claims; a concept spelled like one gets a trailing "_"
KEYWORDS = frozenset({"all", "exists", "false", "true"})

_NON_SYMBOL = re.compile(r"[^A-Za-z0-9_]")
_WHITESPACE = re.compile(r"\s+")


def is_reserved_symbol(name: str) -> bool:
    return SKOLEM_PATTERN.match(name) is not None


def canonical_symbol(text: str) -> str:
    """
    Canonical form of a concept or relation name, shared by the knowledge
    base, the embedding store and COPA statements.

    Each whitespace-separated word gets a lowercase first letter and the words
    are joined by underscores; case inside a word is kept, so "Dog Treat"
    becomes "dog_treat" while "HasA" and "hasA" both become "hasA". Characters
    outside [A-Za-z0-9_] turn into underscores. Grammar keywords are escaped
    with a trailing underscore ("all" -> "all_").
    """
    words = _WHITESPACE.split(text.strip())
    name = "_".join(w[:1].lower() + w[1:] for w in words)
    name = _NON_SYMBOL.sub("_", name)
    if name in KEYWORDS:
        name += "_"
    return name


def canonical_relation(text: str) -> str:
    """`/r/HasA`, `HasA` and `hasA` all become `hasA`."""
    name = text.strip()
    if name.startswith("/r/"):
        name = name[3:]
    return canonical_symbol(name.strip("/"))


class TermKind(TextChoices):
    VARIABLE = "variable", _("Variable")
    CONSTANT = "constant", _("Constant")
    FUNCTION = "function", _("Function application")


@dataclass(frozen=True, slots=True)
class Term:
    kind: TermKind
    name: str
    args: tuple[Term, ...] = ()

    @classmethod
    def var(cls, name: str) -> Term:
        return cls(TermKind.VARIABLE, name)

    @classmethod
    def const(cls, name: str) -> Term:
        return cls(TermKind.CONSTANT, name)

    @classmethod
    def fn(cls, name: str, *args: Term) -> Term:
        if not args:
            return cls(TermKind.CONSTANT, name)
        return cls(TermKind.FUNCTION, name, tuple(args))

    @property
    def is_variable(self) -> bool:
        return self.kind == TermKind.VARIABLE

    @property
    def arity(self) -> int:
        return len(self.args)

    @property
    def depth(self) -> int:
        if not self.args:
            return 1
        return 1 + max(a.depth for a in self.args)

    @property
    def is_ground(self) -> bool:
        if self.kind == TermKind.VARIABLE:
            return False
        return all(a.is_ground for a in self.args)

    def variables(self) -> Iterator[str]:
        if self.kind == TermKind.VARIABLE:
            yield self.name
        for a in self.args:
            yield from a.variables()

    def functions(self) -> Iterator[tuple[str, int]]:
        if self.kind != TermKind.VARIABLE:
            yield self.name, len(self.args)
        for a in self.args:
            yield from a.functions()

    def substitute(self, sigma: Mapping[str, Term]) -> Term:
        if self.kind == TermKind.VARIABLE:
            return sigma.get(self.name, self)
        if not self.args:
            return self
        return Term(self.kind, self.name, tuple(a.substitute(sigma) for a in self.args))

    def __str__(self):
        if not self.args:
            return self.name
        return f"{self.name}({','.join(str(a) for a in self.args)})"


@dataclass(frozen=True, slots=True)
class Atom:
    predicate: str
    args: tuple[Term, ...] = ()

    @classmethod
    def of(cls, predicate: str, *args: Term | str) -> Atom:
        """Shorthand for tests and builders: uppercase strings are variables."""
        terms = tuple(
            a if isinstance(a, Term) else (Term.var(a) if a[:1].isupper() else Term.const(a))
            for a in args
        )
        return cls(predicate, terms)

    @property
    def arity(self) -> int:
        return len(self.args)

    @property
    def depth(self) -> int:
        if not self.args:
            return 0
        return max(a.depth for a in self.args)

    @property
    def is_ground(self) -> bool:
        return all(a.is_ground for a in self.args)

    def variables(self) -> Iterator[str]:
        for a in self.args:
            yield from a.variables()

    def substitute(self, sigma: Mapping[str, Term]) -> Atom:
        if not self.args:
            return self
        return Atom(self.predicate, tuple(a.substitute(sigma) for a in self.args))

    def __str__(self):
        if not self.args:
            return self.predicate
        return f"{self.predicate}({','.join(str(a) for a in self.args)})"


@dataclass(frozen=True)
class Clause:
    """
    `head_1 ; ... ; head_n :- body_1, ..., body_m.`

    An empty head is falsum, an empty body is truth. The id is a label only and
    takes no part in equality.
    """

    head: tuple[Atom, ...] = ()
    body: tuple[Atom, ...] = ()
    id: str | None = field(default=None, compare=False)

    @property
    def is_fact(self) -> bool:
        return not self.body and len(self.head) == 1

    @property
    def is_goal(self) -> bool:
        return not self.head

    def head_variables(self) -> set[str]:
        return {v for a in self.head for v in a.variables()}

    def body_variables(self) -> set[str]:
        return {v for a in self.body for v in a.variables()}

    def unbound_head_variables(self) -> list[str]:
        body_vars = self.body_variables()
        return sorted(self.head_variables() - body_vars)

    @property
    def is_range_restricted(self) -> bool:
        return not self.unbound_head_variables()

    def atoms(self) -> Iterator[Atom]:
        yield from self.head
        yield from self.body

    def __str__(self):
        head = " ; ".join(str(a) for a in self.head) if self.head else "false"
        if not self.body:
            return f"{head}."
        return f"{head} :- {', '.join(str(a) for a in self.body)}."


@dataclass(frozen=True)
class RangeViolation:
    index: int
    clause: Clause
    unbound: tuple[str, ...]

    def __str__(self):
        label = self.clause.id if self.clause.id is not None else self.index + 1
        return f"clause {label} `{self.clause}`: unbound {', '.join(self.unbound)}"


def check_range_restricted(clauses) -> list[RangeViolation]:
    violations = []
    for index, clause in enumerate(clauses):
        unbound = clause.unbound_head_variables()
        if unbound:
            violations.append(RangeViolation(index, clause, tuple(unbound)))
    return violations
