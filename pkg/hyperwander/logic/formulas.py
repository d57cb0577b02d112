from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from .terms import Atom, Clause

# binding strength used when rendering; higher binds tighter
_PRECEDENCE = {
    "Iff": 1,
    "Implies": 2,
    "Or": 3,
    "And": 4,
}


class Formula:
    """Base of the restricted first-order formula tree."""

    def atoms(self) -> Iterator[Atom]:
        raise NotImplementedError

    def free_variables(self) -> set[str]:
        raise NotImplementedError

    @property
    def precedence(self) -> int:
        return _PRECEDENCE.get(type(self).__name__, 5)

    def __str__(self):
        return render_formula(self)


@dataclass(frozen=True, eq=True)
class AtomicFormula(Formula):
    atom: Atom

    def atoms(self):
        yield self.atom

    def free_variables(self):
        return set(self.atom.variables())


@dataclass(frozen=True, eq=True)
class Not(Formula):
    sub: Formula

    def atoms(self):
        yield from self.sub.atoms()

    def free_variables(self):
        return self.sub.free_variables()


@dataclass(frozen=True, eq=True)
class And(Formula):
    parts: tuple[Formula, ...]

    def atoms(self):
        for p in self.parts:
            yield from p.atoms()

    def free_variables(self):
        return set().union(*(p.free_variables() for p in self.parts))


@dataclass(frozen=True, eq=True)
class Or(Formula):
    parts: tuple[Formula, ...]

    def atoms(self):
        for p in self.parts:
            yield from p.atoms()

    def free_variables(self):
        return set().union(*(p.free_variables() for p in self.parts))


@dataclass(frozen=True, eq=True)
class Implies(Formula):
    left: Formula
    right: Formula

    def atoms(self):
        yield from self.left.atoms()
        yield from self.right.atoms()

    def free_variables(self):
        return self.left.free_variables() | self.right.free_variables()


@dataclass(frozen=True, eq=True)
class Iff(Formula):
    left: Formula
    right: Formula

    def atoms(self):
        yield from self.left.atoms()
        yield from self.right.atoms()

    def free_variables(self):
        return self.left.free_variables() | self.right.free_variables()


@dataclass(frozen=True, eq=True)
class Forall(Formula):
    variables: tuple[str, ...]
    body: Formula

    def atoms(self):
        yield from self.body.atoms()

    def free_variables(self):
        return self.body.free_variables() - set(self.variables)


@dataclass(frozen=True, eq=True)
class Exists(Formula):
    variables: tuple[str, ...]
    body: Formula

    def atoms(self):
        yield from self.body.atoms()

    def free_variables(self):
        return self.body.free_variables() - set(self.variables)


_BINARY_OPS = {And: " & ", Or: " | "}


def _wrap(child: Formula, parent_precedence: int) -> str:
    text = render_formula(child)
    if child.precedence <= parent_precedence:
        return f"({text})"
    return text


def render_formula(f: Formula) -> str:
    match f:
        case AtomicFormula(atom=atom):
            return str(atom)
        case Not(sub=sub):
            return "~" + _wrap(sub, 4)
        case And(parts=parts) | Or(parts=parts):
            sep = _BINARY_OPS[type(f)]
            return sep.join(_wrap(p, f.precedence) for p in parts)
        case Implies(left=left, right=right):
            return f"{_wrap(left, 2)} => {_wrap(right, 2)}"
        case Iff(left=left, right=right):
            return f"{_wrap(left, 1)} <=> {_wrap(right, 1)}"
        case Forall(variables=variables, body=body):
            return f"all {', '.join(variables)} ({render_formula(body)})"
        case Exists(variables=variables, body=body):
            return f"exists {', '.join(variables)} ({render_formula(body)})"
    raise TypeError(f"not a formula: {f!r}")


def symbols_of(x: Formula | Clause | Atom | list | tuple | set | frozenset) -> frozenset[str]:
    """Predicate symbols occurring in a formula or a clause collection."""
    if isinstance(x, Formula):
        return frozenset(a.predicate for a in x.atoms())
    if isinstance(x, Clause):
        return frozenset(a.predicate for a in x.atoms())
    if isinstance(x, Atom):
        return frozenset((x.predicate,))

    found = set()
    for item in x:
        found |= symbols_of(item)
    return frozenset(found)


def predicate_arities(x: Formula | list) -> dict[str, int]:
    atoms = x.atoms() if isinstance(x, Formula) else (a for c in x for a in c.atoms())
    return {a.predicate: a.arity for a in atoms}
