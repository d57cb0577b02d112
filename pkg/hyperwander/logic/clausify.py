"""
Clausal normal form for closed formulae.

The pipeline is implication elimination, negation normal form,
Skolemization and distribution of disjunction over conjunction. Positive
literals become the clause head, negated ones the body.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from ..exceptions import FragmentError, FreeVariableError
from .formulas import And, AtomicFormula, Exists, Forall, Formula, Iff, Implies, Not, Or
from .terms import Atom, Clause, Term

# a literal is an atom with its polarity
Literal = tuple[Atom, bool]


def to_nnf(f: Formula, negated: bool = False) -> Formula:
    """Negation normal form; `=>` is rewritten, `<=>` is outside the fragment."""
    match f:
        case AtomicFormula():
            return Not(f) if negated else f
        case Not(sub=sub):
            return to_nnf(sub, not negated)
        case And(parts=parts):
            node = Or if negated else And
            return node(tuple(to_nnf(p, negated) for p in parts))
        case Or(parts=parts):
            node = And if negated else Or
            return node(tuple(to_nnf(p, negated) for p in parts))
        case Implies(left=left, right=right):
            return to_nnf(Or((Not(left), right)), negated)
        case Forall(variables=variables, body=body):
            node = Exists if negated else Forall
            return node(variables, to_nnf(body, negated))
        case Exists(variables=variables, body=body):
            node = Forall if negated else Exists
            return node(variables, to_nnf(body, negated))
        case Iff():
            raise FragmentError("equivalence (<=>) is not supported by clausification")
    raise TypeError(f"not a formula: {f!r}")


@dataclass
class _Skolemizer:
    prefix: str
    counter: itertools.count = field(default_factory=lambda: itertools.count(1))
    used_names: set[str] = field(default_factory=set)

    def fresh_variable(self, name: str) -> str:
        candidate, suffix = name, 0
        while candidate in self.used_names:
            suffix += 1
            candidate = f"{name}{suffix}"
        self.used_names.add(candidate)
        return candidate

    def run(self, f: Formula, env: dict[str, Term], universals: tuple[Term, ...]) -> Formula:
        match f:
            case AtomicFormula(atom=atom):
                return AtomicFormula(atom.substitute(env))
            case Not(sub=sub):
                return Not(self.run(sub, env, universals))
            case And(parts=parts):
                return And(tuple(self.run(p, env, universals) for p in parts))
            case Or(parts=parts):
                return Or(tuple(self.run(p, env, universals) for p in parts))
            case Forall(variables=variables, body=body):
                inner = dict(env)
                bound = []
                for v in variables:
                    term = Term.var(self.fresh_variable(v))
                    inner[v] = term
                    bound.append(term)
                return self.run(body, inner, universals + tuple(bound))
            case Exists(variables=variables, body=body):
                inner = dict(env)
                for v in variables:
                    inner[v] = Term.fn(f"{self.prefix}{next(self.counter)}", *universals)
                return self.run(body, inner, universals)
        raise TypeError(f"unexpected node in negation normal form: {f!r}")


def skolemize(f: Formula, skolem_prefix: str = "sk") -> Formula:
    """
    Replace quantifiers of an NNF formula. Existentials become `sk1, sk2, ...`
    (constants, or functions of the enclosing universals) numbered left to
    right; universals become free variables, renamed apart when reused.
    """
    return _Skolemizer(skolem_prefix).run(f, {}, ())


def _conjunctive_form(f: Formula) -> list[list[Literal]]:
    match f:
        case AtomicFormula(atom=atom):
            return [[(atom, True)]]
        case Not(sub=AtomicFormula(atom=atom)):
            return [[(atom, False)]]
        case And(parts=parts):
            return [c for p in parts for c in _conjunctive_form(p)]
        case Or(parts=parts):
            product = [[]]
            for part in parts:
                product = [left + right for left in product for right in _conjunctive_form(part)]
            return product
    raise TypeError(f"unexpected node in Skolem normal form: {f!r}")


def _to_clause(literals: list[Literal], clause_id: str | None) -> Clause | None:
    head = list(dict.fromkeys(a for a, positive in literals if positive))
    body = list(dict.fromkeys(a for a, positive in literals if not positive))
    if set(head) & set(body):
        return None
    return Clause(tuple(head), tuple(body), clause_id)


def clausify(f: Formula, skolem_prefix: str = "sk", label: str | None = None) -> list[Clause]:
    """
    Satisfiability-equivalent clause list for the closed formula `f`.

    Clause ids are `<label>.<n>` (or just `<n>`), tautologies are dropped and
    duplicate clauses kept once. Output is deterministic for a given formula.
    """
    free = f.free_variables()
    if free:
        raise FreeVariableError(free)

    quantifier_free = skolemize(to_nnf(f), skolem_prefix)

    clauses: list[Clause] = []
    seen = set()
    for literals in _conjunctive_form(quantifier_free):
        clause = _to_clause(literals, None)
        if clause is None or clause in seen:
            continue
        seen.add(clause)
        ordinal = len(clauses) + 1
        clause_id = f"{label}.{ordinal}" if label is not None else str(ordinal)
        clauses.append(Clause(clause.head, clause.body, clause_id))
    return clauses
