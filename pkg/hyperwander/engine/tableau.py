"""
Hypertableau saturation.

A branch is extended by a clause when every body atom matches a branch atom
under one substitution. A single head atom grows the branch in place, a
disjunctive head splits it into one child per disjunct and an empty head
closes it. Branches are developed depth first, leftmost open branch first;
on each branch candidate extensions wait in a FIFO queue so none is starved.
"""

from __future__ import annotations

import logging
import time
from collections import defaultdict, deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Mapping

from django.db.models import TextChoices
from django.utils.translation import gettext_lazy as _
from opentelemetry import metrics
from pydantic import BaseModel, ConfigDict, Field

from ..exceptions import ArityError, RangeRestrictionError
from ..instrument import instrument
from ..logic.terms import Atom, Clause, Term, check_range_restricted

log = logging.getLogger(__name__)

meter = metrics.get_meter("hyperwander")
extension_counter = meter.create_counter(
    "hyperwander.engine.extensions",
    description="Hyper extension steps performed",
)

Substitution = dict[str, Term]


class SaturationStatus(TextChoices):
    REFUTED = "refuted", _("Refuted")
    SATURATED = "saturated", _("Saturated")
    RESOURCES_EXHAUSTED = "resources_exhausted", _("Resources exhausted")


class ExtensionOutcome(TextChoices):
    CLOSED = "closed", _("Closed")
    NOT_APPLICABLE = "not_applicable", _("Not applicable")


class Limits(BaseModel):
    model_config = ConfigDict(frozen=True)

    timeout_seconds: float = Field(default=30.0, gt=0)
    max_term_depth: int = Field(default=5, ge=1)
    max_branch_atoms: int = Field(default=100_000, ge=1)
    # deterministic budget; counts extension steps, not wall-clock time
    max_steps: int | None = Field(default=None, ge=1)


@dataclass(eq=False)
class Branch:
    """One path of the tableau. Atoms are ground, unique and kept in insertion order."""

    atoms: list[Atom] = field(default_factory=list)
    closed: bool = False
    parent: Branch | None = field(default=None, repr=False)
    children: list[Branch] = field(default_factory=list, repr=False)

    def __post_init__(self):
        initial, self.atoms = self.atoms, []
        self._members: set[Atom] = set()
        self._index: dict[str, list[Atom]] = defaultdict(list)
        for atom in initial:
            self.add(atom)

    def add(self, atom: Atom) -> bool:
        if atom in self._members:
            return False
        if not atom.is_ground:
            raise ValueError(f"branch atoms must be ground: {atom}")
        self.atoms.append(atom)
        self._members.add(atom)
        self._index[atom.predicate].append(atom)
        return True

    def branch_off(self, atom: Atom) -> Branch:
        child = Branch(list(self.atoms), parent=self)
        child.add(atom)
        self.children.append(child)
        return child

    def with_predicate(self, predicate: str) -> list[Atom]:
        return self._index.get(predicate, [])

    def __contains__(self, atom: Atom) -> bool:
        return atom in self._members

    def __len__(self):
        return len(self.atoms)

    def __iter__(self) -> Iterator[Atom]:
        return iter(self.atoms)


@dataclass
class SaturationStats:
    """
    Counters of one saturation run. `elapsed_seconds` is wall-clock time; it is
    left out of equality so identical runs compare equal.
    """

    extensions: int = 0
    branches_opened: int = 1
    branches_closed: int = 0
    depth_pruned: int = 0
    open_branches_left: int = 0
    elapsed_seconds: float = field(default=0.0, compare=False)


@dataclass(frozen=True)
class SaturationResult:
    status: SaturationStatus
    model: frozenset[Atom]
    stats: SaturationStats = field(compare=False)
    # the reported branch, in derivation order; None when refuted
    branch: Branch | None = field(default=None, compare=False, repr=False)

    @property
    def atoms(self) -> list[Atom]:
        return list(self.branch.atoms) if self.branch is not None else []


# ---------- matching ----------


def _match_term(pattern: Term, ground: Term, sigma: Substitution) -> bool:
    if pattern.is_variable:
        bound = sigma.get(pattern.name)
        if bound is None:
            sigma[pattern.name] = ground
            return True
        return bound == ground
    if ground.is_variable or pattern.name != ground.name or pattern.arity != ground.arity:
        return False
    return all(_match_term(p, g, sigma) for p, g in zip(pattern.args, ground.args))


def match_atom(pattern: Atom, ground: Atom, sigma: Mapping[str, Term] | None = None) -> Substitution | None:
    if pattern.predicate != ground.predicate or pattern.arity != ground.arity:
        return None
    trial = dict(sigma or {})
    for p, g in zip(pattern.args, ground.args):
        if not _match_term(p, g, trial):
            return None
    return trial


def _solve(body: tuple[Atom, ...], lookup, sigma: Substitution) -> Iterator[Substitution]:
    if not body:
        yield sigma
        return
    first, rest = body[0], body[1:]
    for candidate in list(lookup(first.predicate)):
        extended = match_atom(first, candidate, sigma)
        if extended is not None:
            yield from _solve(rest, lookup, extended)


def _lookup_for(atoms: Branch | Iterable[Atom]):
    if isinstance(atoms, Branch):
        return atoms.with_predicate
    index: dict[str, list[Atom]] = defaultdict(list)
    for atom in dict.fromkeys(atoms):
        index[atom.predicate].append(atom)
    return lambda predicate: index.get(predicate, [])


def match_body(body: Iterable[Atom], atoms: Branch | Iterable[Atom]) -> list[Substitution]:
    """
    Every substitution under which all body atoms are among `atoms`.

    Enumeration follows atom insertion order for the first body atom, then
    for the second, and so on left to right.
    """
    return list(_solve(tuple(body), _lookup_for(atoms), {}))


def hyper_extend(branch: Branch, clause: Clause) -> list[Branch] | ExtensionOutcome:
    """
    Apply one hyper extension step to an open branch.

    Uses the first body match whose head is not already satisfied on the
    branch: an empty head closes the branch, otherwise one child branch per
    head atom is returned.
    """
    if branch.closed:
        raise ValueError("cannot extend a closed branch")

    for sigma in _solve(clause.body, branch.with_predicate, {}):
        if not clause.head:
            branch.closed = True
            return ExtensionOutcome.CLOSED
        head = [a.substitute(sigma) for a in clause.head]
        if any(a in branch for a in head):
            continue
        return [branch.branch_off(a) for a in dict.fromkeys(head)]

    return ExtensionOutcome.NOT_APPLICABLE


# ---------- saturation ----------


def check_arities(clauses: Iterable[Clause]):
    predicates: dict[str, int] = {}
    functions: dict[str, int] = {}
    for clause in clauses:
        for atom in clause.atoms():
            known = predicates.setdefault(atom.predicate, atom.arity)
            if known != atom.arity:
                raise ArityError(atom.predicate, known, atom.arity)
            for term in atom.args:
                for name, arity in term.functions():
                    known = functions.setdefault(name, arity)
                    if known != arity:
                        raise ArityError(name, known, arity)


@dataclass
class _Frame:
    branch: Branch
    queue: deque = field(default_factory=deque)
    seen: set = field(default_factory=set)
    pruned: bool = False

    def fork(self, atom: Atom) -> _Frame:
        return _Frame(self.branch.branch_off(atom), deque(self.queue), set(self.seen), self.pruned)


class _Saturation:
    def __init__(self, clauses: list[Clause], limits: Limits):
        self.clauses = clauses
        self.limits = limits
        self.stats = SaturationStats()
        self.started = time.monotonic()

        # predicate -> (clause index, body position) pairs that it can trigger
        self.triggers: dict[str, list[tuple[int, int]]] = defaultdict(list)
        for ci, clause in enumerate(clauses):
            for position, atom in enumerate(clause.body):
                self.triggers[atom.predicate].append((ci, position))

    def enqueue_from(self, frame: _Frame, atom: Atom):
        """Queue every instance whose body uses the freshly added `atom`."""
        for ci, position in self.triggers.get(atom.predicate, ()):
            clause = self.clauses[ci]
            sigma = match_atom(clause.body[position], atom)
            if sigma is None:
                continue
            rest = clause.body[:position] + clause.body[position + 1 :]
            for full in _solve(rest, frame.branch.with_predicate, sigma):
                body = tuple(b.substitute(full) for b in clause.body)
                key = (ci, body)
                if key in frame.seen:
                    continue
                frame.seen.add(key)
                frame.queue.append((ci, tuple(h.substitute(full) for h in clause.head)))

    def budget_spent(self, branch: Branch) -> str | None:
        limits = self.limits
        if limits.max_steps is not None and self.stats.extensions >= limits.max_steps:
            return "step budget"
        if len(branch) >= limits.max_branch_atoms:
            return "branch atom limit"
        if time.monotonic() - self.started > limits.timeout_seconds:
            return "timeout"
        return None

    def add_atom(self, frame: _Frame, atom: Atom):
        if frame.branch.add(atom):
            self.enqueue_from(frame, atom)

    def run(self) -> SaturationResult:
        root = _Frame(Branch())
        for ci, clause in enumerate(self.clauses):
            if not clause.body:
                root.seen.add((ci, ()))
                root.queue.append((ci, clause.head))

        stack = [root]
        while stack:
            frame = stack[-1]
            if not frame.queue:
                status = SaturationStatus.RESOURCES_EXHAUSTED if frame.pruned else SaturationStatus.SATURATED
                return self.finish(status, frame.branch, stack)

            ci, head = frame.queue.popleft()
            branch = frame.branch
            if head and any(a in branch for a in head):
                continue
            if any(a.depth > self.limits.max_term_depth for a in head):
                frame.pruned = True
                self.stats.depth_pruned += 1
                continue

            reason = self.budget_spent(branch)
            if reason is not None:
                log.info("saturation stopped by %s after %d extensions", reason, self.stats.extensions)
                return self.finish(SaturationStatus.RESOURCES_EXHAUSTED, self.largest(stack), stack)

            self.stats.extensions += 1
            if not head:
                branch.closed = True
                self.stats.branches_closed += 1
                log.debug("branch closed by clause %s", self.clauses[ci].id or ci + 1)
                stack.pop()
                continue

            heads = list(dict.fromkeys(head))
            if len(heads) == 1:
                self.add_atom(frame, heads[0])
                continue

            stack.pop()
            children = []
            for atom in heads:
                child = frame.fork(atom)
                self.enqueue_from(child, atom)
                children.append(child)
            self.stats.branches_opened += len(children)
            # leftmost child on top of the stack
            stack.extend(reversed(children))

        return self.finish(SaturationStatus.REFUTED, None, stack)

    @staticmethod
    def largest(stack: list[_Frame]) -> Branch:
        # the top of the stack is the leftmost open branch
        best = None
        for frame in reversed(stack):
            if best is None or len(frame.branch) > len(best):
                best = frame.branch
        return best

    def finish(self, status: SaturationStatus, branch: Branch | None, stack: list[_Frame]) -> SaturationResult:
        self.stats.open_branches_left = len(stack)
        self.stats.elapsed_seconds = time.monotonic() - self.started
        extension_counter.add(self.stats.extensions, {"status": str(status)})

        model = frozenset(branch.atoms) if branch is not None else frozenset()
        log.info(
            "saturation %s: %d atoms, %d extensions, %d/%d branches closed",
            status,
            len(model),
            self.stats.extensions,
            self.stats.branches_closed,
            self.stats.branches_opened,
        )
        return SaturationResult(status, model, self.stats, branch)


def _annotate(span, result: SaturationResult):
    span.set_attribute("saturation.status", str(result.status))
    span.set_attribute("saturation.model_size", len(result.model))
    span.set_attribute("saturation.extensions", result.stats.extensions)


@instrument(skip_args={"clauses"}, on_result=_annotate)
def saturate(clauses: Iterable[Clause], limits: Limits | None = None) -> SaturationResult:
    """
    Saturate a range-restricted clause set.

    `refuted` means every branch closed. `saturated` means the reported branch
    is a model of all clause instances within the term depth limit. Otherwise
    the run stopped on a limit (or skipped over-deep atoms) and the largest
    open branch is handed back as a partial interpretation.
    """
    clauses = list(clauses)
    limits = limits or Limits()

    check_arities(clauses)
    violations = check_range_restricted(clauses)
    if violations:
        raise RangeRestrictionError(violations)

    return _Saturation(clauses, limits).run()


def violated_instances(clauses: Iterable[Clause], model: Iterable[Atom]) -> list[tuple[Clause, Substitution]]:
    """Clause instances whose body holds in `model` while no head atom does."""
    model = list(dict.fromkeys(model))
    members = set(model)
    lookup = _lookup_for(model)
    violations = []
    for clause in clauses:
        for sigma in _solve(clause.body, lookup, {}):
            if not any(h.substitute(sigma) in members for h in clause.head):
                violations.append((clause, sigma))
    return violations


def model_lines(model: Iterable[Atom]) -> list[str]:
    return sorted(str(a) for a in model)


def write_model(model: Iterable[Atom], path: str | Path):
    lines = model_lines(model)
    Path(path).write_text("".join(f"{line}\n" for line in lines), encoding="utf-8")
