"""ECNF theory data model, validation and normalization.

A theory is plain immutable data: atoms are referred to by name, integer
variables carry (possibly missing) bounds, and constraints/definitions are
frozen dataclasses holding tuples.  Atoms whose name heads a rule are
*defined*; every other atom is *open*.
"""
from __future__ import annotations

import enum
from collections import OrderedDict
from dataclasses import dataclass, field, replace
from typing import Optional, Union


class MalformedTheory(ValueError):
    pass


class Comparator(enum.Enum):
    LT = "<"
    LEQ = "<="
    EQ = "="
    GEQ = ">="
    GT = ">"
    NEQ = "!="

    def holds(self, lhs, rhs):
        if self is Comparator.LT:
            return lhs < rhs
        if self is Comparator.LEQ:
            return lhs <= rhs
        if self is Comparator.EQ:
            return lhs == rhs
        if self is Comparator.GEQ:
            return lhs >= rhs
        if self is Comparator.GT:
            return lhs > rhs
        return lhs != rhs


class Connective(enum.Enum):
    AND = "&"
    OR = "|"


def _tuple(obj, name):
    object.__setattr__(obj, name, tuple(getattr(obj, name)))


@dataclass(frozen=True)
class Literal:
    atom: str
    positive: bool = True

    def __neg__(self) -> "Literal":
        return Literal(self.atom, not self.positive)

    def __str__(self):
        return self.atom if self.positive else "-" + self.atom


def lit(text: str) -> Literal:
    """Shorthand: ``lit("p")`` / ``lit("-p")``."""
    if text.startswith("-"):
        return Literal(text[1:], False)
    return Literal(text)


@dataclass(frozen=True)
class IntVar:
    id: str
    lower: Optional[int] = None
    upper: Optional[int] = None

    @property
    def bounded(self) -> bool:
        return self.lower is not None and self.upper is not None


@dataclass(frozen=True)
class LinearTerm:
    coefficient: int
    variable: str


@dataclass(frozen=True)
class Clause:
    literals: tuple

    def __post_init__(self):
        _tuple(self, "literals")


@dataclass(frozen=True)
class Equivalence:
    head: str
    connective: Connective
    body: tuple

    def __post_init__(self):
        _tuple(self, "body")
        if len(self.body) == 1:
            object.__setattr__(self, "connective", Connective.AND)


@dataclass(frozen=True)
class ReifiedSum:
    head: Literal
    terms: tuple
    cmp: Comparator
    rhs: int

    def __post_init__(self):
        _tuple(self, "terms")


@dataclass(frozen=True)
class GuardedTerm:
    guard: Literal
    term: LinearTerm


@dataclass(frozen=True)
class ConditionalReifiedSum:
    head: Literal
    terms: tuple  # of GuardedTerm
    cmp: Comparator
    rhs: int

    def __post_init__(self):
        _tuple(self, "terms")


Constraint = Union[Clause, Equivalence, ReifiedSum, ConditionalReifiedSum]


@dataclass(frozen=True)
class Rule:
    """``head <- body``.  An empty AND body reads "true", an empty OR body "false"."""

    head: str
    connective: Connective
    body: tuple

    def __post_init__(self):
        _tuple(self, "body")
        if len(self.body) == 1:
            object.__setattr__(self, "connective", Connective.AND)


@dataclass(frozen=True)
class Definition:
    id: str
    rules: tuple

    def __post_init__(self):
        _tuple(self, "rules")

    @property
    def heads(self) -> tuple:
        seen = OrderedDict()
        for r in self.rules:
            seen.setdefault(r.head, None)
        return tuple(seen)


@dataclass(frozen=True)
class Objective:
    terms: tuple
    constant: int = 0

    def __post_init__(self):
        _tuple(self, "terms")


@dataclass(frozen=True)
class Theory:
    name: str = "theory"
    int_vars: tuple = ()
    atoms: tuple = ()
    constraints: tuple = ()
    definitions: tuple = ()
    objective: Optional[Objective] = None

    def __post_init__(self):
        for name in ("int_vars", "atoms", "constraints", "definitions"):
            _tuple(self, name)

    def defined_atoms(self) -> dict:
        """Map each defined atom to the id of the definition it heads in."""
        out = {}
        for d in self.definitions:
            for r in d.rules:
                out.setdefault(r.head, d.id)
        return out

    def open_atoms(self) -> tuple:
        defined = self.defined_atoms()
        return tuple(a for a in self.atoms if a not in defined)

    def int_var(self, name: str) -> Optional[IntVar]:
        for v in self.int_vars:
            if v.id == name:
                return v
        return None

    def bounds(self, name: str) -> tuple:
        """Box of a term variable: atoms are 0/1, int vars their declared bounds."""
        v = self.int_var(name)
        if v is None:
            return (0, 1)
        return (v.lower, v.upper)

    @property
    def n_rules(self) -> int:
        return sum(len(d.rules) for d in self.definitions)


# -- validation ------------------------------------------------------------

@dataclass(frozen=True)
class Violation:
    kind: str
    subject: str
    detail: str = ""

    def __str__(self):
        s = f"{self.kind}({self.subject})"
        return f"{s}: {self.detail}" if self.detail else s


@dataclass
class ValidationReport:
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def kinds(self) -> set:
        return {v.kind for v in self.violations}

    def __iter__(self):
        return iter(self.violations)

    def __len__(self):
        return len(self.violations)

    def __str__(self):
        return "\n".join(str(v) for v in self.violations) or "ok"


def _literals_of(c) -> list:
    if isinstance(c, Clause):
        return list(c.literals)
    if isinstance(c, Equivalence):
        return [Literal(c.head)] + list(c.body)
    if isinstance(c, ReifiedSum):
        return [c.head]
    if isinstance(c, ConditionalReifiedSum):
        return [c.head] + [g.guard for g in c.terms]
    raise TypeError(f"unknown constraint {c!r}")


def _term_vars_of(c) -> list:
    if isinstance(c, ReifiedSum):
        return [t.variable for t in c.terms]
    if isinstance(c, ConditionalReifiedSum):
        return [g.term.variable for g in c.terms]
    return []


def validate_theory(t: Theory) -> ValidationReport:
    report = ValidationReport()
    add = report.violations.append

    seen = set()
    for name in list(t.atoms) + [v.id for v in t.int_vars]:
        if name in seen:
            add(Violation("DuplicateId", name))
        seen.add(name)
    atoms = set(t.atoms)
    ints = {v.id for v in t.int_vars}

    for v in t.int_vars:
        if not v.bounded:
            add(Violation("UnboundedVariable", v.id))
        elif v.lower > v.upper:
            add(Violation("InvalidBounds", v.id, f"[{v.lower},{v.upper}]"))

    def check_atom(name, where):
        if name not in atoms:
            add(Violation("DanglingReference", name, where))

    def check_var(name, where):
        if name not in atoms and name not in ints:
            add(Violation("DanglingReference", name, where))

    for i, c in enumerate(t.constraints):
        where = f"constraint {i}"
        for l in _literals_of(c):
            check_atom(l.atom, where)
        for name in _term_vars_of(c):
            check_var(name, where)
        if isinstance(c, Equivalence) and not c.body:
            add(Violation("EmptyBody", c.head, where))

    head_owner = {}
    for d in t.definitions:
        for r in d.rules:
            where = f"definition {d.id}"
            check_atom(r.head, where)
            for l in r.body:
                check_atom(l.atom, where)
            owner = head_owner.setdefault(r.head, d.id)
            if owner != d.id:
                add(Violation("DuplicateHead", r.head,
                              f"defined in both {owner} and {d.id}"))
    for c in t.constraints:
        if isinstance(c, Equivalence) and c.head in head_owner:
            add(Violation("DefinedEquivalenceHead", c.head))

    if t.objective is not None:
        for term in t.objective.terms:
            check_var(term.variable, "objective")
    return report


# -- normalization ---------------------------------------------------------

def _fresh(base: str, taken: set) -> str:
    k = 1
    while f"{base}_b{k}" in taken:
        k += 1
    name = f"{base}_b{k}"
    taken.add(name)
    return name


def _merge_rules(d: Definition, taken: set, new_atoms: list) -> Definition:
    groups = OrderedDict()
    for r in d.rules:
        groups.setdefault(r.head, []).append(r)
    rules = []
    for head, group in groups.items():
        if len(group) == 1:
            rules.append(group[0])
            continue
        if any(r.connective is Connective.AND and not r.body for r in group):
            rules.append(Rule(head, Connective.AND, ()))
            continue
        disjuncts = []
        for r in group:
            if len(r.body) == 1 or r.connective is Connective.OR:
                disjuncts.extend(r.body)
            else:
                aux = _fresh(head, taken)
                new_atoms.append(aux)
                rules.append(Rule(aux, Connective.AND, r.body))
                disjuncts.append(Literal(aux))
        disjuncts = list(OrderedDict.fromkeys(disjuncts))
        rules.append(Rule(head, Connective.OR, disjuncts))
    return Definition(d.id, rules)


def _drop_zero(terms):
    return tuple(t for t in terms if t.coefficient != 0)


def _normalize_constraint(c):
    if isinstance(c, Clause):
        lits = tuple(OrderedDict.fromkeys(c.literals))
        pos = {l.atom for l in lits if l.positive}
        if any(not l.positive and l.atom in pos for l in lits):
            return None
        return Clause(lits)
    if isinstance(c, ReifiedSum):
        return replace(c, terms=_drop_zero(c.terms))
    if isinstance(c, ConditionalReifiedSum):
        return replace(c, terms=tuple(g for g in c.terms if g.term.coefficient != 0))
    return c


def normalize_theory(t: Theory) -> Theory:
    """Return an equivalent theory with one rule per defined head.

    Rules sharing a head become a single disjunctive rule; conjunctive bodies
    with more than one literal are moved to fresh defined atoms first.
    Zero-coefficient terms, duplicate clause literals and tautological
    clauses are removed.
    """
    defined = t.defined_atoms()
    for c in t.constraints:
        if isinstance(c, Equivalence) and c.head in defined:
            raise MalformedTheory(f"defined atom {c.head!r} is also an equivalence head")

    taken = set(t.atoms) | {v.id for v in t.int_vars}
    new_atoms = []
    definitions = tuple(_merge_rules(d, taken, new_atoms) for d in t.definitions)
    constraints = tuple(
        n for n in (_normalize_constraint(c) for c in t.constraints) if n is not None
    )
    objective = t.objective
    if objective is not None:
        objective = replace(objective, terms=_drop_zero(objective.terms))
    return replace(t, atoms=t.atoms + tuple(new_atoms), constraints=constraints,
                   definitions=definitions, objective=objective)


def is_normalized(t: Theory) -> bool:
    for d in t.definitions:
        heads = [r.head for r in d.rules]
        if len(heads) != len(set(heads)):
            return False
    return True
