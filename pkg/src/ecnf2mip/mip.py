"""Mixed-integer program container shared by the linearizer, solver and MPS io."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional

import numpy as np


class ColumnKind(enum.Enum):
    BINARY = "binary"
    INTEGER = "integer"
    CONTINUOUS = "continuous"

    @property
    def discrete(self) -> bool:
        return self is not ColumnKind.CONTINUOUS


class Sense(enum.Enum):
    LEQ = "L"
    GEQ = "G"
    EQ = "E"

    def holds(self, lhs, rhs, tol=0.0) -> bool:
        if self is Sense.LEQ:
            return lhs <= rhs + tol
        if self is Sense.GEQ:
            return lhs >= rhs - tol
        return abs(lhs - rhs) <= tol

    def violation(self, lhs, rhs) -> float:
        if self is Sense.LEQ:
            return max(0.0, lhs - rhs)
        if self is Sense.GEQ:
            return max(0.0, rhs - lhs)
        return abs(lhs - rhs)


@dataclass(frozen=True)
class Origin:
    """Where a column came from.

    ``kind`` is ``atom`` or ``int`` for source variables, otherwise one of the
    auxiliary kinds ``w1``/``w2`` (equality split), ``copy`` (guarded copy),
    ``witness`` (disjunct witness) or ``level``.  ``detail`` holds what is
    needed to recompute the auxiliary value from a source assignment.
    """

    kind: str
    source: str
    detail: tuple = ()

    @property
    def auxiliary(self) -> bool:
        return self.kind in AUX_KINDS


AUX_KINDS = frozenset({"w1", "w2", "copy", "witness", "level"})


@dataclass
class Column:
    name: str
    kind: ColumnKind
    lower: float
    upper: float
    origin: Origin = Origin("aux", "")


@dataclass
class Row:
    terms: tuple  # ((column index, coefficient), ...) sorted by column index
    sense: Sense
    rhs: float
    origin: tuple = ("", "")  # (source id, tag)

    def activity(self, x) -> float:
        return sum(coef * x[j] for j, coef in self.terms)


@dataclass(frozen=True)
class Implication:
    """Record of a guarded row ``guard => sum(terms) sense rhs`` and its M."""

    guard: int
    positive: bool
    terms: tuple
    sense: Sense
    rhs: int
    big_m: int


@dataclass
class MipModel:
    name: str = "model"
    columns: list = field(default_factory=list)
    rows: list = field(default_factory=list)
    objective: dict = field(default_factory=dict)  # column index -> coefficient
    objective_constant: float = 0
    provenance: dict = field(default_factory=dict)  # source id -> [row index]
    implications: dict = field(default_factory=dict)  # row index -> Implication
    infeasible: bool = False

    @property
    def n_cols(self) -> int:
        return len(self.columns)

    @property
    def n_rows(self) -> int:
        return len(self.rows)

    def column_index(self, name: str) -> int:
        for j, col in enumerate(self.columns):
            if col.name == name:
                return j
        raise KeyError(name)

    def names(self) -> list:
        return [c.name for c in self.columns]

    def objective_value(self, x) -> float:
        return self.objective_constant + sum(c * x[j] for j, c in self.objective.items())

    def to_arrays(self):
        """Dense arrays ``(A, b, sense, c, lb, ub, discrete)``.

        ``sense`` is -1 for <=, 0 for =, +1 for >=.
        """
        m, n = self.n_rows, self.n_cols
        A = np.zeros((m, n))
        b = np.zeros(m)
        sense = np.zeros(m, dtype=np.int64)
        code = {Sense.LEQ: -1, Sense.EQ: 0, Sense.GEQ: 1}
        for i, row in enumerate(self.rows):
            for j, coef in row.terms:
                A[i, j] += coef
            b[i] = row.rhs
            sense[i] = code[row.sense]
        c = np.zeros(n)
        for j, coef in self.objective.items():
            c[j] = coef
        lb = np.array([col.lower for col in self.columns], dtype=float)
        ub = np.array([col.upper for col in self.columns], dtype=float)
        discrete = np.array([col.kind.discrete for col in self.columns], dtype=bool)
        return A, b, sense, c, lb, ub, discrete

    def structure(self) -> tuple:
        """Canonical content for structural comparison.

        Ignores origins/provenance; an integer column on [0, 1] is the same
        thing as a binary column.
        """
        def kind(col):
            if col.kind is ColumnKind.INTEGER and col.lower == 0 and col.upper == 1:
                return ColumnKind.BINARY
            return col.kind

        cols = tuple((c.name, kind(c), float(c.lower), float(c.upper)) for c in self.columns)
        rows = tuple(
            (tuple((j, float(v)) for j, v in r.terms), r.sense, float(r.rhs)) for r in self.rows
        )
        obj = tuple(sorted((j, float(v)) for j, v in self.objective.items() if v != 0))
        return (cols, rows, obj, float(self.objective_constant))


def merge_terms(pairs) -> tuple:
    """Merge ``(column, coefficient)`` pairs, dropping zeros; sorted by column."""
    acc = {}
    for j, coef in pairs:
        acc[j] = acc.get(j, 0) + coef
    return tuple(sorted((j, v) for j, v in acc.items() if v != 0))


def column_bound_of_sum(terms, columns, direction: str, fixed: Optional[dict] = None):
    """Box minimum (``direction='min'``) or maximum of ``sum(coef * col)``."""
    fixed = fixed or {}
    total = 0
    for j, coef in terms:
        if j in fixed:
            total += coef * fixed[j]
            continue
        lo, hi = columns[j].lower, columns[j].upper
        if (coef > 0) == (direction == "min"):
            total += coef * lo
        else:
            total += coef * hi
    return total
