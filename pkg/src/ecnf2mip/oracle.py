"""Brute-force semantics for small theories.

Open atoms and integer variables are enumerated; defined atoms are computed
from their definition's well-founded model, and an assignment is rejected
when that model is not total.  Evaluation is vectorized over blocks of
assignments.
"""
from __future__ import annotations

import graphlib
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .model import (
    Clause, ConditionalReifiedSum, Connective, Definition, Equivalence, ReifiedSum, Theory,
)

GUARD_RAIL = 2**20
_BLOCK = 1 << 15


class SpaceTooLarge(ValueError):
    pass


# -- scalar well-founded model ---------------------------------------------

def _least_model(d: Definition, opens: dict, interp: set) -> set:
    """Least model of the rules with negative head literals read in ``interp``."""
    heads = set(d.heads)
    derived = set()
    changed = True
    while changed:
        changed = False
        for r in d.rules:
            if r.head in derived:
                continue
            vals = []
            for l in r.body:
                if l.atom in heads:
                    vals.append(l.atom in derived if l.positive else l.atom not in interp)
                else:
                    vals.append(bool(opens[l.atom]) == l.positive)
            if all(vals) if r.connective is Connective.AND else any(vals):
                derived.add(r.head)
                changed = True
    return derived


def alternating_fixpoint(d: Definition, opens: dict):
    """``(certainly true, possibly true, steps)`` of the well-founded model."""
    true = set()
    steps = 0
    while True:
        possible = _least_model(d, opens, true)
        nxt = _least_model(d, opens, possible)
        steps += 2
        if nxt == true:
            return true, possible, steps
        true = nxt


def well_founded_model(d: Definition, opens: dict) -> Optional[dict]:
    """Head valuation of the well-founded model, or None when it is not total."""
    true, possible, _ = alternating_fixpoint(d, opens)
    if true != possible:
        return None
    return {h: h in true for h in d.heads}


# -- vectorized evaluation -------------------------------------------------

@dataclass
class OracleOutcome:
    status: str  # sat | unsat
    names: list
    matrix: np.ndarray  # one row per model, columns follow ``names``
    objectives: Optional[np.ndarray] = None
    optimum: Optional[int] = None
    space: int = 0

    @property
    def models(self) -> list:
        return [dict(zip(self.names, map(int, row))) for row in self.matrix]

    def model_set(self, names=None) -> set:
        names = names or self.names
        idx = [self.names.index(n) for n in names]
        return {tuple(int(v) for v in row[idx]) for row in self.matrix}


class _Evaluator:
    def __init__(self, t: Theory):
        self.t = t
        self.names = list(t.atoms) + [v.id for v in t.int_vars]
        self.col = {n: i for i, n in enumerate(self.names)}

    def lit(self, V, l):
        col = V[:, self.col[l.atom]]
        return col == 1 if l.positive else col == 0

    def linear(self, V, terms):
        total = np.zeros(len(V), dtype=np.int64)
        for term in terms:
            total += term.coefficient * V[:, self.col[term.variable]]
        return total

    def constraint(self, V, c):
        if isinstance(c, Clause):
            out = np.zeros(len(V), dtype=bool)
            for l in c.literals:
                out |= self.lit(V, l)
            return out
        if isinstance(c, Equivalence):
            body = self._combine(V, c.connective, [self.lit(V, l) for l in c.body])
            return V[:, self.col[c.head]] == body
        if isinstance(c, ReifiedSum):
            return self.lit(V, c.head) == c.cmp.holds(self.linear(V, c.terms), c.rhs)
        if isinstance(c, ConditionalReifiedSum):
            total = np.zeros(len(V), dtype=np.int64)
            for g in c.terms:
                x = V[:, self.col[g.term.variable]]
                total += np.where(self.lit(V, g.guard), g.term.coefficient * x, 0)
            return self.lit(V, c.head) == c.cmp.holds(total, c.rhs)
        raise TypeError(f"unknown constraint {c!r}")

    @staticmethod
    def _combine(V, connective, vals):
        if connective is Connective.AND:
            out = np.ones(len(V), dtype=bool)
            for v in vals:
                out &= v
        else:
            out = np.zeros(len(V), dtype=bool)
            for v in vals:
                out |= v
        return out

    def _least(self, V, d, heads, hidx, interp):
        S = np.zeros((len(V), len(heads)), dtype=bool)
        for _ in range(len(heads) + 1):
            new = np.zeros_like(S)
            for r in d.rules:
                vals = []
                for l in r.body:
                    if l.atom in hidx:
                        k = hidx[l.atom]
                        vals.append(S[:, k] if l.positive else ~interp[:, k])
                    else:
                        vals.append(self.lit(V, l))
                new[:, hidx[r.head]] |= self._combine(V, r.connective, vals)
            if np.array_equal(new, S):
                break
            S = new
        return S

    def wfm(self, V, d):
        """``(true, possible)`` head matrices of the well-founded model."""
        heads = d.heads
        hidx = {h: k for k, h in enumerate(heads)}
        true = np.zeros((len(V), len(heads)), dtype=bool)
        while True:
            possible = self._least(V, d, heads, hidx, true)
            nxt = self._least(V, d, heads, hidx, possible)
            if np.array_equal(nxt, true):
                return true, possible
            true = nxt

    def accept(self, V, order, given):
        """Mask of rows of ``V`` that are models; fills computed heads in place."""
        ok = np.ones(len(V), dtype=bool)
        for d in order:
            true, possible = self.wfm(V, d)
            ok &= (true == possible).all(axis=1)
            cols = [self.col[h] for h in d.heads]
            if d.id in given:
                ok &= (V[:, cols] == true).all(axis=1)
            else:
                V[:, cols] = true
        for c in self.t.constraints:
            ok &= self.constraint(V, c)
        return ok

    def objective(self, V):
        obj = self.t.objective
        if obj is None:
            return np.zeros(len(V), dtype=np.int64)
        return self.linear(V, obj.terms) + obj.constant


def _definition_order(t: Theory):
    """Definitions in dependency order, or None if they depend cyclically."""
    owner = t.defined_atoms()
    by_id = {d.id: d for d in t.definitions}
    ts = graphlib.TopologicalSorter()
    for d in t.definitions:
        deps = {owner[l.atom] for r in d.rules for l in r.body if l.atom in owner}
        deps.discard(d.id)
        ts.add(d.id, *deps)
    try:
        return [by_id[i] for i in ts.static_order()]
    except graphlib.CycleError:
        return None


def is_model(t: Theory, a: dict) -> bool:
    """Whether the total assignment ``a`` (atoms incl. defined, int vars) is a model."""
    ev = _Evaluator(t)
    for v in t.int_vars:
        if not v.lower <= a[v.id] <= v.upper:
            return False
    V = np.array([[int(a[n]) for n in ev.names]], dtype=np.int64)
    given = {d.id for d in t.definitions}
    return bool(ev.accept(V, t.definitions, given)[0])


def enumerate_models(t: Theory, limit: int = GUARD_RAIL) -> OracleOutcome:
    ev = _Evaluator(t)
    order = _definition_order(t)
    defined = t.defined_atoms()
    if order is None:
        free = list(t.atoms)
        order, given = list(t.definitions), {d.id for d in t.definitions}
    else:
        free = [a for a in t.atoms if a not in defined]
        given = set()

    lows = [0] * len(free) + [v.lower for v in t.int_vars]
    radix = [2] * len(free) + [v.upper - v.lower + 1 for v in t.int_vars]
    cols = [ev.col[a] for a in free] + [ev.col[v.id] for v in t.int_vars]
    space = 1
    for r in radix:
        space *= max(r, 0)
        if space > limit:
            raise SpaceTooLarge(f"assignment space exceeds {limit}")

    found, objs = [], []
    for start in range(0, space, _BLOCK):
        idx = np.arange(start, min(space, start + _BLOCK), dtype=np.int64)
        V = np.zeros((len(idx), len(ev.names)), dtype=np.int64)
        rest = idx
        for col, r, lo in zip(cols, radix, lows):
            V[:, col] = rest % r + lo
            rest = rest // r
        ok = ev.accept(V, order, given)
        found.append(V[ok])
        objs.append(ev.objective(V[ok]))
    matrix = np.concatenate(found) if found else np.zeros((0, len(ev.names)), dtype=np.int64)
    values = np.concatenate(objs) if objs else np.zeros(0, dtype=np.int64)
    sat = len(matrix) > 0
    optimum = int(values.min()) if sat and t.objective is not None else None
    return OracleOutcome("sat" if sat else "unsat", ev.names, matrix, values, optimum, space)


def brute_force_optimum(t: Theory, limit: int = GUARD_RAIL) -> Optional[int]:
    """Minimum objective over all models (0 without objective); None if unsat."""
    out = enumerate_models(t, limit)
    if out.status == "unsat":
        return None
    return out.optimum if out.optimum is not None else 0
