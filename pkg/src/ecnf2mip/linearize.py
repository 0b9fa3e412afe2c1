"""Translation of a normalized ECNF theory into a MIP via the Big-M method.

Every logical construct is reduced to guarded inequalities
``guard => sum(a_i x_i) >= b`` (or ``<=``), each of which becomes one row whose
M is the exact box bound of the guarded sum.  Definitions are translated by
completion plus, for inductive definitions, level-mapping rows over
continuous level columns.
"""
from __future__ import annotations

import logging

import numpy as np

from .mip import (
    Column, ColumnKind, Implication, MipModel, Origin, Row, Sense,
    column_bound_of_sum, merge_terms,
)
from .model import (
    Clause, Comparator, ConditionalReifiedSum, Connective, Definition, Equivalence,
    Literal, MalformedTheory, ReifiedSum, Theory, is_normalized, validate_theory,
)

log = logging.getLogger(__name__)

LEVEL_EPSILON = 1


def bound_of_sum(terms, bounds, direction: str) -> int:
    """Exact box bound of ``sum(t.coefficient * t.variable)``.

    ``bounds`` is a Theory or a mapping from variable name to ``(lo, hi)``.
    """
    lookup = bounds.bounds if isinstance(bounds, Theory) else bounds.__getitem__
    total = 0
    for t in terms:
        lo, hi = lookup(t.variable)
        if (t.coefficient > 0) == (direction == "min"):
            total += t.coefficient * lo
        else:
            total += t.coefficient * hi
    return total


class Linearizer:
    """Builds a MipModel incrementally; one instance per translation."""

    def __init__(self, name="model", level_maps=True, integer_levels=False):
        self.model = MipModel(name=name)
        self.level_maps = level_maps
        self.integer_levels = integer_levels
        self.var_col = {}
        self._taken = set()
        self._source = ""

    # -- columns -----------------------------------------------------------

    def _unique(self, name):
        base, k = name, 1
        while name in self._taken:
            k += 1
            name = f"{base}_{k}"
        self._taken.add(name)
        return name

    def add_column(self, name, kind, lower, upper, origin) -> int:
        if kind is ColumnKind.BINARY:
            lower, upper = 0, 1
        self.model.columns.append(Column(self._unique(name), kind, lower, upper, origin))
        return self.model.n_cols - 1

    def add_variable(self, name, lower=0, upper=1, integer=False) -> int:
        if integer:
            j = self.add_column(name, ColumnKind.INTEGER, lower, upper, Origin("int", name))
        else:
            j = self.add_column(name, ColumnKind.BINARY, 0, 1, Origin("atom", name))
        self.var_col[name] = j
        return j

    def _aux_binary(self, name, kind, detail=()) -> Literal:
        j = self.add_column(name, ColumnKind.BINARY, 0, 1, Origin(kind, self._source, detail))
        name = self.model.columns[j].name
        self.var_col[name] = j
        return Literal(name)

    # -- rows --------------------------------------------------------------

    def add_row(self, terms, sense, rhs, tag="") -> int:
        self.model.rows.append(Row(merge_terms(terms), sense, rhs, (self._source, tag)))
        i = self.model.n_rows - 1
        self.model.provenance.setdefault(self._source, []).append(i)
        return i

    def literal_expr(self, l: Literal):
        """``l*`` as ``(terms, constant)``: ``v`` or ``1 - v``."""
        j = self.var_col[l.atom]
        return ([(j, 1)], 0) if l.positive else ([(j, -1)], 1)

    def sum_expr(self, lits):
        terms, const = [], 0
        for l in lits:
            t, c = self.literal_expr(l)
            terms += t
            const += c
        return terms, const

    def linear_expr(self, terms):
        return [(self.var_col[t.variable], t.coefficient) for t in terms], 0

    def big_m_implication(self, guard: Literal, expr, sense: Sense, rhs, tag="") -> int:
        """Emit the single row for ``guard => expr sense rhs``.

        M is the exact slack of the consequent over the column box, with the
        guard's own column (if it occurs in the sum) held at its false value.
        A non-positive M means the consequent always holds on the box, so the
        row is emitted without the guard term.
        """
        terms, const = expr
        terms = merge_terms(terms)
        rhs = rhs - const
        g = self.var_col[guard.atom]
        false_value = {g: 0 if guard.positive else 1}
        cols = self.model.columns
        if sense is Sense.GEQ:
            big_m = rhs - column_bound_of_sum(terms, cols, "min", false_value)
        else:
            big_m = column_bound_of_sum(terms, cols, "max", false_value) - rhs
        if big_m <= 0:
            return self.add_row(terms, sense, rhs, tag)
        row_terms = list(terms)
        row_rhs = rhs
        if sense is Sense.GEQ:
            # sum - M*g* >= rhs - M
            if guard.positive:
                row_terms.append((g, -big_m))
                row_rhs = rhs - big_m
            else:
                row_terms.append((g, big_m))
        else:
            # sum + M*g* <= rhs + M
            if guard.positive:
                row_terms.append((g, big_m))
                row_rhs = rhs + big_m
            else:
                row_terms.append((g, -big_m))
        i = self.add_row(row_terms, sense, row_rhs, tag)
        self.model.implications[i] = Implication(g, guard.positive, terms, sense, rhs, big_m)
        return i

    # -- constraint translations ------------------------------------------

    def linearize_clause(self, c: Clause) -> int:
        if not c.literals:
            self.model.infeasible = True
            log.info("empty clause in %s: model is trivially infeasible", self._source)
            return self.add_row([], Sense.GEQ, 1, "clause")
        terms, const = self.sum_expr(c.literals)
        return self.add_row(terms, Sense.GEQ, 1 - const, "clause")

    def linearize_equivalence(self, head: Literal, connective: Connective, body) -> list:
        """Rows for ``head <=> l_1 op ... op l_n`` (head may be a negative literal)."""
        if isinstance(head, str):
            head = Literal(head)
        body = list(body)
        if not body:
            # empty conjunction is true, empty disjunction false
            terms, const = self.literal_expr(head)
            if connective is Connective.AND:
                return [self.add_row(terms, Sense.GEQ, 1 - const, "equiv.true")]
            return [self.add_row(terms, Sense.LEQ, -const, "equiv.false")]
        expr = self.sum_expr(body)
        need = len(body) if connective is Connective.AND else 1
        return [
            self.big_m_implication(head, expr, Sense.GEQ, need, "equiv.pos"),
            self.big_m_implication(-head, expr, Sense.LEQ, need - 1, "equiv.neg"),
        ]

    def _reified(self, head: Literal, expr, cmp: Comparator, rhs: int) -> list:
        if cmp is Comparator.GT:
            cmp, rhs = Comparator.GEQ, rhs + 1
        elif cmp is Comparator.LT:
            cmp, rhs = Comparator.LEQ, rhs - 1
        if cmp is Comparator.GEQ:
            return [
                self.big_m_implication(head, expr, Sense.GEQ, rhs, "sum.ge"),
                self.big_m_implication(-head, expr, Sense.LEQ, rhs - 1, "sum.ge.neg"),
            ]
        if cmp is Comparator.LEQ:
            return [
                self.big_m_implication(head, expr, Sense.LEQ, rhs, "sum.le"),
                self.big_m_implication(-head, expr, Sense.GEQ, rhs + 1, "sum.le.neg"),
            ]
        if cmp is Comparator.NEQ:
            return self._reified(-head, expr, Comparator.EQ, rhs)
        terms = tuple(merge_terms(expr[0]))
        rhs_folded = rhs - expr[1]
        w1 = self._aux_binary(f"_w1_{self._source}", "w1", (terms, "G", rhs_folded))
        w2 = self._aux_binary(f"_w2_{self._source}", "w2", (terms, "L", rhs_folded))
        rows = self._reified(w1, expr, Comparator.GEQ, rhs)
        rows += self._reified(w2, expr, Comparator.LEQ, rhs)
        rows += self.linearize_equivalence(head, Connective.AND, [w1, w2])
        return rows

    def linearize_reified_sum(self, r: ReifiedSum) -> list:
        return self._reified(r.head, self.linear_expr(r.terms), r.cmp, r.rhs)

    def linearize_conditional_sum(self, c: ConditionalReifiedSum) -> list:
        rows, copies = [], []
        for k, gt in enumerate(c.terms, start=1):
            x = self.var_col[gt.term.variable]
            col = self.model.columns[x]
            g = self.var_col[gt.guard.atom]
            xc = self.add_column(
                f"_x{k}_{self._source}", ColumnKind.INTEGER,
                min(col.lower, 0), max(col.upper, 0),
                Origin("copy", self._source, (g, gt.guard.positive, x)),
            )
            diff = ([(xc, 1), (x, -1)], 0)
            alone = ([(xc, 1)], 0)
            rows += [
                self.big_m_implication(gt.guard, diff, Sense.GEQ, 0, "csum.copy.ge"),
                self.big_m_implication(gt.guard, diff, Sense.LEQ, 0, "csum.copy.le"),
                self.big_m_implication(-gt.guard, alone, Sense.GEQ, 0, "csum.zero.ge"),
                self.big_m_implication(-gt.guard, alone, Sense.LEQ, 0, "csum.zero.le"),
            ]
            copies.append((xc, gt.term.coefficient))
        if not copies:
            # empty sum is the constant 0; the head is fixed by the comparison
            terms, const = self.literal_expr(c.head)
            value = 1 if c.cmp.holds(0, c.rhs) else 0
            return rows + [self.add_row(terms, Sense.EQ, value - const, "csum.empty")]
        return rows + self._reified(c.head, (copies, 0), c.cmp, c.rhs)

    def translate_definition(self, d: Definition) -> list:
        heads = d.heads
        head_set = set(heads)
        rows = []
        for r in d.rules:
            self._source = f"{d.id}:{r.head}"
            rows += self.linearize_equivalence(Literal(r.head), r.connective, r.body)
        inductive = any(l.positive and l.atom in head_set for r in d.rules for l in r.body)
        if not (self.level_maps and inductive):
            return rows

        H = len(heads)
        kind = ColumnKind.INTEGER if self.integer_levels else ColumnKind.CONTINUOUS
        level = {}
        for h in heads:
            self._source = f"{d.id}:{h}"
            level[h] = self.add_column(f"_z_{h}", kind, 0, H, Origin("level", self._source, (h, d.id)))

        def ordered(guard, head, lower):
            expr = ([(level[head], 1), (level[lower], -1)], 0)
            return self.big_m_implication(guard, expr, Sense.GEQ, LEVEL_EPSILON, "level")

        for r in d.rules:
            self._source = f"{d.id}:{r.head}"
            v = Literal(r.head)
            if r.connective is Connective.AND or len(r.body) <= 1:
                for l in r.body:
                    if l.positive and l.atom in head_set:
                        rows.append(ordered(v, r.head, l.atom))
                continue
            witnesses = []
            for k, l in enumerate(r.body, start=1):
                same = l.positive and l.atom in head_set
                w = self._aux_binary(f"_wd{k}_{r.head}", "witness", (r.head, l.atom, l.positive, same))
                witnesses.append(w)
                rows.append(self.linearize_clause(Clause((-w, l))))
                if same:
                    rows.append(ordered(w, r.head, l.atom))
            rows.append(self.big_m_implication(v, self.sum_expr(witnesses), Sense.GEQ, 1, "witness"))
        return rows


def translate_theory(t: Theory, level_maps: bool = True, integer_levels: bool = False) -> MipModel:
    """Translate a normalized, valid theory into a minimization MIP."""
    if not is_normalized(t):
        raise MalformedTheory("theory is not normalized (a head has several rules)")
    report = validate_theory(t)
    if not report.ok:
        raise MalformedTheory(str(report))
    lin = Linearizer(t.name, level_maps=level_maps, integer_levels=integer_levels)
    for a in t.atoms:
        lin.add_variable(a)
    for v in t.int_vars:
        lin.add_variable(v.id, v.lower, v.upper, integer=True)
    for i, c in enumerate(t.constraints, start=1):
        lin._source = f"c{i}"
        if isinstance(c, Clause):
            lin.linearize_clause(c)
        elif isinstance(c, Equivalence):
            lin.linearize_equivalence(Literal(c.head), c.connective, c.body)
        elif isinstance(c, ReifiedSum):
            lin.linearize_reified_sum(c)
        elif isinstance(c, ConditionalReifiedSum):
            lin.linearize_conditional_sum(c)
        else:
            raise MalformedTheory(f"unsupported constraint {c!r}")
    for d in t.definitions:
        lin.translate_definition(d)
    if t.objective is not None:
        obj = merge_terms(lin.linear_expr(t.objective.terms)[0])
        lin.model.objective = dict(obj)
        lin.model.objective_constant = t.objective.constant
    log.debug("translated %s: %d columns, %d rows", t.name, lin.model.n_cols, lin.model.n_rows)
    return lin.model


# -- witness construction ----------------------------------------------------

def derivation_stages(t: Theory, values: dict) -> dict:
    """Stage at which each true head is first derived (1-based).

    Bodies are read against ``values`` except for positive literals over
    heads of the same definition, which must have been derived at an
    earlier stage.  Heads never derived are absent.
    """
    stages = {}
    for d in t.definitions:
        head_set = set(d.heads)
        derived = {}
        k = 0
        while True:
            k += 1
            new = []
            for r in d.rules:
                if r.head in derived:
                    continue
                truth = []
                for l in r.body:
                    if l.positive and l.atom in head_set:
                        truth.append(l.atom in derived)
                    else:
                        truth.append(bool(values[l.atom]) == l.positive)
                ok = all(truth) if r.connective is Connective.AND else any(truth)
                if ok:
                    new.append(r.head)
            if not new:
                break
            for h in new:
                derived[h] = k
        stages.update(derived)
    return stages


def extend_assignment(t: Theory, m: MipModel, values: dict) -> np.ndarray:
    """Extend a model of ``t`` (atoms and int vars by name) to a MIP point.

    Auxiliary columns are filled in by their defining semantics: split
    binaries by their inequality, guarded copies by their guard, levels by
    derivation stage and disjunct witnesses by the disjunct that derived the
    head.
    """
    x = np.zeros(m.n_cols)
    stages = derivation_stages(t, values)

    def lit_true(atom, positive):
        return bool(values[atom]) == positive

    for j, col in enumerate(m.columns):
        o = col.origin
        if o.kind in ("atom", "int"):
            x[j] = values[o.source]
        elif o.kind in ("w1", "w2"):
            terms, sense, rhs = o.detail
            act = sum(coef * x[k] for k, coef in terms)
            x[j] = 1 if (act >= rhs if sense == "G" else act <= rhs) else 0
        elif o.kind == "copy":
            g, positive, src = o.detail
            guard_true = (x[g] == 1) == positive
            x[j] = x[src] if guard_true else 0
        elif o.kind == "level":
            x[j] = stages.get(o.detail[0], 0)
        elif o.kind == "witness":
            head, atom, positive, same = o.detail
            ok = lit_true(atom, positive)
            if ok and same:
                ok = head in stages and atom in stages and stages[atom] < stages[head]
            x[j] = 1 if ok else 0
        else:
            raise ValueError(f"unknown column origin {o!r}")
    return x
