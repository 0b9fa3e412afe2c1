"""Independent brute-force checks shared by the test modules.

Nothing here goes through branch-and-bound: integral points are enumerated
over the box of the discrete columns, and continuous columns (levels) are
settled by one LP per point.
"""
import itertools
import math
import random

import numpy as np

from ecnf2mip.mip import Column, ColumnKind, MipModel, Row, Sense
from ecnf2mip.solver import solve_lp_arrays


def _row_ok(row, x, tol=1e-9):
    return row.sense.holds(row.activity(x), row.rhs, tol)


def integral_points(m: MipModel, limit=200_000):
    """All feasible points of ``m`` as tuples over the discrete columns."""
    disc = [j for j, c in enumerate(m.columns) if c.kind.discrete]
    cont = [j for j, c in enumerate(m.columns) if not c.kind.discrete]
    ranges = [range(int(math.ceil(m.columns[j].lower)), int(math.floor(m.columns[j].upper)) + 1) for j in disc]
    size = math.prod(len(r) for r in ranges)
    assert size <= limit, f"box too large for enumeration: {size}"
    A, b, sense, c, lb, ub, _ = m.to_arrays()
    out = []
    for vals in itertools.product(*ranges):
        x = np.zeros(m.n_cols)
        x[disc] = vals
        if not cont:
            if all(_row_ok(r, x) for r in m.rows):
                out.append(tuple(vals))
            continue
        lb2, ub2 = lb.copy(), ub.copy()
        lb2[disc] = vals
        ub2[disc] = vals
        if solve_lp_arrays(A, b, sense, np.zeros_like(c), lb2, ub2).status == "optimal":
            out.append(tuple(vals))
    return disc, out


def projection(m: MipModel, names):
    """Set of value tuples of the named columns over all feasible points."""
    disc, pts = integral_points(m)
    pos = {j: k for k, j in enumerate(disc)}
    idx = [pos[m.names().index(n)] for n in names]
    return {tuple(p[k] for k in idx) for p in pts}


def mip_optimum(m: MipModel):
    """Brute-force optimum of an all-discrete model, or None if infeasible."""
    assert all(c.kind.discrete for c in m.columns)
    disc, pts = integral_points(m)
    if not pts:
        return None
    best = math.inf
    for p in pts:
        x = np.array(p, dtype=float)
        best = min(best, m.objective_value(x))
    return best


def random_mip(seed: int) -> MipModel:
    """Small pure-integer model: up to 6 columns of width <= 6."""
    rng = random.Random(seed)
    m = MipModel(name=f"rand{seed}")
    for j in range(rng.randint(1, 6)):
        lo = rng.randint(-3, 3)
        hi = lo + rng.randint(0, 6)
        kind = ColumnKind.BINARY if (lo, hi) == (0, 1) else ColumnKind.INTEGER
        m.columns.append(Column(f"c{j}", kind, lo, hi))
    n = len(m.columns)
    for _ in range(rng.randint(0, 5)):
        cols = sorted(rng.sample(range(n), rng.randint(1, n)))
        terms = tuple((j, rng.choice((-4, -3, -2, -1, 1, 2, 3, 4)) * 0.5 ** rng.randint(0, 1)) for j in cols)
        sense = rng.choice(list(Sense))
        rhs = rng.randint(-6, 6) + rng.choice((0, 0, 0.5))
        m.rows.append(Row(terms, sense, rhs))
    m.objective = {j: rng.randint(-5, 5) for j in range(n) if rng.random() < 0.8}
    m.objective_constant = rng.randint(-3, 3)
    return m


def guarded_row_report(m: MipModel):
    """``(n_rows, vacuity_failures, minimality_failures)`` over guarded rows.

    Each guarded row is evaluated at every vertex of the box of its other
    columns with the guard column at its false value.  Vacuity: the row holds
    everywhere.  Minimality: tightening the guard-false row by one (which is
    what M-1 does) breaks it at some vertex, whenever M >= 1.
    """
    vac, mini = [], []
    for i, imp in m.implications.items():
        row = m.rows[i]
        g = imp.guard
        false_val = 0 if imp.positive else 1
        others = [j for j, _ in row.terms if j != g]
        boxes = [(m.columns[j].lower, m.columns[j].upper) for j in others]
        acts = []
        for corner in itertools.product(*boxes):
            x = np.zeros(m.n_cols)
            x[g] = false_val
            x[others] = corner
            acts.append(row.activity(x))
        if row.sense is Sense.GEQ:
            slack = min(acts) - row.rhs
        else:
            slack = row.rhs - max(acts)
        if slack < -1e-9:
            vac.append(i)
        if imp.big_m >= 1 and not slack < 1 - 1e-9:
            mini.append(i)
    return len(m.implications), vac, mini
