"""LP relaxations and best-bound branch-and-bound over a MipModel."""
from __future__ import annotations

import heapq
import logging
import math
import time
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import _kernels
from .mip import MipModel

log = logging.getLogger(__name__)

FEAS_TOL = 1e-7
COST_TOL = 1e-7
PIVOT_TOL = 1e-10
INT_TOL = 1e-6
_PRUNE_TOL = 1e-9


class NumericBreakdown(RuntimeError):
    pass


@dataclass
class LpResult:
    status: str  # optimal | infeasible | unbounded
    x: Optional[np.ndarray] = None
    objective: Optional[float] = None
    iterations: int = 0


@dataclass
class SolveResult:
    status: str  # optimal | infeasible | unbounded | limit
    x: Optional[np.ndarray] = None
    objective: Optional[float] = None
    nodes: int = 0
    lp_iterations: int = 0
    root_bound: Optional[float] = None
    names: list = field(default_factory=list)

    def values(self) -> dict:
        if self.x is None:
            return {}
        return dict(zip(self.names, self.x.tolist()))


def solve_lp_arrays(A, b, sense, c, lb, ub, hint=None) -> LpResult:
    if np.any(lb > ub):
        return LpResult("infeasible")
    if not np.all(np.isfinite(lb)):
        raise ValueError("column lower bounds must be finite")
    m, n = A.shape
    max_iter = 50 * (m + n) + 1000
    hint = np.asarray(lb if hint is None else hint, dtype=np.float64)
    status, x, obj, iters = _kernels.simplex_kernel(
        np.ascontiguousarray(A, dtype=np.float64), np.asarray(b, dtype=np.float64),
        np.asarray(sense, dtype=np.int64), np.asarray(c, dtype=np.float64),
        np.asarray(lb, dtype=np.float64), np.asarray(ub, dtype=np.float64),
        FEAS_TOL, COST_TOL, PIVOT_TOL, max_iter, hint,
    )
    if status == _kernels.OPTIMAL:
        return LpResult("optimal", x, float(obj), iters)
    if status == _kernels.INFEASIBLE:
        return LpResult("infeasible", None, None, iters)
    if status == _kernels.UNBOUNDED:
        return LpResult("unbounded", None, None, iters)
    what = "no usable pivot" if status == _kernels.BREAKDOWN else "iteration limit"
    raise NumericBreakdown(f"simplex failed after {iters} iterations: {what}")


def simplex_solve(model: MipModel, extra_bounds: Optional[dict] = None) -> LpResult:
    """LP relaxation of ``model``; ``extra_bounds`` maps column -> (lo, hi)."""
    A, b, sense, c, lb, ub, _ = model.to_arrays()
    for j, (lo, hi) in (extra_bounds or {}).items():
        lb[j] = max(lb[j], lo)
        ub[j] = min(ub[j], hi)
    return solve_lp_arrays(A, b, sense, c, lb, ub)


def _branch_column(x, discrete) -> int:
    frac = x - np.floor(x)
    dist = np.minimum(frac, 1.0 - frac)
    fractional = discrete & (dist > INT_TOL)
    if not fractional.any():
        return -1
    score = np.where(fractional, np.abs(frac - 0.5), np.inf)
    return int(np.argmin(score))


def branch_and_bound(model: MipModel, max_nodes: int = 10**6, max_seconds: float = 60.0,
                     audit: Optional[list] = None, extra_bounds: Optional[dict] = None,
                     feasibility: bool = False) -> SolveResult:
    """Best-bound branch-and-bound, branching on the most fractional column.

    Nodes with equal bounds are taken deepest first, so a search without an
    objective dives instead of sweeping the tree level by level.

    ``audit`` (if given) receives ``(event, bound, incumbent)`` tuples for every
    pruned or fathomed node.  ``extra_bounds`` tightens the root box;
    ``feasibility`` drops the objective so the first integral point ends the search.
    """
    names = model.names()
    if model.infeasible:
        return SolveResult("infeasible", names=names)
    A, b, sense, c, lb0, ub0, discrete = model.to_arrays()
    for j, (lo, hi) in (extra_bounds or {}).items():
        lb0[j] = max(lb0[j], lo)
        ub0[j] = min(ub0[j], hi)
    if feasibility:
        c = np.zeros_like(c)
    # integer columns never take fractional bounds
    lb0 = np.where(discrete, np.ceil(lb0 - INT_TOL), lb0)
    ub0 = np.where(discrete, np.floor(ub0 + INT_TOL), ub0)
    start = time.monotonic()
    const = 0.0 if feasibility else model.objective_constant

    nodes = 0
    lp_iters = 0

    def solve(lb, ub, hint=None):
        nonlocal nodes, lp_iters
        nodes += 1
        res = solve_lp_arrays(A, b, sense, c, lb, ub, hint)
        lp_iters += res.iterations
        return res

    def note(event, bound, inc):
        if audit is not None:
            audit.append((event, bound, inc))

    def finish(status, best_x, best):
        obj = None if best_x is None else best + const
        return SolveResult(status, best_x, obj, nodes, lp_iters, root_bound, names)

    root = solve(lb0, ub0)
    root_bound = None if root.objective is None else root.objective + const
    if root.status != "optimal":
        return finish(root.status, None, math.inf)

    best, best_x = math.inf, None
    heap = []
    seq = 0

    def consider(res, lb, ub, depth):
        nonlocal best, best_x, seq
        if res.status == "infeasible":
            return
        if res.objective >= best - _PRUNE_TOL:
            note("prune", res.objective, best)
            return
        j = _branch_column(res.x, discrete)
        if j < 0:
            x = np.where(discrete, np.round(res.x), res.x) + 0.0
            best, best_x = float(c @ x), x
            note("incumbent", res.objective, best)
            return
        heapq.heappush(heap, (res.objective, -depth, seq, j, lb, ub, res.x))
        seq += 1

    consider(root, lb0, ub0, 0)
    while heap:
        bound, negdepth, _, j, lb, ub, px = heapq.heappop(heap)
        value = px[j]
        if bound >= best - _PRUNE_TOL:
            note("prune", bound, best)
            continue
        for down in (True, False):
            if nodes >= max_nodes or time.monotonic() - start > max_seconds:
                log.info("branch-and-bound stopped at %d nodes", nodes)
                return finish("limit", best_x, best)
            clb, cub = lb.copy(), ub.copy()
            if down:
                cub[j] = math.floor(value)
            else:
                clb[j] = math.ceil(value)
            res = solve(clb, cub, px)
            if res.status == "unbounded":
                return finish("unbounded", None, math.inf)
            consider(res, clb, cub, 1 - negdepth)
    if best_x is None:
        return finish("infeasible", None, math.inf)
    return finish("optimal", best_x, best)


@dataclass(frozen=True)
class FeasibilityViolation:
    kind: str  # row | bound | integrality
    index: int
    magnitude: float


def check_feasible(model: MipModel, x, feas_tol: float = 1e-6, int_tol: float = INT_TOL) -> list:
    """Every row, bound and integrality violation of point ``x``."""
    out = []
    for i, row in enumerate(model.rows):
        v = row.sense.violation(row.activity(x), row.rhs)
        if v > feas_tol:
            out.append(FeasibilityViolation("row", i, v))
    for j, col in enumerate(model.columns):
        v = max(col.lower - x[j], x[j] - col.upper, 0.0)
        if v > feas_tol:
            out.append(FeasibilityViolation("bound", j, v))
        if col.kind.discrete:
            v = abs(x[j] - round(x[j]))
            if v > int_tol:
                out.append(FeasibilityViolation("integrality", j, v))
    return out
