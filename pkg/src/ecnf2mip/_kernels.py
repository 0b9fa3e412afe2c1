"""Dense-tableau bounded-variable primal simplex.

Written in the numpy subset numba understands, so the same source runs
either jitted or as ordinary vectorized numpy (see ``_accel``).

Problem form: ``min c.x`` s.t. ``A x (<=|=|>=) b``, ``lb <= x <= ub`` with
finite ``lb``.  ``>=`` rows are negated to ``<=``; each row gets a slack in
``[0, inf)`` (``[0, 0]`` for equalities) and an artificial in ``[0, inf)``.
Phase one minimizes the artificials, phase two the real objective.  Pricing
is Dantzig's rule; after a run of degenerate steps the choice follows
Bland's rule until progress resumes, which rules out cycling.
"""
import numpy as np

from ._accel import USE_NUMBA, njit

OPTIMAL = 0
INFEASIBLE = 1
UNBOUNDED = 2
BREAKDOWN = 3
ITERATION_LIMIT = 4

_TIE = 1e-12
# consecutive degenerate pivots tolerated before Bland's rule takes over
DEGENERATE_RUN = 50


# The pivot is the hot loop.  Jitted, it walks the rows in place and skips
# those with a zero in the pivot column; interpreted, it does the same with
# one fancy-indexed outer product.  Only the first ``w`` columns are kept up
# to date (phase two never looks at the artificials again).
if USE_NUMBA:
    @njit
    def _pivot(T, d, r, q, w):
        piv = T[r, q]
        for j in range(w):
            T[r, j] /= piv
        for i in range(T.shape[0]):
            f = T[i, q]
            if i != r and f != 0.0:
                for j in range(w):
                    T[i, j] -= f * T[r, j]
        f = d[q]
        if f != 0.0:
            for j in range(w):
                d[j] -= f * T[r, j]
else:
    def _pivot(T, d, r, q, w):
        T[r, :w] /= T[r, q]
        prow = T[r, :w]
        rows = np.flatnonzero(T[:, q])
        rows = rows[rows != r]
        T[rows, :w] -= np.outer(T[rows, q], prow)
        d[:w] -= d[q] * prow


@njit
def _iterate(T, x, basis, isbasic, lo, hi, d, cost_tol, pivot_tol, max_iter, iters, w):
    m = T.shape[0]
    stalled = 0
    while True:
        bland = stalled >= DEGENERATE_RUN
        if iters >= max_iter:
            return ITERATION_LIMIT, iters
        at_lo = (x - lo) <= (hi - x)
        movable = (~isbasic) & ((hi - lo) > _TIE)
        eligible = movable & ((at_lo & (d < -cost_tol)) | ((~at_lo) & (d > cost_tol)))
        if not eligible.any():
            return OPTIMAL, iters
        if bland:
            q = np.argmax(eligible)
        else:
            q = np.argmax(np.where(eligible, np.abs(d), -1.0))
        direction = 1.0 if d[q] < 0 else -1.0

        a = direction * T[:, q]
        xb = x[basis]
        lb_b = lo[basis]
        ub_b = hi[basis]
        safe = np.where(np.abs(a) > pivot_tol, a, 1.0)
        t = np.where(a > pivot_tol, (xb - lb_b) / safe,
                     np.where(a < -pivot_tol, (ub_b - xb) / (-safe), np.inf))
        t = np.maximum(t, 0.0)
        tmin = t.min() if m > 0 else np.inf
        flip = hi[q] - lo[q]

        if tmin == np.inf and flip == np.inf:
            return UNBOUNDED, iters
        if flip <= tmin:
            # bound flip, basis unchanged
            x[q] = hi[q] if direction > 0 else lo[q]
            x[basis] = xb - direction * flip * T[:, q]
            iters += 1
            stalled = 0
            continue

        ties = t <= tmin + _TIE
        if bland:
            r = np.argmin(np.where(ties, basis, basis.max() + 1))
        else:
            r = np.argmax(np.where(ties, np.abs(a), -1.0))
        if not np.isfinite(T[r, q]) or abs(T[r, q]) < 1e-10:
            return BREAKDOWN, iters

        x[q] = x[q] + direction * tmin
        x[basis] = xb - direction * tmin * T[:, q]
        leaving = basis[r]
        x[leaving] = lo[leaving] if a[r] > 0 else hi[leaving]
        _pivot(T, d, r, q, w)
        isbasic[leaving] = False
        isbasic[q] = True
        basis[r] = q
        iters += 1
        stalled = stalled + 1 if tmin <= _TIE else 0


@njit
def _refresh_basics(T, M, rhs, art_sign, x, basis, isbasic, n, m):
    """Recompute basic values from the nonbasic ones to shed drift."""
    xn = np.where(isbasic, 0.0, x)
    resid = rhs - (M @ xn[:n] + xn[n:n + m] + art_sign * xn[n + m:])
    x[basis] = np.ascontiguousarray(T[:, n:n + m]) @ resid


@njit
def simplex_kernel(A, b, sense, c, lb, ub, feas_tol, cost_tol, pivot_tol, max_iter, hint):
    """Solve the LP; returns ``(status, x, objective, iterations)``."""
    m, n = A.shape
    N = n + 2 * m
    M = A.copy()
    rhs = b.copy()
    for i in range(m):
        if sense[i] > 0:
            M[i] = -M[i]
            rhs[i] = -rhs[i]

    lo = np.zeros(N)
    hi = np.zeros(N)
    lo[:n] = lb
    hi[:n] = ub
    x = np.zeros(N)
    # start each column at the bound nearer the hint (the parent's point in B&B)
    x[:n] = np.where(np.isfinite(ub) & (hint - lb > ub - hint), ub, lb)
    resid = rhs - M @ x[:n]

    T = np.zeros((m, N))
    T[:, :n] = M
    basis = np.zeros(m, dtype=np.int64)
    isbasic = np.zeros(N, dtype=np.bool_)
    art_sign = np.ones(m)
    cost1 = np.zeros(N)
    need_phase1 = False
    for i in range(m):
        T[i, n + i] = 1.0
        hi[n + i] = np.inf if sense[i] != 0 else 0.0
        if sense[i] != 0 and resid[i] >= 0:
            basis[i] = n + i
            x[n + i] = resid[i]
            hi[n + m + i] = 0.0
            T[i, n + m + i] = 1.0
        else:
            s = 1.0 if resid[i] >= 0 else -1.0
            art_sign[i] = s
            T[i, n + m + i] = s
            T[i] *= s
            basis[i] = n + m + i
            x[n + m + i] = abs(resid[i])
            hi[n + m + i] = np.inf
            cost1[n + m + i] = 1.0
            need_phase1 = True
        isbasic[basis[i]] = True

    iters = 0
    if need_phase1:
        d = cost1 - cost1[basis] @ T
        status, iters = _iterate(T, x, basis, isbasic, lo, hi, d, cost_tol, pivot_tol, max_iter, iters, N)
        if status != OPTIMAL:
            return status, x[:n].copy(), np.nan, iters
        _refresh_basics(T, M, rhs, art_sign, x, basis, isbasic, n, m)
        if m > 0 and x[n + m:].max() > feas_tol:
            return INFEASIBLE, x[:n].copy(), np.nan, iters
        hi[n + m:] = 0.0
        for i in range(m):
            if not isbasic[n + m + i]:
                x[n + m + i] = 0.0

    cost2 = np.zeros(N)
    cost2[:n] = c
    d = cost2 - cost2[basis] @ T
    status, iters = _iterate(T, x, basis, isbasic, lo, hi, d, cost_tol, pivot_tol, max_iter, iters, n + m)
    if status != OPTIMAL:
        return status, x[:n].copy(), np.nan, iters
    _refresh_basics(T, M, rhs, art_sign, x, basis, isbasic, n, m)
    xs = np.minimum(np.maximum(x[:n], lb), ub)
    return OPTIMAL, xs, c @ xs, iters


