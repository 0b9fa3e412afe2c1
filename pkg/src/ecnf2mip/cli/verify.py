"""Oracle-versus-translation checks behind the ``verify`` command."""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from ..linearize import extend_assignment, translate_theory
from ..mip import MipModel
from ..model import Theory, normalize_theory
from ..oracle import GUARD_RAIL, enumerate_models, is_model
from ..solver import branch_and_bound, check_feasible


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""

    def __str__(self):
        return f"{'PASS' if self.passed else 'FAIL'} {self.name}" + (f": {self.detail}" if self.detail else "")


def _projection_space(t: Theory):
    names = list(t.atoms) + [v.id for v in t.int_vars]
    ranges = [range(2)] * len(t.atoms) + [range(v.lower, v.upper + 1) for v in t.int_vars]
    return names, ranges


def _candidates(t: Theory, models: set, cap: int, rng: random.Random):
    """Projection points to test: all of them when few, otherwise every
    one-step neighbour of a model plus random points, ``cap`` at most."""
    names, ranges = _projection_space(t)
    size = 1
    for r in ranges:
        size *= len(r)
    if size <= cap:
        return list(itertools.product(*ranges))
    seen = set()
    out = []
    for model in sorted(models):
        for i, r in enumerate(ranges):
            for delta in (-1, 1):
                v = model[i] + delta if len(r) > 2 else 1 - model[i]
                if v in r:
                    p = model[:i] + (v,) + model[i + 1:]
                    if p not in seen:
                        seen.add(p)
                        out.append(p)
    rng.shuffle(out)
    out = out[: cap // 2]
    while len(out) < cap:
        p = tuple(rng.choice(r) for r in ranges)
        if p not in seen:
            seen.add(p)
            out.append(p)
        elif len(seen) >= size:
            break
    return out


def verify_theory(t: Theory, level_maps: bool = True, integer_levels: bool = False,
                  max_nodes: int = 10**6, max_seconds: float = 60.0, seed: int = 0,
                  sample: int = 256, limit: int = GUARD_RAIL,
                  mutate: Optional[Callable[[MipModel], MipModel]] = None) -> list:
    """Optimum equality, soundness and completeness of the translation of ``t``.

    ``mutate`` rewrites the translated model before checking; tests use it to
    plant a broken translation.  Raises SpaceTooLarge past ``limit``.
    """
    rng = random.Random(seed)
    n = normalize_theory(t)
    outcome = enumerate_models(n, limit)
    m = translate_theory(n, level_maps=level_maps, integer_levels=integer_levels)
    if mutate is not None:
        m = mutate(m)
    col = {c.name: j for j, c in enumerate(m.columns)}
    names, _ = _projection_space(t)
    models = outcome.model_set(names) if outcome.status == "sat" else set()
    checks = []

    # optimum and status
    res = branch_and_bound(m, max_nodes=max_nodes, max_seconds=max_seconds)
    expected = None
    if outcome.status == "sat":
        expected = outcome.optimum if outcome.optimum is not None else 0
    if res.status == "optimal":
        got = int(round(res.objective))
    elif res.status == "infeasible":
        got = None
    else:
        got = res.status
    checks.append(CheckResult("optimum", got == expected, f"oracle {expected}, mip {got}"))

    # soundness: every feasible projection is a model
    bad = []
    if res.x is not None:
        point = tuple(int(round(res.x[col[nm]])) for nm in names)
        if point not in models:
            bad.append(point)
    cands = [p for p in _candidates(t, models, sample, rng) if p not in models]
    for p in cands:
        if bad:
            break
        fix = {col[nm]: (v, v) for nm, v in zip(names, p)}
        r = branch_and_bound(m, max_nodes=max_nodes, max_seconds=max_seconds,
                             extra_bounds=fix, feasibility=True)
        if r.status != "infeasible":
            bad.append(p)
    detail = f"{len(cands)} non-models checked"
    if bad:
        detail = "feasible non-model " + ", ".join(f"{k}={v}" for k, v in zip(names, bad[0]))
    checks.append(CheckResult("soundness", not bad, detail))

    # completeness: every model extends to a feasible MIP point
    rows = outcome.matrix
    if len(rows) > sample:
        rows = rows[np.sort(np.array(rng.sample(range(len(rows)), sample)))]
    missing = None
    for row in rows:
        values = dict(zip(outcome.names, (int(v) for v in row)))
        x = extend_assignment(n, m, values)
        if check_feasible(m, x):
            missing = values
            break
    detail = f"{len(rows)} models extended"
    if missing is not None:
        detail = "model without extension " + ", ".join(f"{k}={missing[k]}" for k in names)
    checks.append(CheckResult("completeness", missing is None, detail))
    return checks


def point_is_model(t: Theory, m: MipModel, x) -> bool:
    """Whether the source projection of MIP point ``x`` is a model of ``t``."""
    n = normalize_theory(t)
    col = {c.name: j for j, c in enumerate(m.columns)}
    a = {nm: int(round(x[col[nm]])) for nm in list(n.atoms) + [v.id for v in n.int_vars]}
    return is_model(n, a)
