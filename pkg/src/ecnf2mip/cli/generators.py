"""Instance generators for the ``gen`` command.

Each family is a deterministic function of ``(size, seed)``.  The seed also
shuffles declaration and constraint order, which leaves the models unchanged
but moves the solver along a different path.
"""
from __future__ import annotations

import random
import string

from ..model import (
    Clause, Comparator, ConditionalReifiedSum, Connective, Definition, Equivalence,
    GuardedTerm, IntVar, LinearTerm, Literal, Objective, ReifiedSum, Rule, Theory,
)

LIMITS = {
    "random": (1, 10),
    "tsp": (2, 6),
    "nqueens-logic": (1, 8),
    "nqueens-cp": (1, 8),
    "knapsack": (1, 12),
}

# the hand-checked 3-city instance; self-loops cost nothing
TSP3_DISTANCES = {
    ("a", "b"): 5, ("b", "c"): 1, ("c", "a"): 5,
    ("a", "c"): 5, ("c", "b"): 1, ("b", "a"): 5,
}


class SizeError(ValueError):
    pass


def _check(family, size):
    lo, hi = LIMITS[family]
    if not lo <= size <= hi:
        raise SizeError(f"{family} size must lie in [{lo}, {hi}], got {size}")


def generate(family: str, size: int, seed: int = 0) -> Theory:
    if family not in LIMITS:
        raise SizeError(f"unknown family {family!r}")
    _check(family, size)
    return _FAMILIES[family](size, seed)


# -- random ----------------------------------------------------------------

def random_theory(size: int, seed: int = 0) -> Theory:
    """Up to ``size`` atoms, 3 int vars of width <= 6, 12 constraints and a
    few stratified definitions (no negative same-definition body literals)."""
    rng = random.Random(seed)
    atoms = [f"p{i}" for i in range(1, size + 1)]
    int_vars = []
    for i in range(rng.randint(0, 3)):
        lo = rng.randint(-3, 3)
        int_vars.append(IntVar(f"x{i + 1}", lo, lo + rng.randint(0, 6)))
    ints = [v.id for v in int_vars]

    # definitions claim a suffix of the atoms; later ones may use earlier heads
    definitions = []
    pool = list(atoms)
    rng.shuffle(pool)
    n_defined = rng.randint(0, min(len(pool) - 1, 5)) if len(pool) > 1 else 0
    defined, below = pool[:n_defined], []
    k = 0
    while k < len(defined):
        take = rng.randint(1, min(3, len(defined) - k))
        heads = defined[k:k + take]
        k += take
        opens = [a for a in atoms if a not in defined] + below
        rules = []
        for h in heads:
            for _ in range(rng.choice((1, 1, 2))):
                body = []
                for _ in range(rng.randint(0, 3)):
                    if heads and rng.random() < 0.4:
                        body.append(Literal(rng.choice(heads)))
                    elif opens:
                        body.append(Literal(rng.choice(opens), rng.random() < 0.6))
                conn = rng.choice((Connective.AND, Connective.OR)) if len(body) > 1 else Connective.AND
                if not body and rng.random() < 0.5:
                    conn = Connective.OR
                rules.append(Rule(h, conn, body))
        definitions.append(Definition(f"d{len(definitions) + 1}", rules))
        below += heads

    def any_lit():
        return Literal(rng.choice(atoms), rng.random() < 0.6)

    def terms(n):
        out = []
        for _ in range(n):
            var = rng.choice(ints + atoms) if ints else rng.choice(atoms)
            out.append(LinearTerm(rng.choice((-3, -2, -1, 1, 1, 2, 3)), var))
        return out

    opens = [a for a in atoms if a not in defined]
    constraints = []
    for _ in range(rng.randint(1, 12)):
        kind = rng.choice(("clause", "clause", "equiv", "sum", "csum"))
        if kind == "equiv" and opens:
            head = rng.choice(opens)
            body = [any_lit() for _ in range(rng.randint(1, 3))]
            constraints.append(Equivalence(head, rng.choice(list(Connective)), body))
        elif kind == "sum":
            ts = terms(rng.randint(1, 3))
            constraints.append(ReifiedSum(any_lit(), ts, rng.choice(list(Comparator)), rng.randint(-3, 5)))
        elif kind == "csum":
            ts = [GuardedTerm(any_lit(), t) for t in terms(rng.randint(0, 3))]
            constraints.append(ConditionalReifiedSum(any_lit(), ts, rng.choice(list(Comparator)), rng.randint(-3, 5)))
        else:
            constraints.append(Clause([any_lit() for _ in range(rng.randint(1, 3))]))

    objective = None
    if rng.random() < 0.8:
        objective = Objective(terms(rng.randint(1, 4)), rng.randint(-2, 2))
    return Theory(f"random_{size}_{seed}", int_vars, atoms, constraints, definitions, objective)


# -- tsp -------------------------------------------------------------------

def tsp(size: int, seed: int = 0) -> Theory:
    """Grounded tour theory: ``next`` is a bijection and every city is
    reachable from the first one.  The first city may loop to itself, so a
    tour exists for every size.  Size 3 with seed 0 is the fixed instance."""
    cities = list(string.ascii_lowercase[:size])
    rng = random.Random(seed)
    if size == 3 and seed == 0:
        dist = dict(TSP3_DISTANCES)
    else:
        dist = {(u, v): rng.randint(1, 9) for u in cities for v in cities if u != v}

    def nxt(u, v):
        return f"next_{u}_{v}"

    atoms = [nxt(u, v) for u in cities for v in cities] + ["T"] + [f"reach_{c}" for c in cities]
    constraints = [Clause([Literal("T")])]
    for u in cities:
        constraints.append(ReifiedSum(Literal("T"), [LinearTerm(1, nxt(u, v)) for v in cities], Comparator.EQ, 1))
    for v in cities:
        constraints.append(ReifiedSum(Literal("T"), [LinearTerm(1, nxt(u, v)) for u in cities], Comparator.EQ, 1))
    constraints += [Clause([Literal(f"reach_{c}")]) for c in cities]
    root = cities[0]
    rules = [Rule(f"reach_{root}", Connective.AND, [])]
    for x in cities:
        for y in cities:
            if x != y:
                rules.append(Rule(f"reach_{x}", Connective.AND, [Literal(f"reach_{y}"), Literal(nxt(y, x))]))
    objective = Objective([LinearTerm(d, nxt(u, v)) for (u, v), d in dist.items()])
    if seed:
        rng.shuffle(constraints)
    return Theory(f"tsp_{size}_{seed}", (), atoms, constraints, [Definition("d1", rules)], objective)


# -- n-queens --------------------------------------------------------------

def _weights(n, seed):
    rng = random.Random(seed)
    return [rng.randint(1, n) for _ in range(n)]


def nqueens_cp(size: int, seed: int = 0) -> Theory:
    """One int var per row holding its queen's column; ``T`` heads every
    pairwise != constraint and is forced by a unit clause.  Both encodings
    minimize the same seeded weighted sum of queen columns."""
    n = size
    rng = random.Random(seed)
    rows = list(range(1, n + 1))
    int_vars = [IntVar(f"x{r}", 1, n) for r in rows]
    T = Literal("T")
    constraints = []
    for r in rows:
        for s in rows[r:]:
            diff = [LinearTerm(1, f"x{r}"), LinearTerm(-1, f"x{s}")]
            for rhs in (0, s - r, r - s):
                constraints.append(ReifiedSum(T, diff, Comparator.NEQ, rhs))
    if seed:
        rng.shuffle(int_vars)
        rng.shuffle(constraints)
    constraints.insert(0, Clause([T]))
    w = _weights(n, seed)
    objective = Objective([LinearTerm(w[r - 1], f"x{r}") for r in rows])
    return Theory(f"nqueens_cp_{n}_{seed}", int_vars, ["T"], constraints, (), objective)


def nqueens_logic(size: int, seed: int = 0) -> Theory:
    """One atom per square; clauses say every row and column holds a queen and
    no two queens share a row, column or diagonal."""
    n = size
    rng = random.Random(seed)
    cells = [(r, c) for r in range(1, n + 1) for c in range(1, n + 1)]

    def q(r, c, positive=True):
        return Literal(f"q_{r}_{c}", positive)

    constraints = []
    for r in range(1, n + 1):
        constraints.append(Clause([q(r, c) for c in range(1, n + 1)]))
    for c in range(1, n + 1):
        constraints.append(Clause([q(r, c) for r in range(1, n + 1)]))
    for i, (r1, c1) in enumerate(cells):
        for r2, c2 in cells[i + 1:]:
            if r1 == r2 or c1 == c2 or abs(r1 - r2) == abs(c1 - c2):
                constraints.append(Clause([q(r1, c1, False), q(r2, c2, False)]))
    atoms = [f"q_{r}_{c}" for r, c in cells]
    if seed:
        rng.shuffle(atoms)
        rng.shuffle(constraints)
    w = _weights(n, seed)
    objective = Objective([LinearTerm(w[r - 1] * c, f"q_{r}_{c}") for r, c in cells])
    return Theory(f"nqueens_logic_{n}_{seed}", (), atoms, constraints, (), objective)


# -- knapsack --------------------------------------------------------------

def knapsack(size: int, seed: int = 0) -> Theory:
    """Pick items under a capacity; the capacity row is a single reified sum
    whose head is forced true, and the objective maximizes value."""
    rng = random.Random(seed)
    items = [f"take{i}" for i in range(1, size + 1)]
    weight = [rng.randint(1, 9) for _ in items]
    value = [rng.randint(1, 9) for _ in items]
    cap = max(1, sum(weight) // 2)
    constraints = [
        Clause([Literal("fits")]),
        ReifiedSum(Literal("fits"), [LinearTerm(w, i) for w, i in zip(weight, items)], Comparator.LEQ, cap),
    ]
    objective = Objective([LinearTerm(-v, i) for v, i in zip(value, items)])
    return Theory(f"knapsack_{size}_{seed}", (), items + ["fits"], constraints, (), objective)


_FAMILIES = {
    "random": random_theory,
    "tsp": tsp,
    "nqueens-logic": nqueens_logic,
    "nqueens-cp": nqueens_cp,
    "knapsack": knapsack,
}
