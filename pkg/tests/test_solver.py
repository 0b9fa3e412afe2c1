import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from ecnf2mip.cli.generators import generate
from ecnf2mip.linearize import translate_theory
from ecnf2mip.mip import Column, ColumnKind, MipModel, Row, Sense
from ecnf2mip.model import Clause, LinearTerm, Objective, Theory, lit, normalize_theory
from ecnf2mip.solver import (
    FeasibilityViolation, branch_and_bound, check_feasible, simplex_solve, solve_lp_arrays,
)

from helpers import mip_optimum, random_mip

B, I, C = ColumnKind.BINARY, ColumnKind.INTEGER, ColumnKind.CONTINUOUS


def model(cols, rows, objective=None, const=0.0):
    m = MipModel(name="m")
    m.columns = [Column(n, k, lo, hi) for n, k, lo, hi in cols]
    m.rows = [Row(tuple(t), s, r) for t, s, r in rows]
    m.objective = dict(objective or {})
    m.objective_constant = const
    return m


def two_var(kind):
    return model([("x", kind, 0, 1), ("y", kind, 0, 1)], [(((0, 1), (1, 1)), Sense.LEQ, 1.5)], {0: -1, 1: -1})


# -- simplex fixtures ------------------------------------------------------

def test_lp_fixture_half_point():
    res = simplex_solve(two_var(C))
    assert res.status == "optimal"
    assert res.objective == -1.5
    assert res.x.tolist() == [1.0, 0.5]


def test_lp_fixture_lower_row():
    res = simplex_solve(model([("x", C, 0, 5)], [(((0, 1),), Sense.GEQ, 2)], {0: 1}))
    assert (res.status, res.objective, res.x.tolist()) == ("optimal", 2.0, [2.0])


def test_lp_fixture_infeasible():
    m = model([("x", C, 0, 5)], [(((0, 1),), Sense.GEQ, 3), (((0, 1),), Sense.LEQ, 2)])
    assert simplex_solve(m).status == "infeasible"


def test_lp_extra_bounds_tighten():
    res = simplex_solve(two_var(C), extra_bounds={0: (0, 0)})
    assert res.objective == -1.0 and res.x.tolist() == [0.0, 1.0]


def test_lp_equality_and_unbounded():
    m = model([("x", C, 0, 4), ("y", C, 0, 4)], [(((0, 1), (1, -1)), Sense.EQ, 1)], {0: 1, 1: 1})
    res = simplex_solve(m)
    assert res.objective == 1.0 and res.x.tolist() == [1.0, 0.0]
    free = solve_lp_arrays(np.zeros((0, 1)), np.zeros(0), np.zeros(0, dtype=np.int64),
                           np.array([-1.0]), np.array([0.0]), np.array([np.inf]))
    assert free.status == "unbounded"


def test_lp_rejects_infinite_lower_bound():
    with pytest.raises(ValueError):
        solve_lp_arrays(np.zeros((0, 1)), np.zeros(0), np.zeros(0, dtype=np.int64),
                        np.array([1.0]), np.array([-np.inf]), np.array([1.0]))


def test_lp_degenerate_cycle_candidate():
    # Beale-style degenerate LP: many ties at zero; must terminate at the optimum
    A = [[0.25, -60, -1 / 25, 9], [0.5, -90, -1 / 50, 3], [0, 0, 1, 0]]
    m = model([(f"x{j}", C, 0, 1e6) for j in range(4)],
              [(tuple((j, a) for j, a in enumerate(r) if a), Sense.LEQ, rhs) for r, rhs in zip(A, (0, 0, 1))],
              {0: -0.75, 1: 150, 2: -1 / 50, 3: 6})
    res = simplex_solve(m)
    assert res.status == "optimal" and res.objective == pytest.approx(-0.05)


# -- branch-and-bound ------------------------------------------------------

def test_bnb_fixture_integer_points():
    res = branch_and_bound(two_var(B))
    assert (res.status, res.objective) == ("optimal", -1.0)
    assert sorted(res.x.tolist()) == [0.0, 1.0]
    assert res.root_bound == -1.5


def test_bnb_translated_clause_theory():
    t = Theory(atoms=["p", "q"], constraints=[Clause([lit("p"), lit("q")])],
               objective=Objective([LinearTerm(1, "p"), LinearTerm(1, "q")]))
    assert branch_and_bound(translate_theory(t)).objective == 1


def test_bnb_empty_clause_row_infeasible():
    m = model([("p", B, 0, 1)], [((), Sense.GEQ, 1)])
    assert branch_and_bound(m).status == "infeasible"
    m.infeasible = True
    assert branch_and_bound(m).nodes == 0


def test_bnb_objective_constant_and_values():
    m = model([("x", I, -2, 3)], [(((0, 2),), Sense.GEQ, -3)], {0: 1}, const=10)
    res = branch_and_bound(m)
    assert res.objective == 9 and res.values() == {"x": -1.0}


def test_bnb_node_limit():
    res = branch_and_bound(two_var(B), max_nodes=1)
    assert (res.status, res.nodes, res.x) == ("limit", 1, None)


def test_bnb_feasibility_mode_stops_at_first_point():
    t = normalize_theory(generate("knapsack", 8, 1))
    m = translate_theory(t)
    full = branch_and_bound(m)
    quick = branch_and_bound(m, feasibility=True)
    assert quick.status == "optimal" and quick.nodes <= full.nodes
    assert check_feasible(m, quick.x) == []


def test_bnb_closes_fractional_root():
    # LP optimum (1/2, 1/2, 1/3); the integer optimum is the origin
    m = model([("a", B, 0, 1), ("b", B, 0, 1), ("c", B, 0, 1)],
              [(((0, 1), (1, 1)), Sense.LEQ, 1), (((0, 2), (1, -2)), Sense.EQ, 0), (((2, 3),), Sense.LEQ, 1)],
              {0: -1, 1: -1, 2: -1})
    res = branch_and_bound(m)
    assert res.root_bound == pytest.approx(-1 - 1 / 3)
    assert res.objective == 0 and res.x.tolist() == [0, 0, 0]


# -- check_feasible --------------------------------------------------------

def test_check_feasible_row_violation_magnitude():
    m = model([("x", I, 0, 5)], [(((0, 1),), Sense.LEQ, 1)])
    assert check_feasible(m, np.array([2.0])) == [FeasibilityViolation("row", 0, 1.0)]


def test_check_feasible_kind_dependent_integrality():
    m = model([("z", C, 0, 3), ("n", I, 0, 3)], [])
    assert check_feasible(m, np.array([2.5, 1.0])) == []
    assert [v.kind for v in check_feasible(m, np.array([2.5, 1.5]))] == ["integrality"]


def test_check_feasible_bound_violation():
    m = model([("x", B, 0, 1)], [])
    (v,) = check_feasible(m, np.array([3.0]))
    assert (v.kind, v.index, v.magnitude) == ("bound", 0, 2.0)


# -- properties ------------------------------------------------------------

seeds = st.integers(0, 10**6)


@given(seeds)
def test_bnb_matches_box_enumeration(seed):
    m = random_mip(seed)
    want = mip_optimum(m)
    res = branch_and_bound(m)
    if want is None:
        assert res.status == "infeasible"
    else:
        assert res.status == "optimal" and res.objective == pytest.approx(want, abs=1e-6)
        assert check_feasible(m, res.x) == []


@given(seeds)
def test_lp_objective_recomputes(seed):
    m = random_mip(seed)
    res = simplex_solve(m)
    if res.status == "optimal":
        c = np.zeros(m.n_cols)
        for j, v in m.objective.items():
            c[j] = v
        assert res.objective == pytest.approx(float(c @ res.x), abs=1e-9)
        assert check_feasible(m, res.x, int_tol=math.inf) == []


@given(seeds)
def test_pruning_never_cuts_the_optimum(seed):
    m = random_mip(seed)
    audit = []
    res = branch_and_bound(m, audit=audit)
    if res.status != "optimal":
        return
    opt = res.objective - m.objective_constant
    for event, bound, inc in audit:
        if event == "prune":
            # a pruned node could not have beaten the incumbent it was tested against
            assert bound >= inc - 1e-6 and inc >= opt - 1e-6
    if res.root_bound is not None:
        assert res.root_bound <= res.objective + 1e-6


@given(st.integers(2, 8), seeds)
def test_translated_points_are_feasible(size, seed):
    m = translate_theory(normalize_theory(generate("random", size, seed)))
    res = branch_and_bound(m)
    if res.status == "optimal":
        assert check_feasible(m, res.x) == []
        assert res.objective == Fraction(res.objective).limit_denominator(1)
