import itertools

import pytest
from hypothesis import given, strategies as st

from ecnf2mip.cli.generators import generate
from ecnf2mip.model import (
    Clause, Comparator, Connective, Definition, Equivalence, IntVar, LinearTerm, Literal,
    MalformedTheory, Objective, ReifiedSum, Rule, Theory, lit, normalize_theory, validate_theory,
)
from ecnf2mip.oracle import enumerate_models

AND, OR = Connective.AND, Connective.OR


def test_literal_helpers():
    assert lit("-p") == Literal("p", False)
    assert -lit("p") == lit("-p")
    assert str(lit("-q")) == "-q"


@pytest.mark.parametrize("cmp,lhs,rhs,want", [
    (Comparator.LT, 1, 2, True), (Comparator.LEQ, 2, 2, True), (Comparator.EQ, 2, 3, False),
    (Comparator.GEQ, 1, 2, False), (Comparator.GT, 3, 2, True), (Comparator.NEQ, 2, 2, False),
])
def test_comparator_holds(cmp, lhs, rhs, want):
    assert cmp.holds(lhs, rhs) is want


def test_single_literal_bodies_merge_into_one_disjunction():
    t = Theory(atoms=["a", "b", "p"], definitions=[Definition("d1", [Rule("p", AND, [lit("a")]),
                                                                     Rule("p", AND, [lit("b")])])])
    n = normalize_theory(t)
    assert n.definitions[0].rules == (Rule("p", OR, [lit("a"), lit("b")]),)
    assert n.atoms == t.atoms


def test_conjunctive_body_gets_auxiliary_head():
    t = Theory(atoms=["a", "b", "c", "p"],
               definitions=[Definition("d1", [Rule("p", AND, [lit("a"), lit("b")]),
                                              Rule("p", AND, [lit("c")])])])
    n = normalize_theory(t)
    assert n.atoms == ("a", "b", "c", "p", "p_b1")
    assert n.definitions[0].rules == (
        Rule("p_b1", AND, [lit("a"), lit("b")]),
        Rule("p", OR, [lit("p_b1"), lit("c")]),
    )
    # same models on the original atoms, over all 8 open assignments
    names = ["a", "b", "c", "p"]
    before = enumerate_models(t).model_set(names)
    after = enumerate_models(n).model_set(names)
    assert before == after
    assert before == {(a, b, c, int((a and b) or c)) for a, b, c in itertools.product((0, 1), repeat=3)}


def test_tautological_clause_removed_and_duplicates_dropped():
    t = Theory(atoms=["p", "q"], constraints=[Clause([lit("p"), lit("-p"), lit("q")]),
                                              Clause([lit("q"), lit("q"), lit("-p")])])
    n = normalize_theory(t)
    assert n.constraints == (Clause([lit("q"), lit("-p")]),)


def test_zero_coefficients_dropped():
    t = Theory(int_vars=[IntVar("x", 0, 3)], atoms=["v"],
               constraints=[ReifiedSum(lit("v"), [LinearTerm(0, "x"), LinearTerm(2, "v")], Comparator.GEQ, 1)],
               objective=Objective([LinearTerm(0, "x"), LinearTerm(1, "v")]))
    n = normalize_theory(t)
    assert n.constraints[0].terms == (LinearTerm(2, "v"),)
    assert n.objective.terms == (LinearTerm(1, "v"),)


def test_empty_conjunction_among_merged_rules_makes_head_true():
    t = Theory(atoms=["a", "p"], definitions=[Definition("d1", [Rule("p", AND, [lit("a")]), Rule("p", AND, [])])])
    n = normalize_theory(t)
    assert n.definitions[0].rules == (Rule("p", AND, []),)


def test_defined_equivalence_head_is_malformed():
    t = Theory(atoms=["a", "p"], constraints=[Equivalence("p", AND, [lit("a")])],
               definitions=[Definition("d1", [Rule("p", AND, [lit("a")])])])
    with pytest.raises(MalformedTheory):
        normalize_theory(t)
    assert "DefinedEquivalenceHead" in validate_theory(t).kinds()


def test_validate_reports_unbounded_variable():
    t = Theory(int_vars=[IntVar("x")], atoms=["p"])
    rep = validate_theory(t)
    assert [(v.kind, v.subject) for v in rep] == [("UnboundedVariable", "x")]


def test_validate_reports_dangling_reference():
    t = Theory(atoms=["p"], constraints=[Clause([lit("p"), lit("q")])])
    rep = validate_theory(t)
    assert [(v.kind, v.subject) for v in rep] == [("DanglingReference", "q")]


def test_validate_accepts_grounded_tsp():
    assert validate_theory(generate("tsp", 3, 0)).ok


def test_validate_collects_every_violation():
    t = Theory(int_vars=[IntVar("x", 3, 1), IntVar("p", 0, 1)], atoms=["p", "h"],
               constraints=[Equivalence("h", AND, [])],
               definitions=[Definition("d1", [Rule("h", AND, [lit("p")])]),
                            Definition("d2", [Rule("h", AND, [lit("z")])])],
               objective=Objective([LinearTerm(1, "y")]))
    kinds = validate_theory(t).kinds()
    assert kinds == {"DuplicateId", "InvalidBounds", "EmptyBody", "DuplicateHead",
                     "DanglingReference", "DefinedEquivalenceHead"}


def test_defined_and_open_atoms():
    t = generate("tsp", 3, 0)
    assert set(t.defined_atoms()) == {"reach_a", "reach_b", "reach_c"}
    assert "T" in t.open_atoms() and "reach_a" not in t.open_atoms()
    assert t.bounds("T") == (0, 1)


seeds = st.integers(min_value=0, max_value=10**6)
sizes = st.integers(min_value=1, max_value=10)


@given(sizes, seeds)
def test_normalize_is_idempotent(size, seed):
    n = normalize_theory(generate("random", size, seed))
    assert normalize_theory(n) == n


@given(st.integers(min_value=2, max_value=10), seeds)
def test_normalize_preserves_models(size, seed):
    t = generate("random", size, seed)
    names = list(t.atoms) + [v.id for v in t.int_vars]
    assert enumerate_models(t).model_set(names) == enumerate_models(normalize_theory(t)).model_set(names)


@given(sizes, seeds)
def test_generated_theories_are_valid(size, seed):
    assert validate_theory(generate("random", size, seed)).ok
