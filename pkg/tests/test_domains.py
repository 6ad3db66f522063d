import time
from pathlib import Path

import pytest
from hypothesis import given, settings, strategies as st

from pocl.corpus import all_cases, generate_art, load_case, random_world
from pocl.domains import (
    TOP,
    domain_ratio,
    find_parameter_domains,
    find_parameter_domains_improved,
    propagate_union_domains,
    render_domain_report,
)
from pocl.lang import parse_domain, parse_problem
from pocl.validate import reachable_bindings

GOLDEN = Path(__file__).parent / "golden"
CASES = all_cases()


def table_for(case, improved=False):
    problem, ops = case.load()
    fn = find_parameter_domains_improved if improved else find_parameter_domains
    return fn(ops, problem.inits, problem.goals, constants=problem.constants())


def test_three_ops_domains():
    t = table_for(load_case("three-ops"))
    assert t.domain("op1", 0, "?x") == {"B"}
    assert t.domain("op2", 0, "?y") == {"B", "C"}
    assert t.domain("op3", 0, "?z") == {"A", "B"}
    assert not t.unreachable


def test_three_ops_snapshots_grow_monotonically():
    case = load_case("three-ops")
    problem, ops = case.load()
    snaps: list = []
    find_parameter_domains(ops, problem.inits, problem.goals, snapshots=snaps)
    assert snaps
    # snapshots are (clause domains, precondition domains); both only grow
    for before, after in zip(snaps, snaps[1:]):
        for part in (0, 1):
            for old, new in zip(before[part], after[part]):
                for v, d in old.items():
                    assert d <= new[v]
    assert snaps[-1][0][0]["?x"] == {"B"}


def test_molgen_transform_domains():
    t = table_for(load_case("molgen-rat-insulin"))
    assert t.domain("transform", 0, "?x") == {"EE", "JE"}
    assert t.domain("transform", 0, "?y") == {"E", "J"}


def test_unreachable_precondition_reported():
    case = load_case("trains1")
    # same world, no oranges anywhere
    text = case.problem_text.replace("(oranges o1) (at o1 corning)", "").replace(
        ":goal (at o1 bath)", ":goal (at bn1 bath)"
    )
    ops = case.operators()
    problem = parse_problem(text, ops)
    t = find_parameter_domains(ops, problem.inits, problem.goals, constants=problem.constants())
    missing = {str(l) for l in t.unreachable.get(("ld-oj", 0), ())}
    assert any("oj" in m for m in missing)
    assert "ld-oj" in render_domain_report(t)


@pytest.mark.parametrize("case", CASES, ids=lambda c: c.name)
def test_golden_report(case):
    expected = (GOLDEN / f"{case.name}.domains").read_text()
    assert render_domain_report(table_for(case)) + "\n" == expected


@pytest.mark.parametrize("case", CASES, ids=lambda c: c.name)
def test_improved_variant_agrees(case):
    assert table_for(case) == table_for(case, improved=True)


@pytest.mark.parametrize("seed", range(100))
def test_improved_variant_agrees_on_random_worlds(seed):
    case = random_world(seed)
    assert table_for(case) == table_for(case, improved=True)


@pytest.mark.parametrize("case", CASES, ids=lambda c: c.name)
def test_preprocessing_is_fast(case):
    problem, ops = case.load()
    best = float("inf")
    for _ in range(3):
        t0 = time.perf_counter()
        find_parameter_domains(ops, problem.inits, problem.goals, constants=problem.constants())
        best = min(best, time.perf_counter() - t0)
    assert best < 0.1


@pytest.mark.parametrize("name", ["three-ops", "sussman", "test-ferry", "art-0-0"])
def test_forward_search_bindings_are_inside_domains(name):
    case = load_case(name)
    problem, ops = case.load()
    t = table_for(case)
    for op, origin, var, value in reachable_bindings(problem, ops, depth=6):
        d = t.domain(op, origin, var)
        assert d is TOP or value in d, (op, origin, var, value)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000))
def test_forward_search_on_random_worlds(seed):
    case = random_world(seed)
    problem, ops = case.load()
    t = table_for(case)
    for op, origin, var, value in reachable_bindings(problem, ops, depth=4):
        d = t.domain(op, origin, var)
        assert d is TOP or value in d


def test_union_contains_intersection():
    for name in ("three-ops", "molgen-rat-insulin", "trains1", "test-ferry"):
        case = load_case(name)
        problem, ops = case.load()
        inter = table_for(case)
        union = propagate_union_domains(ops, problem.inits, problem.goals, constants=problem.constants())
        for key, doms in inter.clauses.items():
            for v, d in doms.items():
                u = union.clauses[key][v]
                if d is not TOP and u is not TOP:
                    assert d <= u, (name, key, v)
        r = domain_ratio(inter, union)
        assert r is None or 0 < r <= 1


def test_fixa_domains_do_not_narrow():
    # every fridge parameter already ranges over its own objects
    case = load_case("fixa")
    problem, ops = case.load()
    inter = table_for(case)
    union = propagate_union_domains(ops, problem.inits, problem.goals, constants=problem.constants())
    assert domain_ratio(inter, union) == pytest.approx(1.0)


def test_goal_only_world():
    ops = parse_domain("(define (operator a) :parameters (?x) :precondition (p ?x) :effect (q ?x))")
    problem = parse_problem("(define (problem z) :inits ((p k)) :goal (q k))", ops)
    t = find_parameter_domains(ops, problem.inits, problem.goals)
    assert t.domain("a", 0, "?x") == {"K"}


def test_art_has_no_parameters():
    t = table_for(generate_art(3, 3, 1))
    assert all(not doms for key, doms in t.clauses.items())
