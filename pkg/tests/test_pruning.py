from hypothesis import given, settings, strategies as st

from pocl.bindings import Bindings
from pocl.corpus import load_case
from pocl.engine import SearchConfig, search
from pocl.lang import Literal
from pocl.pruning import (
    DomainSeed,
    filter_establisher,
    filter_threat,
    plain_unifiable,
    refine_domains_on_unify,
)
from pocl.domains import find_parameter_domains
from pocl.validate import validate_plan

TERMS = ["?a", "?b", "?c", "?d", "k1", "k2", "k3"]


def test_establisher_filtered_by_seed():
    b = Bindings()
    oc = Literal("contains", ("IG", "?m"))
    eff = Literal("contains", ("?x", "?y"))
    assert filter_establisher(b, oc, eff)
    assert not filter_establisher(b, oc, eff, seed=[("?x", {"EE", "JE"})])


def test_threat_filter():
    b = Bindings().restrict("?x", {"A", "B"})
    cond = Literal("at", ("C",))
    assert not filter_threat(b, Literal("at", ("?x",), True), cond)
    assert filter_threat(b, Literal("at", ("?x",), True), Literal("at", ("A",)))
    assert not filter_threat(b, Literal("at", ("?x",)), Literal("at", ("A",)))


def test_refine_on_unify_intersects():
    b = Bindings().restrict_many([("?x", {"A", "B"}), ("?y", {"B", "C"})])
    b = refine_domains_on_unify(b, [("?x", "?y")])
    assert b.domain("?y") == {"B"}
    assert refine_domains_on_unify(b, [("?y", "C")]) is None


@st.composite
def stores(draw):
    ops = draw(st.lists(st.tuples(st.booleans(), st.sampled_from(TERMS), st.sampled_from(TERMS)), max_size=6))
    doms = draw(st.lists(st.tuples(st.sampled_from(TERMS[:4]), st.frozensets(st.sampled_from(TERMS[4:]), min_size=1)), max_size=3))
    xs = draw(st.lists(st.sampled_from(TERMS), min_size=1, max_size=3))
    ys = draw(st.lists(st.sampled_from(TERMS), min_size=len(xs), max_size=len(xs)))
    return ops, doms, xs, ys


@settings(max_examples=500, deadline=None)
@given(stores())
def test_plain_unifiable_ignores_only_domains(case):
    ops, doms, xs, ys = case
    plain = Bindings()
    for eq, x, y in ops:
        nb = plain.equate(x, y) if eq else plain.separate(x, y)
        plain = nb or plain
    with_doms = plain.restrict_many(doms)
    if with_doms is None:
        return
    assert plain_unifiable(with_doms, xs, ys) == (plain.unify_args(xs, ys) is not None)


def test_seed_lookup():
    problem, ops = load_case("three-ops").load()
    seed = DomainSeed.from_table(find_parameter_domains(ops, problem.inits, problem.goals))
    assert seed.lookup("op1") == {"?x": frozenset({"B"})}
    assert seed.restrictions("op1", 0, {"?x": "?x.5"}) == [("?x.5", frozenset({"B"}))]
    assert seed.lookup("nothing") == {}


def test_counters_move_on_trains():
    problem, ops = load_case("trains1").load()
    res = search(problem, ops, SearchConfig(use_domains=True, plan_limit=5000))
    assert res.solved and validate_plan(res.plan, problem, ops).ok
    assert res.counters.establishers_pruned > 0


def test_pruned_search_is_no_worse_on_molgen():
    problem, ops = load_case("molgen-rat-insulin").load()
    off = search(problem, ops, SearchConfig())
    on = search(problem, ops, SearchConfig(use_domains=True))
    assert off.solved and on.solved
    assert on.created <= off.created
