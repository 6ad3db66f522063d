import pytest

from pocl.corpus import load_case
from pocl.engine import (
    EXHAUSTED,
    LIMIT,
    SOLUTION,
    SearchConfig,
    classify_threat,
    establish,
    initial_plans,
    prepare_operators,
    resolve_threat,
    search,
)
from pocl.lang import parse_domain, parse_problem
from pocl.plan import OPEN, THREAT, linearization, plan_metrics, render_plan
from pocl.refine import DEFINITE, EXPIRED, POTENTIAL, Context, is_complete
from pocl.strategies import PRESETS
from pocl.validate import simulate, validate_plan

CLOBBER = """
(define (operator make-p) :precondition () :effect (p))
(define (operator make-q) :precondition () :effect (and (q) (not (p))))
"""

CONDITIONAL = """
(define (operator make-p) :effect (p))
(define (operator make-q) :parameters (?x)
  :precondition (r ?x)
  :effect (and (q) (when (s ?x) (not (p)))))
"""

SEPARABLE = """
(define (operator make) :parameters (?x) :effect (p ?x))
(define (operator wreck) :parameters (?y) :effect (and (q) (not (p ?y))))
"""


def root(domain, problem, cfg=SearchConfig()):
    ops = parse_domain(domain)
    prob = parse_problem(problem, ops)
    ctx = Context(prepare_operators(ops, prob), cfg, None, prob.fact_tables)
    (plan,) = initial_plans(prob, ctx)
    return plan, prob, ops


def flaw_on(plan, pred):
    return next(f for f in plan.agenda if f.kind == OPEN and f.literal.predicate == pred)


def test_initial_plan_has_goals_open():
    plan, _, _ = root(CLOBBER, "(define (problem x) :inits () :goal (and (p) (q)))")
    assert len(plan.steps) == 2
    assert sorted(f.literal.predicate for f in plan.agenda) == ["p", "q"]
    assert plan_metrics(plan).OC == 2


def test_definite_threat_gets_promotion_only():
    plan, _, _ = root(CLOBBER, "(define (problem x) :inits () :goal (and (p) (q)))")
    (plan,) = establish(plan, flaw_on(plan, "p"))
    (plan,) = establish(plan, flaw_on(plan, "q"))
    threats = [f for f in plan.agenda if f.kind == THREAT]
    assert len(threats) == 1
    assert classify_threat(plan, threats[0]) == DEFINITE
    children = resolve_threat(plan, threats[0])
    # demotion would put make-q after the end step
    assert len(children) == 1
    (child,) = children
    assert child.ordering.before(3, 2)
    assert is_complete(child)


def test_conditional_threat_can_be_confronted():
    plan, _, _ = root(CONDITIONAL, "(define (problem x) :inits ((r a) (s a)) :goal (and (p) (q)))")
    (plan,) = establish(plan, flaw_on(plan, "p"))
    plans = establish(plan, flaw_on(plan, "q"))
    plan = plans[0]
    threat = next(f for f in plan.agenda if f.kind == THREAT)
    kinds = [c for c in resolve_threat(plan, threat)]
    # promotion and confrontation; confrontation adds the goal (not (s ?x))
    assert len(kinds) == 2
    confronted = kinds[1]
    assert any(f.kind == OPEN and f.literal.negated and f.literal.predicate == "s" for f in confronted.agenda)
    assert classify_threat(confronted, threat) == EXPIRED


def test_potential_threat_offers_separation():
    text = "(define (problem x) :inits () :goal (and (p a) (q)))"
    plan, _, _ = root(SEPARABLE, text)
    (plan,) = establish(plan, flaw_on(plan, "p"))
    (plan,) = establish(plan, flaw_on(plan, "q"))
    threat = next(f for f in plan.agenda if f.kind == THREAT)
    assert classify_threat(plan, threat) == POTENTIAL
    children = resolve_threat(plan, threat)
    # promotion plus separation ?y != a
    assert len(children) == 2
    sep = children[1]
    assert classify_threat(sep, threat) == EXPIRED


def test_reuse_of_start_under_cwa():
    dom = "(define (operator paint) :parameters (?x) :precondition (not (red ?x)) :effect (red ?x))"
    res = search(*reversed(_load(dom, "(define (problem x) :inits () :goal (red a))")))
    assert res.outcome == SOLUTION
    assert len(res.plan.steps) == 3


def _load(dom, prob):
    ops = parse_domain(dom)
    return ops, parse_problem(prob, ops)


def test_exhausted_when_unreachable():
    ops, prob = _load(CLOBBER, "(define (problem x) :inits () :goal (r))")
    assert search(prob, ops).outcome == EXHAUSTED


def test_plan_limit():
    case = load_case("t-of-h1")
    problem, ops = case.load()
    res = search(problem, ops, SearchConfig(plan_limit=50))
    assert res.outcome == LIMIT and res.created == 51 and res.plan is None


@pytest.mark.parametrize("strategy", ["lifo", "zlifo", "zlifo-star", "lcfr", "lc"])
@pytest.mark.parametrize("name", ["three-ops", "sussman", "test-ferry", "monkey-test1"])
def test_small_cases_solve_everywhere(name, strategy):
    problem, ops = load_case(name).load()
    rank = "s+oc+0.1uc+f" if strategy in ("zlifo-star", "lcfr") else "s+oc"
    for dom in (False, True):
        res = search(problem, ops, SearchConfig(rank, strategy, use_domains=dom, plan_limit=20_000))
        assert res.outcome == SOLUTION, (name, strategy, dom)
        assert validate_plan(res.plan, problem, ops).ok


def test_three_ops_plan_and_rendering():
    problem, ops = load_case("three-ops").load()
    res = search(problem, ops, SearchConfig("s+oc", "zlifo"))
    text = render_plan(res.plan)
    assert "op1" in text
    order = [res.plan.steps[i] for i in linearization(res.plan) if i > 1]
    seq = [(s.operator.name,) + tuple(res.plan.ground(s.instance_vars[p]) for p in s.operator.parameters)
           for s in order]
    assert simulate(problem, ops, seq)


def test_sussman_needs_three_steps():
    problem, ops = load_case("sussman").load()
    res = search(problem, ops)
    assert res.outcome == SOLUTION
    assert len(res.plan.steps) - 2 == 3


def test_deterministic_counts():
    problem, ops = load_case("tower-invert4").load()
    a = search(problem, ops, SearchConfig("s+oc", "zlifo"))
    b = search(problem, ops, SearchConfig("s+oc", "zlifo"))
    assert (a.created, a.explored) == (b.created, b.explored)


def test_id_best_first_also_solves():
    problem, ops = load_case("sussman").load()
    res = search(problem, ops, SearchConfig(search_mode="id_best_first"))
    assert res.outcome == SOLUTION
    assert validate_plan(res.plan, problem, ops).ok


def test_shuffled_preconditions_still_sound():
    problem, ops = load_case("test-ferry").load()
    for seed in range(3):
        res = search(problem, ops, SearchConfig("s+oc", "zlifo", shuffle_seed=seed))
        assert res.outcome == SOLUTION
        assert validate_plan(res.plan, problem, ops).ok


def test_fifo_ties_are_available():
    problem, ops = load_case("sussman").load()
    res = search(problem, ops, SearchConfig(tie_break="fifo"))
    assert res.outcome == SOLUTION
    assert "ties=fifo" in SearchConfig(tie_break="fifo").fingerprint()


def test_trace_lines():
    problem, ops = load_case("three-ops").load()
    lines = []
    res = search(problem, ops, trace=lines.append)
    assert len(lines) == res.explored - 1
    assert lines[0].startswith("#0 ")


@pytest.mark.parametrize(
    "kwargs",
    [dict(plan_limit=0), dict(flaw_strategy="dfs"), dict(search_mode="bfs"), dict(tie_break="random")],
)
def test_bad_config(kwargs):
    with pytest.raises(ValueError):
        SearchConfig(**kwargs)


def test_rank_strings():
    assert SearchConfig("s+oc").rank_weights == PRESETS["s+oc"]
    assert str(SearchConfig("S+OC+0.1UC+F").rank_weights) == "S+OC+0.1UC+F"
