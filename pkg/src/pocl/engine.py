"""The refinement loop: pick a plan, pick a flaw, replace the plan by its children."""

from __future__ import annotations

import heapq
import random
import time
from dataclasses import dataclass, field, replace

from .domains import DomainTable, find_parameter_domains
from .lang import Operator, Problem, expand_goals, expand_universals, operator_constants
from .plan import OPEN, Flaw, Plan
from .pruning import DomainSeed, PruneCounters
from .refine import (
    EXPIRED,
    Context,
    classify_threat,
    detect_threats,
    establish,
    initial_plan,
    is_complete,
    discard,
    purge_expired,
    resolve_threat,
)
from .strategies import LCFR, LIFO, ZLIFO, ZLIFO_STAR, PRESETS, STRATEGIES, RankWeights, rank_plan, select_flaw

__all__ = [
    "SearchConfig", "SearchResult", "search", "establish", "detect_threats",
    "classify_threat", "resolve_threat", "is_complete", "prepare_operators",
]

BEST_FIRST, ID_BEST_FIRST = "best_first", "id_best_first"
SOLUTION, EXHAUSTED, LIMIT = "solution", "exhausted", "limit_reached"


@dataclass(frozen=True)
class SearchConfig:
    rank_weights: RankWeights = PRESETS["s+oc+uc"]
    flaw_strategy: str = LIFO
    d_sep: bool | None = None  # None: on for everything except LCFR
    plan_limit: int = 40_000
    use_domains: bool = False
    search_mode: str = BEST_FIRST
    shuffle_seed: int | None = None
    tie_break: str = "lifo"  # among equal ranks: "lifo" newest first, "fifo" oldest first

    def __post_init__(self):
        if self.plan_limit <= 0:
            raise ValueError("plan_limit must be positive")
        if self.flaw_strategy not in STRATEGIES:
            raise ValueError(f"unknown strategy {self.flaw_strategy!r}")
        if self.search_mode not in (BEST_FIRST, ID_BEST_FIRST):
            raise ValueError(f"unknown search mode {self.search_mode!r}")
        if self.tie_break not in ("lifo", "fifo"):
            raise ValueError(f"unknown tie-break {self.tie_break!r}")
        if isinstance(self.rank_weights, str):
            w = PRESETS.get(self.rank_weights.lower()) or RankWeights.parse(self.rank_weights)
            object.__setattr__(self, "rank_weights", w)

    @property
    def dsep(self) -> bool:
        return self.flaw_strategy != LCFR if self.d_sep is None else self.d_sep

    def fingerprint(self) -> str:
        return (
            f"{self.flaw_strategy}/{self.rank_weights}/dsep={int(self.dsep)}"
            f"/dom={int(self.use_domains)}/{self.search_mode}/limit={self.plan_limit}"
            f"/seed={self.shuffle_seed}/ties={self.tie_break}"
        )


@dataclass
class SearchResult:
    outcome: str
    plan: Plan | None
    created: int
    explored: int
    counters: PruneCounters = field(default_factory=PruneCounters)
    seconds: float = 0.0
    domains: DomainTable | None = None

    @property
    def solved(self) -> bool:
        return self.outcome == SOLUTION


def shuffle_preconditions(op: Operator, rng: random.Random) -> Operator:
    pre = list(op.primary.antecedent)
    rng.shuffle(pre)
    return replace(op, primary=replace(op.primary, antecedent=tuple(pre)))


def prepare_operators(operators, problem: Problem, shuffle_seed: int | None = None) -> list[Operator]:
    """Expand quantifiers and disjunctions over the problem's objects."""
    constants = _constants(problem, operators)
    types = problem.types()
    out = []
    for op in operators:
        out.extend(expand_universals(op, constants, types, keep_or=True))
    if shuffle_seed is not None:
        rng = random.Random(shuffle_seed)
        out = [shuffle_preconditions(op, rng) for op in out]
    return out


def _constants(problem: Problem, operators) -> set:
    constants = problem.constants()
    for op in operators:
        constants |= operator_constants(op)
    return constants


def _goal_alternatives(problem: Problem, operators) -> list[tuple]:
    return expand_goals(problem.goals, _constants(problem, operators), problem.types(), keep_or=True)


def initial_plans(problem: Problem, ctx: Context) -> list[Plan]:
    plans = []
    for goals in _goal_alternatives(problem, ctx.operators):
        params = list(dict.fromkeys(v for g in goals for v in g.variables()))
        p = initial_plan(problem.inits, goals, ctx, params)
        if p is not None:
            plans.append(p)
    return plans


def search(problem: Problem, operators, config: SearchConfig = SearchConfig(),
           domains: DomainTable | None = None, trace=None) -> SearchResult:
    """Run the planner.

    ``operators`` are the domain's operators as parsed; quantifiers are
    expanded here.  When ``config.use_domains`` is set and no table is
    given, parameter domains are computed first.  ``trace``, if given, is
    called with one line of text per popped plan.
    """
    t0 = time.perf_counter()
    planner_ops = prepare_operators(operators, problem, config.shuffle_seed)
    seed = None
    if config.use_domains:
        if domains is None:
            domains = find_parameter_domains(operators, problem.inits, problem.goals,
                                             constants=problem.constants())
        seed = DomainSeed.from_table(domains)
    ctx = Context(planner_ops, config, seed, problem.fact_tables)
    roots = initial_plans(problem, ctx)
    if config.search_mode == BEST_FIRST:
        res = _best_first(roots, ctx, config, trace)
    else:
        res = _id_best_first(roots, ctx, config, trace)
    res.counters = ctx.counters
    res.seconds = time.perf_counter() - t0
    res.domains = domains
    return res


def settle(plan: Plan, config: SearchConfig) -> tuple[Plan, Flaw | None]:
    """Select a live flaw, discarding expired threats met along the way.

    Returns the plan without the discarded threats and the chosen flaw, or
    ``None`` for the flaw when nothing is left (a solution).
    """
    if config.flaw_strategy in (ZLIFO, ZLIFO_STAR):
        plan = purge_expired(plan)
    while plan.agenda:
        flaw = select_flaw(plan, config.flaw_strategy, config.dsep)
        if flaw.kind == OPEN or classify_threat(plan, flaw) != EXPIRED:
            return plan, flaw
        plan = discard(plan, flaw)
    return plan, None


def refine(plan: Plan, flaw: Flaw) -> list[Plan]:
    if flaw.kind == OPEN:
        return establish(plan, flaw)
    return resolve_threat(plan, flaw)


def _trace_line(plan: Plan, flaw, children) -> str:
    return f"#{plan.id} rank={float(plan.rank):g} flaw={flaw} children={len(children)}"


def _best_first(roots, ctx, config: SearchConfig, trace) -> SearchResult:
    heap: list = []
    created = explored = 0
    sign = -1 if config.tie_break == "lifo" else 1
    for i, p in enumerate(roots):
        p.rank = rank_plan(p, config.rank_weights)
        heapq.heappush(heap, (p.rank, 0, i, p))
    while heap:
        plan = heapq.heappop(heap)[-1]
        explored += 1
        plan, flaw = settle(plan, config)
        if flaw is None:
            return SearchResult(SOLUTION, plan, created, explored)
        children = refine(plan, flaw)
        if trace is not None:
            trace(_trace_line(plan, flaw, children))
        for child in children:
            created += 1
            if created > config.plan_limit:
                return SearchResult(LIMIT, None, created, explored)
            child.id = created
            child.rank = rank_plan(child, config.rank_weights)
            heapq.heappush(heap, (child.rank, sign * child.id, 0, child))
    return SearchResult(EXHAUSTED, None, created, explored)


def _id_best_first(roots, ctx, config: SearchConfig, trace) -> SearchResult:
    """Iterative deepening on rank thresholds; depth-first within one."""
    if not roots:
        return SearchResult(EXHAUSTED, None, 0, 0)
    created = explored = 0
    for p in roots:
        p.rank = rank_plan(p, config.rank_weights)
    threshold = min(p.rank for p in roots)
    while True:
        nxt = None
        stack = [p for p in reversed(roots) if p.rank <= threshold]
        for p in roots:
            if p.rank > threshold and (nxt is None or p.rank < nxt):
                nxt = p.rank
        while stack:
            plan = stack.pop()
            explored += 1
            plan, flaw = settle(plan, config)
            if flaw is None:
                return SearchResult(SOLUTION, plan, created, explored)
            children = refine(plan, flaw)
            if trace is not None:
                trace(_trace_line(plan, flaw, children))
            keep = []
            for child in children:
                created += 1
                if created > config.plan_limit:
                    return SearchResult(LIMIT, None, created, explored)
                child.id = created
                child.rank = rank_plan(child, config.rank_weights)
                if child.rank <= threshold:
                    keep.append(child)
                elif nxt is None or child.rank < nxt:
                    nxt = child.rank
            stack.extend(reversed(keep))
        if nxt is None:
            return SearchResult(EXHAUSTED, None, created, explored)
        threshold = nxt
