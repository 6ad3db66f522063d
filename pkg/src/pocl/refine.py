"""Plan refinement: establishing open conditions and resolving threats.

Everything here is a pure function of a plan and the search context.
Establishment is split in two: :func:`establish_options` enumerates the
viable ways to support an open condition (cheap, cached on the plan and
reused by flaw-selection strategies for counting), and :func:`establish`
turns each option into a child plan.
"""

from __future__ import annotations

import itertools
from typing import NamedTuple

from .bindings import Bindings, add_binding
from .lang import Literal, Or
from .ordering import END, START, Ordering
from .plan import OPEN, THREAT, CausalLink, Flaw, Plan, Step, instantiate
from .pruning import DomainSeed, PruneCounters, plain_unifiable

EXPIRED, DEFINITE, POTENTIAL = "expired", "definite", "potential"
NEW, REUSE, FROM_START, FACT = "new", "reuse", "start", "fact"
DISJUNCT = "disjunct"


class Context:
    """Per-search data shared by every plan: operators, seeds, counters."""

    def __init__(self, operators, config, seed: DomainSeed | None = None, fact_tables=None):
        self.operators = list(operators)
        self.config = config
        self.seed = seed
        self.facts = fact_tables or {}
        self.counters = PruneCounters()
        self.index: dict = {}
        for oi, op in enumerate(self.operators):
            for ci, clause in enumerate(op.clauses):
                for e in clause.effects:
                    self.index.setdefault((e.predicate, e.negated), []).append((oi, ci))
        for k, v in self.index.items():
            self.index[k] = list(dict.fromkeys(v))
        self._instances: dict = {}

    def instance(self, oi: int, sid: int) -> Step:
        key = (oi, sid)
        st = self._instances.get(key)
        if st is None:
            st = self._instances[key] = instantiate(self.operators[oi], sid)
        return st

    def seed_for(self, step: Step, clause: int) -> list:
        if self.seed is None:
            return []
        origin = step.operator.clauses[clause].origin
        return self.seed.restrictions(step.operator.name, origin, step.instance_vars)


class Option(NamedTuple):
    kind: str
    producer: int  # step id (for NEW, the id the new step will get)
    clause: int
    bindings: Bindings
    step: Step | None = None  # the new step for NEW
    activate: bool = False
    goals: tuple = ()  # the chosen conjunction for DISJUNCT


# --------------------------------------------------------------------------
# binding helpers


def fold_equalities(b: Bindings, literals) -> Bindings | None:
    for lit in literals:
        if lit.is_equality:
            b = add_binding(b, lit)
            if b is None:
                return None
    return b


def _codesignate_all(b: Bindings, xs, ys) -> bool:
    return all(b.find(x) == b.find(y) for x, y in zip(xs, ys))


# --------------------------------------------------------------------------
# establishment


def _effects_matching(step: Step, clause: int, lit: Literal):
    for e in step.clauses[clause][1]:
        if e.predicate == lit.predicate and e.negated == lit.negated and len(e.args) == len(lit.args):
            yield e


def _try_effect(ctx: Context, base: Bindings, seeds, oc: Literal, e: Literal, extra=()):
    """Unify ``oc`` with effect ``e`` after seeding; count domain prunes."""
    b = base.restrict_many(seeds) if seeds else base
    if b is not None:
        b = b.unify_args(oc.args, e.args)
        if b is not None and extra:
            b = fold_equalities(b, extra)
        if b is not None:
            return b
    if seeds:
        # would it have worked without the domains?
        p = base.unify_args(oc.args, e.args)
        if p is not None and (not extra or fold_equalities(p, extra) is not None):
            ctx.counters.establishers_pruned += 1
    return None


def _new_step_options(plan: Plan, oc: Literal, ctx: Context):
    sid = len(plan.steps)
    for oi, ci in ctx.index.get((oc.predicate, oc.negated), ()):
        step = ctx.instance(oi, sid)
        pre = step.clauses[0][0]
        extra = [l for l in pre if l.is_equality]
        if ci:
            extra += [l for l in step.clauses[ci][0] if l.is_equality]
        seeds = ctx.seed_for(step, 0) + (ctx.seed_for(step, ci) if ci else [])
        for e in _effects_matching(step, ci, oc):
            b = _try_effect(ctx, plan.bindings, seeds, oc, e, extra)
            if b is not None:
                yield Option(NEW, sid, ci, b, step, ci != 0)


def _reuse_options(plan: Plan, oc: Literal, consumer: int, ctx: Context):
    order = plan.ordering
    for step in plan.steps:
        sid = step.id
        if sid == END or sid == consumer or order.before(consumer, sid):
            continue
        if sid == START:
            yield from _start_options(plan, oc, ctx)
            continue
        for ci in range(len(step.clauses)):
            if (sid, ci) in plan.confronted:
                continue
            activate = ci != 0 and (sid, ci) not in plan.activated
            seeds = ctx.seed_for(step, ci) if activate else []
            extra = [l for l in step.clauses[ci][0] if l.is_equality] if activate else ()
            for e in _effects_matching(step, ci, oc):
                b = _try_effect(ctx, plan.bindings, seeds, oc, e, extra)
                if b is not None:
                    yield Option(REUSE, sid, ci, b, None, activate)


def _start_options(plan: Plan, oc: Literal, ctx: Context):
    b0 = plan.bindings
    inits = plan.steps[START].clauses[0][1]
    if not oc.negated:
        for e in inits:
            if e.predicate == oc.predicate and len(e.args) == len(oc.args):
                b = b0.unify_args(oc.args, e.args)
                if b is not None:
                    yield Option(FROM_START, START, 0, b)
        return
    # closed world: every initial atom that could match must be kept apart
    choices = []
    for e in inits:
        if e.predicate != oc.predicate or len(e.args) != len(oc.args):
            continue
        if b0.unify_args(oc.args, e.args) is None:
            continue
        pairs = [(x, y) for x, y in zip(oc.args, e.args) if b0.find(x) != b0.find(y)]
        pairs = [p for p in pairs if b0.separate(*p) is not None]
        if not pairs:
            return
        choices.append(pairs)
    forced = [c[0] for c in choices if len(c) == 1]
    for x, y in forced:
        b0 = b0.separate(x, y)
        if b0 is None:
            return
    open_ = [c for c in choices if len(c) > 1]
    seen = set()
    for combo in itertools.product(*open_):
        b = b0
        for x, y in combo:
            if b.separated(x, y):
                continue
            b = b.separate(x, y)
            if b is None:
                break
        if b is None:
            continue
        key = frozenset(frozenset(p) for p in combo)
        if key in seen:
            continue
        seen.add(key)
        yield Option(FROM_START, START, 0, b)


def _fact_options(plan: Plan, oc: Literal, ctx: Context):
    for row in sorted(ctx.facts.get(oc.predicate, ())):
        if len(row) != len(oc.args):
            continue
        b = plan.bindings.unify_args(oc.args, row)
        if b is not None:
            yield Option(FACT, -1, 0, b)


def _disjunct_options(plan: Plan, oc: Or):
    # one option per disjunct whose equalities are consistent
    for i, conj in enumerate(oc.disjuncts):
        b = fold_equalities(plan.bindings, conj)
        if b is not None:
            yield Option(DISJUNCT, -1, i, b, goals=tuple(conj))


def iter_options(plan: Plan, flaw: Flaw, ctx: Context | None = None):
    """Lazily enumerate establishment options (new steps first)."""
    ctx = ctx or plan.ctx
    oc = flaw.literal
    if isinstance(oc, Or):
        yield from _disjunct_options(plan, oc)
        return
    if oc.fact:
        yield from _fact_options(plan, oc, ctx)
        return
    yield from _new_step_options(plan, oc, ctx)
    yield from _reuse_options(plan, oc, flaw.step, ctx)


def establish_options(plan: Plan, flaw: Flaw) -> list[Option]:
    key = ("opts", flaw.seq)
    opts = plan.memo.get(key)
    if opts is None:
        opts = plan.memo[key] = list(iter_options(plan, flaw))
    return opts


def _push_open(agenda: list, seq: int, literals, sid: int) -> int:
    """Append open conditions so the textually first is popped first."""
    for lit in reversed([l for l in literals if not l.is_equality]):
        agenda.append(Flaw(OPEN, seq, lit, sid))
        seq += 1
    return seq


def build_child(plan: Plan, flaw: Flaw, opt: Option) -> Plan | None:
    ctx = plan.ctx
    agenda = [f for f in plan.agenda if f is not flaw]
    seq = plan.next_seq
    if opt.kind == FACT:
        return plan.derive(bindings=opt.bindings, agenda=tuple(agenda))
    if opt.kind == DISJUNCT:
        seq = _push_open(agenda, seq, opt.goals, flaw.step)
        return plan.derive(bindings=opt.bindings, agenda=tuple(agenda), next_seq=seq)
    consumer = flaw.step
    steps = plan.steps
    order = plan.ordering
    activated = plan.activated
    new_step = None
    if opt.kind == NEW:
        new_step = opt.step
        steps = steps + (new_step,)
        order = order.add_step(new_step.id)
        seq = _push_open(agenda, seq, new_step.clauses[0][0], new_step.id)
    order = order.constrain(opt.producer, consumer)
    if order is None:
        return None
    if opt.activate:
        activated = activated | {(opt.producer, opt.clause)}
        seq = _push_open(agenda, seq, steps[opt.producer].clauses[opt.clause][0], opt.producer)
    link = CausalLink(opt.producer, flaw.literal, consumer, opt.clause)
    child = plan.derive(
        steps=steps,
        links=plan.links + (link,),
        bindings=opt.bindings,
        ordering=order,
        activated=activated,
    )
    found = _threats_to_link(child, link, ctx, filtered=opt.kind != NEW)
    if new_step is not None:
        found += _threats_from_step(child, new_step, ctx, skip=link)
    for s, ci, e, ln in found:
        agenda.append(Flaw(THREAT, seq, e, s, ln, ci))
        seq += 1
    child.agenda = tuple(agenda)
    child.next_seq = seq
    return child


def establish(plan: Plan, flaw: Flaw) -> list[Plan]:
    """Children supporting the open condition ``flaw`` in every viable way."""
    out = []
    for opt in establish_options(plan, flaw):
        child = build_child(plan, flaw, opt)
        if child is not None:
            out.append(child)
    return out


# --------------------------------------------------------------------------
# threats


def _threat_ok(plan: Plan, e: Literal, cond: Literal, ctx: Context, filtered: bool) -> bool:
    if plain_unifiable(plan.bindings, e.args, cond.args):
        if filtered and ctx.seed is not None:
            if plan.bindings.unify_args(e.args, cond.args) is None:
                ctx.counters.threats_suppressed += 1
                return False
        return True
    return False


def _threatening_effects(step: Step, cond: Literal, confronted):
    for ci, (_, effects) in enumerate(step.clauses):
        if (step.id, ci) in confronted:
            continue
        for e in effects:
            if e.predicate == cond.predicate and e.negated != cond.negated and len(e.args) == len(cond.args):
                yield ci, e


def _threats_to_link(plan: Plan, link: CausalLink, ctx: Context, filtered: bool) -> list:
    out = []
    order = plan.ordering
    for step in plan.steps:
        s = step.id
        if s in (START, END) or not order.possibly_between(s, link.producer, link.consumer):
            continue
        for ci, e in _threatening_effects(step, link.condition, plan.confronted):
            if _threat_ok(plan, e, link.condition, ctx, filtered):
                out.append((s, ci, e, link))
    return out


def _threats_from_step(plan: Plan, step: Step, ctx: Context, skip=None) -> list:
    out = []
    order = plan.ordering
    for link in plan.links:
        if link is skip or not order.possibly_between(step.id, link.producer, link.consumer):
            continue
        for ci, e in _threatening_effects(step, link.condition, plan.confronted):
            if _threat_ok(plan, e, link.condition, ctx, True):
                out.append((step.id, ci, e, link))
    return out


def detect_threats(plan: Plan, step: Step | None = None, link: CausalLink | None = None) -> list[Flaw]:
    """Threats introduced by a just-added step or link (as unnumbered flaws)."""
    ctx = plan.ctx
    found = []
    if link is not None:
        found += _threats_to_link(plan, link, ctx, filtered=link.producer in
                                  {s.id for s in plan.steps} and (step is None or step.id != link.producer))
    if step is not None:
        found += _threats_from_step(plan, step, ctx, skip=link)
    return [Flaw(THREAT, -1, e, s, ln, ci) for s, ci, e, ln in found]


def classify_threat(plan: Plan, flaw: Flaw) -> str:
    link = flaw.link
    if (flaw.step, flaw.clause) in plan.confronted:
        return EXPIRED
    if not plan.ordering.possibly_between(flaw.step, link.producer, link.consumer):
        return EXPIRED
    b = plan.bindings
    if b.unify_args(flaw.literal.args, link.condition.args) is None:
        return EXPIRED
    if _codesignate_all(b, flaw.literal.args, link.condition.args):
        return DEFINITE
    return POTENTIAL


def expiry_reason(plan: Plan, flaw: Flaw) -> str | None:
    """``None`` if live, ``"domains"`` if only the domains rule it out."""
    if classify_threat(plan, flaw) != EXPIRED:
        return None
    link = flaw.link
    if (
        plan.ctx is not None
        and plan.ctx.seed is not None
        and (flaw.step, flaw.clause) not in plan.confronted
        and plan.ordering.possibly_between(flaw.step, link.producer, link.consumer)
        and plain_unifiable(plan.bindings, flaw.literal.args, link.condition.args)
    ):
        return "domains"
    return "expired"


def threat_resolutions(plan: Plan, flaw: Flaw) -> list[tuple]:
    """Viable repairs as ``(name, ordering, bindings, new open literal)``."""
    key = ("res", flaw.seq)
    got = plan.memo.get(key)
    if got is not None:
        return got
    out = []
    link, s = flaw.link, flaw.step
    order, b = plan.ordering, plan.bindings
    o = order.constrain(link.consumer, s) if link.consumer != END else None
    if o is not None:
        out.append(("promote", o, b, None))
    o = order.constrain(s, link.producer) if link.producer != START else None
    if o is not None:
        out.append(("demote", o, b, None))
    if flaw.clause and (s, flaw.clause) not in plan.activated:
        for lit in plan.steps[s].clauses[flaw.clause][0]:
            if lit.fact:
                continue
            if lit.is_equality:
                nb = add_binding(b, lit.negate())
                if nb is not None:
                    out.append(("confront", order, nb, None))
            else:
                out.append(("confront", order, b, lit.negate()))
    for x, y in zip(flaw.literal.args, link.condition.args):
        if b.find(x) != b.find(y):
            nb = b.separate(x, y)
            if nb is not None:
                out.append(("separate", order, nb, None))
    plan.memo[key] = out
    return out


def resolve_threat(plan: Plan, flaw: Flaw) -> list[Plan]:
    """Promotion, demotion, then confrontation or separation children."""
    out = []
    agenda = tuple(f for f in plan.agenda if f is not flaw)
    for name, order, b, goal in threat_resolutions(plan, flaw):
        if name == "confront":
            ag = agenda
            seq = plan.next_seq
            if goal is not None:
                ag = ag + (Flaw(OPEN, seq, goal, flaw.step),)
                seq += 1
            out.append(
                plan.derive(
                    bindings=b,
                    agenda=ag,
                    next_seq=seq,
                    confronted=plan.confronted | {(flaw.step, flaw.clause)},
                )
            )
        else:
            out.append(plan.derive(ordering=order, bindings=b, agenda=agenda))
    return out


def discard(plan: Plan, flaw: Flaw) -> Plan:
    """Remove one expired threat; the plan keeps its identity."""
    if expiry_reason(plan, flaw) == "domains":
        plan.ctx.counters.threats_dropped += 1
    p = plan.derive(agenda=tuple(f for f in plan.agenda if f is not flaw))
    p.id, p.parent, p.rank = plan.id, plan.parent, plan.rank
    return p


def purge_expired(plan: Plan) -> Plan:
    """Drop expired threats from the agenda (not a refinement)."""
    keep = []
    dropped = False
    for f in plan.agenda:
        if f.kind == THREAT:
            why = expiry_reason(plan, f)
            if why is not None:
                dropped = True
                if why == "domains":
                    plan.ctx.counters.threats_dropped += 1
                continue
        keep.append(f)
    if not dropped:
        return plan
    p = plan.derive(agenda=tuple(keep))
    p.id = plan.id
    p.parent = plan.parent
    p.rank = plan.rank
    return p


def is_complete(plan: Plan) -> bool:
    """Empty agenda once expired threats are set aside."""
    for f in plan.agenda:
        if f.kind == OPEN or classify_threat(plan, f) != EXPIRED:
            return False
    return True


def initial_plan(inits, goals, ctx: Context, goal_params=()) -> Plan | None:
    """Start and end steps with the goals as open conditions."""
    from .plan import end_step, start_step

    start = start_step(inits)
    end = end_step(goals, goal_params)
    b = Bindings()
    if ctx.seed is not None:
        b = b.restrict_many(ctx.seed.restrictions(end.operator.name, 0, end.instance_vars))
        if b is None:
            return None
    b = fold_equalities(b, end.clauses[0][0])
    if b is None:
        return None
    agenda: list = []
    seq = _push_open(agenda, 0, end.clauses[0][0], END)
    return Plan((start, end), (), b, Ordering.initial(), tuple(agenda), next_seq=seq, ctx=ctx)
