"""Partial plans as persistent values."""

from __future__ import annotations

from typing import NamedTuple

from .bindings import Bindings
from .lang import Literal, Operator, WhenClause, is_var, render_literal
from .ordering import END, START, Ordering


class Step(NamedTuple):
    """An operator instance.  ``clauses`` holds the renamed when-clauses as
    ``(antecedent, effects)`` pairs, primary first."""

    id: int
    operator: Operator
    instance_vars: dict
    clauses: tuple

    @property
    def preconditions(self) -> tuple:
        return self.clauses[0][0]


def instantiate(op: Operator, sid: int) -> Step:
    mapping = {p: f"{p}.{sid}" for p in op.parameters}
    clauses = tuple(
        (
            tuple(c.substitute(mapping) for c in cl.antecedent),
            tuple(e.substitute(mapping) for e in cl.effects),
        )
        for cl in op.clauses
    )
    return Step(sid, op, mapping, clauses)


def start_step(inits) -> Step:
    op = Operator("*start*", (), WhenClause((), tuple(inits)))
    return Step(START, op, {}, (((), tuple(inits)),))


def end_step(goals, parameters=()) -> Step:
    op = Operator("*end*", tuple(parameters), WhenClause(tuple(goals)))
    return instantiate(op, END)


class CausalLink(NamedTuple):
    producer: int
    condition: Literal
    consumer: int
    clause: int = 0  # when-clause of the producer that supplies the effect

    def __str__(self) -> str:
        return f"{self.producer} -{render_literal(self.condition)}-> {self.consumer}"


OPEN, THREAT = "open", "threat"


class Flaw(NamedTuple):
    """Agenda item.  Open conditions use ``literal``/``step``; threats use
    ``step`` (the threatener), ``link``, ``clause`` and ``literal`` (the
    threatening effect)."""

    kind: str
    seq: int
    literal: Literal
    step: int
    link: CausalLink | None = None
    clause: int = 0

    @property
    def is_open(self) -> bool:
        return self.kind == OPEN

    @property
    def is_threat(self) -> bool:
        return self.kind == THREAT

    @property
    def is_fact(self) -> bool:
        return self.kind == OPEN and self.literal.fact

    def key(self):
        """Identity ignoring insertion order."""
        return (self.kind, self.literal, self.step, self.link, self.clause)

    def __str__(self) -> str:
        if self.kind == OPEN:
            return f"open {render_literal(self.literal)}@{self.step}"
        return f"threat {self.step}:{render_literal(self.literal)} on [{self.link}]"


class Plan:
    """Steps, links, bindings, ordering and agenda.

    ``activated`` holds ``(step, clause)`` pairs whose antecedent has been
    subgoaled; ``confronted`` pairs whose antecedent has been denied.  The
    ``ctx`` attribute points at the search context shared by all plans of
    one search.  ``memo`` caches per-flaw refinement data and is the only
    mutable part; it never affects a plan's meaning.
    """

    __slots__ = (
        "steps", "links", "bindings", "ordering", "agenda", "activated",
        "confronted", "next_seq", "id", "parent", "ctx", "memo", "rank",
    )

    def __init__(self, steps, links, bindings, ordering, agenda, activated=frozenset(),
                 confronted=frozenset(), next_seq=0, id=0, parent=None, ctx=None):
        self.steps: tuple = steps
        self.links: tuple = links
        self.bindings: Bindings = bindings
        self.ordering: Ordering = ordering
        self.agenda: tuple = agenda
        self.activated: frozenset = activated
        self.confronted: frozenset = confronted
        self.next_seq: int = next_seq
        self.id: int = id
        self.parent = parent
        self.ctx = ctx
        self.memo: dict = {}
        self.rank = None

    def derive(self, **changes) -> "Plan":
        p = Plan.__new__(Plan)
        for name in ("steps", "links", "bindings", "ordering", "agenda", "activated",
                     "confronted", "next_seq", "ctx"):
            setattr(p, name, changes.get(name, getattr(self, name)))
        p.id = 0
        p.parent = self.id
        p.memo = {}
        p.rank = None
        return p

    @property
    def open_conditions(self) -> list:
        return [f for f in self.agenda if f.kind == OPEN]

    @property
    def threats(self) -> list:
        return [f for f in self.agenda if f.kind == THREAT]

    def ground(self, term: str) -> str:
        return self.bindings.find(term)

    def __repr__(self) -> str:
        return f"<Plan #{self.id} S={len(self.steps) - 2} agenda={len(self.agenda)}>"


class Metrics(NamedTuple):
    S: int
    OC: int
    UC: int
    CL: int
    F: int


def plan_metrics(plan: Plan) -> Metrics:
    oc = uc = f = 0
    for flaw in plan.agenda:
        if flaw.kind == THREAT:
            uc += 1
        elif flaw.literal.fact:
            f += 1
        else:
            oc += 1
    return Metrics(len(plan.steps) - 2, oc, uc, len(plan.links), f)


def _show(lit: Literal, b: Bindings) -> str:
    return render_literal(lit._replace(args=tuple(b.find(a) for a in lit.args)))


def step_label(step: Step, b: Bindings) -> str:
    args = [b.find(v) for v in step.instance_vars.values()]
    return "(" + " ".join([step.operator.name] + args) + ")"


def linearization(plan: Plan) -> list[int]:
    ids = [s.id for s in plan.steps if s.id not in (START, END)]
    return [START] + plan.ordering.linearization(ids) + [END]


def render_plan(plan: Plan) -> str:
    """Steps in a valid order, then links and the binding store."""
    b = plan.bindings
    lines = ["steps:"]
    for sid in linearization(plan):
        lines.append(f"  {sid:>3} {step_label(plan.steps[sid], b)}")
    if plan.links:
        lines.append("links:")
        for ln in plan.links:
            lines.append(f"  {ln.producer} -{_show(ln.condition, b)}-> {ln.consumer}")
    free = sorted(
        {v for s in plan.steps for v in s.instance_vars.values() if is_var(b.find(v))}
    )
    if free:
        lines.append("unbound:")
        for v in free:
            d = b.domain(v)
            lines.append(f"  {v}" + ("" if d is None else " in {" + " ".join(sorted(d)) + "}"))
    if plan.agenda:
        lines.append("agenda:")
        for f in plan.agenda:
            lines.append(f"  {f}")
    return "\n".join(lines)
