"""Ground-level semantics, independent of the planner's machinery.

Conditions are evaluated directly on sets of ground atoms (quantifiers,
disjunctions, equality and facts included) under the closed world
assumption.  Typed quantifiers range over the objects that have the type in
the initial state.  This module is the yardstick for plan soundness and for
the forward-enumeration oracle used to check computed parameter domains.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

from .lang import Literal, Operator, Or, Problem, is_var, operator_constants


class World:
    def __init__(self, problem: Problem, operators):
        self.problem = problem
        self.operators = {op.name: op for op in operators}
        consts = set(problem.constants())
        for op in operators:
            consts |= operator_constants(op)
        self.universe = sorted(consts)
        self.types = problem.types()
        self.facts = problem.fact_tables

    def objects(self, typ):
        return self.universe if typ is None else sorted(self.types.get(typ, ()))

    # -- conditions --------------------------------------------------------

    def holds(self, cond, state, env) -> bool:
        if isinstance(cond, Literal):
            args = tuple(env.get(a, a) for a in cond.args)
            if cond.is_equality:
                val = args[0] == args[1]
            elif cond.fact:
                val = args in self.facts.get(cond.predicate, ())
            else:
                val = (cond.predicate, args) in state
            return val != cond.negated
        if isinstance(cond, Or):
            return any(self.all_hold(d, state, env) for d in cond.disjuncts)
        spaces = [self.objects(cond.type)] * len(cond.variables)
        test = all if cond.kind == "forall" else any
        return test(
            self.all_hold(cond.body, state, {**env, **dict(zip(cond.variables, combo))})
            for combo in itertools.product(*spaces)
        )

    def all_hold(self, conds, state, env) -> bool:
        return all(self.holds(c, state, env) for c in conds)

    # -- actions -----------------------------------------------------------

    def fired_clauses(self, op: Operator, state, env):
        """``(clause, env)`` for every when-clause instance whose antecedent holds."""
        for clause in op.clauses:
            if clause.forall:
                spaces = [self.objects(t) for t, _ in clause.forall]
                names = [v for _, v in clause.forall]
                for combo in itertools.product(*spaces):
                    e2 = {**env, **dict(zip(names, combo))}
                    if clause.origin == 0 or self.all_hold(clause.antecedent, state, e2):
                        yield clause, e2
            elif clause.origin == 0 or self.all_hold(clause.antecedent, state, env):
                yield clause, env

    def applicable(self, op: Operator, state, env) -> bool:
        return self.all_hold(op.primary.antecedent, state, env)

    def apply(self, op: Operator, state, env) -> frozenset:
        adds, dels = set(), set()
        for clause, e2 in self.fired_clauses(op, state, env):
            for eff in clause.effects:
                atom = (eff.predicate, tuple(e2.get(a, a) for a in eff.args))
                (dels if eff.negated else adds).add(atom)
        return frozenset((state - dels) | adds)

    def initial_state(self) -> frozenset:
        return frozenset((l.predicate, l.args) for l in self.problem.inits)

    def goals_hold(self, state) -> bool:
        return self.all_hold(self.problem.goals, state, {})

    def ground_instances(self, op: Operator, state):
        """Parameter bindings under which ``op`` is applicable in ``state``."""
        pos = [
            c for c in op.primary.antecedent
            if isinstance(c, Literal) and not c.negated and not c.is_equality and not c.fact
        ]
        by_pred: dict = {}
        for p, args in state:
            by_pred.setdefault(p, []).append(args)

        def join(i, env):
            if i == len(pos):
                rest = [v for v in op.parameters if v not in env]
                for combo in itertools.product(self.universe, repeat=len(rest)):
                    e2 = {**env, **dict(zip(rest, combo))}
                    if self.applicable(op, state, e2):
                        yield e2
                return
            lit = pos[i]
            for args in by_pred.get(lit.predicate, ()):
                if len(args) != len(lit.args):
                    continue
                e2 = dict(env)
                ok = True
                for t, a in zip(lit.args, args):
                    if is_var(t):
                        if e2.setdefault(t, a) != a:
                            ok = False
                            break
                    elif t != a:
                        ok = False
                        break
                if ok:
                    yield from join(i + 1, e2)

        seen = set()
        for env in join(0, {}):
            key = tuple(env.get(v) for v in op.parameters)
            if key not in seen:
                seen.add(key)
                yield {v: env[v] for v in op.parameters}


# --------------------------------------------------------------------------
# plan validation


@dataclass
class Report:
    ok: bool
    linearizations: int = 0
    assignments: int = 0
    truncated: bool = False
    error: str = ""
    sequence: list = field(default_factory=list)


def _linearizations(ids, before, cap):
    out = []

    def rec(prefix, left):
        if len(out) >= cap:
            return
        if not left:
            out.append(list(prefix))
            return
        for s in sorted(left):
            if not any(before(t, s) for t in left if t != s):
                prefix.append(s)
                rec(prefix, left - {s})
                prefix.pop()

    rec([], frozenset(ids))
    return out


def _assignments(plan, world: World, cap: int, rng: random.Random):
    b = plan.bindings
    reps = sorted(
        {b.find(v) for s in plan.steps for v in s.instance_vars.values() if is_var(b.find(v))}
    )
    spaces = []
    for r in reps:
        d = b.domain(r)
        spaces.append(sorted(d) if d is not None else world.universe)
    total = 1
    for s in spaces:
        total *= max(len(s), 1)

    def consistent(values):
        env = dict(zip(reps, values))
        for pair in b.neq_pairs():
            x, y = tuple(pair)
            if env.get(x, x) == env.get(y, y):
                return False
        return True

    if total <= cap:
        combos = itertools.product(*spaces)
        truncated = False
    else:
        combos = (tuple(rng.choice(s) for s in spaces) for _ in range(cap * 4))
        truncated = True
    out = []
    for values in combos:
        if consistent(values):
            out.append(dict(zip(reps, values)))
            if len(out) >= cap:
                break
    return out, truncated


def validate_plan(plan, problem: Problem, operators, cap: int = 200, seed: int = 0) -> Report:
    """Execute every (capped) linearization under every (capped) grounding.

    ``operators`` are the operators as written in the domain file; the plan's
    steps are matched to them by name and parameter names.
    """
    world = World(problem, operators)
    rng = random.Random(seed)
    b = plan.bindings
    ids = [s.id for s in plan.steps if s.id > 1]
    lins = _linearizations(ids, plan.ordering.before, cap)
    truncated = len(lins) >= cap
    envs, t2 = _assignments(plan, world, cap, rng)
    truncated = truncated or t2
    if not envs:
        return Report(False, error="bindings admit no ground assignment")
    n = 0
    for env in envs:
        for lin in lins:
            n += 1
            state = world.initial_state()
            seq = []
            for sid in lin:
                step = plan.steps[sid]
                op = world.operators.get(step.operator.name)
                if op is None:
                    return Report(False, error=f"unknown operator {step.operator.name}")
                genv = {}
                for p in op.parameters:
                    t = b.find(step.instance_vars[p])
                    genv[p] = env.get(t, t)
                seq.append((op.name,) + tuple(genv[p] for p in op.parameters))
                if not world.applicable(op, state, genv):
                    return Report(False, n, len(envs), truncated,
                                  f"step {sid} {seq[-1]} not applicable", seq)
                state = world.apply(op, state, genv)
            if not world.goals_hold(state):
                return Report(False, n, len(envs), truncated, "goals not satisfied", seq)
    return Report(True, len(lins), len(envs), truncated)


def simulate(problem: Problem, operators, sequence) -> bool:
    """Run a ground sequence ``[(op, arg, ...), ...]``; True if goals hold."""
    world = World(problem, operators)
    state = world.initial_state()
    for name, *args in sequence:
        op = world.operators[name]
        env = dict(zip(op.parameters, args))
        if not world.applicable(op, state, env):
            return False
        state = world.apply(op, state, env)
    return world.goals_hold(state)


# --------------------------------------------------------------------------
# forward enumeration


def reachable_bindings(problem: Problem, operators, depth: int = 6, max_states: int = 200_000):
    """Every ``(op, clause origin, variable, value)`` occurring in an action
    applicable after at most ``depth - 1`` earlier actions.

    Forall variables of conditional effects count as variables of their
    clause when the antecedent holds for that value.
    """
    world = World(problem, operators)
    frontier = {world.initial_state()}
    seen = set(frontier)
    found: set = set()
    for level in range(depth):
        nxt = set()
        for state in frontier:
            for op in operators:
                for env in world.ground_instances(op, state):
                    for clause, e2 in world.fired_clauses(op, state, env):
                        for v, val in e2.items():
                            found.add((op.name, clause.origin, v, val))
                    if level + 1 < depth:
                        s2 = world.apply(op, state, env)
                        if s2 not in seen and len(seen) < max_states:
                            seen.add(s2)
                            nxt.add(s2)
        frontier = nxt
    return found
