"""Forward propagation of operator parameter domains.

Starting from the initial state, positive atoms are matched against operator
preconditions.  Each precondition keeps an *individual* domain per variable;
each when-clause keeps an *intersected* domain per parameter, the
intersection of the individual domains of its relevant preconditions (the
primary ones plus the clause's own antecedent).  A clause whose relevant
preconditions are all matched and whose intersected domains are all
nonempty propagates its effects, with variables standing for their
intersected domains.  Domains only grow, so the loop reaches a fixpoint.

Negative and equality preconditions are not matched; equalities are applied
once at the end.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .lang import (
    EQ,
    Literal,
    Operator,
    goal_operator,
    is_var,
    normalize_for_preprocessing,
    operator_constants,
    render_literal,
)

TOP = None
END_NAME = "*end*"


@dataclass
class DomainTable:
    """Intersected domains per when-clause plus unreachable preconditions.

    ``clauses`` maps ``(operator name, clause origin)`` to an ordered dict
    ``variable -> frozenset | TOP``.  ``unreachable`` maps the same keys to
    the literals that were never matched.
    """

    clauses: dict = field(default_factory=dict)
    unreachable: dict = field(default_factory=dict)
    universe: frozenset = frozenset()
    iterations: int = 0

    def domain(self, op: str, clause: int, var: str):
        return self.clauses[(op, clause)][var]

    def get(self, op: str, clause: int = 0) -> dict:
        return self.clauses.get((op, clause), {})

    @property
    def unreachable_conditions(self) -> list:
        return [lit for lits in self.unreachable.values() for lit in lits]

    def __eq__(self, other) -> bool:
        if not isinstance(other, DomainTable):
            return NotImplemented
        return (
            self.clauses == other.clauses
            and self.unreachable == other.unreachable
        )

    def to_json(self) -> str:
        out = []
        for (op, k), vars_ in self.clauses.items():
            out.append(
                {
                    "operator": op,
                    "clause": k,
                    "domains": {v: (None if d is TOP else sorted(d)) for v, d in vars_.items()},
                    "unreachable": [render_literal(l) for l in self.unreachable.get((op, k), ())],
                }
            )
        return json.dumps(out, indent=2)


# --------------------------------------------------------------------------
# indexing


@dataclass
class _Clause:
    op: str
    origin: int
    params: tuple
    pres: list  # indices into the precondition list
    effects: tuple  # positive, non-equality effect literals
    eqs: tuple  # positive equality preconditions (primary and own)
    top: frozenset  # parameters occurring in no relevant precondition
    var_pres: dict = field(default_factory=dict)  # var -> precondition ids containing it


@dataclass
class _Pre:
    literal: Literal
    clauses: list  # clause ids this precondition is relevant to
    owner: int  # clause id that owns it (for reporting)


def _matchable(lit) -> bool:
    return isinstance(lit, Literal) and not lit.negated and not lit.is_equality


def _prepare(operators, inits, goals, constants=()):
    ops = [normalize_for_preprocessing(op) for op in operators]
    if goals:
        end = normalize_for_preprocessing(goal_operator(goals, END_NAME))
        ops.append(end)
    universe = {a for lit in inits for a in lit.args} | set(constants or ())
    for op in ops:
        universe |= operator_constants(op)
    clauses: list[_Clause] = []
    pres: list[_Pre] = []
    for op in ops:
        primary_ids = []
        for lit in op.primary.antecedent:
            if _matchable(lit):
                primary_ids.append(len(pres))
                pres.append(_Pre(lit, [], len(clauses)))
        primary_eqs = tuple(l for l in op.primary.antecedent if isinstance(l, Literal) and l.is_equality and not l.negated)
        for clause in op.clauses:
            cid = len(clauses)
            own = []
            if clause.origin != 0:
                for lit in clause.antecedent:
                    if _matchable(lit):
                        own.append(len(pres))
                        pres.append(_Pre(lit, [cid], cid))
            ids = primary_ids + own
            for i in primary_ids:
                pres[i].clauses.append(cid)
            eqs = primary_eqs
            if clause.origin != 0:
                eqs = eqs + tuple(l for l in clause.antecedent if isinstance(l, Literal) and l.is_equality and not l.negated)
            var_pres: dict = {}
            for i in ids:
                for v in pres[i].literal.variables():
                    var_pres.setdefault(v, [])
                    if i not in var_pres[v]:
                        var_pres[v].append(i)
            effects = tuple(e for e in clause.effects if _matchable(e))
            top = frozenset(p for p in op.parameters if p not in var_pres)
            clauses.append(_Clause(op.name, clause.origin, op.parameters, ids, effects, eqs, top, var_pres))
    by_pred: dict = {}
    for i, p in enumerate(pres):
        by_pred.setdefault((p.literal.predicate, len(p.literal.args)), []).append(i)
    return clauses, pres, by_pred, frozenset(universe)


def _unify_into(eff: Literal, dom: dict, pre: Literal, universe) -> dict | None:
    """Match an effect whose variables range over ``dom`` with a precondition.

    Returns precondition variable -> contributed constant set, or ``None``.
    Only constant clashes and constants outside an effect variable's domain
    fail; two effect variables with disjoint domains simply contribute
    nothing.
    """
    parent: dict = {}

    def find(x):
        while parent.get(x, x) != x:
            x = parent[x]
        return x

    for ea, pa in zip(eff.args, pre.args):
        a = ("e", ea) if is_var(ea) else ("c", ea)
        b = ("p", pa) if is_var(pa) else ("c", pa)
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
    groups: dict = {}
    for x in set(parent) | set(parent.values()):
        groups.setdefault(find(x), []).append(x)
    out: dict = {}
    for members in groups.values():
        consts = {t for k, t in members if k == "c"}
        evars = [t for k, t in members if k == "e"]
        pvars = [t for k, t in members if k == "p"]
        if len(consts) > 1:
            return None
        if consts:
            (c,) = consts
            for v in evars:
                d = dom.get(v, TOP)
                if d is not TOP and c not in d:
                    return None
            values = frozenset(consts)
        else:
            values = universe
            for v in evars:
                d = dom.get(v, TOP)
                if d is not TOP:
                    values = values & d
        for v in pvars:
            out[v] = values
    return out


def _run(operators, inits, goals, improved: bool, snapshots: list | None = None, constants=()):
    clauses, pres, by_pred, universe = _prepare(operators, inits, goals, constants)
    individual = [{v: set() for v in p.literal.variables()} for p in pres]
    matched = [False] * len(pres)
    inter: list[dict] = [
        {v: (TOP if v in c.top else frozenset()) for v in c.params} for c in clauses
    ]
    enabled = [False] * len(clauses)

    # W holds (clause id or -1 for start, effect literal) pairs
    work = [(-1, lit) for lit in inits if _matchable(lit)]
    candidates = {cid for cid, c in enumerate(clauses) if not c.pres}
    iterations = 0
    while True:
        touched: set = set()
        for src, eff in work:
            dom = inter[src] if src >= 0 else {}
            for pi in by_pred.get((eff.predicate, len(eff.args)), ()):
                contrib = _unify_into(eff, dom, pres[pi].literal, universe)
                if contrib is None:
                    continue
                grew = not matched[pi]
                matched[pi] = True
                ind = individual[pi]
                for v, values in contrib.items():
                    if not values <= ind[v]:
                        ind[v] |= values
                        grew = True
                if grew:
                    touched.add(pi)
        for pi in touched:
            candidates.update(pres[pi].clauses)
        work = []
        for cid in sorted(candidates):
            c = clauses[cid]
            if not all(matched[i] for i in c.pres):
                continue
            cur = inter[cid]
            enlarged = []
            for v in c.params:
                if v in c.top:
                    continue
                new = None
                for i in c.var_pres[v]:
                    d = individual[i][v]
                    new = frozenset(d) if new is None else new & d
                if len(new) > len(cur[v]):
                    cur[v] = new
                    enlarged.append(v)
            ok = all(d is TOP or d for d in cur.values())
            if not ok:
                continue
            fresh = not enabled[cid]
            enabled[cid] = True
            if not (fresh or enlarged):
                continue
            if improved and not fresh:
                grown = set(enlarged)
                work.extend((cid, e) for e in c.effects if grown.intersection(e.args))
            else:
                work.extend((cid, e) for e in c.effects)
        candidates = set()
        iterations += 1
        if snapshots is not None:
            snapshots.append(
                ([{v: (d if d is TOP else frozenset(d)) for v, d in x.items()} for x in inter],
                 [{v: frozenset(s) for v, s in x.items()} for x in individual])
            )
        if not work:
            break

    # equality restriction, to a fixpoint
    for cid, c in enumerate(clauses):
        dom = inter[cid]
        changed = True
        while changed:
            changed = False
            for eq in c.eqs:
                u, v = eq.args
                if is_var(u) and is_var(v):
                    du, dv = dom.get(u, TOP), dom.get(v, TOP)
                    if du is TOP and dv is TOP:
                        continue
                    d = dv if du is TOP else du if dv is TOP else du & dv
                    for x in (u, v):
                        if dom.get(x, TOP) != d:
                            dom[x] = d
                            changed = True
                else:
                    x, k = (u, v) if is_var(u) else (v, u)
                    if not is_var(x):
                        continue
                    d = dom.get(x, TOP)
                    d = frozenset((k,)) if d is TOP else d & {k}
                    if dom.get(x, TOP) != d:
                        dom[x] = d
                        changed = True

    table = DomainTable(universe=universe, iterations=iterations)
    for cid, c in enumerate(clauses):
        if c.op == END_NAME and not c.params and all(matched[i] for i in c.pres):
            continue
        key = (c.op, c.origin)
        table.clauses[key] = {v: inter[cid][v] for v in c.params}
        missing = [pres[i].literal for i in c.pres if pres[i].owner == cid and not matched[i]]
        if missing:
            table.unreachable[key] = missing
    return table


def find_parameter_domains(operators, inits, goals=None, snapshots: list | None = None,
                           constants=()) -> DomainTable:
    """Compute intersected parameter domains by clause-level propagation.

    ``constants`` adds objects that occur nowhere in the operators, inits or
    goals (fact-table entries, say) to the universal domain.
    """
    return _run(operators, inits, goals, improved=False, snapshots=snapshots, constants=constants)


def find_parameter_domains_improved(operators, inits, goals=None, constants=()) -> DomainTable:
    """Same result, propagating only effects that mention an enlarged parameter."""
    return _run(operators, inits, goals, improved=True, constants=constants)


# --------------------------------------------------------------------------
# union domains

_ANY = "*"  # a parameter occurring in no relevant precondition


def propagate_union_domains(operators, inits, goals=None, constants=()) -> DomainTable:
    """Domains reachable by chaining back from each precondition on its own.

    Partially bound predications are propagated one at a time; a predication
    is skipped when an identical or variant one was already seen.
    """
    clauses, pres, by_pred, universe = _prepare(operators, inits, goals, constants)
    union = [{v: set() for v in p.literal.variables()} for p in pres]
    seen: set = set()
    queue: list = []

    def push(pred, args):
        key = (pred, args)
        if key not in seen:
            seen.add(key)
            queue.append(key)

    for lit in inits:
        if _matchable(lit):
            push(lit.predicate, lit.args)

    def emit(cid, binding):
        c = clauses[cid]
        for e in c.effects:
            args = []
            for a in e.args:
                if not is_var(a):
                    args.append(a)
                elif a in binding:
                    args.append(binding[a])
                else:
                    args.append(_ANY if a in c.top else None)
            push(e.predicate, tuple(args))

    for cid, c in enumerate(clauses):
        if not c.pres:
            emit(cid, {})

    while queue:
        pred, args = queue.pop()
        for pi in by_pred.get((pred, len(args)), ()):
            pre = pres[pi].literal
            binding: dict = {}
            ok = True
            for a, p in zip(args, pre.args):
                if is_var(p):
                    if a is None or a == _ANY:
                        continue
                    if binding.get(p, a) != a:
                        ok = False
                        break
                    binding[p] = a
                elif a is not None and a != _ANY and a != p:
                    ok = False
                    break
            if not ok:
                continue
            for v, p in zip(pre.args, args):
                if is_var(v):
                    if p == _ANY:
                        union[pi][v] |= universe
                    elif p is not None:
                        union[pi][v].add(p)
            for cid in pres[pi].clauses:
                emit(cid, binding)

    table = DomainTable(universe=universe)
    for cid, c in enumerate(clauses):
        if c.op == END_NAME and not c.params:
            continue
        doms = {}
        for v in c.params:
            if v in c.top:
                doms[v] = TOP
            else:
                acc: set = set()
                for i in c.var_pres[v]:
                    acc |= union[i][v]
                doms[v] = frozenset(acc)
        table.clauses[(c.op, c.origin)] = doms
    return table


def domain_ratio(intersected: DomainTable, union: DomainTable):
    """Average intersected size over average union size (TOP excluded).

    Returns ``None`` when either average is zero.  The goal pseudo-operator
    is not counted.
    """
    isizes, usizes = [], []
    for key, doms in intersected.clauses.items():
        if key[0] == END_NAME:
            continue
        udoms = union.clauses.get(key, {})
        for v, d in doms.items():
            u = udoms.get(v, TOP)
            if d is TOP or u is TOP:
                continue
            isizes.append(len(d))
            usizes.append(len(u))
    if not isizes or not sum(isizes) or not sum(usizes):
        return None
    return (sum(isizes) / len(isizes)) / (sum(usizes) / len(usizes))


def render_domain_report(table: DomainTable) -> str:
    """One ``(op (?x a b ...) ... unreachable-literals)`` list per when-clause."""
    lines = []
    for key, doms in table.clauses.items():
        parts = [key[0]]
        for v, d in doms.items():
            if d is TOP:
                parts.append(f"({v} T)")
            else:
                parts.append("(" + " ".join([v] + sorted(d)) + ")")
        for lit in table.unreachable.get(key, ()):
            parts.append(render_literal(lit))
        lines.append("(" + " ".join(parts) + ")")
    return "\n".join(lines)
