"""Operator and problem language.

The surface syntax is the UCPOP dialect::

    (define (operator puton)
      :parameters (?x ?y ?z)
      :precondition (and (on ?x ?z) (clear ?x) (clear ?y) (neq ?y ?z) (neq ?x ?y))
      :effect (and (on ?x ?y) (not (on ?x ?z))
                   (when (neq ?z table) (clear ?z))
                   (when (neq ?y table) (not (clear ?y)))))

    (define (problem sussman)
      :inits ((on c a) (on a table) (on b table) (clear c) (clear b) (clear table))
      :goal (and (on a b) (on b c)))

Terms are plain strings: variables start with ``?`` and are lower case,
constants are upper case.  Predicates, keywords and operator names are lower
case.  ``(neq a b)`` is stored as a negated ``eq`` literal.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from typing import ClassVar, NamedTuple, Union

from .sexp import ParseError, SList, Sym, position, read_all

EQ = "eq"


def is_var(term: str) -> bool:
    return term.startswith("?")


class Literal(NamedTuple):
    predicate: str
    args: tuple = ()
    negated: bool = False
    fact: bool = False

    @property
    def is_equality(self) -> bool:
        return self.predicate == EQ

    def negate(self) -> "Literal":
        return self._replace(negated=not self.negated)

    def variables(self) -> list[str]:
        return [a for a in self.args if is_var(a)]

    def substitute(self, mapping) -> "Literal":
        return self._replace(args=tuple(mapping.get(a, a) for a in self.args))

    def __str__(self) -> str:
        return render_literal(self)


@dataclass(frozen=True)
class Or:
    disjuncts: tuple  # tuple of conjunctions (tuples of conditions)

    # lets a disjunctive open condition sit in an agenda next to literals
    negated: ClassVar[bool] = False
    fact: ClassVar[bool] = False
    is_equality: ClassVar[bool] = False

    def variables(self) -> list[str]:
        out: list = []
        for d in self.disjuncts:
            for c in d:
                if isinstance(c, (Literal, Or)):
                    out.extend(c.variables())
        return list(dict.fromkeys(out))

    def substitute(self, mapping) -> "Or":
        return Or(_substitute_conds_tuple(self.disjuncts, mapping))

    def __str__(self) -> str:
        return render_condition(self)


def _substitute_conds_tuple(disjuncts, mapping) -> tuple:
    return tuple(_substitute_conds(d, mapping) for d in disjuncts)


@dataclass(frozen=True)
class Quantified:
    kind: str  # "forall" or "exists"
    variables: tuple
    type: str | None
    body: tuple


Condition = Union[Literal, Or, Quantified]


@dataclass(frozen=True)
class WhenClause:
    """Antecedent conjunction plus the effects asserted when it holds.

    ``forall`` lists ``(type, variable)`` pairs of universal quantifiers that
    wrap the clause in the source; ``origin`` is the index of the clause in
    its operator as written (0 for the primary clause).
    """

    antecedent: tuple = ()
    effects: tuple = ()
    forall: tuple = ()
    origin: int = 0


@dataclass(frozen=True)
class Operator:
    name: str
    parameters: tuple
    primary: WhenClause
    secondaries: tuple = ()

    @property
    def clauses(self) -> tuple:
        return (self.primary,) + self.secondaries

    @property
    def is_flat(self) -> bool:
        return all(
            not c.forall and all(isinstance(a, Literal) for a in c.antecedent)
            for c in self.clauses
        )


@dataclass(frozen=True)
class Problem:
    name: str
    inits: tuple
    goals: tuple
    fact_tables: dict = field(default_factory=dict)
    domain: str | None = None

    def constants(self) -> set:
        found = {a for lit in self.inits for a in lit.args}
        found.update(_condition_constants(self.goals))
        for rows in self.fact_tables.values():
            for row in rows:
                found.update(row)
        return found

    def types(self) -> dict:
        """Unary initial predications, read as type extensions."""
        out: dict[str, set] = {}
        for lit in self.inits:
            if len(lit.args) == 1:
                out.setdefault(lit.predicate, set()).add(lit.args[0])
        return {k: frozenset(v) for k, v in out.items()}


# --------------------------------------------------------------------------
# reading


def _word(form, what="symbol") -> str:
    if not isinstance(form, Sym):
        raise ParseError(f"expected {what}", *position(form))
    return form.text


def _head(form) -> str | None:
    if isinstance(form, SList) and form and isinstance(form[0], Sym):
        return form[0].text.lower().lstrip(":")
    return None


def _term(form) -> str:
    text = _word(form, "term")
    if text.startswith("?"):
        if len(text) == 1:
            raise ParseError("empty variable name", form.line, form.col)
        return text.lower()
    return text.upper()


def _atom(form, *, negated=False, fact=False) -> Literal:
    if not isinstance(form, SList) or not form:
        raise ParseError("expected an atomic formula", *position(form))
    pred = _word(form[0], "predicate").lower().lstrip(":")
    if pred in _CONNECTIVES:
        raise ParseError(f"'{pred}' is not allowed here", form.line, form.col)
    return Literal(pred, tuple(_term(a) for a in form[1:]), negated, fact)


_CONNECTIVES = {"and", "or", "not", "forall", "exists", "when", "fact", "neq"}


def _varspec(form):
    if not isinstance(form, SList) or not form:
        raise ParseError("expected a quantifier variable list", *position(form))
    first = _word(form[0])
    if first.startswith("?"):
        return None, tuple(_term(v) for v in form)
    vars_ = tuple(_term(v) for v in form[1:])
    if not vars_ or not all(is_var(v) for v in vars_):
        raise ParseError("bad typed variable list", form.line, form.col)
    return first.lower(), vars_


def _condition(form) -> list:
    """Parse a goal/precondition into a conjunction (list of conditions)."""
    if isinstance(form, SList) and not form:
        return []  # () is the empty conjunction
    head = _head(form)
    if head == "and":
        out = []
        for sub in form[1:]:
            out.extend(_condition(sub))
        return out
    if head == "or":
        return [Or(tuple(tuple(_condition(sub)) for sub in form[1:]))]
    if head in ("forall", "exists"):
        if len(form) != 3:
            raise ParseError(f"malformed {head}", form.line, form.col)
        typ, vars_ = _varspec(form[1])
        return [Quantified(head, vars_, typ, tuple(_condition(form[2])))]
    if head == "not":
        if len(form) != 2:
            raise ParseError("malformed not", form.line, form.col)
        inner = form[1]
        ih = _head(inner)
        if ih == "eq":
            return [_equality(inner, negated=True)]
        if ih == "fact":
            raise ParseError("negated facts are not supported", inner.line, inner.col)
        return [_atom(inner, negated=True)]
    if head == "eq":
        return [_equality(form)]
    if head == "neq":
        return [_equality(form, negated=True)]
    if head == "fact":
        if len(form) != 2:
            raise ParseError("malformed fact", form.line, form.col)
        return [_atom(form[1], fact=True)]
    return [_atom(form)]


def _equality(form, negated=False) -> Literal:
    if len(form) != 3:
        raise ParseError("eq/neq takes two terms", form.line, form.col)
    return Literal(EQ, (_term(form[1]), _term(form[2])), negated)


def _effect(form, clauses: list, primary: list, forall=()):
    head = _head(form)
    if head == "and":
        for sub in form[1:]:
            _effect(sub, clauses, primary, forall)
    elif head == "when":
        if len(form) != 3:
            raise ParseError("malformed when", form.line, form.col)
        ante = tuple(_condition(form[1]))
        effs: list = []
        _effect_literals(form[2], effs)
        clauses.append(WhenClause(ante, tuple(effs), forall))
    elif head == "forall":
        if len(form) != 3:
            raise ParseError("malformed forall", form.line, form.col)
        typ, vars_ = _varspec(form[1])
        inner = forall + tuple((typ, v) for v in vars_)
        lits: list = []
        _effect(form[2], clauses, lits, inner)
        if lits:
            clauses.append(WhenClause((), tuple(lits), inner))
    else:
        _effect_literals(form, primary)


def _effect_literals(form, out: list):
    head = _head(form)
    if head == "and":
        for sub in form[1:]:
            _effect_literals(sub, out)
    elif head == "not":
        if len(form) != 2:
            raise ParseError("malformed not", form.line, form.col)
        out.append(_atom(form[1], negated=True))
    elif head in ("when", "forall", "exists", "or", "fact", "eq", "neq"):
        raise ParseError(f"'{head}' is not allowed inside an effect here", form.line, form.col)
    else:
        out.append(_atom(form))


def _keywords(form, start: int) -> dict:
    out = {}
    items = form[start:]
    if len(items) % 2:
        raise ParseError("keyword without value", form.line, form.col)
    for key, value in zip(items[::2], items[1::2]):
        k = _word(key, "keyword").lower()
        if not k.startswith(":"):
            raise ParseError(f"expected keyword, got {k}", key.line, key.col)
        out[k] = value
    return out


def _parse_operator(form) -> Operator:
    spec = form[1]
    if not (isinstance(spec, SList) and len(spec) == 2 and _head(spec) == "operator"):
        raise ParseError("expected (define (operator NAME) ...)", form.line, form.col)
    name = _word(spec[1], "operator name").lower()
    kw = _keywords(form, 2)
    unknown = set(kw) - {":parameters", ":precondition", ":effect"}
    if unknown:
        raise ParseError(f"unknown keyword {sorted(unknown)[0]}", form.line, form.col)
    params_form = kw.get(":parameters", SList())
    if not isinstance(params_form, SList):
        raise ParseError("parameters must be a list", *position(params_form))
    params, typing = [], []
    for p in params_form:
        if isinstance(p, SList):  # (type ?v ...) declares and restricts
            typ, vars_ = _varspec(p)
            if typ is None:
                raise ParseError("typed parameter needs a type", p.line, p.col)
            params.extend(vars_)
            typing.extend(Literal(typ, (v,)) for v in vars_)
        else:
            params.append(_term(p))
    if any(not is_var(p) for p in params):
        raise ParseError("parameters must be variables", params_form.line, params_form.col)
    if len(set(params)) != len(params):
        raise ParseError(f"duplicate parameter in {name}", params_form.line, params_form.col)
    pre = tuple(typing) + (tuple(_condition(kw[":precondition"])) if ":precondition" in kw else ())
    clauses: list = []
    primary_effects: list = []
    if ":effect" in kw:
        _effect(kw[":effect"], clauses, primary_effects)
    op = Operator(name, tuple(params), WhenClause(pre, tuple(primary_effects)), tuple(clauses))
    return _tidy_variables(op)


def _flatten_forms(forms):
    for f in forms:
        if isinstance(f, SList) and _head(f) != "define":
            yield from _flatten_forms(f)
        else:
            yield f


def parse_domain(text: str) -> list[Operator]:
    """Parse a domain file into a list of operators.

    Quantified variables are renamed apart from parameters and from each
    other; variables used but not declared become extra parameters.
    """
    ops: list[Operator] = []
    seen: dict[str, tuple] = {}
    for form in _flatten_forms(read_all(text)):
        if not isinstance(form, SList) or _head(form) != "define" or len(form) < 2:
            raise ParseError("expected (define (operator ...) ...)", *position(form))
        sub = form[1]
        if _head(sub) == "domain":
            continue
        op = _parse_operator(form)
        if op.name in seen:
            raise ParseError(f"duplicate operator {op.name}", form.line, form.col)
        seen[op.name] = position(form)
        ops.append(op)
    check_arities(ops)
    return ops


def check_arities(ops, extra=(), known=None) -> dict:
    arity = dict(known or {})
    lits = [lit for op in ops for lit in _operator_literals(op)]
    for lit in itertools.chain(lits, extra):
        if lit.is_equality:
            continue
        prev = arity.setdefault(lit.predicate, len(lit.args))
        if prev != len(lit.args):
            raise ParseError(
                f"predicate {lit.predicate} used with arity {len(lit.args)} and {prev}"
            )
    return arity


def parse_problem(text: str, operators=None) -> Problem:
    """Parse a problem file.

    When ``operators`` is given, predicate arities are checked against them.
    """
    forms = list(_flatten_forms(read_all(text)))
    if len(forms) != 1:
        raise ParseError("expected exactly one (define (problem NAME) ...) form")
    form = forms[0]
    if not (isinstance(form, SList) and _head(form) == "define" and _head(form[1]) == "problem"):
        raise ParseError("expected (define (problem NAME) ...)", *position(form))
    name = _word(form[1][1], "problem name").lower()
    kw = _keywords(form, 2)
    unknown = set(kw) - {":inits", ":init", ":goal", ":facts", ":domain"}
    if unknown:
        raise ParseError(f"unknown keyword {sorted(unknown)[0]}", form.line, form.col)
    inits = []
    init_form = kw.get(":inits", kw.get(":init", SList()))
    for item in init_form:
        if _head(item) == "not":
            raise ParseError("initial literals must be positive", item.line, item.col)
        lit = _atom(item)
        if lit.variables():
            raise ParseError(f"initial literal {lit} is not ground", item.line, item.col)
        inits.append(lit)
    goals = tuple(_condition(kw[":goal"])) if ":goal" in kw else ()
    facts: dict[str, set] = {}
    for item in kw.get(":facts", SList()):
        lit = _atom(item)
        if lit.variables():
            raise ParseError(f"fact {lit} is not ground", item.line, item.col)
        facts.setdefault(lit.predicate, set()).add(lit.args)
    fluent = {lit.predicate for lit in inits}
    clash = fluent & set(facts)
    if clash:
        raise ParseError(f"predicate {sorted(clash)[0]} is both a fact and a fluent")
    domain = _word(kw[":domain"]).lower() if ":domain" in kw else None
    problem = Problem(
        name, tuple(dict.fromkeys(inits)), goals,
        {k: frozenset(v) for k, v in facts.items()}, domain,
    )
    goal_lits = [g for g in _walk_literals(goals)]
    fact_lits = [Literal(p, row) for p, rows in problem.fact_tables.items() for row in rows]
    known = check_arities(operators) if operators is not None else {}
    check_arities((), list(problem.inits) + goal_lits + fact_lits, known)
    return problem


# --------------------------------------------------------------------------
# variable hygiene


def _walk_literals(conds):
    for c in conds:
        if isinstance(c, Literal):
            yield c
        elif isinstance(c, Or):
            for d in c.disjuncts:
                yield from _walk_literals(d)
        else:
            yield from _walk_literals(c.body)


def _operator_literals(op):
    for c in op.clauses:
        yield from _walk_literals(c.antecedent)
        yield from c.effects


def _condition_constants(conds) -> set:
    return {a for lit in _walk_literals(conds) for a in lit.args if not is_var(a)}


def operator_constants(op) -> set:
    return {a for lit in _operator_literals(op) for a in lit.args if not is_var(a)}


def _free_vars(conds, bound=frozenset(), out=None) -> list:
    out = [] if out is None else out
    for c in conds:
        if isinstance(c, Literal):
            for a in c.args:
                if is_var(a) and a not in bound and a not in out:
                    out.append(a)
        elif isinstance(c, Or):
            for d in c.disjuncts:
                _free_vars(d, bound, out)
        else:
            _free_vars(c.body, bound | set(c.variables), out)
    return out


class _Renamer:
    def __init__(self, taken):
        self.taken = set(taken)

    def fresh(self, var: str) -> str:
        if var not in self.taken:
            self.taken.add(var)
            return var
        stem = var.split("_")[0] if "_" in var and var.rsplit("_", 1)[1].isdigit() else var
        for i in itertools.count(1):
            cand = f"{stem}_{i}"
            if cand not in self.taken:
                self.taken.add(cand)
                return cand


def _rename_conds(conds, ren: _Renamer, mapping: dict) -> tuple:
    out = []
    for c in conds:
        if isinstance(c, Literal):
            out.append(c.substitute(mapping))
        elif isinstance(c, Or):
            out.append(Or(tuple(_rename_conds(d, ren, mapping) for d in c.disjuncts)))
        else:
            inner = dict(mapping)
            new_vars = []
            for v in c.variables:
                nv = ren.fresh(v)
                inner[v] = nv
                new_vars.append(nv)
            out.append(Quantified(c.kind, tuple(new_vars), c.type, _rename_conds(c.body, ren, inner)))
    return tuple(out)


def _tidy_variables(op: Operator) -> Operator:
    params = list(op.parameters)
    for clause in op.clauses:
        bound = frozenset(v for _, v in clause.forall)
        for v in _free_vars(clause.antecedent, bound) + _free_vars(clause.effects, bound):
            if v not in params:
                params.append(v)
    ren = _Renamer(params)
    clauses = []
    for clause in op.clauses:
        mapping = {}
        forall = []
        for typ, v in clause.forall:
            nv = ren.fresh(v)
            mapping[v] = nv
            forall.append((typ, nv))
        clauses.append(
            replace(
                clause,
                antecedent=_rename_conds(clause.antecedent, ren, mapping),
                effects=tuple(e.substitute(mapping) for e in clause.effects),
                forall=tuple(forall),
            )
        )
    return Operator(op.name, tuple(params), clauses[0], _reindex(clauses[1:]))


def _reindex(secondaries) -> tuple:
    return tuple(replace(c, origin=i) for i, c in enumerate(secondaries, start=1))


def goal_operator(goals, name: str = "*end*") -> Operator:
    """Goals as the preconditions of a dummy final operator."""
    params = _free_vars(goals)
    return _tidy_variables(Operator(name, tuple(params), WhenClause(tuple(goals))))


# --------------------------------------------------------------------------
# rewrites


def _flatten_for_preprocessing(conds, params: list) -> list:
    out = []
    for c in conds:
        if isinstance(c, Literal):
            if not c.fact:
                out.append(c)
        elif isinstance(c, Quantified) and c.kind == "exists":
            for v in c.variables:
                if v not in params:
                    params.append(v)
                if c.type:
                    out.append(Literal(c.type, (v,)))
            out.extend(_flatten_for_preprocessing(c.body, params))
        # disjunctions and universal preconditions are dropped
    return out


def normalize_for_preprocessing(op: Operator) -> Operator:
    """Remove quantifiers, disjunctions and facts so domains can be computed.

    Disjunctive, fact and universally quantified preconditions are deleted;
    existential variables and the variables of universally quantified effects
    become parameters, with any type restriction conjoined to the antecedent.
    """
    params = list(op.parameters)
    primary = WhenClause(
        tuple(_flatten_for_preprocessing(op.primary.antecedent, params)),
        op.primary.effects,
    )
    secondaries = []
    for clause in op.secondaries:
        ante = []
        for typ, v in clause.forall:
            if v not in params:
                params.append(v)
            if typ:
                ante.append(Literal(typ, (v,)))
        ante.extend(_flatten_for_preprocessing(clause.antecedent, params))
        secondaries.append(WhenClause(tuple(dict.fromkeys(ante)), clause.effects, (), clause.origin))
    return Operator(op.name, tuple(params), primary, tuple(secondaries))


def _universe(typ, constants, types) -> list:
    if typ is None:
        return sorted(constants)
    return sorted((types or {}).get(typ, ()))


def _expand_conds(conds, params: list, constants, types) -> list:
    """Return the alternatives (lists of literals) a condition expands to."""
    alts: list[list] = [[]]
    for c in conds:
        if isinstance(c, Literal):
            options = [[c]]
        elif isinstance(c, Or):
            options = []
            for d in c.disjuncts:
                options.extend(_expand_conds(d, params, constants, types))
        elif c.kind == "exists":
            for v in c.variables:
                if v not in params:
                    params.append(v)
            head = [Literal(c.type, (v,)) for v in c.variables] if c.type else []
            options = [head + alt for alt in _expand_conds(c.body, params, constants, types)]
        else:
            options = [[]]
            for inst in _instances(c, constants, types):
                sub = _expand_conds(inst, params, constants, types)
                options = [a + b for a in options for b in sub]
        alts = [a + o for a in alts for o in options]
    return [list(dict.fromkeys(a)) for a in alts]


def _expand_keep_or(conds, params: list, constants, types) -> list:
    """Like :func:`_expand_conds` but disjunctions survive as :class:`Or`."""
    out: list = []
    for c in conds:
        if isinstance(c, Literal):
            out.append(c)
        elif isinstance(c, Or):
            ds = tuple(tuple(_expand_keep_or(d, params, constants, types)) for d in c.disjuncts)
            if len(ds) == 1:
                out.extend(ds[0])
            else:
                out.append(Or(ds))
        elif c.kind == "exists":
            for v in c.variables:
                if v not in params:
                    params.append(v)
            if c.type:
                out.extend(Literal(c.type, (v,)) for v in c.variables)
            out.extend(_expand_keep_or(c.body, params, constants, types))
        else:
            for inst in _instances(c, constants, types):
                out.extend(_expand_keep_or(inst, params, constants, types))
    return list(dict.fromkeys(out))


def _freshen(conds, tag: str) -> tuple:
    """Rename existential variables so each universal instance owns its own."""
    out = []
    for c in conds:
        if isinstance(c, Literal):
            out.append(c)
        elif isinstance(c, Or):
            out.append(Or(tuple(_freshen(d, tag) for d in c.disjuncts)))
        elif c.kind == "exists":
            mapping = {v: f"{v}-{tag}" for v in c.variables}
            body = _freshen(_substitute_conds(c.body, mapping), tag)
            out.append(Quantified("exists", tuple(mapping.values()), c.type, body))
        else:
            out.append(Quantified(c.kind, c.variables, c.type, _freshen(c.body, tag)))
    return tuple(out)


def _instances(c: Quantified, constants, types):
    """Bodies of a universal condition, one per binding of its variables."""
    values = _universe(c.type, constants, types)
    for combo in itertools.product(values, repeat=len(c.variables)):
        inst = _substitute_conds(c.body, dict(zip(c.variables, combo)))
        yield _freshen(inst, "-".join(x.lower() for x in combo))


def _substitute_conds(conds, mapping) -> tuple:
    out = []
    for c in conds:
        if isinstance(c, Literal):
            out.append(c.substitute(mapping))
        elif isinstance(c, Or):
            out.append(Or(tuple(_substitute_conds(d, mapping) for d in c.disjuncts)))
        else:
            inner = {k: v for k, v in mapping.items() if k not in c.variables}
            out.append(Quantified(c.kind, c.variables, c.type, _substitute_conds(c.body, inner)))
    return tuple(out)


def expand_universals(op: Operator, constants, types=None, keep_or: bool = False) -> list[Operator]:
    """Compile an operator for the planner.

    Universal preconditions and effects are replaced by their instances over
    ``constants`` (or over ``types[t]`` for a quantifier restricted to type
    ``t``); existential variables become parameters.  A disjunctive primary
    precondition yields one operator per disjunct, a disjunctive antecedent
    one when-clause per disjunct.  Every clause keeps ``origin`` pointing at
    the source clause so precomputed domains can be looked up.

    With ``keep_or`` the primary precondition is not split; its
    disjunctions stay in place as :class:`Or` conditions instead.
    """
    params = list(op.parameters)
    if keep_or:
        primaries = [_expand_keep_or(op.primary.antecedent, params, constants, types)]
    else:
        primaries = _expand_conds(op.primary.antecedent, params, constants, types)
    secondaries = []
    for clause in op.secondaries:
        fvars = [v for _, v in clause.forall]
        spaces = [_universe(t, constants, types) for t, _ in clause.forall]
        for combo in itertools.product(*spaces):
            mapping = dict(zip(fvars, combo))
            ante = _substitute_conds(clause.antecedent, mapping)
            effects = tuple(e.substitute(mapping) for e in clause.effects)
            for alt in _expand_conds(ante, params, constants, types):
                secondaries.append(WhenClause(tuple(alt), effects, (), clause.origin))
    return [
        Operator(op.name, tuple(params), WhenClause(tuple(alt), op.primary.effects), tuple(secondaries))
        for alt in primaries
    ]


def expand_goals(goals, constants, types=None, keep_or: bool = False) -> list[tuple]:
    """Goal alternatives after quantifier expansion (usually exactly one)."""
    params: list = []
    if keep_or:
        return [tuple(_expand_keep_or(goals, params, constants, types))]
    return [tuple(alt) for alt in _expand_conds(goals, params, constants, types)]


# --------------------------------------------------------------------------
# writing


def render_literal(lit: Literal) -> str:
    if lit.is_equality:
        return f"({'neq' if lit.negated else 'eq'} {' '.join(lit.args)})"
    body = "(" + " ".join((lit.predicate,) + tuple(lit.args)) + ")"
    if lit.fact:
        body = f"(fact {body})"
    return f"(not {body})" if lit.negated else body


def render_condition(c) -> str:
    if isinstance(c, Literal):
        return render_literal(c)
    if isinstance(c, Or):
        return "(or " + " ".join(render_conjunction(d) for d in c.disjuncts) + ")"
    spec = " ".join(c.variables)
    if c.type:
        spec = f"{c.type} {spec}"
    return f"({c.kind} ({spec}) {render_conjunction(c.body)})"


def render_conjunction(conds) -> str:
    if len(conds) == 1:
        return render_condition(conds[0])
    return "(and" + "".join(" " + render_condition(c) for c in conds) + ")"


def _render_effects(effects) -> str:
    if len(effects) == 1:
        return render_literal(effects[0])
    return "(and" + "".join(" " + render_literal(e) for e in effects) + ")"


def _render_clause(clause: WhenClause) -> str:
    if clause.antecedent or not clause.forall:
        text = f"(when {render_conjunction(clause.antecedent)} {_render_effects(clause.effects)})"
    else:
        text = _render_effects(clause.effects)
    for typ, v in reversed(clause.forall):
        spec = f"{typ} {v}" if typ else v
        text = f"(forall ({spec}) {text})"
    return text


def render_operator(op: Operator) -> str:
    parts = [render_literal(e) for e in op.primary.effects]
    parts += [_render_clause(c) for c in op.secondaries]
    effect = parts[0] if len(parts) == 1 else "(and" + "".join(" " + p for p in parts) + ")"
    return (
        f"(define (operator {op.name})\n"
        f"  :parameters ({' '.join(op.parameters)})\n"
        f"  :precondition {render_conjunction(op.primary.antecedent)}\n"
        f"  :effect {effect})"
    )


def render_domain(ops) -> str:
    return "\n\n".join(render_operator(op) for op in ops) + "\n"


def render_problem(problem: Problem) -> str:
    inits = " ".join(render_literal(i) for i in problem.inits)
    facts = " ".join(
        render_literal(Literal(p, row)) for p in sorted(problem.fact_tables)
        for row in sorted(problem.fact_tables[p])
    )
    text = f"(define (problem {problem.name})\n  :inits ({inits})\n  :goal {render_conjunction(problem.goals)}"
    if facts:
        text += f"\n  :facts ({facts})"
    return text + ")\n"
