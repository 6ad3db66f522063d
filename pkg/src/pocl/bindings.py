"""Codesignation constraints with refinable variable domains.

A :class:`Bindings` value partitions terms into equivalence classes.  Each
class may carry a finite domain (a frozenset of constants); a class without
one is unconstrained (``TOP``).  A class containing a constant is named by
that constant and its domain is implicitly ``{constant}``.

Values are persistent: every update returns a new object (or ``None`` when
the update is inconsistent) and leaves the receiver untouched.
"""

from __future__ import annotations

from .lang import EQ, Literal, is_var

TOP = None


class Bindings:
    __slots__ = ("_rep", "_members", "_dom", "_neq")

    def __init__(self):
        self._rep: dict = {}  # term -> class representative (only non-trivial entries)
        self._members: dict = {}  # representative -> tuple of member terms
        self._dom: dict = {}  # variable representative -> frozenset
        self._neq: dict = {}  # representative -> frozenset of representatives

    # -- queries -----------------------------------------------------------

    def find(self, term: str) -> str:
        return self._rep.get(term, term)

    def domain(self, term: str):
        r = self._rep.get(term, term)
        if not is_var(r):
            return frozenset((r,))
        return self._dom.get(r, TOP)

    def codesignates(self, a: str, b: str) -> bool:
        return self._rep.get(a, a) == self._rep.get(b, b)

    def separated(self, a: str, b: str) -> bool:
        ra, rb = self._rep.get(a, a), self._rep.get(b, b)
        if ra == rb:
            return False
        if not is_var(ra) and not is_var(rb):
            return True
        if rb in self._neq.get(ra, ()):
            return True
        # a constant that is no longer in the other class's domain
        if not is_var(ra):
            d = self._dom.get(rb)
            return d is not None and ra not in d
        if not is_var(rb):
            d = self._dom.get(ra)
            return d is not None and rb not in d
        da, db = self._dom.get(ra), self._dom.get(rb)
        return da is not None and db is not None and not (da & db)

    def value(self, term: str):
        """The constant a term is bound to, or ``None``."""
        r = self._rep.get(term, term)
        return None if is_var(r) else r

    def members(self, term: str) -> tuple:
        r = self._rep.get(term, term)
        return self._members.get(r, (r,) if r == term else (term, r))

    def classes(self) -> list[tuple]:
        return [tuple(sorted(m)) for m in self._members.values()]

    def neq_pairs(self) -> set:
        return {frozenset((a, b)) for a, ns in self._neq.items() for b in ns}

    def domains(self) -> dict:
        return dict(self._dom)

    def __repr__(self) -> str:
        parts = []
        for rep, mem in sorted(self._members.items()):
            parts.append("=".join(sorted(mem)))
        for a, b in sorted(tuple(sorted(p)) for p in self.neq_pairs()):
            parts.append(f"{a}!={b}")
        for rep, d in sorted(self._dom.items()):
            parts.append(f"{rep}:{{{','.join(sorted(d))}}}")
        return "Bindings(" + ", ".join(parts) + ")"

    # -- updates -----------------------------------------------------------

    def _copy(self) -> "Bindings":
        b = Bindings.__new__(Bindings)
        b._rep = dict(self._rep)
        b._members = dict(self._members)
        b._dom = dict(self._dom)
        b._neq = dict(self._neq)
        return b

    def restrict(self, term: str, values) -> "Bindings | None":
        """Intersect the domain of ``term``'s class with ``values``."""
        if values is TOP:
            return self
        b = self._copy()
        return b if b._restrict(term, frozenset(values)) and b._check({b.find(term)}) else None

    def restrict_many(self, items) -> "Bindings | None":
        b = self._copy()
        touched = set()
        for term, values in items:
            if values is TOP:
                continue
            if not b._restrict(term, frozenset(values)):
                return None
            touched.add(b.find(term))
        return b if b._check(touched) else None

    def equate(self, a: str, b_: str) -> "Bindings | None":
        b = self._copy()
        touched = set()
        return b if b._merge(a, b_, touched) and b._check(touched) else None

    def separate(self, a: str, b_: str) -> "Bindings | None":
        b = self._copy()
        touched = set()
        return b if b._distinct(a, b_, touched) and b._check(touched) else None

    def unify_args(self, xs, ys) -> "Bindings | None":
        if len(xs) != len(ys):
            return None
        b = None
        touched = set()
        for x, y in zip(xs, ys):
            rx, ry = self.find(x) if b is None else b.find(x), self.find(y) if b is None else b.find(y)
            if rx == ry:
                continue
            if b is None:
                b = self._copy()
            if not b._merge(x, y, touched):
                return None
        if b is None:
            return self
        return b if b._check(touched) else None

    def new_bindings(self, xs, ys) -> list:
        """Argument pairs a unification of ``xs`` with ``ys`` would equate."""
        return [(x, y) for x, y in zip(xs, ys) if self.find(x) != self.find(y)]

    # -- internals (mutate a private copy) ---------------------------------

    def _restrict(self, term: str, values: frozenset) -> bool:
        r = self.find(term)
        if not is_var(r):
            return r in values
        cur = self._dom.get(r)
        new = values if cur is None else cur & values
        consts = [n for n in self._neq.get(r, ()) if not is_var(n)]
        if consts:
            new = new.difference(consts)
        if not new:
            return False
        self._dom[r] = new
        return True

    def _merge(self, x: str, y: str, touched: set) -> bool:
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return True
        xv, yv = is_var(rx), is_var(ry)
        if not xv and not yv:
            return False
        if ry in self._neq.get(rx, ()):
            return False
        if not xv:  # keep the constant as representative
            rx, ry = ry, rx
            xv, yv = yv, xv
        # ry absorbs rx
        dx = self._dom.get(rx) if xv else frozenset((rx,))
        dy = self._dom.get(ry) if yv else frozenset((ry,))
        if dx is None:
            d = dy
        elif dy is None:
            d = dx
        else:
            d = dx & dy
            if not d:
                return False
        mx = self._members.get(rx, (rx,))
        my = self._members.get(ry, (ry,))
        for t in mx:
            self._rep[t] = ry
        for t in my:
            self._rep[t] = ry
        self._members.pop(rx, None)
        self._members[ry] = my + mx
        self._dom.pop(rx, None)
        nx = self._neq.pop(rx, frozenset())
        if nx:
            for n in nx:
                self._neq[n] = (self._neq[n] - {rx}) | {ry}
            self._neq[ry] = self._neq.get(ry, frozenset()) | nx
        if yv:
            if d is not None:
                consts = [n for n in self._neq.get(ry, ()) if not is_var(n)]
                if consts:
                    d = d.difference(consts)
                    if not d:
                        return False
                self._dom[ry] = d
            touched.add(ry)
        else:
            # ry is a constant: neighbours may no longer take it
            for n in self._neq.get(ry, ()):
                if is_var(n):
                    dn = self._dom.get(n)
                    if dn is not None and ry in dn:
                        dn = dn - {ry}
                        if not dn:
                            return False
                        self._dom[n] = dn
                        touched.add(n)
        return True

    def _distinct(self, x: str, y: str, touched: set) -> bool:
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return False
        if not is_var(rx) and not is_var(ry):
            return True
        self._neq[rx] = self._neq.get(rx, frozenset()) | {ry}
        self._neq[ry] = self._neq.get(ry, frozenset()) | {rx}
        for a, b in ((rx, ry), (ry, rx)):
            if is_var(a) and not is_var(b):
                d = self._dom.get(a)
                if d is not None and b in d:
                    d = d - {b}
                    if not d:
                        return False
                    self._dom[a] = d
        if is_var(rx):
            touched.add(rx)
        if is_var(ry):
            touched.add(ry)
        return True

    def _check(self, touched) -> bool:
        """Every NEQ-connected group of finitely-bounded classes is colourable."""
        seen: set = set()
        for start in touched:
            start = self.find(start)
            if start in seen or not is_var(start) or start not in self._dom:
                continue
            comp = []
            stack = [start]
            seen.add(start)
            while stack:
                r = stack.pop()
                comp.append(r)
                for n in self._neq.get(r, ()):
                    if n not in seen and is_var(n) and n in self._dom:
                        seen.add(n)
                        stack.append(n)
            if len(comp) > 1 and not self._colourable(comp):
                return False
        return True

    def _colourable(self, comp) -> bool:
        nbrs = {r: [n for n in self._neq.get(r, ()) if n in self._dom and is_var(n)] for r in comp}
        if all(len(self._dom[r]) > len(nbrs[r]) for r in comp):
            return True
        order = sorted(comp, key=lambda r: len(self._dom[r]))
        chosen: dict = {}

        def search(i):
            if i == len(order):
                return True
            r = order[i]
            used = {chosen[n] for n in nbrs[r] if n in chosen}
            for c in sorted(self._dom[r]):
                if c not in used:
                    chosen[r] = c
                    if search(i + 1):
                        return True
                    del chosen[r]
            return False

        return search(0)


def unify(a: Literal, b: Literal, bindings: Bindings) -> Bindings | None:
    """Most general unifier of two literals' arguments under ``bindings``.

    Sign is not compared; callers decide which polarities may meet.
    Fails on predicate or arity mismatch, constant clash, a NEQ violation or
    an empty domain intersection.
    """
    if a.predicate != b.predicate or len(a.args) != len(b.args):
        return None
    return bindings.unify_args(a.args, b.args)


def add_binding(bindings: Bindings, constraint: Literal) -> Bindings | None:
    """Add an ``(eq x y)`` or ``(neq x y)`` constraint."""
    if constraint.predicate != EQ or len(constraint.args) != 2:
        raise ValueError(f"not an equality constraint: {constraint}")
    x, y = constraint.args
    return bindings.separate(x, y) if constraint.negated else bindings.equate(x, y)
