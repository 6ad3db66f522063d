"""Use precomputed parameter domains to prune plan refinements.

Domains live in the binding store (see :mod:`pocl.bindings`), so most of
the work is seeding new steps with their clause's domains and letting
unification intersect them.  The filters below answer the two questions the
engine asks: may this effect establish that condition, and is this threat
real.
"""

from __future__ import annotations

from dataclasses import dataclass

from .bindings import Bindings
from .domains import TOP, DomainTable
from .lang import Literal


@dataclass(frozen=True)
class DomainSeed:
    """Read-only view: (operator, clause origin) -> variable -> domain."""

    table: dict

    @classmethod
    def from_table(cls, table: DomainTable) -> "DomainSeed":
        return cls({k: dict(v) for k, v in table.clauses.items()})

    def lookup(self, op: str, clause: int = 0) -> dict:
        return self.table.get((op, clause), {})

    def restrictions(self, op: str, clause: int, mapping: dict) -> list:
        """``(instance variable, domain)`` pairs for a renamed operator instance."""
        doms = self.lookup(op, clause)
        return [(mapping[v], d) for v, d in doms.items() if d is not TOP and v in mapping]


@dataclass
class PruneCounters:
    establishers_pruned: int = 0
    threats_suppressed: int = 0  # at creation
    threats_dropped: int = 0  # at selection

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def plain_unifiable(bindings: Bindings, xs, ys) -> bool:
    """Unifiability under EQ/NEQ constraints alone, ignoring domains."""
    parent: dict = {}

    def find(t):
        t = bindings.find(t)
        while t in parent:
            t = parent[t]
        return t

    merged = []
    for x, y in zip(xs, ys):
        rx, ry = find(x), find(y)
        if rx == ry:
            continue
        if not rx.startswith("?") and not ry.startswith("?"):
            return False
        if not rx.startswith("?"):
            rx, ry = ry, rx
        parent[rx] = ry
        merged.append((rx, ry))
    # a merge is blocked by a NEQ between the two original classes
    neq = bindings.neq_pairs()
    if not neq:
        return True
    groups: dict = {}
    for t in list(parent) + [r for _, r in merged]:
        groups.setdefault(find(t), set()).add(t)
    for members in groups.values():
        for a in members:
            for b in members:
                if a < b and frozenset((a, b)) in neq:
                    return False
    return True


def filter_establisher(bindings: Bindings, oc: Literal, effect: Literal, seed=None) -> bool:
    """Whether ``effect`` can still establish ``oc`` once domains are applied.

    ``seed`` is a list of ``(variable, domain)`` restrictions for a new
    operator instance; for an existing step pass ``None`` because its
    refined domains are already in ``bindings``.
    """
    b = bindings
    if seed:
        b = b.restrict_many(seed)
        if b is None:
            return False
    return b.unify_args(oc.args, effect.args) is not None


def filter_threat(bindings: Bindings, effect: Literal, condition: Literal) -> bool:
    """True when a threat of ``effect`` against ``condition`` survives the domains."""
    if effect.predicate != condition.predicate or effect.negated == condition.negated:
        return False
    return bindings.unify_args(effect.args, condition.args) is not None


def refine_domains_on_unify(bindings: Bindings, unifier) -> Bindings | None:
    """Apply ``(x, y)`` equalities; merged classes get intersected domains."""
    b = bindings
    for x, y in unifier:
        b = b.equate(x, y)
        if b is None:
            return None
    return b
