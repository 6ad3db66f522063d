"""Plan ranking and flaw selection."""

from __future__ import annotations

import re
from fractions import Fraction
from typing import NamedTuple

from .plan import OPEN, THREAT, Flaw, Plan, plan_metrics
from .refine import (
    DEFINITE,
    EXPIRED,
    FACT,
    FROM_START,
    classify_threat,
    establish_options,
    iter_options,
    threat_resolutions,
)

LIFO, ZLIFO, ZLIFO_STAR, LCFR, LC = "lifo", "zlifo", "zlifo-star", "lcfr", "lc"
STRATEGIES = (LIFO, ZLIFO, ZLIFO_STAR, LCFR, LC)


class RankWeights(NamedTuple):
    w_S: Fraction = Fraction(1)
    w_OC: Fraction = Fraction(1)
    w_UC: Fraction = Fraction(0)
    w_CL: Fraction = Fraction(0)
    w_F: Fraction = Fraction(0)

    @classmethod
    def parse(cls, text: str) -> "RankWeights":
        """Accept a preset-style sum (``s+oc+0.1uc+f``) or five numbers."""
        text = text.strip().lower()
        if "," in text:
            parts = [Fraction(p.strip()) for p in text.split(",")]
            if len(parts) != 5:
                raise ValueError("expected five weights: S,OC,UC,CL,F")
            return cls(*parts)
        w = dict.fromkeys(("s", "oc", "uc", "cl", "f"), Fraction(0))
        for term in text.split("+"):
            m = re.fullmatch(r"\s*([0-9.]*)\s*\*?\s*(s|oc|uc|cl|f)\s*", term)
            if not m:
                raise ValueError(f"bad rank term {term!r}")
            coef, name = m.groups()
            w[name] += Fraction(coef) if coef else Fraction(1)
        return cls(w["s"], w["oc"], w["uc"], w["cl"], w["f"])

    def __str__(self) -> str:
        names = ("S", "OC", "UC", "CL", "F")
        out = []
        for n, v in zip(names, self):
            if v == 1:
                out.append(n)
            elif v:
                out.append(f"{float(v):g}{n}")
        return "+".join(out) or "0"


S_OC_UC = RankWeights(1, 1, 1, 0, 0)
S_OC = RankWeights(1, 1, 0, 0, 0)
S_OC_01UC_F = RankWeights(1, 1, Fraction(1, 10), 0, 1)
PRESETS = {"s+oc+uc": S_OC_UC, "s+oc": S_OC, "s+oc+0.1uc+f": S_OC_01UC_F}


def rank_plan(plan: Plan, w: RankWeights) -> Fraction:
    m = plan_metrics(plan)
    return w.w_S * m.S + w.w_OC * m.OC + w.w_UC * m.UC + w.w_CL * m.CL + w.w_F * m.F


def count_establishers(plan: Plan, oc: Flaw, cap: int = 2) -> int:
    """Viable establishers of ``oc``, counting no further than ``cap``."""
    opts = plan.memo.get(("opts", oc.seq))
    if opts is not None:
        return min(len(opts), cap)
    n = 0
    for _ in iter_options(plan, oc):
        n += 1
        if n >= cap:
            break
    return n


def repair_cost(plan: Plan, flaw: Flaw) -> int:
    """Exact number of children the flaw's repair would produce."""
    if flaw.kind == OPEN:
        return len(establish_options(plan, flaw))
    if classify_threat(plan, flaw) == EXPIRED:
        return 0
    return len(threat_resolutions(plan, flaw))


def _latest(flaws):
    return max(flaws, key=lambda f: f.seq) if flaws else None


def _split(plan: Plan, d_sep: bool):
    """(threats to handle now, deferred threats, open conditions)."""
    now, later, ocs = [], [], []
    for f in plan.agenda:
        if f.kind == OPEN:
            ocs.append(f)
            continue
        cls = classify_threat(plan, f)
        if cls == EXPIRED:
            now.append(f)  # selecting it simply discards it
        elif cls == DEFINITE or not d_sep:
            now.append(f)
        else:
            later.append(f)
    return now, later, ocs


def _single_tier(plan: Plan, oc: Flaw) -> int:
    opts = establish_options(plan, oc)
    return 1 if opts[0].kind in (FROM_START, FACT) else 0


def select_flaw(plan: Plan, strategy: str = LIFO, d_sep: bool = True) -> Flaw:
    """Pick the next flaw to repair; the agenda must be nonempty."""
    if not plan.agenda:
        raise ValueError("empty agenda")
    now, later, ocs = _split(plan, d_sep)
    ocs_lifo = sorted(ocs, key=lambda f: -f.seq)

    if strategy == LIFO:
        return _latest(now) or _latest(ocs) or _latest(later)

    if strategy == ZLIFO:
        if now:
            return _latest(now)
        singles = []
        for oc in ocs_lifo:
            n = count_establishers(plan, oc, 2)
            if n == 0:
                return oc
            if n == 1:
                singles.append(oc)
        if singles:
            best = min(singles, key=lambda f: (_single_tier(plan, f), -f.seq))
            return best
        return _latest(ocs) or _latest(later)

    if strategy == ZLIFO_STAR:
        ones = None
        for oc in ocs_lifo:
            n = count_establishers(plan, oc, 2)
            if n == 0:
                return oc
            if n == 1 and ones is None:
                ones = oc
        if ones is not None:
            return ones
        return _latest(now) or _latest(ocs) or _latest(later)

    if strategy == LCFR:
        pool = now + ocs or later
        return min(pool, key=lambda f: (repair_cost(plan, f), -f.seq))

    if strategy == LC:
        if now:
            return _latest(now)
        if ocs:
            return min(ocs, key=lambda f: (repair_cost(plan, f), -f.seq))
        return _latest(later)

    raise ValueError(f"unknown strategy {strategy!r}")
