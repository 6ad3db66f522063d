"""Benchmark problems shipped with the package, plus the ART generator.

Each case lives in ``<name>/domain.sexp`` and ``<name>/problem.sexp`` next
to this file; ``manifest.json`` lists the cases with their tags, a note on
where the encoding comes from, and the result envelopes the tests check.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path

from ..lang import Operator, Problem, parse_domain, parse_problem

ROOT = Path(__file__).resolve().parent
MANIFEST = ROOT / "manifest.json"

TAGS = ("has-conditional-effects", "has-universals", "has-facts")


@dataclass
class BenchmarkCase:
    name: str
    domain_text: str
    problem_text: str
    tags: frozenset = frozenset()
    provenance: str = ""
    expected: dict = field(default_factory=dict)
    domain_path: Path | None = None
    problem_path: Path | None = None

    def operators(self) -> list[Operator]:
        return parse_domain(self.domain_text)

    def problem(self) -> Problem:
        return parse_problem(self.problem_text, self.operators())

    def load(self) -> tuple[Problem, list[Operator]]:
        ops = self.operators()
        return parse_problem(self.problem_text, ops), ops


@lru_cache(maxsize=1)
def manifest() -> dict:
    return json.loads(MANIFEST.read_text())


def case_names() -> list[str]:
    return [c["name"] for c in manifest()["cases"]]


def load_case(name: str) -> BenchmarkCase:
    """A shipped case by name, or an ART case written ``art-<est>-<clob>[-<seed>]``."""
    if name.startswith("art-"):
        parts = [int(p) for p in name.split("-")[1:]]
        if len(parts) not in (2, 3):
            raise KeyError(name)
        return generate_art(*parts)
    for entry in manifest()["cases"]:
        if entry["name"] == name:
            return _from_entry(entry)
    raise KeyError(name)


def all_cases() -> list[BenchmarkCase]:
    return [_from_entry(e) for e in manifest()["cases"]]


def _from_entry(entry: dict) -> BenchmarkCase:
    d = ROOT / entry.get("dir", entry["name"])
    dom, prob = d / "domain.sexp", d / "problem.sexp"
    return BenchmarkCase(
        entry["name"], dom.read_text(), prob.read_text(),
        frozenset(entry.get("tags", ())), entry.get("provenance", ""),
        dict(entry.get("expected", {})), dom, prob,
    )


def load_files(domain_path, problem_path) -> BenchmarkCase:
    dp, pp = Path(domain_path), Path(problem_path)
    return BenchmarkCase(pp.stem, dp.read_text(), pp.read_text(), domain_path=dp, problem_path=pp)


# --------------------------------------------------------------------------
# ART-#est-#clob


N_GOALS = 10


def generate_art(n_est: int, n_clob: int, seed: int = 0) -> BenchmarkCase:
    """Two layers of ten ground operators.

    ``a1-k`` turns ``(i k)`` into ``(p k)`` and ``a2-k`` turns ``(p k)`` into
    the goal ``(g k)``.  ``n_est`` neighbour pairs, picked by ``seed`` from
    either layer, get an extra establisher: ``a1-k`` also achieves
    ``(p k+1)``, or ``a2-k`` also achieves ``(g k+1)``.  In each layer the
    top ``n_clob`` operators delete their left neighbour's precondition
    (``a1-k`` deletes ``(i k-1)``, ``a2-k`` deletes ``(p k-1)``), which chains
    them into a forced order.
    """
    for v in (n_est, n_clob):
        if not isinstance(v, int) or isinstance(v, bool) or not 0 <= v <= 9:
            raise ValueError("n_est and n_clob must be integers in 0..9")
    rng = random.Random(seed * 1000 + n_est * 10 + n_clob)
    pairs = [(layer, k) for layer in (1, 2) for k in range(N_GOALS - 1)]
    est = set(rng.sample(pairs, n_est))
    clob = set(range(N_GOALS - n_clob, N_GOALS))
    lines = [f"; ART-{n_est}-{n_clob}, seed {seed}"]
    for layer, pre, add in ((1, "i", "p"), (2, "p", "g")):
        for k in range(N_GOALS):
            effects = [f"({add}{k})"]
            if (layer, k) in est:
                effects.append(f"({add}{k + 1})")
            if k in clob:
                effects.append(f"(not ({pre}{k - 1}))")
            lines.append(
                f"(define (operator a{layer}-{k})\n  :precondition ({pre}{k})\n"
                f"  :effect (and {' '.join(effects)}))"
            )
    domain = "\n".join(lines) + "\n"
    order = list(range(N_GOALS))
    rng.shuffle(order)
    inits = " ".join(f"(i{k})" for k in range(N_GOALS))
    goals = " ".join(f"(g{k})" for k in order)
    problem = f"(define (problem art-{n_est}-{n_clob})\n  :inits ({inits})\n  :goal (and {goals}))\n"
    name = f"art-{n_est}-{n_clob}-{seed}"
    return BenchmarkCase(name, domain, problem, frozenset(),
                         "generated: two-layer establish/clobber scheme")


# --------------------------------------------------------------------------
# random worlds for differential tests


def random_world(seed: int, n_ops: int = 5) -> BenchmarkCase:
    """A small random STRIPS world with conditional effects and inequalities.

    Four predicates of arity 0-2 over three constants.  Every operator has
    one or two parameters; some get a when-clause.  Not necessarily
    solvable.
    """
    rng = random.Random(seed)
    consts = ("a", "b", "c")
    preds = {f"p{i}": rng.randint(0, 2) for i in range(4)}
    vars_ = ("?x", "?y")

    def atom(pool):
        name = rng.choice(sorted(preds))
        return f"({name}{''.join(' ' + rng.choice(pool) for _ in range(preds[name]))})"

    ops = []
    for k in range(n_ops):
        params = vars_[: rng.randint(1, 2)]
        pool = list(params) + [rng.choice(consts)]
        pre = [atom(params) for _ in range(rng.randint(1, 3))]
        if len(params) == 2 and rng.random() < 0.3:
            pre.append("(neq ?x ?y)")
        eff = [atom(pool) for _ in range(rng.randint(1, 2))]
        if rng.random() < 0.3:
            eff.append(f"(not {atom(pool)})")
        if rng.random() < 0.4:
            eff.append(f"(when {atom(pool)} {atom(pool)})")
        ops.append(
            f"(define (operator o{k})\n  :parameters ({' '.join(params)})\n"
            f"  :precondition (and {' '.join(pre)})\n  :effect (and {' '.join(eff)}))"
        )
    inits = sorted({atom(list(consts)) for _ in range(rng.randint(2, 6))})
    goal = atom(list(consts))
    problem = f"(define (problem rw-{seed})\n  :inits ({' '.join(inits)})\n  :goal {goal})\n"
    return BenchmarkCase(f"rw-{seed}", "\n".join(ops) + "\n", problem, frozenset(), "generated: random world")
