"""Regenerate src/pocl/corpus/manifest.json from the case directories.

Tags are read off the parsed files; provenance notes and expected-result
envelopes come from the tables below.
"""

import json
import sys
from pathlib import Path

from pocl.lang import Or, Quantified, parse_domain, parse_problem

ROOT = Path(__file__).resolve().parents[1] / "src" / "pocl" / "corpus"

PROVENANCE = {
    "three-ops": "re-encoded from the three-operator worked example used to illustrate domain propagation",
    "t-of-h1": "re-encoded from prose: three-disk Towers of Hanoi with one generic move operator",
    "t-of-h3": "re-encoded from prose: three-disk Towers of Hanoi with one move operator per disk",
    "sussman": "UCPOP-style blocks world (puton with conditional clear effects), Sussman anomaly",
    "tower-invert4": "same blocks world, inverting a four-block tower",
    "test-ferry": "re-encoded from prose: typed ferry domain (board, sail, debark)",
    "molgen-rat-insulin": "re-encoded from prose: Molgen rat-insulin fragment (ligate, transform, screen ...)",
    "monkey-test1": "re-encoded from prose: UCPOP monkey-and-bananas",
    "monkey-test2": "re-encoded from prose: UCPOP monkey-and-bananas, harder goal",
    "fixa": "re-encoded from prose: fridge repair (change a compressor behind a screwed backplane)",
    "fix3": "re-encoded from prose: flat-tire domain, wheel already jacked up with loose nuts",
    "fixit": "re-encoded from prose: flat-tire domain, full problem",
    "trains1": "re-encoded from prose: TRAINS freight world, move oranges",
    "trains2": "re-encoded from prose: TRAINS, oranges and bananas",
    "trains3": "re-encoded from prose: TRAINS, make orange juice and deliver it",
    "t-trains1": "typed TRAINS variant (type literals in preconditions)",
    "t-trains2": "typed TRAINS variant",
    "t-trains3": "typed TRAINS variant",
    "office5": "re-encoded from prose: office world, briefcase with universally quantified goal",
    "office6": "re-encoded from prose: office world with two more people",
    "move-boxes": "re-encoded from prose: STRIPS-world robot pushing boxes between rooms",
    "move-boxes-1": "STRIPS-world variant",
    "move-boxes-2": "STRIPS-world variant",
    "move-boxes-a": "STRIPS-world variant",
}
for k in range(1, 7):
    PROVENANCE[f"tw-{k}"] = (
        f"re-encoded from prose: TileWorld on a 3x3 grid, {k} holes; grid cells and "
        "carry counts 0-4 are fact tables"
    )


def _walk(conds):
    for c in conds:
        if isinstance(c, Quantified):
            yield c
            yield from _walk(c.body)
        elif isinstance(c, Or):
            for d in c.disjuncts:
                yield from _walk(d)
        else:
            yield c


def tags(ops, problem):
    out = set()
    if any(op.secondaries for op in ops):
        out.add("has-conditional-effects")
    conds = [c for op in ops for cl in op.clauses for c in _walk(cl.antecedent)]
    conds += list(_walk(problem.goals))
    if any(cl.forall for op in ops for cl in op.clauses) or any(
        isinstance(c, Quantified) and c.kind == "forall" for c in conds
    ):
        out.add("has-universals")
    if problem.fact_tables or any(getattr(c, "fact", False) for c in conds):
        out.add("has-facts")
    return sorted(out)


def main():
    expected = {}
    exp_file = ROOT.parents[2] / "tools" / "expected.json"
    if exp_file.exists():
        expected = json.loads(exp_file.read_text())
    cases = []
    for d in sorted(p for p in ROOT.iterdir() if (p / "domain.sexp").exists()):
        ops = parse_domain((d / "domain.sexp").read_text())
        problem = parse_problem((d / "problem.sexp").read_text(), ops)
        cases.append({
            "name": d.name,
            "dir": d.name,
            "tags": tags(ops, problem),
            "provenance": PROVENANCE[d.name],
            "expected": expected.get(d.name, {}),
        })
    (ROOT / "manifest.json").write_text(json.dumps({"version": 1, "cases": cases}, indent=2) + "\n")
    print(f"{len(cases)} cases", file=sys.stderr)


if __name__ == "__main__":
    main()
