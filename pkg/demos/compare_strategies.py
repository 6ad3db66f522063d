"""Plans created by each flaw-selection strategy on a handful of corpus cases.

    python demos/compare_strategies.py [case ...]

Cases that hit the plan limit show as ">N".  The LIFO baseline is the slow
one; the zero-commitment variants usually win by a wide margin on the
recursive puzzles.
"""

import sys

from pocl.bench import emit_results, run_benchmark

CONFIGS = ["lifo/s+oc+uc", "zlifo/s+oc", "zlifo-star/s+oc+0.1uc+f", "lcfr/s+oc+0.1uc+f"]
DEFAULT_CASES = ["sussman", "t-of-h3", "fix3", "tower-invert4", "trains1"]


def main(cases):
    records = run_benchmark(cases, CONFIGS, limits=5000)
    print(emit_results(records, "table", baseline=CONFIGS[0]))


if __name__ == "__main__":
    main(sys.argv[1:] or DEFAULT_CASES)
