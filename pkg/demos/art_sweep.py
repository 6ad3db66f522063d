"""Sweep the artificial establisher/clobberer family.

For each (establishers, clobberers) split of six extra effects, averages the
LIFO/ZLIFO plan counts over a few seeds.  Handy for seeing where the
zero-commitment preference starts paying off.
"""

import statistics

from pocl.corpus import generate_art
from pocl.engine import SearchConfig, search

SEEDS = range(5)


def main():
    print(f"{'art':>8} {'lifo':>8} {'zlifo':>8} {'ratio':>6}")
    for n_est in range(0, 7, 2):
        n_clob = 6 - n_est
        lifo, zlifo = [], []
        for seed in SEEDS:
            problem, ops = generate_art(n_est, n_clob, seed).load()
            lifo.append(search(problem, ops, SearchConfig("s+oc+uc", "lifo")).created)
            zlifo.append(search(problem, ops, SearchConfig("s+oc", "zlifo")).created)
        a, b = statistics.median(lifo), statistics.median(zlifo)
        print(f"{n_est}-{n_clob:<6} {a:>8.0f} {b:>8.0f} {a / b:>6.2f}")


if __name__ == "__main__":
    main()
