"""Walk through parameter-domain preprocessing on two small domains.

First the three-operator toy whose answer is easy to check by hand, then the
molecular-genetics domain, where the domains rule out every transform step
as an establisher of the goal and the search shrinks accordingly.
"""

from pocl import domain_ratio, find_parameter_domains, propagate_union_domains, render_domain_report, search
from pocl.corpus import load_case
from pocl.engine import SearchConfig


def show(name):
    problem, ops = load_case(name).load()
    table = find_parameter_domains(ops, problem.inits, problem.goals, constants=problem.constants())
    union = propagate_union_domains(ops, problem.inits, problem.goals, constants=problem.constants())
    print(f"== {name}")
    print(render_domain_report(table))
    print(f"intersected/union size ratio: {float(domain_ratio(table, union)):.3f}")
    for dom in (False, True):
        res = search(problem, ops, SearchConfig(use_domains=dom))
        print(f"  domains {'on ' if dom else 'off'}: {res.outcome}, {res.created} plans created,"
              f" {res.counters.establishers_pruned} establishers pruned")
    print()


if __name__ == "__main__":
    for case in ("three-ops", "molgen-rat-insulin"):
        show(case)
