"""A partial-order causal-link planner with pluggable flaw selection and
parameter-domain pruning.

Typical use::

    from pocl import parse_domain, parse_problem, search, SearchConfig
    ops = parse_domain(open("domain.sexp").read())
    problem = parse_problem(open("problem.sexp").read(), ops)
    result = search(problem, ops, SearchConfig("s+oc", "zlifo"))
"""

from .bindings import Bindings
from .domains import (
    DomainTable,
    domain_ratio,
    find_parameter_domains,
    find_parameter_domains_improved,
    propagate_union_domains,
    render_domain_report,
)
from .engine import SearchConfig, SearchResult, search
from .lang import Literal, Operator, Problem, parse_domain, parse_problem
from .ordering import Ordering
from .plan import Plan, render_plan
from .sexp import ParseError
from .strategies import PRESETS, RankWeights
from .validate import validate_plan

__all__ = [
    "Bindings", "DomainTable", "Literal", "Operator", "Ordering", "ParseError", "Plan",
    "PRESETS", "Problem", "RankWeights", "SearchConfig", "SearchResult", "domain_ratio",
    "find_parameter_domains", "find_parameter_domains_improved", "parse_domain",
    "parse_problem", "propagate_union_domains", "render_domain_report", "render_plan",
    "search", "validate_plan",
]
