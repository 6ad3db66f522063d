"""``pocl solve | preprocess | bench``.

Exit status: 0 solution found (or command succeeded), 1 search exhausted or
hit its limit, 2 bad usage, 3 unreadable or unparsable input.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from .sexp import ParseError

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INPUT = 0, 1, 2, 3


def _on_off(text: str) -> bool:
    t = text.lower()
    if t in ("on", "yes", "true", "1"):
        return True
    if t in ("off", "no", "false", "0"):
        return False
    raise argparse.ArgumentTypeError(f"expected on/off, got {text!r}")


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pocl", description="Partial-order causal-link planner.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="search for a plan")
    s.add_argument("domain")
    s.add_argument("problem")
    s.add_argument("--strategy", default="lifo",
                   choices=["lifo", "zlifo", "zlifo-star", "lcfr", "lc"])
    s.add_argument("--rank", default="s+oc+uc", help="preset or weight sum, e.g. s+oc+0.1uc+f")
    s.add_argument("--d-sep", type=_on_off, default=None, metavar="on|off")
    s.add_argument("--use-domains", type=_on_off, default=False, metavar="on|off")
    s.add_argument("--limit", type=int, default=40_000)
    s.add_argument("--search", choices=["bestf", "idbf"], default="bestf")
    s.add_argument("--shuffle-seed", type=int, default=None)
    s.add_argument("--tie-break", choices=["lifo", "fifo"], default="lifo")
    s.add_argument("--report-domains", action="store_true")
    s.add_argument("--format", choices=["text", "json"], default="text")
    s.add_argument("--trace", action="store_true", help="one line per popped plan, to stderr")

    q = sub.add_parser("preprocess", help="compute parameter domains")
    q.add_argument("domain")
    q.add_argument("problem")
    q.add_argument("--report-domains", action="store_true")
    q.add_argument("--format", choices=["text", "json"], default="text")

    b = sub.add_parser("bench", help="run a benchmark file")
    b.add_argument("manifest")
    b.add_argument("--format", choices=["table", "csv", "json"], default="table")
    b.add_argument("--baseline", default=None)
    b.add_argument("--limit", type=int, default=None)
    return p


def _load(args):
    from .lang import parse_domain, parse_problem

    with open(args.domain) as f:
        ops = parse_domain(f.read())
    with open(args.problem) as f:
        problem = parse_problem(f.read(), ops)
    return problem, ops


def _solve(args, out) -> int:
    from .domains import render_domain_report
    from .engine import BEST_FIRST, ID_BEST_FIRST, SearchConfig, search
    from .plan import render_plan

    problem, ops = _load(args)
    cfg = SearchConfig(
        args.rank, args.strategy, d_sep=args.d_sep, plan_limit=args.limit,
        use_domains=args.use_domains,
        search_mode=BEST_FIRST if args.search == "bestf" else ID_BEST_FIRST,
        shuffle_seed=args.shuffle_seed, tie_break=args.tie_break,
    )
    trace = (lambda line: print(line, file=sys.stderr)) if args.trace else None
    res = search(problem, ops, cfg, trace=trace)
    if args.format == "json":
        doc = {"outcome": res.outcome, "created": res.created, "explored": res.explored,
               "counters": res.counters.as_dict(), "fingerprint": cfg.fingerprint(),
               "plan": render_plan(res.plan).splitlines() if res.plan else None}
        if args.report_domains and res.domains is not None:
            doc["domains"] = json.loads(res.domains.to_json())
        print(json.dumps(doc, indent=2), file=out)
    else:
        if args.report_domains and res.domains is not None:
            print(render_domain_report(res.domains), file=out)
        print(f"outcome: {res.outcome}  created/explored: {res.created}/{res.explored}", file=out)
        if res.plan is not None:
            print(render_plan(res.plan), file=out)
    return EXIT_OK if res.solved else EXIT_FAIL


def _preprocess(args, out) -> int:
    from .domains import find_parameter_domains, render_domain_report

    problem, ops = _load(args)
    t0 = time.perf_counter()
    table = find_parameter_domains(ops, problem.inits, problem.goals, constants=problem.constants())
    ms = (time.perf_counter() - t0) * 1000
    if args.format == "json":
        print(table.to_json(), file=out)
    else:
        print(render_domain_report(table), file=out)
        if not args.report_domains:
            print(f"; {ms:.1f} ms, {table.iterations} iterations", file=out)
    return EXIT_OK


def _bench(args, out) -> int:
    from .bench import emit_results, load_bench_manifest, run_benchmark

    spec = load_bench_manifest(args.manifest)
    limit = args.limit if args.limit is not None else spec["limit"]
    records = run_benchmark(spec["cases"], spec["configs"], limit)
    print(emit_results(records, args.format, args.baseline or spec["baseline"]), end="", file=out)
    return EXIT_OK


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    try:
        args = _parser().parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        return {"solve": _solve, "preprocess": _preprocess, "bench": _bench}[args.command](args, out)
    except (OSError, ParseError, json.JSONDecodeError) as exc:
        print(f"pocl: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ValueError, KeyError) as exc:
        print(f"pocl: {exc}", file=sys.stderr)
        return EXIT_USAGE


def run() -> None:
    """Console-script entry point."""
    sys.exit(main())


if __name__ == "__main__":
    run()
