"""Run cases under a matrix of search configurations and tabulate the counts.

A configuration can be given as a :class:`SearchConfig` or as a short label
``strategy/rank[/dom]``, e.g. ``"zlifo/s+oc"`` or ``"lifo/s+oc+uc/dom"``.
"""

from __future__ import annotations

import csv
import io
import json
import time
from dataclasses import dataclass, field, replace

from .corpus import BenchmarkCase, load_case
from .domains import find_parameter_domains
from .engine import SearchConfig, search
from .strategies import PRESETS

ERROR = "error"

CSV_COLUMNS = (
    "case", "goal_strategy", "plan_strategy", "domains", "outcome", "created", "explored",
    "time_ms", "preprocess_ms", "establishers_pruned", "threats_suppressed", "threats_dropped",
    "ratio", "fingerprint",
)


def parse_config(spec, limit: int | None = None) -> SearchConfig:
    if isinstance(spec, SearchConfig):
        cfg = spec
    else:
        parts = spec.strip().lower().split("/")
        if len(parts) not in (2, 3) or (len(parts) == 3 and parts[2] not in ("dom", "nodom")):
            raise ValueError(f"bad config label {spec!r}; expected strategy/rank[/dom]")
        cfg = SearchConfig(PRESETS.get(parts[1], parts[1]), parts[0],
                           use_domains=len(parts) == 3 and parts[2] == "dom")
    if limit is not None:
        cfg = replace(cfg, plan_limit=limit)
    return cfg


def config_label(cfg: SearchConfig) -> str:
    rank = next((k for k, v in PRESETS.items() if v == cfg.rank_weights), str(cfg.rank_weights).lower())
    return f"{cfg.flaw_strategy}/{rank}" + ("/dom" if cfg.use_domains else "")


@dataclass
class RunRecord:
    case: str
    fingerprint: str
    label: str
    created: int
    explored: int
    wall_ms: float
    preprocess_ms: float
    counters: dict = field(default_factory=dict)
    outcome: str = ""
    error: str | None = None
    valid: bool | None = None

    @property
    def goal_strategy(self) -> str:
        return self.label.split("/")[0]

    @property
    def plan_strategy(self) -> str:
        return self.label.split("/")[1]

    @property
    def domains(self) -> bool:
        return self.label.endswith("/dom")


def _case(c) -> BenchmarkCase:
    return c if isinstance(c, BenchmarkCase) else load_case(c)


def run_one(case, cfg: SearchConfig, validate: bool = False) -> RunRecord:
    label = config_label(cfg)
    name = case if isinstance(case, str) else case.name
    try:
        case = _case(case)
        problem, ops = case.load()
        t0 = time.perf_counter()
        table = find_parameter_domains(ops, problem.inits, problem.goals, constants=problem.constants())
        pre_ms = (time.perf_counter() - t0) * 1000
        res = search(problem, ops, cfg, domains=table if cfg.use_domains else None)
    except Exception as exc:  # one bad case must not sink the matrix
        return RunRecord(name, cfg.fingerprint(), label, 0, 0, 0.0, 0.0, {}, ERROR,
                         f"{type(exc).__name__}: {exc}")
    ok = None
    if validate and res.plan is not None:
        from .validate import validate_plan
        ok = validate_plan(res.plan, problem, ops).ok
    return RunRecord(case.name, cfg.fingerprint(), label, res.created, res.explored,
                     res.seconds * 1000, pre_ms, res.counters.as_dict(), res.outcome, None, ok)


def run_benchmark(cases, configs, limits=None, validate: bool = False) -> list[RunRecord]:
    """One record per case x config, in case order then config order.

    ``limits`` is ``None`` (keep each config's plan limit), an int, or a
    mapping from case name to int.
    """
    out = []
    for c in cases:
        name = c if isinstance(c, str) else c.name
        lim = limits.get(name) if isinstance(limits, dict) else limits
        for spec in configs:
            out.append(run_one(c, parse_config(spec, lim), validate))
    return out


def _ratios(records, baseline: str | None) -> list:
    if baseline is None:
        return [None] * len(records)
    key = baseline.lower()
    base = {}
    for r in records:
        if key in (r.label, r.fingerprint.lower()):
            base.setdefault(r.case, r.created)
    if not base:
        raise ValueError(f"unknown baseline {baseline!r}")
    return [base[r.case] / r.created if r.case in base and r.created else None for r in records]


def _row(r: RunRecord, ratio) -> dict:
    return {
        "case": r.case, "goal_strategy": r.goal_strategy, "plan_strategy": r.plan_strategy,
        "domains": r.domains, "outcome": r.outcome, "created": r.created, "explored": r.explored,
        "time_ms": round(r.wall_ms, 1), "preprocess_ms": round(r.preprocess_ms, 2),
        "establishers_pruned": r.counters.get("establishers_pruned", 0),
        "threats_suppressed": r.counters.get("threats_suppressed", 0),
        "threats_dropped": r.counters.get("threats_dropped", 0),
        "ratio": None if ratio is None else round(ratio, 3),
        "fingerprint": r.fingerprint,
    }


def emit_results(records, format: str = "table", baseline: str | None = None) -> str:
    """Render records as an aligned text table, CSV, or JSON.

    ``baseline`` names a config label (or fingerprint); the ratio column is
    the baseline's created count over the row's, per case.
    """
    rows = [_row(r, q) for r, q in zip(records, _ratios(records, baseline))]
    if format == "json":
        return json.dumps(rows, indent=2)
    if format == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
        return buf.getvalue()
    if format != "table":
        raise ValueError(f"unknown format {format!r}")
    head = ["case", "goal", "plan", "dom", "outcome", "created/explored", "ms", "ratio"]
    body = [
        [r["case"], r["goal_strategy"], r["plan_strategy"], "y" if r["domains"] else "n",
         r["outcome"], f"{r['created']}/{r['explored']}", f"{r['time_ms']:.0f}",
         "" if r["ratio"] is None else f"{r['ratio']:g}"]
        for r in rows
    ]
    widths = [max(len(x) for x in col) for col in zip(head, *body)]
    lines = ["  ".join(x.ljust(w) for x, w in zip(line, widths)).rstrip() for line in [head] + body]
    return "\n".join(lines) + "\n"


def load_bench_manifest(path) -> dict:
    """A bench file: ``{"cases": [...], "configs": [...], "limit": n, "baseline": label}``.

    Cases are corpus names or ``{"domain": path, "problem": path}`` objects.
    """
    from pathlib import Path
    from .corpus import load_files

    p = Path(path)
    data = json.loads(p.read_text())
    cases = []
    for c in data.get("cases", []):
        if isinstance(c, dict):
            cases.append(load_files(p.parent / c["domain"], p.parent / c["problem"]))
        else:
            cases.append(c)
    return {"cases": cases, "configs": data.get("configs", ["lifo/s+oc+uc"]),
            "limit": data.get("limit"), "baseline": data.get("baseline")}
