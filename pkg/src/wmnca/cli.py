"""Command-line entry point.

Exit codes: 0 success, 1 validation error (or a failed fixture check),
2 an internal limit was exceeded.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import __version__
from .conflict import MODES, build_conflict_graph, interference_degree, total_interference_degree
from .conflict import tid as compute_tid
from .estimators import DEFAULT_COMBINATION_CAP, cdal_cost, channel_link_counts, cxls_from_map
from .evaluation import build_report
from .fixture import reproduce_fixture
from .model import (LimitExceeded, ParseError, ValidationError, build_link_channel_map,
                    dump_assignment, load_assignment, load_network)
from .proxy import DEFAULT_TTL, SCENARIOS, load_flows, mean_results, run_proxy, scenario_flows
from .schemes import (DEFAULT_SEARCH_CAP, KINDS, OBJECTIVES, CaGenSpec, generate_exhaustive_ca,
                      generate_greedy_ca, generate_random_ca)

log = logging.getLogger("wmnca")

DEFAULT_IMPACT = 2


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise ParseError(exc.strerror or str(exc), path) from None


def _labelled(spec: str) -> tuple[str, str]:
    """``label=path`` or bare ``path`` (label = file stem)."""
    if "=" in spec:
        label, path = spec.split("=", 1)
        return label, path
    return Path(spec).stem, spec


def _load_cas(args, g, cs):
    cas = {}
    for spec in args.ca:
        label, path = _labelled(spec)
        if label in cas:
            raise ValidationError(f"duplicate CA label {label!r}")
        cas[label] = load_assignment(_read(path), g, cs)
    return cas


def _emit(args, doc: dict, text: str | None = None) -> None:
    if args.output:
        Path(args.output).write_text(json.dumps(doc, indent=2) + "\n")
    if text is not None and not args.json:
        print(text)
    else:
        print(json.dumps(doc, indent=2))


def cmd_estimate(args) -> int:
    g, cs = load_network(_read(args.network))
    cas = _load_cas(args, g, cs)
    metrics = args.metric or ["cxls"]
    predictions = {m: {} for m in metrics}
    details = {}
    for label, ca in cas.items():
        lcm = build_link_channel_map(g, ca, cs)
        d = {"dead_links": [g.link_name(l) for l in lcm.dead_links]}
        for m in metrics:
            if m == "cxls":
                res = cxls_from_map(g, lcm, args.impact, args.cap)
                predictions[m][label] = float(res.total)
                d[m] = res.as_dict(g, detail=args.detail)
            elif m == "cdal":
                value = cdal_cost(g, lcm, cs)
                predictions[m][label] = value
                d[m] = {"value": value, "link_counts": {
                    str(c): float(v) for c, v in channel_link_counts(lcm, cs).items()}}
            else:
                value = compute_tid(g, lcm, args.impact, args.mode)
                predictions[m][label] = value
                d[m] = {"value": value, "mode": args.mode, "impact": args.impact}
        details[label] = d
    _emit(args, {"predictions": predictions, "details": details})
    return 0


def cmd_conflicts(args) -> int:
    g, cs = load_network(_read(args.network))
    ca = load_assignment(_read(args.ca), g, cs)
    lcm = build_link_channel_map(g, ca, cs)
    cg = build_conflict_graph(g, lcm, args.impact, args.mode)
    doc = {
        "mode": cg.mode,
        "impact": cg.impact,
        "tid": total_interference_degree(cg),
        "conflicts": [[g.link_name(a), g.link_name(b)] for a, b in sorted(cg.conflicts)],
        "interference_degree": {g.link_name(l): interference_degree(cg, l) for l in cg.vertices},
        "dead_links": [g.link_name(l) for l in lcm.dead_links],
    }
    _emit(args, doc)
    return 0


def cmd_generate(args) -> int:
    g, cs = load_network(_read(args.network))
    spec = CaGenSpec(kind=args.kind, seed=args.seed, radios_per_node=args.radios_per_node,
                     objective=args.objective, impact=args.impact, mode=args.mode, cap=args.cap)
    meta = {"kind": spec.kind, "seed": spec.seed, "impact": spec.impact, "mode": spec.mode}
    if spec.kind == "random":
        ca = generate_random_ca(g, cs, spec)
    elif spec.kind == "greedy":
        ca = generate_greedy_ca(g, cs, spec)
    else:
        res = generate_exhaustive_ca(g, cs, spec)
        ca = res.ca
        meta.update(objective=res.objective, value=float(res.value),
                    dead_links=res.dead_links, visited=res.visited)
    doc = dump_assignment(ca, g)
    doc["meta"] = meta
    _emit(args, doc)
    return 0


def cmd_simulate(args) -> int:
    g, cs = load_network(_read(args.network))
    cas = _load_cas(args, g, cs)
    if args.flows:
        flow_sets = [load_flows(_read(args.flows), g)]
    elif args.scenario:
        flow_sets = [scenario_flows(g, s, args.demand or args.slots) for s in args.scenario]
    else:
        raise ValidationError("give --flows or --scenario")
    if args.flows and args.demand is not None:
        flow_sets = [[type(f)(f.route, args.demand) for f in fs] for fs in flow_sets]
    metrics = {"throughput": {}, "plr": {}, "md": {}}
    runs = {}
    for label, ca in cas.items():
        results = [run_proxy(g, ca, flows, args.impact, args.slots, seed, args.mode, args.ttl)
                   for flows in flow_sets
                   for seed in range(args.seed, args.seed + args.seeds)]
        means = mean_results(results)
        for k, v in means.items():
            metrics[k][label] = v
        runs[label] = {"episodes": len(results),
                       "stalled_flows": sorted({k for r in results for k in r.stalled_flows}),
                       "injected": sum(r.injected for r in results),
                       "delivered": sum(r.delivered for r in results),
                       "lost": sum(r.lost for r in results),
                       "queued": sum(r.queued for r in results)}
    _emit(args, {"metrics": metrics, "runs": runs,
                 "config": {"impact": args.impact, "mode": args.mode, "slots": args.slots,
                            "seeds": args.seeds, "ttl": args.ttl}})
    return 0


def _values_doc(path: str, key: str) -> dict:
    try:
        data = json.loads(_read(path))
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, f"{path} line {exc.lineno}") from None
    if isinstance(data, dict) and isinstance(data.get(key), dict):
        return data[key]
    if isinstance(data, dict) and "basis" in data and isinstance(data.get("values"), dict):
        return {data["basis"]: data["values"]}
    raise ParseError(f"expected an object with {key!r} or 'basis'/'values'", path)


def cmd_evaluate(args) -> int:
    observed = _values_doc(args.observed, "metrics")
    predicted = {}
    for path in args.predicted:
        predicted.update(_values_doc(path, "predictions"))
    report = build_report(observed, predicted)
    if args.csv:
        report.write_csv(args.csv)
    _emit(args, report.as_dict(), report.table())
    return 0


def cmd_reproduce(args) -> int:
    summary, checks = reproduce_fixture(args.fixture)
    text = "\n".join(c.line() for c in checks)
    text += "\n" + ("all checks passed" if summary["passed"] else "SOME CHECKS FAILED")
    _emit(args, summary, text)
    return 0 if summary["passed"] else 1


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--impact", type=int, default=DEFAULT_IMPACT,
                        help="impact factor X (T:I = 1:X), default %(default)s")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--output", "-o", help="also write the JSON document here")
    common.add_argument("--json", action="store_true", help="print JSON instead of a table")
    common.add_argument("--mode", choices=MODES, default="conventional",
                        help="conflict-graph variant")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="wmnca", parents=[common],
                                     description="Channel-assignment interference estimation toolkit")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("estimate", parents=[common], help="compute TID / CDAL_cost / CXLS_wt")
    p.add_argument("--network", "-n", required=True)
    p.add_argument("--ca", nargs="+", required=True, metavar="[LABEL=]PATH")
    p.add_argument("--metric", action="append", choices=("cxls", "cdal", "tid"))
    p.add_argument("--detail", action="store_true", help="per X-link-set breakdown")
    p.add_argument("--cap", type=int, default=DEFAULT_COMBINATION_CAP,
                   help="channel combinations per X-link-set before sampling")
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("conflicts", parents=[common], help="conflict edge list and TID")
    p.add_argument("--network", "-n", required=True)
    p.add_argument("--ca", required=True)
    p.set_defaults(func=cmd_conflicts)

    p = sub.add_parser("generate", parents=[common], help="write a baseline CA document")
    p.add_argument("--network", "-n", required=True)
    p.add_argument("--kind", choices=KINDS, default="random")
    p.add_argument("--objective", choices=OBJECTIVES, default="min-tid")
    p.add_argument("--radios-per-node", type=int)
    p.add_argument("--cap", type=int, default=DEFAULT_SEARCH_CAP,
                   help="largest exhaustive search space allowed")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("simulate", parents=[common], help="run the slot-scheduler proxy")
    p.add_argument("--network", "-n", required=True)
    p.add_argument("--ca", nargs="+", required=True, metavar="[LABEL=]PATH")
    p.add_argument("--flows")
    p.add_argument("--scenario", type=int, action="append", choices=SCENARIOS)
    p.add_argument("--slots", type=int, default=200)
    p.add_argument("--seeds", type=int, default=1)
    p.add_argument("--ttl", type=int, default=DEFAULT_TTL)
    p.add_argument("--demand", type=int, help="packets per flow (default: one per slot)")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("evaluate", parents=[common], help="EIS / DoC of predictions")
    p.add_argument("--observed", required=True)
    p.add_argument("--predicted", nargs="+", required=True)
    p.add_argument("--csv", metavar="DIR", help="write scatter CSV files here")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("reproduce-paper", parents=[common],
                       help="check the bundled published-results fixture")
    p.add_argument("--fixture", help="alternative fixture file")
    p.set_defaults(func=cmd_reproduce)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.impact < 1:
        print("error: --impact must be >= 1", file=sys.stderr)
        return 1
    try:
        return args.func(args)
    except (ValidationError, ParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except LimitExceeded as exc:
        print(f"limit exceeded: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
