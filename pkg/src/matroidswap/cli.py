"""Command-line interface: ``matroidswap {solve,verify,oracle,bench,rpe,check-oracle}``.

Exit codes: 0 success, 1 a verification check failed, 2 invalid input,
3 an oracle failed the matroid check under ``--check-oracles``.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path

from . import _backend
from .bench import FAMILIES, BenchConfig, records_to_csv, rpe_simulate, run_bench, scaling_report
from .core import InstanceError, utility_vector
from .exchange import build_exchange_graph
from .fairness import ALL_CHECKS, verify
from .instance_file import allocation_to_dict, load_allocation, load_instance
from .oracle import OBJECTIVES, GuardExceeded, brute_force_optimum
from .solver import yankee_swap
from .valuations import EXPLICIT_MAX_GOODS, check_mrf

EXIT_OK, EXIT_FAIL, EXIT_INVALID, EXIT_MRF = 0, 1, 2, 3


def _emit(doc) -> None:
    sys.stdout.write(json.dumps(doc, indent=2, sort_keys=True) + "\n")


def _mrf_reports(instance, mode, trials, seed):
    if mode == "auto":
        mode = "exhaustive" if instance.m <= EXPLICIT_MAX_GOODS // 2 else "sampled"
    return {a: check_mrf(o, mode, trials=trials, seed=seed) for a, o in zip(instance.agents, instance.oracles)}


def _read_priority_file(path) -> list[str]:
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InstanceError(f"priority file {path}: {exc}") from None
    if isinstance(doc, dict):
        doc = doc.get("priority")
    if not isinstance(doc, list):
        raise InstanceError("priority file must hold a list of agent ids (or {'priority': [...]})")
    return doc


def cmd_solve(args) -> int:
    instance = load_instance(args.instance)
    if args.priority_file and args.seed_priority is not None:
        raise InstanceError("use at most one of --priority-file and --seed-priority")
    source = "instance" if instance.priority_given else "identity"
    if args.priority_file:
        instance = instance.with_priority(_read_priority_file(args.priority_file))
        source = "file"
    elif args.seed_priority is not None:
        order = list(instance.agents)
        random.Random(args.seed_priority).shuffle(order)
        instance = instance.with_priority(order)
        source = f"seed:{args.seed_priority}"
    if args.check_oracles:
        bad = {a: r.to_dict() for a, r in _mrf_reports(instance, "auto", 1000, 0).items() if not r.valid}
        if bad:
            print(f"oracle check failed for {sorted(bad)}", file=sys.stderr)
            _emit({"error": "oracle check failed", "violations": bad})
            return EXIT_MRF
    alloc, trace = yankee_swap(instance)
    doc = allocation_to_dict(alloc, instance)
    doc["utilities"] = dict(zip(instance.agents, utility_vector(alloc, instance)))
    doc["augmented_priority_used"] = instance.priority_order()
    doc["priority_source"] = source
    if args.trace:
        doc["trace"] = trace.to_dict(instance)
    if args.dump_graph:
        graph = build_exchange_graph(alloc, instance)
        Path(args.dump_graph).write_text(graph.to_edgelist(instance.goods))
    _emit(doc)
    return EXIT_OK


def cmd_verify(args) -> int:
    instance = load_instance(args.instance)
    alloc = load_allocation(args.allocation, instance)
    checks = [c.strip() for c in args.checks.split(",") if c.strip()] if args.checks is not None else list(ALL_CHECKS)
    if not checks:
        raise InstanceError("empty --checks list")
    try:
        report = verify(alloc, instance, checks)
    except ValueError as exc:
        raise InstanceError(str(exc)) from None
    doc = report.to_dict()
    for result in doc["results"].values():
        _name_witness(result["witness"], instance)
    _emit(doc)
    return EXIT_OK if report.passed else EXIT_FAIL


def _name_witness(w, instance) -> None:
    if not w:
        return
    for key in ("agent", "envious", "envied"):
        if key in w:
            w[key] = instance.agents[w[key] - 1]
    if "dropped" in w:
        w["dropped"] = instance.goods[w["dropped"]]


def cmd_oracle(args) -> int:
    instance = load_instance(args.instance)
    objectives = OBJECTIVES if args.objective == "all" else (args.objective,)
    out = {obj: brute_force_optimum(instance, obj).to_dict(instance) for obj in objectives}
    _emit(out if args.objective == "all" else out[args.objective])
    return EXIT_OK


def cmd_bench(args) -> int:
    if args.config:
        try:
            config = BenchConfig.from_dict(json.loads(Path(args.config).read_text()))
        except (OSError, json.JSONDecodeError, ValueError, TypeError) as exc:
            raise InstanceError(f"bench config: {exc}") from None
    else:
        config = BenchConfig(sizes=[(n, n) for n in args.sizes], families=args.families,
                             trials=args.trials, seed=args.seed)
    if args.no_timing:
        config.timing = False
    unknown = [f for f in config.families if f not in FAMILIES]
    if unknown:
        raise InstanceError(f"unknown families {unknown}")
    records = run_bench(config)
    csv_text = records_to_csv(records)
    if args.out:
        Path(args.out).write_text(csv_text)
    else:
        sys.stdout.write(csv_text)
    if args.report:
        for row in scaling_report(records):
            print(
                f"{row['family']:>12} n={row['n']:<5} m={row['m']:<5} iters(max)={row['max_iterations']:<6} "
                f"calls/(m^2(m+n))={row['mean_call_ratio']:.4f} drift={row['ratio_drift']:.2f}",
                file=sys.stderr,
            )
    return EXIT_OK


def cmd_rpe(args) -> int:
    instance = load_instance(args.instance)
    result = rpe_simulate(instance, args.samples, args.seed)
    doc = result.to_dict(instance)
    if result.zeroed_agents:
        doc["note"] = "agents with non-matroid-rank valuations were given the all-zero valuation"
    _emit(doc)
    return EXIT_OK


def cmd_check_oracle(args) -> int:
    instance = load_instance(args.instance)
    reports = _mrf_reports(instance, args.mode, args.trials, args.seed)
    _emit({a: r.to_dict() for a, r in reports.items()})
    return EXIT_OK if all(r.valid for r in reports.values()) else EXIT_MRF


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="matroidswap", description=__doc__.splitlines()[0])
    parser.add_argument("--backend", choices=_backend.available(), help="kernel backend (default: fastest available)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="run Yankee Swap on an instance file")
    p.add_argument("instance")
    p.add_argument("--priority-file", help="JSON list of agent ids, highest priority first")
    p.add_argument("--seed-priority", type=int, help="shuffle the agent order with this seed")
    p.add_argument("--trace", action="store_true", help="include the iteration trace")
    p.add_argument("--check-oracles", action="store_true", help="reject instances whose oracles fail the matroid check")
    p.add_argument("--dump-graph", metavar="PATH", help="write the final exchange graph as an edge list")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="check fairness properties of an allocation")
    p.add_argument("instance")
    p.add_argument("allocation", help="JSON with an 'allocation' map (solve output works)")
    p.add_argument("--checks", help=f"comma-separated subset of {','.join(ALL_CHECKS)}")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("oracle", help="brute-force optimum of a small instance")
    p.add_argument("instance")
    p.add_argument("--objective", choices=OBJECTIVES + ("all",), default="lorenz_augmented")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("bench", help="scaling benchmark, CSV on stdout")
    p.add_argument("--config", help="JSON with sizes, families, trials, seed, timing")
    p.add_argument("--sizes", type=int, nargs="+", default=[50, 100, 200], help="n = m values")
    p.add_argument("--families", nargs="+", default=["partition"], choices=FAMILIES)
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--no-timing", action="store_true", help="write wall_time_ns as 0 for reproducible output")
    p.add_argument("--out", help="write CSV here instead of stdout")
    p.add_argument("--report", action="store_true", help="print the call-ratio summary to stderr")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("rpe", help="Monte Carlo over random priority orders")
    p.add_argument("instance")
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_rpe)

    p = sub.add_parser("check-oracle", help="check each valuation against the matroid rank axioms")
    p.add_argument("instance")
    p.add_argument("--mode", choices=("auto", "exhaustive", "sampled"), default="auto")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_check_oracle)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.backend:
            with _backend.use_backend(args.backend):
                return args.func(args)
        return args.func(args)
    except (InstanceError, GuardExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
