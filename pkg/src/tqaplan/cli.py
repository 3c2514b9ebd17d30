"""Command-line surface: generate benchmark domains, encode theories, solve,
validate plans, and run benchmark sweeps into a CSV.

Exit codes for solve: 0 plan found, 1 stage counts exhausted, 2 resource
limit, 3 input error.  Validate: 0 valid, 1 invalid, 3 malformed input.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from pathlib import Path

from .benchgen import GadgetSpec, gen_cushing
from .domain import Domain, DomainFormatError, parse_domain, serialize_domain, validate_domain
from .cpmodel import export_model
from .encoder import encode
from .search import (
    EXHAUSTED,
    FOUND,
    FindOutcome,
    PlanFormatError,
    SearchLimits,
    find_plan,
    plan_from_document,
    plan_to_document,
)
from .solver import SolverConfig
from .theory import InvalidDomainError, instantiate
from .validator import validate_plan

CSV_COLUMNS = (
    "instance",
    "type",
    "copies",
    "height",
    "n_found",
    "bool_vars",
    "int_vars",
    "nodes",
    "wall_ms",
    "objective",
    "verdict",
)


def _fail(message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return 3


def _load_domain(path: str, strict: bool) -> Domain:
    text = Path(path).read_text(encoding="utf-8")
    if not strict:
        doc = json.loads(text)
        known = {"fluents", "actors", "skills", "interference", "temporal_actions", "init", "goal"}
        if isinstance(doc, dict):
            dropped = set(doc) - known
            if dropped:
                print(f"warning: ignoring unknown keys {sorted(dropped)}", file=sys.stderr)
            text = json.dumps({k: v for k, v in doc.items() if k in known})
    domain = parse_domain(text)
    diags = validate_domain(domain)
    if diags:
        raise DomainFormatError("$", "; ".join(str(d) for d in diags))
    return domain


def _limits_from(args) -> SearchLimits:
    return SearchLimits(
        max_n=args.max_n,
        copy_cap=args.max_copies,
        horizon=args.horizon,
        time_budget=args.time_budget,
    )


def _config_from(args) -> SolverConfig:
    return SolverConfig(time_budget=args.time_budget, seed=args.seed)


def _run_record(instance: str, outcome: FindOutcome) -> dict:
    return {
        "instance": instance,
        "n_found": outcome.n_found,
        "wall_ms": round(outcome.wall_time * 1000, 3),
        "nodes": outcome.nodes,
        "bool_vars": outcome.model_stats[0],
        "int_vars": outcome.model_stats[1],
        "objective": str(outcome.plan.objective)
        if outcome.found and outcome.plan.objective is not None
        else None,
        "verdict": outcome.status,
        "minimal_n_guaranteed": outcome.minimal_n_guaranteed,
    }


def cmd_solve(args) -> int:
    try:
        domain = _load_domain(args.domain, args.strict_io)
        outcome = find_plan(
            domain,
            objective=args.objective,
            limits=_limits_from(args),
            cfg=_config_from(args),
            geometric=args.geometric_n,
        )
    except (FileNotFoundError, DomainFormatError, InvalidDomainError, json.JSONDecodeError) as exc:
        return _fail(str(exc))
    print(json.dumps(_run_record(args.domain, outcome)))
    if outcome.status == FOUND:
        plan_path = args.plan_out or str(Path(args.domain).with_suffix(".plan.json"))
        Path(plan_path).write_text(plan_to_document(outcome.plan), encoding="utf-8")
        print(f"plan written to {plan_path}", file=sys.stderr)
        return 0
    if outcome.status == EXHAUSTED:
        print(f"no plan up to {args.max_n} stages", file=sys.stderr)
        return 1
    print("resource limit reached", file=sys.stderr)
    return 2


def cmd_validate(args) -> int:
    try:
        domain = _load_domain(args.domain, args.strict_io)
        plan = plan_from_document(Path(args.plan).read_text(encoding="utf-8"))
    except (
        FileNotFoundError,
        DomainFormatError,
        InvalidDomainError,
        PlanFormatError,
        json.JSONDecodeError,
    ) as exc:
        return _fail(str(exc))
    report = validate_plan(domain, plan)
    payload = {
        "verdict": report.verdict,
        "violations": [
            {"rule": v.rule, "subjects": list(v.subjects), "message": v.message}
            for v in report.violations
        ],
    }
    print(json.dumps(payload, indent=2))
    return 0 if report.is_valid else 1


def cmd_gen(args) -> int:
    try:
        spec = GadgetSpec(args.type, args.copies, args.height)
        domain = gen_cushing(spec)
    except ValueError as exc:
        return _fail(str(exc))
    text = serialize_domain(domain)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        print(f"domain written to {args.out}", file=sys.stderr)
    else:
        print(text, end="")
    return 0


def cmd_encode(args) -> int:
    try:
        domain = _load_domain(args.domain, args.strict_io)
        shape = instantiate(domain, args.n, args.max_copies, args.horizon)
        model = encode(shape, args.objective)
    except (FileNotFoundError, DomainFormatError, InvalidDomainError, ValueError) as exc:
        return _fail(str(exc))
    text = export_model(model)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        print(f"model written to {args.out}", file=sys.stderr)
    else:
        print(text, end="")
    return 0


def _parse_range(text: str) -> range:
    if ".." in text:
        lo, hi = text.split("..", 1)
        return range(int(lo), int(hi) + 1)
    value = int(text)
    return range(value, value + 1)


def cmd_bench(args) -> int:
    try:
        copies = _parse_range(args.copies)
        heights = _parse_range(args.height) if args.height else [None]
        if args.type == "I" and args.height:
            return _fail("Type I instances have no height")
    except ValueError as exc:
        return _fail(str(exc))
    rows = []
    for m in copies:
        for h in heights:
            spec = GadgetSpec(args.type, m, h)
            domain = gen_cushing(spec)
            instance = f"{args.type.lower()}-m{m}" + (f"-h{h}" if h else "")
            started = time.monotonic()
            outcome = find_plan(
                domain,
                objective=args.objective,
                limits=_limits_from(args),
                cfg=_config_from(args),
                geometric=args.geometric_n,
            )
            wall_ms = round((time.monotonic() - started) * 1000, 3)
            verdict = outcome.status
            if outcome.found:
                report = validate_plan(domain, outcome.plan)
                verdict = "valid" if report.is_valid else "invalid-plan"
            rows.append(
                {
                    "instance": instance,
                    "type": args.type,
                    "copies": m,
                    "height": h if h is not None else "",
                    "n_found": outcome.n_found if outcome.n_found is not None else "",
                    "bool_vars": outcome.model_stats[0],
                    "int_vars": outcome.model_stats[1],
                    "nodes": outcome.nodes,
                    "wall_ms": wall_ms,
                    "objective": str(outcome.plan.objective)
                    if outcome.found and outcome.plan.objective is not None
                    else "",
                    "verdict": verdict,
                }
            )
            print(f"{instance}: {verdict} n={outcome.n_found} {wall_ms}ms", file=sys.stderr)
    out_path = Path(args.out)
    new_file = not out_path.exists()
    with out_path.open("a", newline="", encoding="utf-8") as handle:
        writer = csv.DictWriter(handle, fieldnames=CSV_COLUMNS)
        if new_file:
            writer.writeheader()
        writer.writerows(rows)
    print(f"{len(rows)} records appended to {args.out}", file=sys.stderr)
    return 0


def _add_common_solver_flags(sub) -> None:
    sub.add_argument("--max-n", type=int, default=20, help="largest stage count to try")
    sub.add_argument("--max-copies", type=int, default=None, help="cap on action copies")
    sub.add_argument("--horizon", type=int, default=None, help="fixed time horizon")
    sub.add_argument(
        "--objective", choices=("none", "makespan", "costs"), default="none"
    )
    sub.add_argument("--time-budget", type=float, default=300.0, help="seconds")
    sub.add_argument("--seed", type=int, default=0)
    sub.add_argument("--geometric-n", action="store_true", help="probe 1,2,4,... (minimality not guaranteed)")
    sub.add_argument(
        "--strict-io",
        action=argparse.BooleanOptionalAction,
        default=True,
        help="reject unknown keys in input documents",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tqaplan",
        description="Temporal planning via bounded interval-logic satisfiability",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    p_solve = subs.add_parser("solve", help="search stage counts and write a plan")
    p_solve.add_argument("domain")
    p_solve.add_argument("--plan-out", default=None, help="plan document path")
    _add_common_solver_flags(p_solve)
    p_solve.set_defaults(func=cmd_solve)

    p_val = subs.add_parser("validate", help="check a plan document against a domain")
    p_val.add_argument("domain")
    p_val.add_argument("plan")
    p_val.add_argument(
        "--strict-io", action=argparse.BooleanOptionalAction, default=True
    )
    p_val.set_defaults(func=cmd_validate)

    p_gen = subs.add_parser("gen", help="generate a benchmark domain")
    p_gen.add_argument("--type", choices=("I", "II", "III"), required=True)
    p_gen.add_argument("--copies", type=int, required=True)
    p_gen.add_argument("--height", type=int, default=None)
    p_gen.add_argument("--out", default=None)
    p_gen.set_defaults(func=cmd_gen)

    p_enc = subs.add_parser("encode", help="dump the constraint model for one stage count")
    p_enc.add_argument("domain")
    p_enc.add_argument("--n", type=int, default=1, help="stage count to instantiate")
    p_enc.add_argument("--out", default=None)
    _add_common_solver_flags(p_enc)
    p_enc.set_defaults(func=cmd_encode)

    p_bench = subs.add_parser("bench", help="solve a sweep of benchmark instances into CSV")
    p_bench.add_argument("--type", choices=("I", "II", "III"), required=True)
    p_bench.add_argument("--copies", required=True, help="count or range A..B")
    p_bench.add_argument("--height", default=None, help="count or range A..B (Type II/III)")
    p_bench.add_argument("--out", default="bench.csv")
    _add_common_solver_flags(p_bench)
    p_bench.set_defaults(func=cmd_bench)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
