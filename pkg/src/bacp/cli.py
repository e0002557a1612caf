"""Command-line benchmark harness.

Subcommands: ``solve`` (minimization or a single decision problem),
``check`` (validate a solution file against an instance), ``oracle``
(exhaustive optimum for small instances) and ``gen`` (deterministic random
instance to stdout).

Exit codes, uniform across subcommands: 0 solved/feasible, 1 proven
infeasible (or violations found), 2 stopped by a node/time limit,
3 input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .instance import (
    CurriculumInstance,
    ParseError,
    check_solution,
    objective as solution_objective,
    parse_instance,
    parse_solution,
    serialize_instance,
    serialize_solution,
    validate_instance,
)
from .model import MatrixOrder, Model, RootConflictError, build
from .oracle import GenParams, TooLargeError, brute_force, gen_instance
from .search import (
    AnytimeEntry,
    BoundMode,
    LimitReached,
    Sat,
    SearchConfig,
    SearchStats,
    Status,
    Unsat,
    ValueOrder,
    minimize,
    solve_decision,
)

EXIT_SOLVED = 0
EXIT_INFEASIBLE = 1
EXIT_LIMIT = 2
EXIT_INPUT = 3

ANYTIME_HEADER = "objective,seconds,nodes"


@dataclass
class RunRecord:
    """Everything one solver run produces, ready for JSON/CSV serialization."""

    instance: str
    var_order: str
    value_order: str
    bound_mode: str
    status: str
    objective: int | None
    nodes: int
    failures: int
    elapsed_seconds: float
    anytime: list[AnytimeEntry]

    def to_json(self) -> str:
        doc = {
            "instance": self.instance,
            "config": {
                "var_order": self.var_order,
                "value_order": self.value_order,
                "bound_mode": self.bound_mode,
            },
            "status": self.status,
            "objective": self.objective,
            "nodes": self.nodes,
            "failures": self.failures,
            "elapsed_seconds": round(self.elapsed_seconds, 6),
            "anytime": [
                {"objective": e.objective, "seconds": round(e.seconds, 6), "nodes": e.nodes}
                for e in self.anytime
            ],
        }
        return json.dumps(doc, indent=2)

    def anytime_csv(self) -> str:
        lines = [ANYTIME_HEADER]
        lines.extend(
            f"{e.objective},{e.seconds:.2f},{e.nodes}" for e in self.anytime
        )
        return "\n".join(lines) + "\n"


class _Parser(argparse.ArgumentParser):
    """argparse maps usage errors to exit code 2; this harness reserves 2
    for limit-stopped runs, so usage errors exit 3 instead."""

    def error(self, message: str):  # noqa: ANN202 - argparse signature
        self.print_usage(sys.stderr)
        raise SystemExit(3)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="bacp", description="Balanced curriculum solver and benchmark harness.")
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", parents=[], help="minimize the maximum period load")
    solve.add_argument("--instance", required=True, help="instance file path")
    solve.add_argument("--mode", choices=["minimize", "decision"], default="minimize")
    solve.add_argument("--max-load", type=int, default=None, help="bound for --mode decision")
    solve.add_argument(
        "--var-order", choices=["by-course", "by-period"], default="by-period"
    )
    solve.add_argument(
        "--value-order", choices=["zero-first", "one-first"], default="one-first"
    )
    solve.add_argument("--bound-mode", choices=["restart", "continue"], default="restart")
    solve.add_argument("--node-limit", type=int, default=None)
    solve.add_argument("--time-limit", type=float, default=None, metavar="SECS")
    solve.add_argument("--anytime-log", default=None, metavar="PATH")
    solve.add_argument("--solution-out", default=None, metavar="PATH")
    solve.add_argument("--format", choices=["table", "csv", "json"], default="table")
    solve.add_argument(
        "--matrix",
        action="store_true",
        help="run all four variable/value order combinations and print a summary",
    )
    solve.set_defaults(func=cmd_solve)

    check = sub.add_parser("check", help="check a solution file against an instance")
    check.add_argument("--instance", required=True)
    check.add_argument("--solution", required=True)
    check.set_defaults(func=cmd_check)

    oracle = sub.add_parser("oracle", help="exhaustive optimum for small instances")
    oracle.add_argument("--instance", required=True)
    oracle.set_defaults(func=cmd_oracle)

    gen = sub.add_parser("gen", help="write a deterministic random instance to stdout")
    gen.add_argument("--seed", type=int, required=True)
    gen.add_argument("--courses", type=int, required=True)
    gen.add_argument("--periods", type=int, required=True)
    gen.add_argument("--credit-min", type=int, default=1)
    gen.add_argument("--credit-max", type=int, default=5)
    gen.add_argument("--density", type=float, default=0.15, help="prerequisite density in [0,1]")
    gen.add_argument("--slack", type=float, default=0.5, help="bound slack in [0,1]")
    gen.set_defaults(func=cmd_gen)
    return parser


def _load_instance(path: str) -> CurriculumInstance:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    return parse_instance(text)


def _config_from_args(args: argparse.Namespace, **overrides) -> SearchConfig:
    kwargs = dict(
        var_order=MatrixOrder(args.var_order),
        value_order=ValueOrder(args.value_order),
        bound_mode=BoundMode(args.bound_mode),
        node_limit=args.node_limit,
        time_limit=args.time_limit,
    )
    kwargs.update(overrides)
    return SearchConfig(**kwargs)


def _emit(record: RunRecord, fmt: str) -> None:
    if fmt == "json":
        print(record.to_json())
    elif fmt == "csv":
        print(record.anytime_csv(), end="")
    else:
        obj = "-" if record.objective is None else str(record.objective)
        print(f"instance   : {record.instance}")
        print(
            f"config     : var={record.var_order} value={record.value_order} "
            f"bound={record.bound_mode}"
        )
        print(f"status     : {record.status}")
        print(f"objective  : {obj}")
        print(
            f"nodes      : {record.nodes}  failures: {record.failures}  "
            f"elapsed: {record.elapsed_seconds:.2f}s"
        )
        if record.anytime:
            print("anytime    :")
            print("  objective  seconds  nodes")
            for e in record.anytime:
                print(f"  {e.objective:<9}  {e.seconds:<7.2f}  {e.nodes}")


def _write_outputs(args: argparse.Namespace, record: RunRecord, inst, best) -> None:
    if args.anytime_log:
        Path(args.anytime_log).write_text(record.anytime_csv(), encoding="utf-8")
    if args.solution_out and best is not None:
        Path(args.solution_out).write_text(
            serialize_solution(inst, best.period_of), encoding="utf-8"
        )


def _status_exit(status: Status) -> int:
    if status is Status.OPTIMAL:
        return EXIT_SOLVED
    if status is Status.INFEASIBLE:
        return EXIT_INFEASIBLE
    return EXIT_LIMIT


def cmd_solve(args: argparse.Namespace) -> int:
    try:
        inst = _load_instance(args.instance)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    name = Path(args.instance).stem
    defects = validate_instance(inst)
    if defects:
        for d in defects:
            print(f"infeasible: {d}", file=sys.stderr)
        return EXIT_INFEASIBLE
    if args.mode == "decision" and args.max_load is None:
        print("error: --mode decision requires --max-load", file=sys.stderr)
        return EXIT_INPUT
    if args.matrix:
        return _solve_matrix(args, inst, name)

    try:
        config = _config_from_args(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT

    try:
        model = build(inst)
    except RootConflictError:
        record = RunRecord(
            name, args.var_order, args.value_order, args.bound_mode,
            Status.INFEASIBLE.value, None, 0, 0, 0.0, [],
        )
        _emit(record, args.format)
        _write_outputs(args, record, inst, None)
        return EXIT_INFEASIBLE

    if args.mode == "decision":
        if args.max_load < inst.load_min:
            print(
                f"error: --max-load {args.max_load} is below load_min {inst.load_min}",
                file=sys.stderr,
            )
            return EXIT_INPUT
        result = solve_decision(model, args.max_load, config)
        if isinstance(result, Sat):
            status, best, code = "sat", result.solution, EXIT_SOLVED
        elif isinstance(result, Unsat):
            status, best, code = "unsat", None, EXIT_INFEASIBLE
        else:
            status, best, code = "limit", None, EXIT_LIMIT
        stats = result.stats
        record = RunRecord(
            name, args.var_order, args.value_order, args.bound_mode, status,
            best.objective if best else None, stats.nodes, stats.failures,
            stats.elapsed, [],
        )
        _emit(record, args.format)
        _write_outputs(args, record, inst, best)
        return code

    result = minimize(model, config)
    record = RunRecord(
        name, args.var_order, args.value_order, args.bound_mode,
        result.status.value, result.best.objective if result.best else None,
        result.stats.nodes, result.stats.failures, result.stats.elapsed,
        list(result.anytime),
    )
    _emit(record, args.format)
    _write_outputs(args, record, inst, result.best)
    return _status_exit(result.status)


def _solve_matrix(args: argparse.Namespace, inst: CurriculumInstance, name: str) -> int:
    """Run every var-order x value-order combination, each on a fresh model."""
    rows = []
    worst = EXIT_SOLVED
    for var_order in (MatrixOrder.BY_COURSE, MatrixOrder.BY_PERIOD):
        for value_order in (ValueOrder.ZERO_FIRST, ValueOrder.ONE_FIRST):
            try:
                config = _config_from_args(
                    args, var_order=var_order, value_order=value_order
                )
            except ValueError as exc:
                print(f"error: {exc}", file=sys.stderr)
                return EXIT_INPUT
            try:
                model = build(inst)
            except RootConflictError:
                return EXIT_INFEASIBLE
            result = minimize(model, config)
            first = result.anytime[0] if result.anytime else None
            last = result.anytime[-1] if result.anytime else None
            rows.append(
                (
                    var_order.value,
                    value_order.value,
                    result.status.value,
                    "-" if result.best is None else str(result.best.objective),
                    "-" if first is None else f"{first.seconds:.2f}",
                    "-" if last is None else f"{last.seconds:.2f}",
                    str(result.stats.nodes),
                )
            )
            worst = max(worst, _status_exit(result.status))
    print(f"instance: {name}")
    header = ("var-order", "value-order", "status", "best", "first-s", "best-s", "nodes")
    widths = [max(len(header[k]), max(len(r[k]) for r in rows)) for k in range(len(header))]
    print("  ".join(h.ljust(w) for h, w in zip(header, widths)))
    for r in rows:
        print("  ".join(c.ljust(w) for c, w in zip(r, widths)))
    return worst


def cmd_check(args: argparse.Namespace) -> int:
    try:
        inst = _load_instance(args.instance)
        text = Path(args.solution).read_text(encoding="utf-8")
        period_of = parse_solution(text, inst)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    violations = check_solution(inst, period_of)
    if not violations:
        print(f"feasible, objective {solution_objective(inst, period_of)}")
        return EXIT_SOLVED
    for v in violations:
        print(f"violation: {v.detail}")
    return EXIT_INFEASIBLE


def cmd_oracle(args: argparse.Namespace) -> int:
    try:
        inst = _load_instance(args.instance)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    try:
        result = brute_force(inst)
    except TooLargeError as exc:
        print(
            f"error: {exc}\nthe oracle is exhaustive; use 'bacp solve' for instances this size",
            file=sys.stderr,
        )
        return EXIT_INPUT
    if result.infeasible:
        print(f"infeasible ({result.feasible_count} feasible assignments)")
        return EXIT_INFEASIBLE
    print(f"optimum {result.objective}")
    print(f"feasible assignments: {result.feasible_count}")
    assert result.witness is not None
    print("witness:")
    for i, c in enumerate(inst.courses, start=1):
        print(f"  {c.id} {result.witness.period_of[i]}")
    return EXIT_SOLVED


def cmd_gen(args: argparse.Namespace) -> int:
    try:
        params = GenParams(
            seed=args.seed,
            m=args.courses,
            n=args.periods,
            credit_lo=args.credit_min,
            credit_hi=args.credit_max,
            prereq_density=args.density,
            bound_slack=args.slack,
        )
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    print(serialize_instance(gen_instance(params)), end="")
    return EXIT_SOLVED


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    return args.func(args)


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
