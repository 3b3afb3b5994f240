"""Command-line surface.

Subcommands::

    ot normalize|eq|reverse|add|mul EXPR [EXPR]
    present build --type T [--schedule S] --stages N --out F
    op run --op O (--in F | --type T --stages N) --out F
    check monotone|oracle|schedule|linear [--op O] [--trials N] [--seed S]
    exp list
    exp run ID [--stages N] [--seed S] [--report F]

Exit codes: 0 success/pass, 1 a check or assertion failed, 2 usage or parse
error. The seed defaults to the ORDEMBED_SEED environment variable, then 0.
"""

from __future__ import annotations

import argparse
import os
import sys
import tempfile

from . import analysis, enumop, factfile, ordertype
from .config import RunConfig, canonical_report_bytes, env_seed
from .diagram import FiniteDiagram
from .experiments import EXPERIMENTS, run_experiment
from .presentation import Schedule, std_presentation


class CliError(Exception):
    pass


def _write_atomic(path: str, data: bytes) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".ordembed-")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit_report(report: dict, path) -> None:
    data = canonical_report_bytes(report)
    if path:
        _write_atomic(path, data)
    else:
        sys.stdout.write(data.decode("ascii"))


# ---------------------------------------------------------------------------
# subcommand handlers
# ---------------------------------------------------------------------------


def _cmd_ot(args) -> int:
    exprs = [ordertype.parse(text) for text in args.exprs]
    if args.ot_op == "normalize":
        print(ordertype.normalize(exprs[0]))
    elif args.ot_op == "reverse":
        print(ordertype.normalize(ordertype.reverse(exprs[0])))
    elif args.ot_op == "eq":
        print("true" if ordertype.equal(exprs[0], exprs[1]) else "false")
    elif args.ot_op == "add":
        print(ordertype.add(exprs[0], exprs[1]))
    elif args.ot_op == "mul":
        print(ordertype.mul(exprs[0], exprs[1]))
    return 0


def _build_presentation(args):
    target = ordertype.parse(args.type)
    schedule = Schedule.parse(args.schedule)
    return std_presentation(target, schedule, stride=args.stride,
                            offset=args.offset)


def _cmd_present_build(args) -> int:
    pres = _build_presentation(args)
    stages = [(s, pres.prefix(s)) for s in range(1, args.stages + 1)]
    _write_atomic(args.out, factfile.render_stages(stages).encode("ascii"))
    return 0


def _cmd_op_run(args) -> int:
    op = enumop.parse_operator(args.op)
    if args.infile:
        inputs = factfile.read_stages(args.infile)
    else:
        if not args.type:
            raise CliError("op run needs --in or --type")
        pres = _build_presentation(args)
        inputs = [(s, pres.prefix(s)) for s in range(1, args.stages + 1)]
    outputs = []
    for stage_no, diag in inputs:
        out = op.apply(diag)
        if len(out) > args.max_facts:
            raise CliError(
                f"stage {stage_no} produced {len(out)} facts (budget {args.max_facts})"
            )
        outputs.append((stage_no, out))
    _write_atomic(args.out, factfile.render_stages(outputs).encode("ascii"))
    return 0


def _cmd_check(args) -> int:
    seed = args.seed if args.seed is not None else env_seed()
    if args.kind == "linear":
        if not args.infile:
            raise CliError("check linear needs --in FILE")
        with open(args.infile, "r", encoding="ascii") as fh:
            raw = factfile.parse_raw_stages(fh.read())
        report = analysis.make_report("linear", True, [])
        for stage_no, elements, pairs in raw:
            stage_report = analysis.check_linear(elements, pairs)
            if not analysis.passed(stage_report):
                report = stage_report
                report["stages"] = stage_no
                break
    else:
        if not args.op:
            raise CliError(f"check {args.kind} needs --op")
        op = enumop.parse_operator(args.op)
        if args.kind == "monotone":
            report = analysis.check_monotone(op, trials=args.trials, seed=seed)
        elif args.kind == "oracle":
            report = analysis.oracle_compare(op, trials=args.trials, seed=seed)
        elif args.kind == "schedule":
            report = analysis.check_schedule_invariance(op, seed=seed)
        else:
            raise CliError(f"unknown check {args.kind!r}")
    _emit_report(report, args.report)
    return 0 if analysis.passed(report) else 1


def _cmd_exp(args) -> int:
    if args.exp_op == "list":
        for name in sorted(EXPERIMENTS):
            print(name)
        return 0
    seed = args.seed if args.seed is not None else env_seed()
    config = RunConfig(seed=seed)
    report = run_experiment(args.id, config, stages=args.stages)
    _emit_report(report, args.report)
    return 0 if report["verdict"] == "pass" else 1


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ordembed",
        description="monotone operators between growing linear orders",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_ot = sub.add_parser("ot", help="symbolic order-type arithmetic")
    p_ot.add_argument("ot_op",
                      choices=["normalize", "eq", "reverse", "add", "mul"])
    p_ot.add_argument("exprs", nargs="+", help="expression(s), e.g. 'w^2*3 + w'")
    p_ot.set_defaults(handler=_cmd_ot)

    p_present = sub.add_parser("present", help="build presentations")
    present_sub = p_present.add_subparsers(dest="present_op", required=True)
    p_build = present_sub.add_parser("build", help="write a staged fact file")
    p_build.add_argument("--type", required=True, help="target order type")
    p_build.add_argument("--schedule", default="standard")
    p_build.add_argument("--stages", type=int, required=True)
    p_build.add_argument("--stride", type=int, default=1)
    p_build.add_argument("--offset", type=int, default=0)
    p_build.add_argument("--out", required=True)
    p_build.set_defaults(handler=_cmd_present_build)

    p_op = sub.add_parser("op", help="run an operator over stages")
    op_sub = p_op.add_subparsers(dest="op_op", required=True)
    p_run = op_sub.add_parser("run")
    p_run.add_argument("--op", required=True, help="operator identifier")
    p_run.add_argument("--in", dest="infile", help="staged input fact file")
    p_run.add_argument("--type", help="build a standard presentation instead")
    p_run.add_argument("--schedule", default="standard")
    p_run.add_argument("--stride", type=int, default=1)
    p_run.add_argument("--offset", type=int, default=0)
    p_run.add_argument("--stages", type=int, default=50)
    p_run.add_argument("--max-facts", type=int, default=200_000)
    p_run.add_argument("--out", required=True)
    p_run.set_defaults(handler=_cmd_op_run)

    p_check = sub.add_parser("check", help="property checks")
    p_check.add_argument("kind",
                         choices=["monotone", "linear", "schedule", "oracle"])
    p_check.add_argument("--op", help="operator identifier")
    p_check.add_argument("--in", dest="infile", help="fact file for linear")
    p_check.add_argument("--trials", type=int, default=500)
    p_check.add_argument("--seed", type=int, default=None)
    p_check.add_argument("--report", help="write the JSON report here")
    p_check.set_defaults(handler=_cmd_check)

    p_exp = sub.add_parser("exp", help="scripted experiments")
    exp_sub = p_exp.add_subparsers(dest="exp_op", required=True)
    exp_sub.add_parser("list")
    p_exp_run = exp_sub.add_parser("run")
    p_exp_run.add_argument("id", help="experiment identifier")
    p_exp_run.add_argument("--stages", type=int, default=None)
    p_exp_run.add_argument("--seed", type=int, default=None)
    p_exp_run.add_argument("--report", help="write the JSON report here")
    for sp in (exp_sub.choices["list"], p_exp_run):
        sp.set_defaults(handler=_cmd_exp)
    return parser


def main(argv=None) -> int:
    parser = _parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except (ordertype.ExprSyntaxError, ordertype.UnsupportedForm,
            factfile.FactFileError, enumop.NonAtomInput,
            enumop.InputOutsideFragment, CliError, KeyError,
            ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
