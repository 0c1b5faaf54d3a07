"""Command-line entry point: plan checking and ad hoc word-problem queries."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import HopfForgeError
from .plan import RunOptions, load, run, word_in
from .report import REPORT_SCHEMA
from .tower import format_order
from .words import format_word

EXIT_OK, EXIT_FAILED, EXIT_PLAN_ERROR = 0, 1, 2


def _bounds(text: str) -> tuple[int, int]:
    try:
        length, power = (int(part) for part in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("expected L,P with two integers") from None
    if length < 0 or power < 1:
        raise argparse.ArgumentTypeError("need L >= 0 and P >= 1")
    return length, power


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hopf-forge", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    check = sub.add_parser("check", help="run every check and recipe in a plan file")
    check.add_argument("plan", type=Path)
    check.add_argument("--json", action="store_true", help="emit the report as one JSON document")
    check.add_argument("--seed", type=int, default=0, help="seed for randomized checks")
    check.add_argument("--bound", type=_bounds, default=None, metavar="L,P",
                       help="elementary search bounds (max word length, max power)")

    for name, nwords, helptext in (("reduce", 1, "print the normal form of a word"),
                                   ("equal", 2, "decide whether two words are equal"),
                                   ("order", 1, "print the order of an element"),
                                   ("member", 2, "find n with w = g^n (arguments: g w)")):
        cmd = sub.add_parser(name, help=helptext)
        cmd.add_argument("--plan", type=Path, required=True)
        cmd.add_argument("group")
        cmd.add_argument("words", nargs=nwords)

    sub.add_parser("schema", help="print the JSON schema of check --json output")
    return parser


def _load(path: Path):
    text = path.read_text(encoding="utf-8")
    return load(text)


def _check(args) -> int:
    env = _load(args.plan)
    options = RunOptions(seed=args.seed)
    if args.bound is not None:
        options.bounds = args.bound
    report = run(env, options, plan_name=args.plan.stem)
    if args.json:
        print(json.dumps(report.to_json(), indent=2))
    else:
        print(report.format_table())
    return EXIT_OK if report.all_passed else EXIT_FAILED


def _adhoc(args) -> int:
    env = _load(args.plan)
    if args.group not in env.groups:
        print(f"error: no group named {args.group!r} in {args.plan}", file=sys.stderr)
        return EXIT_FAILED
    node = env.groups[args.group]
    try:
        words = [word_in(node, w) for w in args.words]
        if args.command == "reduce":
            print(format_word(node.reduce(words[0])))
        elif args.command == "equal":
            print("true" if node.are_equal(*words) else "false")
        elif args.command == "order":
            print(format_order(node.order(words[0])))
        else:
            n = node.cyclic_member(*words)
            print("none" if n is None else n)
    except HopfForgeError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAILED
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "schema":
        print(json.dumps(REPORT_SCHEMA, indent=2))
        return EXIT_OK
    try:
        if args.command == "check":
            return _check(args)
        return _adhoc(args)
    except (OSError, UnicodeDecodeError) as exc:
        print(f"error: cannot read plan: {exc}", file=sys.stderr)
        return EXIT_PLAN_ERROR
    except HopfForgeError as exc:
        # parse and resolve failures; anything raised while running is reported as an entry
        print(f"error: {args.plan}:{exc}", file=sys.stderr)
        return EXIT_PLAN_ERROR


if __name__ == "__main__":
    sys.exit(main())
