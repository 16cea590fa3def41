"""Command line interface.

::

    koszul eval <file> <expr>
    koszul check <file> [--suite NAME] [--seed N] [--window K] [--format json|text]
    koszul report [--format json|text] [--input FILE]

Exit codes: 0 when every selected check passes, 1 when one fails, 2 for
usage errors (bad arguments, unreadable or invalid files, parse errors).
The environment variable ``KOSZUL_WINDOW`` overrides the default window.
"""

import argparse
import os
import sys

from .errors import KoszulError, ParseError
from .parser import to_text
from .report import emit, load_reports, overall_passed
from .structure import load_structure_file
from .suites import DEFAULT_WINDOW, SUITES, Context, run_suite

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _default_window():
    raw = os.environ.get("KOSZUL_WINDOW")
    if raw is None:
        return DEFAULT_WINDOW
    try:
        value = int(raw)
    except ValueError:
        raise KoszulError(f"KOSZUL_WINDOW must be an integer, got {raw!r}") from None
    if value < 0:
        raise KoszulError("KOSZUL_WINDOW must be non-negative")
    return value


def build_parser():
    p = _Parser(prog="koszul", description="Exact checks for higher Koszul brackets and BV operators.")
    sub = p.add_subparsers(dest="command", required=True)
    e = sub.add_parser("eval", help="parse and print an expression")
    e.add_argument("file")
    e.add_argument("expr")
    c = sub.add_parser("check", help="run verification suites")
    c.add_argument("file")
    c.add_argument("--suite", help=f"one of: all, {', '.join(SUITES)}")
    c.add_argument("--seed", type=int)
    c.add_argument("--window", type=int)
    c.add_argument("--format", choices=("json", "text"), default="json")
    r = sub.add_parser("report", help="re-emit saved reports")
    r.add_argument("--format", choices=("json", "text"), default="text")
    r.add_argument("--input", help="JSON reports (default: standard input)")
    return p


def _cmd_eval(args, out):
    sf = load_structure_file(args.file)
    value = sf.parse(args.expr)
    out.write(to_text(value) + "\n")
    return EXIT_PASS


def _cmd_check(args, out):
    sf = load_structure_file(args.file)
    names = [args.suite] if args.suite else (sf.suites or ["all"])
    if "all" in names:
        names = list(SUITES)
    for n in names:
        if n not in SUITES:
            raise KoszulError(f"unknown suite {n!r}; known: all, {', '.join(SUITES)}")
    window = args.window if args.window is not None else (sf.window if sf.window is not None
                                                          else _default_window())
    if window < 0:
        raise KoszulError("the window must be non-negative")
    seed = args.seed if args.seed is not None else sf.seed
    ctx = Context(seed=seed, window=window, P=sf.P, M=sf.M if sf.P is not None else None,
                  rho=sf.rho, sigma=sf.sigma)
    reports = []
    for n in names:
        reports += run_suite(n, ctx)
    out.write(emit(reports, args.format) + "\n")
    return EXIT_PASS if overall_passed(reports) else EXIT_FAIL


def _cmd_report(args, out):
    if args.input:
        with open(args.input, "r", encoding="utf-8") as fh:
            text = fh.read()
    else:
        text = sys.stdin.read()
    try:
        reports = load_reports(text)
    except (ValueError, KeyError, TypeError) as exc:
        raise KoszulError(f"invalid report input: {exc}") from None
    out.write(emit(reports, args.format) + "\n")
    return EXIT_PASS if overall_passed(reports) else EXIT_FAIL


def main(argv=None, out=None):
    out = sys.stdout if out is None else out
    args = build_parser().parse_args(argv)
    handler = {"eval": _cmd_eval, "check": _cmd_check, "report": _cmd_report}[args.command]
    try:
        return handler(args, out)
    except ParseError as exc:
        sys.stderr.write(f"koszul: parse error: {exc}\n")
    except (KoszulError, OSError) as exc:
        sys.stderr.write(f"koszul: {exc}\n")
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
