"""Command-line driver: ``lambdaq pqca-run | compile | reduce | compare | bench``.

Exit codes: 0 success, 1 parse error, 2 validation failure (strict mode),
3 fuel exhausted, 4 reference and compiled results differ.
"""
from __future__ import annotations

import argparse
import random
import sys
from typing import Mapping

from . import compiler, harness
from .catalog import random_spec
from .encodings import library
from .pqca import (PqcaSpec, SpecError, acceptance_probability, format_spec, load_spec, run,
                   validate)
from .reduction import reduce
from .terms import TermSyntaxError, parse_term, show, substitute

EXIT_PARSE, EXIT_VALIDATION, EXIT_FUEL, EXIT_MISMATCH = 1, 2, 3, 4


class CliError(Exception):
    def __init__(self, message: str, code: int) -> None:
        super().__init__(message)
        self.code = code


class Output:
    """Text tables for people, ``key=value`` lines with ``--format=machine``."""

    def __init__(self, machine: bool, stream=None) -> None:
        self.machine = machine
        self.stream = stream or sys.stdout

    def line(self, text: str) -> None:
        print(text, file=self.stream)

    def field(self, key: str, value) -> None:
        if self.machine:
            self.line(f"{key}={value}")
        else:
            self.line(f"{key.replace('_', ' ')}: {value}")

    def state(self, state: Mapping, prefix: str = "") -> None:
        for config, amp in sorted(state.items()):
            cells = " ".join(map(str, config))
            if self.machine:
                self.line(f"{prefix}config={','.join(map(str, config))} amplitude={amp}")
            else:
                self.line(f"  {amp} [{cells}]")


def fmt_config(config) -> str:
    return "[" + " ".join(map(str, config)) + "]"


# ---------------------------------------------------------------- loading

def load(args) -> tuple[PqcaSpec, dict]:
    if args.spec is None:
        if args.seed is None:
            raise CliError("give a spec file or --seed for a random one", EXIT_PARSE)
        spec, initial = random_spec(random.Random(args.seed), name=f"random-{args.seed}")
    else:
        try:
            spec, initial = load_spec(args.spec)
        except OSError as exc:
            raise CliError(f"cannot read {args.spec}: {exc.strerror}", EXIT_PARSE) from exc
        except SpecError as exc:
            raise CliError(f"{args.spec}: {exc}", EXIT_PARSE) from exc
    report = validate(spec, strict=args.strict_unitary)
    for warning in report.warnings:
        if not args.allow_nonunitary:
            print(f"warning: {warning}", file=sys.stderr)
    if not report.ok:
        raise CliError("; ".join(report.errors), EXIT_VALIDATION)
    return spec, initial


def read_source(args) -> str:
    if args.expr is not None:
        return args.expr
    if args.term_file in (None, "-"):
        return sys.stdin.read()
    try:
        with open(args.term_file, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise CliError(f"cannot read {args.term_file}: {exc.strerror}", EXIT_PARSE) from exc


# ---------------------------------------------------------------- verbs

def cmd_pqca_run(args, out: Output) -> int:
    spec, initial = load(args)
    state = run(spec, initial, args.k)
    out.field("spec", spec.name)
    out.field("k", args.k)
    if not out.machine:
        out.line("state:")
    out.state(state)
    out.field("accept_probability", acceptance_probability(state, spec))
    return 0


def cmd_compile(args, out: Output) -> int:
    spec, initial = load(args)
    compiled = compiler.compile_spec(spec, initial, lcm=args.lcm_scaling)
    text = compiler.write_manifest(compiled)
    if args.output in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
        out.field("manifest", args.output)
        out.field("b", compiled.ledger.b)
        out.field("d", compiled.ledger.d)
        out.field("w", compiled.ledger.width)
    return 0


def bindings(args) -> dict:
    names: dict = {}
    if args.lib:
        for name in ("TRUE", "FALSE", "IF", "AND", "OR", "NOT", "SUCC", "PLUS", "MULT",
                     "PRED", "ISZERO", "SUB", "LEQ", "EQUAL", "PAIR", "FST", "SND", "NIL",
                     "NULL", "CONS", "HEAD", "TAIL"):
            names[name] = library(name)
    for path in args.with_manifest or ():
        try:
            with open(path, encoding="utf-8") as fh:
                manifest = compiler.read_manifest(fh.read())
        except OSError as exc:
            raise CliError(f"cannot read {path}: {exc.strerror}", EXIT_PARSE) from exc
        except TermSyntaxError as exc:
            raise CliError(f"{path}: {exc}", EXIT_PARSE) from exc
        for name in compiler.MANIFEST_TERMS:
            if name in manifest:
                names[name] = manifest[name]
    return names


def cmd_reduce(args, out: Output) -> int:
    source = read_source(args)
    try:
        term = parse_term(source)
    except TermSyntaxError as exc:
        raise CliError(str(exc), EXIT_PARSE) from exc
    for name, value in bindings(args).items():
        term = substitute(term, name, value)
    trace = reduce(term, args.steps, trace=args.trace)
    if args.trace:
        for i, t in enumerate(trace.history):
            out.field(f"step_{i}" if out.machine else f"step {i}", show(t))
    out.field("result", show(trace.final))
    out.field("steps", trace.steps)
    out.field("work", trace.work)
    if trace.fuel_exhausted:
        out.field("fuel_exhausted", "true")
        return EXIT_FUEL
    return 0


def cmd_compare(args, out: Output) -> int:
    spec, initial = load(args)
    try:
        report = harness.compare(spec, initial, args.k, args.decode_mode, args.lcm_scaling,
                                 args.steps)
    except compiler.ZeroTotalCount as exc:
        raise CliError(str(exc), EXIT_MISMATCH) from exc
    out.field("spec", report.spec)
    out.field("k", report.k)
    if not out.machine:
        out.line("reference:")
    out.state(report.left, "left_")
    if not out.machine:
        out.line("compiled:")
    out.state(report.right, "right_")
    out.field("parallel_steps", report.steps)
    out.field("work", report.work)
    for config, a, b in report.diffs():
        if out.machine:
            out.line(f"diff config={','.join(map(str, config))} left={a} right={b}")
        else:
            out.line(f"  differs at {fmt_config(config)}: reference {a}, compiled {b}")
    out.field("equal", "true" if report.equal else "false")
    # wall time goes to stderr so stdout stays byte-identical across runs
    print(f"wall time: {report.wall_time:.3f}s", file=sys.stderr)
    if report.fuel_exhausted:
        out.field("fuel_exhausted", "true")
        return EXIT_FUEL
    return 0 if report.equal else EXIT_MISMATCH


def parse_ks(text: str) -> list[int]:
    ks: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if "-" in part:
            lo, hi = part.split("-", 1)
            ks.extend(range(int(lo), int(hi) + 1))
        elif part:
            ks.append(int(part))
    if not ks or any(k < 0 for k in ks):
        raise argparse.ArgumentTypeError(f"bad k list {text!r}")
    return sorted(set(ks))


def cmd_bench(args, out: Output) -> int:
    spec, initial = load(args)
    rows, exhausted = harness.bench(spec, initial, args.ks, args.lcm_scaling, args.steps)
    out.field("spec", spec.name)
    if not out.machine:
        out.line(f"{'k':>4} {'steps':>10} {'work':>12} {'wall(s)':>9}")
    for r in rows:
        if out.machine:
            out.line(f"k={r.k} steps={r.steps} work={r.work} wall_time={r.wall_time:.3f}")
        else:
            out.line(f"{r.k:>4} {r.steps:>10} {r.work:>12} {r.wall_time:>9.3f}")
    if len({r.k for r in rows}) >= 2:
        fit = harness.linear_fit(rows)
        out.field("slope", f"{fit.slope:.4f}")
        out.field("intercept", f"{fit.intercept:.4f}")
        out.field("rms_residual", f"{fit.rms_residual:.4f}")
        out.field("relative_residual", f"{fit.relative_residual:.6f}")
    if exhausted:
        out.field("fuel_exhausted", "true")
        return EXIT_FUEL
    return 0


def cmd_random_spec(args, out: Output) -> int:
    spec, initial = random_spec(random.Random(args.seed))
    sys.stdout.write(format_spec(spec, initial))
    return 0


# ---------------------------------------------------------------- argument parsing

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lambdaq",
        description="Compile partitioned quantum cellular automata to lambda-q terms "
                    "and check them against a reference simulator.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "machine"), default="text",
                        help="machine: one key=value record per line")
    common.add_argument("--steps", type=int, default=compiler.DEFAULT_FUEL, metavar="FUEL",
                        help="parallel-step budget (default %(default)s)")

    automaton = argparse.ArgumentParser(add_help=False)
    automaton.add_argument("spec", nargs="?", help="automaton spec file")
    automaton.add_argument("--seed", type=int, help="use a random catalog spec instead of a file")
    unitary = automaton.add_mutually_exclusive_group()
    unitary.add_argument("--strict-unitary", action="store_true",
                         help="reject non-unitary matrices (exit 2)")
    unitary.add_argument("--allow-nonunitary", action="store_true",
                         help="accept non-unitary matrices without a warning")
    automaton.add_argument("--lcm-scaling", action="store_true",
                           help="scale by the lcm of denominators instead of their product")

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("pqca-run", parents=[common, automaton], help="run the reference simulator")
    p.add_argument("-k", type=int, default=1, help="number of steps")
    p.set_defaults(func=cmd_pqca_run)

    p = sub.add_parser("compile", parents=[common, automaton], help="write a compiled manifest")
    p.add_argument("-o", "--output", help="manifest path (stdout if omitted)")
    p.set_defaults(func=cmd_compile)

    p = sub.add_parser("reduce", parents=[common], help="reduce a lambda-q term")
    p.add_argument("term_file", nargs="?", help="file holding the term ('-' for stdin)")
    p.add_argument("-e", "--expr", help="term given on the command line")
    p.add_argument("--trace", action="store_true", help="print every parallel step")
    p.add_argument("--with", dest="with_manifest", action="append", metavar="MANIFEST",
                   help="bind P, Q, STEP and ACC from a compiled manifest")
    p.add_argument("--lib", action="store_true",
                   help="bind library names (TRUE, EQUAL, CONS, ...) left free in the term")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("compare", parents=[common, automaton],
                       help="compare reference and compiled runs exactly")
    p.add_argument("-k", type=int, default=1, help="number of steps")
    p.add_argument("--decode-mode", choices=("ledger", "paper"), default="ledger",
                   help="divide counts by the tracked scale or by their sum")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("bench", parents=[common, automaton],
                       help="parallel steps against k with a linear fit")
    p.add_argument("--ks", type=parse_ks, default=[1, 2, 3, 4, 5],
                   help="k values, e.g. 1,2,4 or 0-5 (default 1-5)")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("random-spec", help="print a random catalog spec")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_random_spec)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "k", 0) is not None and getattr(args, "k", 0) < 0:
        print("error: k must be nonnegative", file=sys.stderr)
        return EXIT_PARSE
    out = Output(getattr(args, "format", "text") == "machine")
    try:
        return args.func(args, out)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
