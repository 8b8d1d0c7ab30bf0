"""Command-line front end.

Exit codes: 0 ok, 1 parse error, 2 resource limit (oracle cap, overflow,
unreadable file), 10 no stable models, 11 not equivalent, 12 fuzz failure.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import fields

from .core import (
    AggFunction,
    Aggregate,
    Atom,
    Comparator,
    Program,
    PropLiteral,
    Rule,
    WeightOverflowError,
    aggregates_of,
    atoms_of,
    checked,
)
from .depgraph import build_graph
from .fuzz import FuzzConfig, run_fuzz
from .normalize import normalize_program
from .rewrite import Mode, translate
from .semantics import DEFAULT_CAP, OracleTooLargeError, classify, equivalence_witness, stable_models
from .textio import ParseError, format_literal, parse_program, print_program

EXIT_OK = 0
EXIT_PARSE = 1
EXIT_RESOURCE = 2
EXIT_NO_MODELS = 10
EXIT_INEQUIVALENT = 11
EXIT_FUZZ_FAILURE = 12

FUZZ_DEFAULT_CAP = 64


class _Exit(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _read(path: str) -> str:
    try:
        if path == "-":
            return sys.stdin.read()
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise _Exit(EXIT_RESOURCE, f"{path}: {exc.strerror}") from exc


def _load(path: str, allow_reserved: bool = True) -> Program:
    text = _read(path)
    try:
        return parse_program(text, allow_reserved=allow_reserved)
    except ParseError as exc:
        raise _Exit(EXIT_PARSE, f"{path}:{exc}") from exc


def _write(path: str | None, text: str):
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise _Exit(EXIT_RESOURCE, f"{path}: {exc.strerror}") from exc


def _cap(args, default: int = DEFAULT_CAP) -> int:
    return default if args.cap is None else args.cap


def _int_list(text: str) -> list[int]:
    try:
        values = [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a comma-separated integer list: {text!r}") from exc
    if not values:
        raise argparse.ArgumentTypeError("list must be nonempty")
    return values


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def _nonnegative(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must be nonnegative")
    return value


def gss_program(u: list[int], v: list[int], b: int) -> Program:
    """Encoding of ``exists x forall y (u.x + v.y != b)`` as a disjunction-free program."""
    if not u or not v:
        raise ValueError("u and v must be nonempty")
    checked(sum(abs(w) for w in u) + sum(abs(w) for w in v))
    xs = [Atom(f"x{k}") for k in range(1, len(u) + 1)]
    ys = [Atom(f"y{k}") for k in range(1, len(v) + 1)]
    unequal = Atom("unequal")
    rules = [Rule((x,), (PropLiteral(x, 2),)) for x in xs]
    rules += [Rule((y,), (PropLiteral(unequal),)) for y in ys]
    rules.append(Rule((), (PropLiteral(unequal, 1),)))
    elements = tuple((w, PropLiteral(a)) for w, a in zip(u + v, xs + ys))
    rules.append(Rule((unequal,), (Aggregate(AggFunction.SUM, elements, Comparator.NE, b),)))
    return Program(tuple(rules))


# --- subcommands ------------------------------------------------------------------


def cmd_rewrite(args) -> int:
    program = _load(args.input, allow_reserved=False)
    out = translate(program, Mode(args.mode), finalize=not args.no_finalize)
    _write(args.output, print_program(out.program))
    if args.emit_hidden:
        _write(args.emit_hidden, "".join(f"{name}\n" for name in sorted(a.name for a in out.hidden)))
    if args.emit_graph:
        _write(args.emit_graph, build_graph(normalize_program(program)[0]).to_dot())
    return EXIT_OK


def _model_line(model) -> str:
    return " ".join(sorted(model.names()))


def cmd_solve(args) -> int:
    program = _load(args.input)
    found = stable_models(program, cap=_cap(args))
    lines = sorted(_model_line(m) for m in found)
    for line in lines:
        print(line)
    print(f"count: {len(found)}")
    return EXIT_OK if found else EXIT_NO_MODELS


def cmd_check(args) -> int:
    first = _load(args.input)
    second = _load(args.against)
    if args.project is None:
        context = atoms_of(first)
    else:
        context = [Atom(name.strip()) for name in args.project.split(",") if name.strip()]
    witness = equivalence_witness(first, second, context, _cap(args))
    if witness:
        print(f"not equivalent: {witness}")
        return EXIT_INEQUIVALENT
    print("equivalent")
    return EXIT_OK


def cmd_classify(args) -> int:
    program = _load(args.input)
    for agg in aggregates_of(program):
        print(f"{format_literal(agg)}\t{classify(agg, _cap(args)).value}")
    return EXIT_OK


def cmd_gss(args) -> int:
    try:
        program = gss_program(args.u, args.v, args.b)
    except WeightOverflowError as exc:
        raise _Exit(EXIT_RESOURCE, str(exc)) from exc
    _write(args.output, print_program(program))
    return EXIT_OK


def cmd_graph(args) -> int:
    program, _ = normalize_program(_load(args.input))
    _write(args.output, build_graph(program).to_dot())
    return EXIT_OK


def cmd_fuzz(args) -> int:
    config = FuzzConfig(
        atom_count=args.atoms,
        rule_count=args.rules,
        max_aggregate_elements=args.max_elements,
        weight_range=args.weight_range,
        bound_range=args.bound_range,
        iterations=args.iterations,
        seed=args.seed,
        cap=_cap(args, FUZZ_DEFAULT_CAP),
    )
    seeds = [(path, _load(path, allow_reserved=False)) for path in args.program]
    report = run_fuzz(config, seeds)
    if report.ok:
        print(f"ok: {report.checked} programs checked (seed {config.seed})")
        return EXIT_OK
    _write(args.reproducer, print_program(report.reproducer))
    print(f"FAIL {report.label}: {report.failure}")
    print(f"reproducer ({len(report.reproducer.rules)} rules) written to {args.reproducer}")
    return EXIT_FUZZ_FAILURE


# --- parser ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="aggrewrite",
        description="Rewrite propositional programs with aggregates into lparse-like programs.",
    )
    cap_help = f"oracle atom cap (default {DEFAULT_CAP}; fuzz {FUZZ_DEFAULT_CAP})"
    parser.add_argument("--cap", type=_positive, default=None, help=cap_help)
    # also accepted after the subcommand name
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--cap", type=_positive, default=argparse.SUPPRESS, help=cap_help)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("rewrite", parents=[common], help="normalize and rewrite a program")
    p.add_argument("input")
    p.add_argument("--mode", choices=[m.value for m in Mode], default=Mode.REFINED.value)
    p.add_argument("-o", "--output", default=None)
    p.add_argument("--no-finalize", action="store_true", help="stop before the lparse-like finalization")
    p.add_argument("--emit-hidden", metavar="PATH", help="write the fresh atoms, one per line")
    p.add_argument("--emit-graph", metavar="PATH", help="write the dependency graph in DOT format")
    p.set_defaults(run=cmd_rewrite)

    p = sub.add_parser("solve", parents=[common], help="enumerate stable models")
    p.add_argument("input")
    p.set_defaults(run=cmd_solve)

    p = sub.add_parser("check", parents=[common], help="compare stable models over a projection set")
    p.add_argument("input")
    p.add_argument("--against", required=True)
    p.add_argument("--project", default=None, help="comma-separated atoms (default: atoms of INPUT)")
    p.set_defaults(run=cmd_check)

    p = sub.add_parser("classify", parents=[common], help="monotonicity of each aggregate")
    p.add_argument("input")
    p.set_defaults(run=cmd_classify)

    p = sub.add_parser("gss", parents=[common], help="emit a Generalized Subset Sum encoding")
    p.add_argument("--u", type=_int_list, required=True)
    p.add_argument("--v", type=_int_list, required=True)
    p.add_argument("--b", type=int, required=True)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(run=cmd_gss)

    p = sub.add_parser("graph", parents=[common], help="dependency graph of the normalized program in DOT format")
    p.add_argument("input")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(run=cmd_graph)

    defaults = {f.name: f.default for f in fields(FuzzConfig)}
    p = sub.add_parser("fuzz", parents=[common], help="random end-to-end checks")
    p.add_argument("--atoms", type=_positive, default=defaults["atom_count"])
    p.add_argument("--rules", type=_positive, default=defaults["rule_count"])
    p.add_argument("--max-elements", type=_nonnegative, default=defaults["max_aggregate_elements"])
    p.add_argument("--weight-range", type=_nonnegative, default=defaults["weight_range"])
    p.add_argument("--bound-range", type=_nonnegative, default=defaults["bound_range"])
    p.add_argument("--iterations", type=_nonnegative, default=defaults["iterations"])
    p.add_argument("--seed", type=int, default=defaults["seed"])
    p.add_argument("--program", action="append", default=[], metavar="PATH", help="also check this program first")
    p.add_argument("--reproducer", default="fuzz-reproducer.lp", metavar="PATH")
    p.set_defaults(run=cmd_fuzz)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.run(args)
    except _Exit as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except OracleTooLargeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except WeightOverflowError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE


if __name__ == "__main__":
    sys.exit(main())
