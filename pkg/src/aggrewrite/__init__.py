"""Faithful rewriting of aggregates into lparse-like programs."""

from .core import (
    AggFunction,
    Aggregate,
    Atom,
    Comparator,
    Program,
    PropLiteral,
    Rule,
    WeightOverflowError,
)
from .normalize import normalize_aggregate, normalize_program
from .rewrite import FreshNames, Mode, finalize_lparse, rewrite_program, translate
from .semantics import equivalent, stable_models, strongly_equivalent
from .textio import ParseError, parse_program, print_program

__version__ = "0.1.0"

__all__ = [
    "AggFunction",
    "Aggregate",
    "Atom",
    "Comparator",
    "FreshNames",
    "Mode",
    "ParseError",
    "Program",
    "PropLiteral",
    "Rule",
    "WeightOverflowError",
    "equivalent",
    "finalize_lparse",
    "normalize_aggregate",
    "normalize_program",
    "parse_program",
    "print_program",
    "rewrite_program",
    "stable_models",
    "strongly_equivalent",
    "translate",
]
