"""Abstract syntax for propositional programs with aggregates.

All values are immutable.  Atoms compare by name, aggregates compare as
multisets of weighted literals, and rules compare their heads as sets.
"""

from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Union

INT64_MIN = -(2**63)
INT64_MAX = 2**63 - 1

BOTTOM_NAME = "#false"


class WeightOverflowError(ArithmeticError):
    """Raised when weight or bound arithmetic leaves the signed 64-bit range."""


def checked(value: int) -> int:
    if not INT64_MIN <= value <= INT64_MAX:
        raise WeightOverflowError(f"integer {value} does not fit in 64 bits")
    return value


@dataclass(frozen=True, order=True)
class Atom:
    name: str

    def __post_init__(self):
        if not self.name:
            raise ValueError("atom names must be nonempty")

    @property
    def is_bottom(self) -> bool:
        return self.name == BOTTOM_NAME

    def __str__(self):
        return self.name


BOTTOM = Atom(BOTTOM_NAME)


@dataclass(frozen=True, order=True)
class PropLiteral:
    """An atom preceded by ``negations`` negation-as-failure symbols."""

    atom: Atom
    negations: int = 0

    def __post_init__(self):
        if self.negations < 0:
            raise ValueError("negation count must be nonnegative")

    @property
    def is_positive(self) -> bool:
        return self.negations == 0

    def negate(self) -> PropLiteral:
        return PropLiteral(self.atom, self.negations + 1)

    def __str__(self):
        return "~" * self.negations + self.atom.name


TOP = PropLiteral(BOTTOM, 1)
FALSE = PropLiteral(BOTTOM, 0)


class AggFunction(enum.Enum):
    SUM = "sum"
    AVG = "avg"
    MIN = "min"
    MAX = "max"
    COUNT = "count"
    EVEN = "even"
    ODD = "odd"


class Comparator(enum.Enum):
    LT = "<"
    LE = "<="
    GE = ">="
    GT = ">"
    EQ = "="
    NE = "!="

    def holds(self, left, right) -> bool:
        if self is Comparator.LT:
            return left < right
        if self is Comparator.LE:
            return left <= right
        if self is Comparator.GE:
            return left >= right
        if self is Comparator.GT:
            return left > right
        if self is Comparator.EQ:
            return left == right
        return left != right


UNWEIGHTED = (AggFunction.COUNT, AggFunction.EVEN, AggFunction.ODD)
PARITY = (AggFunction.EVEN, AggFunction.ODD)

Element = tuple[int, PropLiteral]


@dataclass(frozen=True, eq=False)
class Aggregate:
    """``function[w1:l1, ..., wn:ln] comparator bound``.

    ``elements`` keeps input order for printing; equality and hashing treat it
    as a multiset.  Unweighted functions store weight 1 on every element.
    """

    function: AggFunction
    elements: tuple[Element, ...]
    comparator: Comparator | None = None
    bound: int | None = None
    _key: tuple = field(init=False, repr=False)

    def __post_init__(self):
        elements = tuple((int(w), lit) for w, lit in self.elements)
        object.__setattr__(self, "elements", elements)
        if self.function in PARITY:
            if self.comparator is not None or self.bound is not None:
                raise ValueError(f"{self.function.value} takes no comparator or bound")
        elif self.comparator is None or self.bound is None:
            raise ValueError(f"{self.function.value} requires a comparator and a bound")
        if self.function in UNWEIGHTED and any(w != 1 for w, _ in elements):
            raise ValueError(f"{self.function.value} elements must have weight 1")
        for w, lit in elements:
            checked(w)
            if not isinstance(lit, PropLiteral):
                raise TypeError("aggregate elements must be propositional literals")
        if self.bound is not None:
            checked(self.bound)
        key = (self.function, frozenset(Counter(elements).items()), self.comparator, self.bound)
        object.__setattr__(self, "_key", key)

    @classmethod
    def unweighted(cls, function, literals, comparator=None, bound=None) -> Aggregate:
        return cls(function, tuple((1, lit) for lit in literals), comparator, bound)

    @property
    def literals(self) -> tuple[PropLiteral, ...]:
        return tuple(lit for _, lit in self.elements)

    def atoms(self) -> set[Atom]:
        return {lit.atom for _, lit in self.elements if not lit.atom.is_bottom}

    def __eq__(self, other):
        if not isinstance(other, Aggregate):
            return NotImplemented
        return self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return f"Aggregate({self})"

    def __str__(self):
        from .textio import format_literal

        return format_literal(self)


Literal = Union[PropLiteral, Aggregate]


@dataclass(frozen=True, eq=False)
class Rule:
    """``h1 | ... | hm :- b1, ..., bn``; ``head`` never contains the bottom atom."""

    head: tuple[Atom, ...]
    body: tuple[Literal, ...] = ()
    raw_head_had_bottom: bool = False

    def __post_init__(self):
        head = []
        had_bottom = self.raw_head_had_bottom
        for atom in self.head:
            if atom.is_bottom:
                had_bottom = True
            elif atom not in head:
                head.append(atom)
        object.__setattr__(self, "head", tuple(head))
        object.__setattr__(self, "body", tuple(self.body))
        object.__setattr__(self, "raw_head_had_bottom", had_bottom)

    @property
    def is_constraint(self) -> bool:
        return not self.head

    def aggregates(self) -> list[Aggregate]:
        return [lit for lit in self.body if isinstance(lit, Aggregate)]

    def atoms(self) -> set[Atom]:
        found = set(self.head)
        for lit in self.body:
            if isinstance(lit, Aggregate):
                found |= lit.atoms()
            elif not lit.atom.is_bottom:
                found.add(lit.atom)
        return found

    def _key(self):
        return frozenset(self.head), self.body

    def __eq__(self, other):
        if not isinstance(other, Rule):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __str__(self):
        from .textio import format_rule

        return format_rule(self)


@dataclass(frozen=True)
class Program:
    rules: tuple[Rule, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "rules", tuple(self.rules))

    def __iter__(self):
        return iter(self.rules)

    def __len__(self):
        return len(self.rules)

    def __add__(self, other: Program) -> Program:
        return Program(self.rules + tuple(other.rules))

    def __str__(self):
        from .textio import print_program

        return print_program(self)


def atom(name: str) -> Atom:
    return Atom(name)


def lit(name: str, negations: int = 0) -> PropLiteral:
    return PropLiteral(Atom(name), negations)


def atoms_of(program: Program | Iterable[Rule]) -> list[Atom]:
    """Non-bottom atoms occurring anywhere, in lexicographic order."""
    found: set[Atom] = set()
    for rule in program:
        found |= rule.atoms()
    return sorted(found)


def aggregates_of(program: Program | Iterable[Rule]) -> list[Aggregate]:
    """Structurally distinct aggregates in order of first occurrence."""
    seen: dict[Aggregate, None] = {}
    for rule in program:
        for agg in rule.aggregates():
            seen.setdefault(agg, None)
    return list(seen)


def aggregate_size(agg: Aggregate) -> int:
    return len(agg.elements) + (0 if agg.bound is None else 1)


def program_size(program: Program | Iterable[Rule]) -> int:
    """Symbol count: head atoms, body literals, aggregate elements and bounds."""
    size = 0
    for rule in program:
        size += len(rule.head)
        for lit in rule.body:
            size += aggregate_size(lit) if isinstance(lit, Aggregate) else 1
    return size
