"""Satisfaction, reducts, stable models and the equivalence notions built on them.

Two stable-model enumerators are provided.  :func:`stable_models_bruteforce`
follows the definition literally (every subset, explicit reduct programs) and
is meant as a reference on tiny inputs.  :func:`stable_models` computes the
same set by depth-first search over bitmask interpretations, checking each
rule as soon as all of its atoms are assigned; it is exact, just prunes
assignments that already violate a rule.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator, Sequence

from .core import (
    BOTTOM,
    FALSE,
    TOP,
    AggFunction,
    Aggregate,
    Atom,
    Literal,
    Program,
    PropLiteral,
    Rule,
    atoms_of,
)

DEFAULT_CAP = 22


class OracleTooLargeError(ValueError):
    """The brute-force oracle was asked to enumerate more atoms than its cap."""


class Interpretation(frozenset):
    """A set of atoms that never contains the bottom atom."""

    def __new__(cls, atoms: Iterable[Atom] = ()):
        self = super().__new__(cls, atoms)
        if BOTTOM in self:
            raise ValueError("interpretations cannot contain #false")
        return self

    def names(self) -> list[str]:
        return sorted(a.name for a in self)

    def __repr__(self):
        return "{" + ", ".join(self.names()) + "}"


@dataclass(frozen=True)
class SEModel:
    here: Interpretation
    there: Interpretation

    def __post_init__(self):
        if not self.here <= self.there:
            raise ValueError("SE-model requires here <= there")


def interpretation(*names: str) -> Interpretation:
    return Interpretation(Atom(n) for n in names)


def _check_cap(count: int, cap: int):
    if count > cap:
        raise OracleTooLargeError(f"oracle too large: {count} atoms exceed the cap of {cap}")


# --- satisfaction and reducts -------------------------------------------------


def _aggregate_value(agg: Aggregate, selected: list[int]) -> bool:
    f, cmp, b = agg.function, agg.comparator, agg.bound
    if f is AggFunction.SUM:
        return cmp.holds(sum(selected), b)
    if f is AggFunction.COUNT:
        return cmp.holds(len(selected), b)
    if f is AggFunction.AVG:
        # m >= 1, so comparing the sum with m*b is exact
        return bool(selected) and cmp.holds(sum(selected), len(selected) * b)
    if f is AggFunction.MIN:
        return cmp.holds(min(selected, default=math.inf), b)
    if f is AggFunction.MAX:
        return cmp.holds(max(selected, default=-math.inf), b)
    if f is AggFunction.EVEN:
        return len(selected) % 2 == 0
    return len(selected) % 2 == 1


def satisfies(i: Iterable[Atom], x) -> bool:
    """``i |= x`` for a literal, a rule, a program, or a conjunction (sequence) of literals."""
    if not isinstance(i, (frozenset, set)):
        i = frozenset(i)
    if isinstance(x, PropLiteral):
        value = x.atom in i  # bottom is never a member
        return value if x.negations % 2 == 0 else not value
    if isinstance(x, Aggregate):
        return _aggregate_value(x, [w for w, l in x.elements if satisfies(i, l)])
    if isinstance(x, Rule):
        return not satisfies(i, x.body) or any(a in i for a in x.head)
    if isinstance(x, Program):
        return all(satisfies(i, r) for r in x)
    return all(satisfies(i, l) for l in x)


def reduct_literal(i: Iterable[Atom], literal: Literal) -> Literal:
    """``F(I, l)``: negative literals are frozen to their value in ``i``."""
    if isinstance(literal, PropLiteral):
        if literal.negations == 0:
            return literal
        return TOP if satisfies(i, literal) else FALSE
    elements = tuple((w, reduct_literal(i, l)) for w, l in literal.elements)
    return Aggregate(literal.function, elements, literal.comparator, literal.bound)


def reduct(i: Iterable[Atom], program: Program) -> Program:
    i = frozenset(i)
    rules = [
        Rule(r.head, tuple(reduct_literal(i, l) for l in r.body), r.raw_head_had_bottom)
        for r in program
        if satisfies(i, r.body)
    ]
    return Program(tuple(rules))


def _subsets(atoms: Sequence[Atom]) -> Iterator[Interpretation]:
    for k in range(len(atoms) + 1):
        for combo in combinations(atoms, k):
            yield Interpretation(combo)


def _sort_models(models: Iterable[Interpretation]) -> list[Interpretation]:
    return sorted(models, key=lambda m: m.names())


def _universe(program: Program, universe) -> list[Atom]:
    atoms = atoms_of(program)
    if universe is None:
        return atoms
    universe = sorted(set(universe) - {BOTTOM})
    missing = set(atoms) - set(universe)
    if missing:
        raise ValueError(f"universe misses program atoms {sorted(a.name for a in missing)}")
    return universe


def stable_models_bruteforce(program: Program, universe=None, cap: int = DEFAULT_CAP) -> list[Interpretation]:
    """Stable models by testing every subset and every strict subset of each model."""
    atoms = _universe(program, universe)
    _check_cap(len(atoms), cap)
    result = []
    for i in _subsets(atoms):
        if not satisfies(i, program):
            continue
        red = reduct(i, program)
        if not any(satisfies(j, red) for j in _subsets(sorted(i)) if j != i):
            result.append(i)
    return _sort_models(result)


# --- bitmask search engine ------------------------------------------------------

# literal kinds: read the candidate subset, or frozen by the reference interpretation
_POS, _NEG_ODD, _NEG_EVEN = 0, 1, 2


def _kind(literal: PropLiteral) -> int:
    if literal.negations == 0:
        return _POS
    return _NEG_ODD if literal.negations % 2 else _NEG_EVEN


def _frozen_value(kind: int, mask: int, i: int) -> bool:
    return (i & mask == 0) if kind == _NEG_ODD else (i & mask != 0)


class _CompiledAggregate:
    __slots__ = ("agg", "elements", "mask")

    def __init__(self, agg: Aggregate, index: dict[Atom, int]):
        self.agg = agg
        self.elements = [(w, _kind(l), 0 if l.atom.is_bottom else 1 << index[l.atom]) for w, l in agg.elements]
        self.mask = 0
        for _, _, m in self.elements:
            self.mask |= m

    def holds(self, j: int, i: int) -> bool:
        selected = []
        for w, kind, mask in self.elements:
            if kind == _POS:
                if j & mask:
                    selected.append(w)
            elif _frozen_value(kind, mask, i):
                selected.append(w)
        return _aggregate_value(self.agg, selected)


class _CompiledRule:
    __slots__ = ("head", "pos", "dead", "frozen", "aggs", "mask")

    def __init__(self, rule: Rule, index: dict[Atom, int]):
        self.head = 0
        for a in rule.head:
            self.head |= 1 << index[a]
        self.pos = 0
        self.dead = False  # body contains the bare bottom atom
        self.frozen = []
        self.aggs = []
        for l in rule.body:
            if isinstance(l, Aggregate):
                self.aggs.append(_CompiledAggregate(l, index))
                continue
            mask = 0 if l.atom.is_bottom else 1 << index[l.atom]
            if l.negations == 0:
                if mask == 0:
                    self.dead = True
                self.pos |= mask
            else:
                self.frozen.append((_kind(l), mask))
        self.mask = self.head | self.pos
        for _, m in self.frozen:
            self.mask |= m
        for a in self.aggs:
            self.mask |= a.mask

    def body_true(self, j: int, i: int) -> bool:
        if self.dead or j & self.pos != self.pos:
            return False
        for kind, mask in self.frozen:
            if not _frozen_value(kind, mask, i):
                return False
        return all(a.holds(j, i) for a in self.aggs)


class _ReducedRule:
    """A rule of ``F(I, P)`` seen as a constraint on subsets ``J`` of ``I``."""

    __slots__ = ("head", "pos", "const", "aggs", "mask")

    def __init__(self, rule: _CompiledRule, i: int):
        self.head = rule.head & i
        self.pos = rule.pos
        self.aggs = []
        self.mask = (self.head | self.pos) & i
        for a in rule.aggs:
            fixed = []
            free = []
            for w, kind, mask in a.elements:
                if kind == _POS:
                    if mask & i:
                        free.append((w, mask))
                        self.mask |= mask
                elif _frozen_value(kind, mask, i):
                    fixed.append(w)
            self.aggs.append((a.agg, fixed, free))

    def satisfied(self, j: int) -> bool:
        if j & self.head:
            return True
        if j & self.pos != self.pos:
            return True
        for agg, fixed, free in self.aggs:
            selected = fixed + [w for w, m in free if j & m]
            if not _aggregate_value(agg, selected):
                return True
        return False


def _levels(rules, bits: list[int]) -> list[list]:
    """Bucket each rule at the search depth where its last relevant bit is decided."""
    position = {b: k for k, b in enumerate(bits)}
    buckets: list[list] = [[] for _ in range(len(bits) + 1)]
    for r in rules:
        depth = 0
        m = r.mask
        while m:
            low = m & -m
            depth = max(depth, position[low] + 1)
            m ^= low
        buckets[depth].append(r)
    return buckets


class _Engine:
    def __init__(self, program: Program, atoms: list[Atom]):
        self.atoms = atoms
        self.index = {a: k for k, a in enumerate(atoms)}
        self.rules = [_CompiledRule(r, self.index) for r in program]
        self.bits = [1 << k for k in range(len(atoms))]
        self.buckets = _levels(self.rules, self.bits)

    def decode(self, mask: int) -> Interpretation:
        return Interpretation(a for k, a in enumerate(self.atoms) if mask >> k & 1)

    def models(self) -> Iterator[int]:
        buckets, bits = self.buckets, self.bits
        n = len(bits)

        def ok(depth: int, i: int) -> bool:
            for r in buckets[depth]:
                if not (i & r.head) and r.body_true(i, i):
                    return False
            return True

        def dfs(depth: int, i: int):
            if depth == n:
                yield i
                return
            for candidate in (i, i | bits[depth]):
                if ok(depth + 1, candidate):
                    yield from dfs(depth + 1, candidate)

        if ok(0, 0):
            yield from dfs(0, 0)

    def smaller_model(self, i: int) -> int | None:
        """Some ``J`` strictly inside ``i`` with ``J |= F(i, P)``, or None."""
        reduced = [_ReducedRule(r, i) for r in self.rules if r.body_true(i, i)]
        bits = [b for b in self.bits if i & b]
        buckets = _levels(reduced, bits)
        n = len(bits)
        for r in buckets[0]:
            if not r.satisfied(0):
                return None

        def dfs(depth: int, j: int) -> int | None:
            if depth == n:
                return j if j != i else None
            for candidate in (j, j | bits[depth]):
                if all(r.satisfied(candidate) for r in buckets[depth + 1]):
                    found = dfs(depth + 1, candidate)
                    if found is not None:
                        return found
            return None

        return dfs(0, 0)


def _search_order(program: Program, universe: list[Atom]) -> list[Atom]:
    # first-appearance order lets rules be checked early in the search
    order: dict[Atom, None] = {}
    for rule in program:
        for a in rule.head:
            order.setdefault(a, None)
        for l in rule.body:
            lits = l.literals if isinstance(l, Aggregate) else (l,)
            for x in lits:
                if not x.atom.is_bottom:
                    order.setdefault(x.atom, None)
    for a in universe:
        order.setdefault(a, None)
    return list(order)


def _engine(program: Program, universe, cap: int) -> _Engine:
    atoms = _universe(program, universe)
    _check_cap(len(atoms), cap)
    return _Engine(program, _search_order(program, atoms))


def stable_models(program: Program, universe=None, cap: int = DEFAULT_CAP) -> list[Interpretation]:
    """All stable models over ``universe`` (default: the program's atoms), sorted."""
    engine = _engine(program, universe, cap)
    found = [engine.decode(i) for i in engine.models() if engine.smaller_model(i) is None]
    return _sort_models(found)


def unstable_witnesses(
    program: Program, universe=None, cap: int = DEFAULT_CAP
) -> Iterator[tuple[Interpretation, Interpretation]]:
    """Pairs ``(I, J)``: ``I`` a model that is not stable, ``J`` a strict subset modelling ``F(I, P)``."""
    engine = _engine(program, universe, cap)
    for i in engine.models():
        j = engine.smaller_model(i)
        if j is not None:
            yield engine.decode(i), engine.decode(j)


def models(program: Program, universe=None, cap: int = DEFAULT_CAP) -> list[Interpretation]:
    engine = _engine(program, universe, cap)
    return _sort_models(engine.decode(i) for i in engine.models())


# --- equivalence ----------------------------------------------------------------


def _project(models_: Iterable[Interpretation], context) -> set[frozenset]:
    context = frozenset(context)
    return {frozenset(m & context) for m in models_}


def equivalence_witness(p1: Program, p2: Program, context, cap: int = DEFAULT_CAP) -> str | None:
    """None when ``p1`` and ``p2`` are equivalent w.r.t. ``context``, else a description."""
    sm1 = stable_models(p1, cap=cap)
    sm2 = stable_models(p2, cap=cap)
    proj1, proj2 = _project(sm1, context), _project(sm2, context)
    for only, side in ((proj1 - proj2, "first"), (proj2 - proj1, "second")):
        if only:
            model = min(only, key=lambda m: sorted(a.name for a in m))
            return f"projected model {Interpretation(model)!r} only in the {side} program"
    if len(sm1) != len(sm2):
        return f"stable model counts differ: {len(sm1)} vs {len(sm2)}"
    return None


def equivalent(p1: Program, p2: Program, context, cap: int = DEFAULT_CAP) -> bool:
    return equivalence_witness(p1, p2, context, cap) is None


def _conj_atoms(conj: Sequence[Literal]) -> set[Atom]:
    found: set[Atom] = set()
    for l in conj:
        found |= l.atoms() if isinstance(l, Aggregate) else {l.atom}
    found.discard(BOTTOM)
    return found


def se_models(conj: Sequence[Literal], universe, cap: int = DEFAULT_CAP) -> set[SEModel]:
    atoms = sorted(set(universe) - {BOTTOM})
    _check_cap(len(atoms), cap)
    result = set()
    for i in _subsets(atoms):
        if not satisfies(i, conj):
            continue
        reduced = [reduct_literal(i, l) for l in conj]
        for j in _subsets(sorted(i)):
            if satisfies(j, reduced):
                result.add(SEModel(j, i))
    return result


def strongly_equivalent(c1: Sequence[Literal], c2: Sequence[Literal], cap: int = DEFAULT_CAP) -> bool:
    universe = _conj_atoms(c1) | _conj_atoms(c2)
    return se_models(c1, universe, cap) == se_models(c2, universe, cap)


# --- monotonicity -----------------------------------------------------------------


class Monotonicity(enum.Enum):
    MONOTONE = "MONOTONE"
    CONVEX = "CONVEX"
    NONCONVEX = "NONCONVEX"


def _submasks(mask: int) -> Iterator[int]:
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def classify(agg: Aggregate, cap: int = DEFAULT_CAP) -> Monotonicity:
    """Strongest of monotone / convex (in program reducts) holding for ``agg``.

    Satisfaction of ``agg`` only depends on its own atoms, so the quantifiers
    range over subsets of those.
    """
    atoms = sorted(agg.atoms())
    _check_cap(len(atoms), cap)
    compiled = _CompiledAggregate(agg, {a: k for k, a in enumerate(atoms)})
    monotone = True
    for i in range(1 << len(atoms)):
        sat = {j for j in _submasks(i) if compiled.holds(j, i)}
        for j in sat:
            free = i & ~j
            for extra in _submasks(free):
                k = j | extra
                if k in sat:
                    continue
                monotone = False
                # k fails between j and some satisfying superset l?
                if any(l in sat for l in (k | e for e in _submasks(i & ~k))):
                    return Monotonicity.NONCONVEX
    return Monotonicity.MONOTONE if monotone else Monotonicity.CONVEX


# --- component property -------------------------------------------------------------


class PreconditionError(ValueError):
    pass


class ComponentPropertyViolation(AssertionError):
    """No component witnesses the reduct-model property for the given pair."""


def check_component_property(program: Program, i: Iterable[Atom], j: Iterable[Atom]) -> frozenset:
    """A component ``C`` with ``I & (C - J)`` nonempty and ``I - (C - J) |= F(I, P)``.

    Components are taken from the dependency graph of the normalized program,
    which has the same reduct models below ``I`` as ``program``.
    """
    from .depgraph import build_graph
    from .normalize import normalize_program

    i, j = Interpretation(i), Interpretation(j)
    if not satisfies(i, program):
        raise PreconditionError("I is not a model of the program")
    if not j < i:
        raise PreconditionError("J must be a strict subset of I")
    red = reduct(i, program)
    if not satisfies(j, red):
        raise PreconditionError("J is not a model of the reduct F(I, P)")
    graph = build_graph(normalize_program(program)[0])
    # atoms that normalization dropped from every aggregate are singleton components
    orphans = [frozenset({a}) for a in atoms_of(program) if graph.component_of(a) is None]
    for component in list(graph.components) + orphans:
        removed = {v for v in component if isinstance(v, Atom)} - j
        if i & removed and satisfies(i - removed, red):
            return component
    raise ComponentPropertyViolation(f"no component for I={i!r}, J={j!r}")
