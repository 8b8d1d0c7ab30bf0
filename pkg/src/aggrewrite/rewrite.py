"""Elimination of non-monotone sums by saturation.

A normalized sum ``A`` (comparator ``>`` or ``!=``) is replaced by a fresh
atom ``aux`` defined by monotone sums.  Atoms with negative weight that may
depend on ``A`` positively get a falsity atom ``p^F`` together with the
saturation rules::

    p^F :- ~p.
    p^F :- aux.
    p | p^F :- ~~aux.

so that the minimality check on reducts can test ``A`` on subsets of a
candidate model.  Other negative-weight literals are flipped to their
negation, which is safe when they cannot be part of circular support.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from itertools import zip_longest

from .core import (
    FALSE,
    TOP,
    AggFunction,
    Aggregate,
    Atom,
    Comparator,
    Literal,
    Program,
    PropLiteral,
    Rule,
    aggregates_of,
    atoms_of,
    checked,
)
from .depgraph import build_graph, rec_atoms
from .normalize import NotNormalizedError, constant_value, is_normal_sum, merge_program, merged_weights, normalize_program

GT, NE, GE = Comparator.GT, Comparator.NE, Comparator.GE


class Mode(enum.Enum):
    MODULAR = "modular"
    REFINED = "refined"


@dataclass(frozen=True)
class NormalizedSum:
    """Merged-weight view of ``sum[...] > b`` or ``sum[...] != b``."""

    source: Aggregate
    lit_star: tuple[tuple[int, PropLiteral], ...]
    lit_pos: tuple[tuple[int, PropLiteral], ...]
    lit_neg: tuple[tuple[int, PropLiteral], ...]
    comparator: Comparator
    bound: int


def normalized_view(agg: Aggregate) -> NormalizedSum:
    if not is_normal_sum(agg):
        raise NotNormalizedError(f"expected a sum with > or !=, got {agg}")
    star = tuple(merged_weights(agg))
    return NormalizedSum(
        source=agg,
        lit_star=star,
        lit_pos=tuple(e for e in star if e[0] > 0),
        lit_neg=tuple(e for e in star if e[0] < 0),
        comparator=agg.comparator,
        bound=agg.bound,
    )


def is_nonmonotone(view: NormalizedSum) -> bool:
    """Syntactic test: an atom with negative merged weight, or comparator ``!=``."""
    if view.comparator is NE:
        return True
    return any(l.negations == 0 for _, l in view.lit_neg)


def split_neq(view: NormalizedSum) -> tuple[NormalizedSum, NormalizedSum]:
    """``sum[w:l] != b`` holds iff ``sum[w:l] > b`` or ``sum[-w:l] > -b``."""
    if view.comparator is not NE:
        raise NotNormalizedError("split_neq expects comparator !=")
    elements = view.lit_star
    greater = Aggregate(AggFunction.SUM, elements, GT, view.bound)
    less = Aggregate(
        AggFunction.SUM,
        tuple((checked(-w), l) for w, l in elements),
        GT,
        checked(-view.bound),
    )
    return normalized_view(greater), normalized_view(less)


class FreshNames:
    """Allocates ``__aux_k`` per aggregate and ``__f_k_p`` per saturated atom.

    Names are memoized, so asking twice for the same aggregate (or the same
    aggregate and atom) returns the same atom.
    """

    def __init__(self, reserved=(), start: int = 1):
        self.counter = start
        self.taken = {a.name for a in reserved}
        self.aux_of: dict[Aggregate, Atom] = {}
        self.falsity_of: dict[tuple[Aggregate, Atom], Atom] = {}
        self.provenance: dict[Atom, tuple] = {}
        self._index: dict[Aggregate, int] = {}

    def _claim(self, name: str) -> Atom:
        self.taken.add(name)
        return Atom(name)

    def aux_for(self, agg: Aggregate) -> Atom:
        if agg not in self.aux_of:
            while f"__aux_{self.counter}" in self.taken:
                self.counter += 1
            k = self.counter
            self.counter += 1
            aux = self._claim(f"__aux_{k}")
            self._index[agg] = k
            self.aux_of[agg] = aux
            self.provenance[aux] = ("aux", agg)
        return self.aux_of[agg]

    def falsity_for(self, agg: Aggregate, p: Atom) -> Atom:
        key = (agg, p)
        if key not in self.falsity_of:
            self.aux_for(agg)
            name = f"__f_{self._index[agg]}_{p.name}"
            while name in self.taken:
                name += "_"
            pf = self._claim(name)
            self.falsity_of[key] = pf
            self.provenance[pf] = ("falsity", agg, p)
        return self.falsity_of[key]


@dataclass(frozen=True)
class AggregateRewrite:
    aggregate: Aggregate
    aux: Atom
    saturate: frozenset[Atom]
    falsity_atoms: tuple[Atom, ...]
    rules: tuple[Rule, ...]


@dataclass(frozen=True)
class RewriteOutput:
    program: Program
    hidden: frozenset[Atom] = frozenset()
    records: tuple[AggregateRewrite, ...] = field(default=())


def saturation_rules(p: Atom, pf: Atom, aux: Atom) -> tuple[Rule, Rule, Rule]:
    return (
        Rule((pf,), (PropLiteral(p, 1),)),
        Rule((pf,), (PropLiteral(aux),)),
        Rule((p, pf), (PropLiteral(aux, 2),)),
    )


def _definition(view: NormalizedSum, saturate, aux: Atom, agg: Aggregate, names: FreshNames):
    """The ``aux`` rule with a monotone sum, and the atoms that received a falsity atom."""
    elements = list(view.lit_pos)
    bound = view.bound
    saturated = []
    for w, l in view.lit_neg:
        bound = checked(bound - w)
        if l.negations == 0 and l.atom in saturate:
            elements.append((checked(-w), PropLiteral(names.falsity_for(agg, l.atom))))
            saturated.append(l.atom)
        else:
            elements.append((checked(-w), l.negate()))
    body = Aggregate(AggFunction.SUM, tuple(elements), GT, bound)
    return Rule((aux,), (body,)), saturated


def pos_gt(view: NormalizedSum, saturate, names: FreshNames, agg: Aggregate | None = None) -> list[Rule]:
    """The definition of ``aux`` for a ``>`` sum plus saturation rules for its saturated atoms."""
    agg = view.source if agg is None else agg
    aux = names.aux_for(agg)
    rule, saturated = _definition(view, saturate, aux, agg, names)
    return [rule] + _saturation_block(saturated, agg, aux, names)


def _saturation_block(saturated, agg, aux, names) -> list[Rule]:
    # grouped by rule kind: all p^F <- ~p first, then p^F <- aux, then the disjunctions
    groups = zip_longest(*(saturation_rules(p, names.falsity_for(agg, p), aux) for p in saturated))
    return [rule for group in groups for rule in group if rule is not None]


def pos(agg: Aggregate, saturate, names: FreshNames) -> list[Rule]:
    view = normalized_view(agg)
    if view.comparator is GT:
        return pos_gt(view, saturate, names)
    aux = names.aux_for(agg)
    definitions = []
    saturated: dict[Atom, None] = {}
    for half in split_neq(view):
        rule, atoms = _definition(half, saturate, aux, agg, names)
        definitions.append(rule)
        saturated.update(dict.fromkeys(atoms))
    return definitions + _saturation_block(list(saturated), agg, aux, names)


def _falsity_atoms(rules: list[Rule], aux: Atom) -> tuple[Atom, ...]:
    found = []
    for r in rules:
        if r.body == (PropLiteral(aux),) and len(r.head) == 1:
            found.append(r.head[0])
    return tuple(found)


def _replace(program: Program, agg: Aggregate, aux: Atom) -> list[Rule]:
    replacement = PropLiteral(aux)
    rules = []
    for r in program:
        if any(l == agg for l in r.aggregates()):
            body = tuple(replacement if isinstance(l, Aggregate) and l == agg else l for l in r.body)
            r = Rule(r.head, body, r.raw_head_had_bottom)
        rules.append(r)
    return rules


def rew(program: Program, agg: Aggregate, saturate, names: FreshNames) -> RewriteOutput:
    """``pos(agg, saturate)`` plus ``program`` with every occurrence of ``agg`` replaced by ``aux``."""
    saturate = frozenset(saturate)
    pos_rules = pos(agg, saturate, names)
    aux = names.aux_for(agg)
    falsity = _falsity_atoms(pos_rules, aux)
    record = AggregateRewrite(agg, aux, saturate, falsity, tuple(pos_rules))
    rules = _replace(program, agg, aux) + pos_rules
    return RewriteOutput(Program(tuple(rules)), frozenset((aux,) + falsity), (record,))


def rewrite_program(program: Program, mode: Mode = Mode.REFINED, names: FreshNames | None = None) -> RewriteOutput:
    """Eliminate every non-monotone aggregate of a normalized, merged program.

    MODULAR saturates all atoms of the aggregate; REFINED saturates the atoms
    of the aggregate's component, recomputed on the current program before
    each elimination.
    """
    mode = Mode(mode)
    if names is None:
        names = FreshNames(reserved=atoms_of(program))
    current = program
    hidden: set[Atom] = set()
    records = []
    for agg in aggregates_of(program):
        if not is_nonmonotone(normalized_view(agg)):
            continue
        if mode is Mode.MODULAR:
            saturate = agg.atoms()
        else:
            saturate = rec_atoms(build_graph(current), agg)
        out = rew(current, agg, saturate, names)
        current = out.program
        hidden |= out.hidden
        records.extend(out.records)
    return RewriteOutput(current, frozenset(hidden), tuple(records))


def _finalize_aggregate(agg: Aggregate) -> Literal:
    if not is_normal_sum(agg) or agg.comparator is not GT:
        raise NotNormalizedError(f"finalization expects sums with >, got {agg}")
    bound = agg.bound
    totals: dict[PropLiteral, int] = {}
    for w, l in merged_weights(agg):
        value = constant_value(l)
        if value is not None:
            if value:
                bound = checked(bound - w)
            continue
        if w < 0:
            if l.negations == 0:
                raise NotNormalizedError(f"atom {l.atom} has negative weight in {agg}")
            # frozen literal: -|w| on ~l equals +|w| on ~~l with the bound raised
            bound = checked(bound - w)
            w, l = checked(-w), l.negate()
        totals[l] = checked(totals.get(l, 0) + w)
    bound = checked(bound + 1)
    elements = tuple((w, l) for l, w in totals.items() if w != 0)
    if bound <= 0:
        return TOP
    if not elements:
        return FALSE
    return Aggregate(AggFunction.SUM, elements, GE, bound)


def finalize_lparse(ro: RewriteOutput) -> RewriteOutput:
    """Turn every ``sum[...] > b`` into ``sum[...] >= b+1`` with nonnegative weights.

    Aggregates that always hold become ``~#false``; empty sums that never
    hold become ``#false``.
    """
    rules = []
    for r in ro.program:
        body = tuple(_finalize_aggregate(l) if isinstance(l, Aggregate) else l for l in r.body)
        rules.append(Rule(r.head, body, r.raw_head_had_bottom))
    return RewriteOutput(Program(tuple(rules)), ro.hidden, ro.records)


def is_lparse_like(program: Program) -> bool:
    for agg in aggregates_of(program):
        if agg.function is not AggFunction.SUM or agg.comparator is not GE:
            return False
        if agg.bound < 0 or any(w < 0 for w, _ in agg.elements):
            return False
    return True


def translate(program: Program, mode: Mode = Mode.REFINED, finalize: bool = True) -> RewriteOutput:
    """Normalize, merge, eliminate non-monotone sums and optionally finalize."""
    normalized, _ = normalize_program(program)
    out = rewrite_program(merge_program(normalized), mode, FreshNames(reserved=atoms_of(program)))
    return finalize_lparse(out) if finalize else out


def ext(j, i, agg: Aggregate, saturate, names: FreshNames) -> frozenset[Atom]:
    """Extension of ``j`` relative to ``i`` by ``aux`` and the falsity atoms of ``pos(agg, saturate)``."""
    from .semantics import reduct_literal, satisfies

    rules = pos(agg, frozenset(saturate), names)
    aux = names.aux_for(agg)
    falsity = _falsity_atoms(rules, aux)
    i, j = frozenset(i), frozenset(j)
    if not j <= i:
        raise ValueError("ext requires J to be a subset of I")
    if i & ({aux} | set(falsity)):
        raise ValueError("ext requires I to avoid aux and the falsity atoms")
    origin = {pf: names.provenance[pf][2] for pf in falsity}
    if not satisfies(i, agg):
        return j | {pf for pf in falsity if origin[pf] not in i}
    if not satisfies(j, reduct_literal(i, agg)):
        return j | {pf for pf in falsity if origin[pf] not in j}
    return j | {aux} | set(falsity)
