"""Rewrite every aggregate into a conjunction of sums compared with ``>`` or ``!=``.

The identities are applied from the last one (odd) down to the first one
(sum with ``<``), so each function is first reduced to a sum and then the
comparator is reduced to ``>`` or ``!=``.  Every step preserves strong
equivalence, so replacing an aggregate by its conjunction inside any rule
body preserves stable models.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import (
    FALSE,
    TOP,
    AggFunction,
    Aggregate,
    Comparator,
    Literal,
    Program,
    PropLiteral,
    Rule,
    checked,
)

GT, NE = Comparator.GT, Comparator.NE
TARGET_COMPARATORS = (GT, NE)

# comparator map used when max is turned into min over negated weights
_FLIP = {
    Comparator.LT: Comparator.GT,
    Comparator.LE: Comparator.GE,
    Comparator.GE: Comparator.LE,
    Comparator.GT: Comparator.LT,
    Comparator.EQ: Comparator.EQ,
    Comparator.NE: Comparator.NE,
}


class NotNormalizedError(ValueError):
    """An operation expecting ``sum[...] > b`` or ``sum[...] != b`` got something else."""


@dataclass(frozen=True)
class Step:
    rule_id: str
    before: Aggregate
    after: tuple[Aggregate, ...]


@dataclass(frozen=True)
class NormalizationTrace:
    source: Aggregate
    steps: tuple[Step, ...]
    result: tuple[Aggregate, ...]


def is_normal_sum(agg: Aggregate) -> bool:
    return agg.function is AggFunction.SUM and agg.comparator in TARGET_COMPARATORS


def _sum(elements, comparator, bound) -> Aggregate:
    return Aggregate(AggFunction.SUM, tuple(elements), comparator, checked(bound))


def _negated(elements):
    return [(checked(-w), l) for w, l in elements]


def _unit(elements):
    return [(1, l) for _, l in elements]


def _step(agg: Aggregate) -> tuple[str, list[Aggregate]] | None:
    """One identity application, or None when ``agg`` is already a target sum."""
    f, els, cmp, b = agg.function, agg.elements, agg.comparator, agg.bound
    n = len(els)
    if f is AggFunction.ODD:
        return "O", [_sum(_unit(els), NE, 2 * i) for i in range(0, n // 2 + 1)]
    if f is AggFunction.EVEN:
        return "N", [_sum(_unit(els), NE, 2 * i - 1) for i in range(1, (n + 1) // 2 + 1)]
    if f is AggFunction.COUNT:
        return "M", [_sum(_unit(els), cmp, b)]
    if f is AggFunction.MAX:
        return "L", [Aggregate(AggFunction.MIN, tuple(_negated(els)), _FLIP[cmp], checked(-b))]
    if f is AggFunction.MIN:
        if cmp is Comparator.LT:
            return "F", [_sum([(1, l) for w, l in els if w < b], GT, 0)]
        if cmp is Comparator.LE:
            return "G", [_sum([(1, l) for w, l in els if w <= b], GT, 0)]
        if cmp is Comparator.GE:
            return "H", [_sum([(-1, l) for w, l in els if w < b], GT, -1)]
        if cmp is Comparator.GT:
            return "I", [_sum([(-1, l) for w, l in els if w <= b], GT, -1)]
        if cmp is Comparator.EQ:
            weighted = [(checked(1 - checked(n * checked(b - w))), l) for w, l in els if w <= b]
            return "J", [_sum(weighted, GT, 0)]
        weighted = [(checked(checked(n * checked(b - w)) - 1), l) for w, l in els if w <= b]
        return "K", [_sum(weighted, GT, -1)]
    if f is AggFunction.AVG:
        shifted = [(checked(w - b), l) for w, l in els]
        return "E", [_sum(shifted, cmp, 0), _sum(_unit(els), GT, 0)]
    # sum
    if cmp is Comparator.EQ:
        return "D", [_sum(els, GT, b - 1), _sum(_negated(els), GT, -b - 1)]
    if cmp is Comparator.GE:
        return "C", [_sum(els, GT, b - 1)]
    if cmp is Comparator.LE:
        return "B", [_sum(_negated(els), GT, -b - 1)]
    if cmp is Comparator.LT:
        return "A", [_sum(_negated(els), GT, -b)]
    return None


def _normalize(agg: Aggregate, steps: list[Step]) -> list[Aggregate]:
    applied = _step(agg)
    if applied is None:
        return [agg]
    rule_id, after = applied
    steps.append(Step(rule_id, agg, tuple(after)))
    result = []
    for a in after:
        result.extend(_normalize(a, steps))
    return result


def normalize_aggregate(agg: Aggregate) -> list[Aggregate]:
    """Conjunction of ``sum ... > b`` / ``sum ... != b`` strongly equivalent to ``agg``."""
    return _normalize(agg, [])


def trace_aggregate(agg: Aggregate) -> NormalizationTrace:
    steps: list[Step] = []
    result = _normalize(agg, steps)
    return NormalizationTrace(agg, tuple(steps), tuple(result))


def normalize_program(program: Program) -> tuple[Program, list[NormalizationTrace]]:
    """Splice each body aggregate's conjunction into the body in place."""
    traces = []
    rules = []
    for rule in program:
        body: list[Literal] = []
        for literal in rule.body:
            if isinstance(literal, Aggregate):
                trace = trace_aggregate(literal)
                if trace.steps:
                    traces.append(trace)
                body.extend(trace.result)
            else:
                body.append(literal)
        rules.append(Rule(rule.head, tuple(body), rule.raw_head_had_bottom))
    return Program(tuple(rules)), traces


def constant_value(literal: PropLiteral) -> bool | None:
    """Truth value of a literal over the bottom atom, None for ordinary atoms."""
    if not literal.atom.is_bottom:
        return None
    return literal.negations % 2 == 1


def merged_weights(agg: Aggregate) -> list[tuple[int, PropLiteral]]:
    """Per-literal summed weights with zero totals and the bare bottom literal dropped.

    Literals keep the order of their first occurrence.
    """
    totals: dict[PropLiteral, int] = {}
    for w, l in agg.elements:
        if l == FALSE:
            continue
        totals[l] = checked(totals.get(l, 0) + w)
    return [(w, l) for l, w in totals.items() if w != 0]


def simplify_merged(agg: Aggregate) -> Aggregate:
    """Merge duplicate literals and fold literals over the bottom atom.

    Always-false literals are dropped and always-true ones are moved into the
    bound.  Idempotent.
    """
    if not is_normal_sum(agg):
        raise NotNormalizedError(f"not a normalized sum: {agg}")
    bound = agg.bound
    kept = []
    for w, l in merged_weights(agg):
        value = constant_value(l)
        if value is None:
            kept.append((w, l))
        elif value:
            bound = checked(bound - w)
    return _sum(kept, agg.comparator, bound)


def merge_program(program: Program) -> Program:
    """Apply :func:`simplify_merged` to every aggregate of a normalized program."""
    rules = []
    for rule in program:
        body = tuple(simplify_merged(l) if isinstance(l, Aggregate) else l for l in rule.body)
        rules.append(Rule(rule.head, body, rule.raw_head_had_bottom))
    return Program(tuple(rules))


def fold_trivial(agg: Aggregate) -> Literal:
    """Replace ``sum[] > b`` by the constant it denotes; other aggregates pass through."""
    if agg.function is AggFunction.SUM and not agg.elements and agg.comparator is not None:
        return TOP if agg.comparator.holds(0, agg.bound) else FALSE
    return agg
