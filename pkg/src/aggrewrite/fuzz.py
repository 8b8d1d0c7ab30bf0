"""Random program generation, end-to-end property checks and shrinking."""

from __future__ import annotations

import random
from dataclasses import dataclass, replace

from .core import (
    PARITY,
    UNWEIGHTED,
    AggFunction,
    Aggregate,
    Atom,
    Comparator,
    Program,
    PropLiteral,
    Rule,
    aggregates_of,
    atoms_of,
)
from .normalize import normalize_aggregate, simplify_merged
from .rewrite import Mode, finalize_lparse, is_lparse_like, translate
from .semantics import (
    DEFAULT_CAP,
    Monotonicity,
    check_component_property,
    classify,
    equivalence_witness,
    strongly_equivalent,
    unstable_witnesses,
)


@dataclass(frozen=True)
class FuzzConfig:
    atom_count: int = 5
    rule_count: int = 6
    max_aggregate_elements: int = 4
    weight_range: int = 3
    bound_range: int = 6
    iterations: int = 100
    seed: int = 1
    max_aggregates: int = 2
    cap: int = DEFAULT_CAP

    def __post_init__(self):
        for name in ("atom_count", "rule_count", "max_aggregates", "cap"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")
        for name in ("max_aggregate_elements", "weight_range", "bound_range", "iterations"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be nonnegative")


def iteration_rng(seed: int, iteration: int) -> random.Random:
    return random.Random(f"{seed}/{iteration}")


def random_literal(rng: random.Random, atoms: list[Atom]) -> PropLiteral:
    negations = rng.choices((0, 1, 2), weights=(6, 3, 1))[0]
    return PropLiteral(rng.choice(atoms), negations)


def random_aggregate(rng: random.Random, atoms: list[Atom], config: FuzzConfig) -> Aggregate:
    function = rng.choice(list(AggFunction))
    n = rng.randint(0, config.max_aggregate_elements)
    wr = config.weight_range
    elements = []
    for _ in range(n):
        weight = 1 if function in UNWEIGHTED else rng.randint(-wr, wr)
        elements.append((weight, random_literal(rng, atoms)))
    if function in PARITY:
        return Aggregate(function, tuple(elements))
    comparator = rng.choice(list(Comparator))
    bound = rng.randint(-config.bound_range, config.bound_range)
    return Aggregate(function, tuple(elements), comparator, bound)


def random_program(rng: random.Random, config: FuzzConfig) -> Program:
    atoms = [Atom(f"a{k}") for k in range(1, config.atom_count + 1)]
    budget = rng.choices(range(config.max_aggregates + 1), weights=[1] + [3] * config.max_aggregates)[0]
    made: list[Aggregate] = []
    rules = []
    for _ in range(rng.randint(1, config.rule_count)):
        shape = rng.choices(("fact", "normal", "constraint", "disjunctive"), weights=(1, 5, 1, 2))[0]
        if shape == "constraint":
            head: tuple[Atom, ...] = ()
        elif shape == "disjunctive":
            head = tuple(rng.sample(atoms, min(2, len(atoms))))
        else:
            head = (rng.choice(atoms),)
        body = []
        if shape != "fact":
            for _ in range(rng.randint(1, 3)):
                if rng.random() < 0.5 and (len(made) < budget or (made and rng.random() < 0.3)):
                    if len(made) < budget and (not made or rng.random() < 0.8):
                        made.append(random_aggregate(rng, atoms, config))
                        body.append(made[-1])
                    else:
                        body.append(rng.choice(made))
                else:
                    body.append(random_literal(rng, atoms))
        rules.append(Rule(head, tuple(body)))
    return Program(tuple(rules))


def check_aggregate(agg: Aggregate, cap: int = DEFAULT_CAP) -> str | None:
    conjunction = normalize_aggregate(agg)
    if not strongly_equivalent([agg], conjunction, cap):
        return f"normalization is not strongly equivalent for {agg}"
    merged = [simplify_merged(a) for a in conjunction]
    if not strongly_equivalent([agg], merged, cap):
        return f"merged normalization is not strongly equivalent for {agg}"
    return None


def check_program(program: Program, cap: int = DEFAULT_CAP) -> str | None:
    """First failed property for ``program``, or None when all hold."""
    for agg in aggregates_of(program):
        problem = check_aggregate(agg, cap)
        if problem:
            return problem
    context = atoms_of(program)
    for mode in Mode:
        out = translate(program, mode, finalize=False)
        witness = equivalence_witness(program, out.program, context, cap)
        if witness:
            return f"{mode.value} rewriting not faithful: {witness}"
        final = finalize_lparse(out).program
        witness = equivalence_witness(program, final, context, cap)
        if witness:
            return f"{mode.value} finalized rewriting not faithful: {witness}"
        if not is_lparse_like(final):
            return f"{mode.value} output is not lparse-like"
        for agg in aggregates_of(final):
            if classify(agg, cap) is not Monotonicity.MONOTONE:
                return f"{mode.value} output aggregate {agg} is not monotone"
    for i, j in unstable_witnesses(program, cap=cap):
        check_component_property(program, i, j)
    return None


def _failure(program: Program, cap: int) -> str | None:
    try:
        return check_program(program, cap)
    except AssertionError as exc:
        return f"{type(exc).__name__}: {exc}"


def _without(seq, k):
    return tuple(seq[:k]) + tuple(seq[k + 1 :])


def _variants_dropping_rules(program: Program):
    for k in range(len(program.rules)):
        yield Program(_without(program.rules, k))


def _replace_literal(program: Program, r: int, b: int, literal) -> Program:
    rule = program.rules[r]
    body = rule.body[:b] + (literal,) + rule.body[b + 1 :]
    rules = list(program.rules)
    rules[r] = Rule(rule.head, body, rule.raw_head_had_bottom)
    return Program(tuple(rules))


def _aggregate_positions(program: Program):
    for r, rule in enumerate(program.rules):
        for b, literal in enumerate(rule.body):
            if isinstance(literal, Aggregate):
                yield r, b, literal


def _variants_dropping_elements(program: Program):
    for r, b, agg in _aggregate_positions(program):
        for k in range(len(agg.elements)):
            smaller = replace(agg, elements=_without(agg.elements, k))
            yield _replace_literal(program, r, b, smaller)


def _toward_zero(x: int) -> int:
    return int(x / 2)


def _variants_shrinking_weights(program: Program):
    for r, b, agg in _aggregate_positions(program):
        if agg.function not in UNWEIGHTED:
            for k, (w, l) in enumerate(agg.elements):
                if w != 0:
                    elements = list(agg.elements)
                    elements[k] = (_toward_zero(w), l)
                    yield _replace_literal(program, r, b, replace(agg, elements=tuple(elements)))
        if agg.bound:
            yield _replace_literal(program, r, b, replace(agg, bound=_toward_zero(agg.bound)))


def shrink(program: Program, still_fails) -> Program:
    """Greedy minimization: drop rules, then aggregate elements, then pull weights toward 0."""
    for variants in (_variants_dropping_rules, _variants_dropping_elements, _variants_shrinking_weights):
        progress = True
        while progress:
            progress = False
            for candidate in variants(program):
                if still_fails(candidate):
                    program = candidate
                    progress = True
                    break
    return program


@dataclass
class FuzzReport:
    checked: int
    failure: str | None = None
    label: str | None = None
    program: Program | None = None
    reproducer: Program | None = None

    @property
    def ok(self) -> bool:
        return self.failure is None


def _candidates(config: FuzzConfig, programs):
    for label, program in programs:
        yield label, program
    for k in range(config.iterations):
        yield f"iteration {k}", random_program(iteration_rng(config.seed, k), config)


def run_fuzz(config: FuzzConfig, programs=()) -> FuzzReport:
    """Check the labelled ``programs`` first, then ``config.iterations`` random ones.

    Stops at the first failure and shrinks it.
    """
    count = 0
    for label, program in _candidates(config, programs):
        count += 1
        failure = _failure(program, config.cap)
        if failure:
            small = shrink(program, lambda p: _failure(p, config.cap) is not None)
            return FuzzReport(count, failure, label, program, small)
    return FuzzReport(count)
