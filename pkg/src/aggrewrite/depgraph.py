"""Positive dependency graph over atoms and aggregates, and its components."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

from .core import Aggregate, Atom, Comparator, Program, aggregates_of, atoms_of
from .normalize import NotNormalizedError, is_normal_sum, merged_weights
from .textio import format_literal

Vertex = Union[Atom, Aggregate]


@dataclass(frozen=True)
class DependencyGraph:
    vertices: tuple[Vertex, ...]
    arcs: frozenset[tuple[Vertex, Vertex]]
    components: tuple[frozenset, ...]  # reverse topological order
    component_index: dict = field(compare=False, repr=False)

    def successors(self, v: Vertex) -> list[Vertex]:
        return [b for a, b in self.arcs if a == v]

    def component_of(self, v: Vertex) -> frozenset | None:
        k = self.component_index.get(v)
        return None if k is None else self.components[k]

    def to_dot(self) -> str:
        ids = {v: f"v{k}" for k, v in enumerate(self.vertices)}
        lines = ["digraph dependencies {"]
        for v in self.vertices:
            label = v.name if isinstance(v, Atom) else format_literal(v)
            shape = "ellipse" if isinstance(v, Atom) else "box"
            label = label.replace("\\", "\\\\").replace('"', '\\"')
            lines.append(f'  {ids[v]} [label="{label}", shape={shape}];')
        order = {v: k for k, v in enumerate(self.vertices)}
        for a, b in sorted(self.arcs, key=lambda arc: (order[arc[0]], order[arc[1]])):
            lines.append(f"  {ids[a]} -> {ids[b]};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def aggregate_arcs(agg: Aggregate) -> list[Atom]:
    """Atoms an aggregate vertex points to: positive merged weights for ``>``, nonzero for ``!=``."""
    if not is_normal_sum(agg):
        raise NotNormalizedError(f"dependency graph needs normalized sums, got {agg}")
    targets = []
    for w, l in merged_weights(agg):
        if l.negations or l.atom.is_bottom:
            continue
        if agg.comparator is Comparator.NE or w > 0:
            targets.append(l.atom)
    return targets


def strongly_connected_components(vertices, successors) -> list[list]:
    """Tarjan's lowlink algorithm, iterative; components come out in reverse topological order."""
    index: dict = {}
    lowlink: dict = {}
    on_stack: set = set()
    stack: list = []
    result: list[list] = []
    counter = 0
    for root in vertices:
        if root in index:
            continue
        index[root] = lowlink[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        work = [(root, iter(successors(root)))]
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = lowlink[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(successors(w))))
                    advanced = True
                    break
                if w in on_stack:
                    lowlink[v] = min(lowlink[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                lowlink[parent] = min(lowlink[parent], lowlink[v])
            if lowlink[v] == index[v]:
                component = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    component.append(w)
                    if w == v:
                        break
                result.append(component)
    return result


def build_graph(program: Program) -> DependencyGraph:
    vertices: list[Vertex] = list(atoms_of(program)) + list(aggregates_of(program))
    arcs: dict[tuple, None] = {}
    for rule in program:
        for h in rule.head:
            for l in rule.body:
                if isinstance(l, Aggregate):
                    arcs.setdefault((h, l), None)
                elif l.negations == 0 and not l.atom.is_bottom:
                    arcs.setdefault((h, l.atom), None)
    for agg in aggregates_of(program):
        for target in aggregate_arcs(agg):
            arcs.setdefault((agg, target), None)
    adjacency: dict = {v: [] for v in vertices}
    for a, b in arcs:
        adjacency[a].append(b)
    sccs = strongly_connected_components(vertices, lambda v: adjacency[v])
    components = tuple(frozenset(c) for c in sccs)
    component_index = {v: k for k, c in enumerate(components) for v in c}
    return DependencyGraph(tuple(vertices), frozenset(arcs), components, component_index)


def rec_atoms(graph: DependencyGraph, agg: Aggregate) -> set[Atom]:
    """Atoms sharing the aggregate's component; empty when it is not a vertex."""
    component = graph.component_of(agg)
    if component is None:
        return set()
    return {v for v in component if isinstance(v, Atom)}
