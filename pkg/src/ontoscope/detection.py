"""Definitional cycle detection over the concept graph.

Only ``DefinedThrough``, ``DependsOn`` and ``MetaphorOf`` edges take part;
``LinkedTo`` is association, not definition, and is ignored here.

Cycles are elementary and edge-exact: two parallel edges with different
relations between the same nodes give two distinct cycles. That way,
removing one cycle edge is always enough to remove the cycle.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterator

from .categorical import ConceptGraph, NodeFlag, Relation, RelationEdge
from .exceptions import CycleBudgetExceeded

__all__ = [
    "CYCLE_RELATIONS",
    "DEFAULT_CYCLE_BUDGET",
    "DEFAULT_MAX_LEN",
    "Cycle",
    "RecursionClass",
    "RecursionKind",
    "classify",
    "find_cycles",
    "strongly_connected_components",
]

CYCLE_RELATIONS = frozenset({Relation.DEFINED_THROUGH, Relation.DEPENDS_ON, Relation.METAPHOR_OF})
DEFAULT_MAX_LEN = 8
DEFAULT_CYCLE_BUDGET = 10_000

_REL_ORDER = {r: i for i, r in enumerate(Relation)}


@dataclass(frozen=True)
class Cycle:
    node_sequence: tuple[int, ...]
    edge_sequence: tuple[RelationEdge, ...]

    def __post_init__(self):
        n = len(self.node_sequence)
        if n == 0 or len(self.edge_sequence) != n:
            raise ValueError("a cycle needs as many edges as nodes")
        if self.node_sequence[0] != min(self.node_sequence):
            raise ValueError("cycle is not in canonical rotation")
        for i, e in enumerate(self.edge_sequence):
            if (e.source, e.target) != (self.node_sequence[i], self.node_sequence[(i + 1) % n]):
                raise ValueError("cycle edges do not connect consecutive nodes")
            if e.relation not in CYCLE_RELATIONS:
                raise ValueError(f"{e.relation.value} edges cannot be part of a cycle")

    def __len__(self) -> int:
        return len(self.node_sequence)

    @property
    def key(self) -> tuple:
        """Identity of the cycle: node order plus the relation of each step."""
        return (self.node_sequence, tuple(e.relation.value for e in self.edge_sequence))

    def _sort_key(self):
        return (len(self), self.node_sequence, tuple(_REL_ORDER[e.relation] for e in self.edge_sequence))


class RecursionKind(enum.Enum):
    SELF_REFERENCE = "SelfReference"
    MUTUAL_DEFINITION = "MutualDefinition"
    DEFINITIONAL_LOOP = "DefinitionalLoop"
    METAPHOR_LOOP = "MetaphorLoop"


@dataclass(frozen=True)
class RecursionClass:
    kind: RecursionKind
    length: int

    @property
    def name(self) -> str:
        if self.kind is RecursionKind.DEFINITIONAL_LOOP:
            return f"DefinitionalLoop({self.length})"
        return self.kind.value

    def __str__(self):
        return self.name


def _adjacency(g: ConceptGraph) -> dict[int, list[RelationEdge]]:
    adj: dict[int, list[RelationEdge]] = {n.id: [] for n in g.nodes}
    for e in g.edges:
        if e.relation in CYCLE_RELATIONS:
            adj[e.source].append(e)
    for edges in adj.values():
        edges.sort(key=lambda e: (e.target, _REL_ORDER[e.relation]))
    return adj


def strongly_connected_components(nodes, successors) -> list[list[int]]:
    """Tarjan's algorithm, iterative so deep chains do not hit the recursion limit.

    ``successors(v)`` yields the neighbours of ``v``. Components come out in
    reverse topological order, each sorted ascending.
    """
    index: dict = {}
    low: dict = {}
    on_stack: set = set()
    stack: list = []
    result = []
    counter = 0
    for root in nodes:
        if root in index:
            continue
        work = [(root, iter(successors(root)))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(successors(w))))
                    advanced = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                result.append(sorted(comp))
    return result


def _cycles_from(start: int, allowed: set[int], adj, max_len: int) -> Iterator[Cycle]:
    path_nodes = [start]
    path_edges: list[RelationEdge] = []
    on_path = {start}

    def walk(u: int):
        for e in adj[u]:
            v = e.target
            if v == start:
                yield Cycle(tuple(path_nodes), tuple(path_edges) + (e,))
            elif v in allowed and v not in on_path and len(path_nodes) < max_len:
                path_nodes.append(v)
                path_edges.append(e)
                on_path.add(v)
                yield from walk(v)
                on_path.discard(v)
                path_edges.pop()
                path_nodes.pop()

    yield from walk(start)


def find_cycles(
    g: ConceptGraph, max_len: int = DEFAULT_MAX_LEN, cycle_budget: int = DEFAULT_CYCLE_BUDGET
) -> list[Cycle]:
    """Every elementary definitional cycle of length <= ``max_len``.

    The graph is split into strongly connected components first. Within each
    non-trivial component, cycles are enumerated once from their smallest
    node, walking only through larger nodes that stay strongly connected to
    it. Results are ordered by (length, node sequence, relations).

    Raises :class:`CycleBudgetExceeded` once more than ``cycle_budget``
    cycles have been produced.
    """
    if max_len < 1:
        raise ValueError("max_len must be >= 1")
    adj = _adjacency(g)
    found: list[Cycle] = []
    for comp in strongly_connected_components(sorted(adj), lambda v: (e.target for e in adj[v])):
        if len(comp) == 1 and not any(e.target == comp[0] for e in adj[comp[0]]):
            continue
        members = set(comp)
        for s in comp:
            sub = {v for v in members if v >= s}
            # Restrict the walk to the part of the component still strongly connected to s.
            sub_sccs = strongly_connected_components(
                sorted(sub), lambda v: (e.target for e in adj[v] if e.target in sub)
            )
            allowed = next(set(c) for c in sub_sccs if s in c)
            for c in _cycles_from(s, allowed, adj, max_len):
                found.append(c)
                if len(found) > cycle_budget:
                    raise CycleBudgetExceeded(len(found))
    found.sort(key=Cycle._sort_key)
    return found


def classify(c: Cycle, g: ConceptGraph) -> RecursionClass:
    """Metaphor involvement wins over the length-based kinds."""
    n = len(c)
    if any(NodeFlag.METAPHOR_TERM in g.nodes[v].flags for v in c.node_sequence) or any(
        e.relation is Relation.METAPHOR_OF for e in c.edge_sequence
    ):
        return RecursionClass(RecursionKind.METAPHOR_LOOP, n)
    if n == 1:
        return RecursionClass(RecursionKind.SELF_REFERENCE, n)
    if n == 2:
        return RecursionClass(RecursionKind.MUTUAL_DEFINITION, n)
    return RecursionClass(RecursionKind.DEFINITIONAL_LOOP, n)
