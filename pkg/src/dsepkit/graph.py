"""Immutable causal DAG model.

A :class:`Dag` is a value: every mutation returns a new graph and the
original is never touched, so graphs can be shared freely across threads
and surgically modified variants never alias. Acyclicity, endpoint
existence and attribute consistency are re-checked on construction, which
keeps every reachable graph valid by construction.
"""

from __future__ import annotations

import heapq
import re
from dataclasses import dataclass

from .errors import (
    AttributeConflict,
    CycleCreated,
    DuplicateEdge,
    DuplicateNode,
    InvalidNodeName,
    SelfLoop,
    UnknownNode,
)

NAME_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")

# Downstream subset/path enumeration is exponential; the tool targets
# human-drawn graphs, so this is a soft limit surfaced as a parser warning.
SOFT_NODE_LIMIT = 64


@dataclass(frozen=True)
class NodeAttrs:
    """Per-node flags: latent (unmeasured), selected (conditioned by design),
    and an optional display position that all analysis ignores."""

    latent: bool = False
    selected: bool = False
    pos: tuple[float, float] | None = None

    def __post_init__(self):
        if self.latent and self.selected:
            raise AttributeConflict(
                "a node cannot be both latent and selected: a design-conditioned "
                "variable is observed by construction"
            )
        if self.pos is not None:
            object.__setattr__(self, "pos", (float(self.pos[0]), float(self.pos[1])))


class Dag:
    """Directed acyclic graph over named nodes.

    Nodes carry :class:`NodeAttrs`; edges are ordered (tail, head) pairs.
    All mutating operations (``add_node``, ``add_edge``, surgery) return a
    new ``Dag``.
    """

    def __init__(self, nodes=None, edges=None):
        attrs: dict[str, NodeAttrs] = {}
        for name, a in dict(nodes or {}).items():
            if not isinstance(name, str) or not NAME_RE.match(name):
                raise InvalidNodeName(f"invalid node name: {name!r}")
            attrs[name] = a if isinstance(a, NodeAttrs) else NodeAttrs(**dict(a or {}))

        edge_set: set[tuple[str, str]] = set()
        parents: dict[str, set[str]] = {n: set() for n in attrs}
        children: dict[str, set[str]] = {n: set() for n in attrs}
        for tail, head in edges or ():
            if tail == head:
                raise SelfLoop(f"self loop on {tail}")
            for end in (tail, head):
                if end not in attrs:
                    raise UnknownNode(f"unknown node: {end}")
            if (tail, head) in edge_set:
                raise DuplicateEdge(f"duplicate edge {tail} -> {head}")
            edge_set.add((tail, head))
            children[tail].add(head)
            parents[head].add(tail)

        self._attrs = attrs
        self._edges = frozenset(edge_set)
        self._parents = parents
        self._children = children
        self._check_acyclic()

    # --- internal -----------------------------------------------------

    def _check_acyclic(self):
        # Kahn's algorithm; any leftover nodes lie on a cycle.
        indeg = {n: len(ps) for n, ps in self._parents.items()}
        queue = [n for n, d in indeg.items() if d == 0]
        seen = 0
        while queue:
            n = queue.pop()
            seen += 1
            for c in self._children[n]:
                indeg[c] -= 1
                if indeg[c] == 0:
                    queue.append(c)
        if seen != len(self._attrs):
            raise CycleCreated(self._find_cycle({n for n, d in indeg.items() if d > 0}))

    def _find_cycle(self, residue):
        # Walk parents inside the residue until a node repeats.
        start = min(residue)
        walk, at = [start], start
        while True:
            at = min(p for p in self._parents[at] if p in residue)
            if at in walk:
                cycle = walk[walk.index(at):]
                cycle.reverse()
                return [at] + cycle
            walk.append(at)

    def _require(self, *names):
        for n in names:
            if n not in self._attrs:
                known = ", ".join(sorted(self._attrs))
                raise UnknownNode(f"unknown node: {n} (known: {known})")

    # --- structure ----------------------------------------------------

    @property
    def node_names(self) -> tuple[str, ...]:
        return tuple(sorted(self._attrs))

    @property
    def edges(self) -> frozenset[tuple[str, str]]:
        return self._edges

    def attrs(self, name: str) -> NodeAttrs:
        self._require(name)
        return self._attrs[name]

    def has_node(self, name: str) -> bool:
        return name in self._attrs

    def has_edge(self, tail: str, head: str) -> bool:
        return (tail, head) in self._edges

    @property
    def latent_nodes(self) -> frozenset[str]:
        return frozenset(n for n, a in self._attrs.items() if a.latent)

    @property
    def selected_nodes(self) -> frozenset[str]:
        return frozenset(n for n, a in self._attrs.items() if a.selected)

    def __len__(self):
        return len(self._attrs)

    def __eq__(self, other):
        if not isinstance(other, Dag):
            return NotImplemented
        return self._attrs == other._attrs and self._edges == other._edges

    def __repr__(self):
        return f"Dag(nodes={len(self._attrs)}, edges={len(self._edges)})"

    # --- queries ------------------------------------------------------

    def parents(self, n: str) -> frozenset[str]:
        self._require(n)
        return frozenset(self._parents[n])

    def children(self, n: str) -> frozenset[str]:
        self._require(n)
        return frozenset(self._children[n])

    def neighbors(self, n: str) -> frozenset[str]:
        self._require(n)
        return frozenset(self._parents[n] | self._children[n])

    def descendants(self, n: str) -> frozenset[str]:
        """All nodes reachable from ``n`` by directed edges, including ``n``.

        Inclusivity matters downstream: "a conditioned descendant of a
        collider opens it" then covers the collider itself with one check.
        """
        self._require(n)
        return self._closure(n, self._children)

    def ancestors(self, n: str) -> frozenset[str]:
        """All nodes with a directed path into ``n``, including ``n``."""
        self._require(n)
        return self._closure(n, self._parents)

    def _closure(self, n, step):
        out, stack = {n}, [n]
        while stack:
            for m in step[stack.pop()]:
                if m not in out:
                    out.add(m)
                    stack.append(m)
        return frozenset(out)

    def topological_order(self) -> tuple[str, ...]:
        """Parents-before-children order, smallest name first among ready nodes."""
        indeg = {n: len(ps) for n, ps in self._parents.items()}
        heap = [n for n, d in indeg.items() if d == 0]
        heapq.heapify(heap)
        order = []
        while heap:
            n = heapq.heappop(heap)
            order.append(n)
            for c in self._children[n]:
                indeg[c] -= 1
                if indeg[c] == 0:
                    heapq.heappush(heap, c)
        return tuple(order)

    # --- value-semantics construction --------------------------------

    def add_node(self, name: str, attrs: NodeAttrs | None = None) -> "Dag":
        if name in self._attrs:
            raise DuplicateNode(f"node already present: {name}")
        nodes = dict(self._attrs)
        nodes[name] = attrs or NodeAttrs()
        return Dag(nodes, self._edges)

    def add_edge(self, tail: str, head: str) -> "Dag":
        self._require(tail, head)
        if tail == head:
            raise SelfLoop(f"self loop on {tail}")
        if (tail, head) in self._edges:
            raise DuplicateEdge(f"duplicate edge {tail} -> {head}")
        return Dag(self._attrs, self._edges | {(tail, head)})

    def with_attrs(self, name: str, attrs: NodeAttrs) -> "Dag":
        self._require(name)
        nodes = dict(self._attrs)
        nodes[name] = attrs
        return Dag(nodes, self._edges)

    def without_edges(self, edges) -> "Dag":
        return Dag(self._attrs, self._edges - frozenset(edges))

    def surgery_remove_exposure_causal_edges(self, exposure: str, outcome: str) -> "Dag":
        """Remove each edge exposure -> X where X lies on a directed route to
        the outcome (or is the outcome itself); keep every other edge.

        Cutting the causal paths at their first edge, and only there, is what
        makes the instrumental-variable check sound: deleting a later edge of
        a causal path can silently delete non-causal routes too.
        """
        self._require(exposure, outcome)
        anc = self.ancestors(outcome)
        removed = {(exposure, c) for c in self._children[exposure] if c in anc}
        return self.without_edges(removed) if removed else self


def surgery_remove_exposure_causal_edges(dag: Dag, exposure: str, outcome: str) -> Dag:
    return dag.surgery_remove_exposure_causal_edges(exposure, outcome)
