"""Path enumeration and d-separation.

Two implementations of the separation test live here on purpose:

* :func:`d_separated` enumerates every simple path between the endpoints and
  classifies each one, so its verdict comes with witnesses (the open paths,
  and per-path blocker/opener nodes). Exponential in the worst case, capped.
* :func:`d_separated_fast` answers the same boolean by reachability in the
  moralized ancestral graph, in polynomial time, with no witnesses.

Conditioning sets are always applied as *effective* sets: the explicitly
requested nodes plus every node marked ``selected`` in the graph, minus the
query endpoints. Latent nodes are ordinary path members (forks, chains,
colliders) but can never be conditioned on explicitly.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Iterator

from .errors import (
    EndpointInSet,
    InvalidPath,
    LatentInSet,
    PathExplosion,
    SameNode,
)
from .graph import Dag

DEFAULT_PATH_CAP = 10**6

COLLIDER = "collider"
CHAIN = "chain"
FORK = "fork"

UNADJUSTED_COLLIDER = "UnadjustedCollider"
ADJUSTED_NON_COLLIDER = "AdjustedNonCollider"


@dataclass(frozen=True)
class Path:
    """A simple path in the underlying undirected skeleton.

    ``arrows[i]`` is ``"->"`` when the edge between ``nodes[i]`` and
    ``nodes[i+1]`` points forwards along the path, ``"<-"`` otherwise.
    """

    nodes: tuple[str, ...]
    arrows: tuple[str, ...]

    def __post_init__(self):
        if len(self.nodes) < 2 or len(self.arrows) != len(self.nodes) - 1:
            raise InvalidPath("path needs >= 2 nodes and one arrow per hop")
        if any(arrow not in ("->", "<-") for arrow in self.arrows):
            raise InvalidPath("arrows must be '->' or '<-'")
        if len(set(self.nodes)) != len(self.nodes):
            raise InvalidPath("path revisits a node")

    @classmethod
    def from_nodes(cls, dag: Dag, nodes: Iterable[str]) -> "Path":
        """Build a path from a node sequence, reading arrow directions off the graph."""
        seq = tuple(nodes)
        arrows = []
        for tail, head in zip(seq, seq[1:]):
            if dag.has_edge(tail, head):
                arrows.append("->")
            elif dag.has_edge(head, tail):
                arrows.append("<-")
            else:
                raise InvalidPath(f"no edge between {tail} and {head}")
        return cls(seq, tuple(arrows))

    @property
    def interior(self) -> tuple[str, ...]:
        return self.nodes[1:-1]

    @property
    def causal(self) -> bool:
        """Directed from first node to last (every arrow forward)."""
        return all(arrow == "->" for arrow in self.arrows)

    def role_of(self, i: int) -> str:
        """Role of interior node ``nodes[i]`` (0 < i < len-1)."""
        into_left = self.arrows[i - 1] == "->"
        into_right = self.arrows[i] == "<-"
        if into_left and into_right:
            return COLLIDER
        if not into_left and not into_right:
            return FORK
        return CHAIN

    def tokens(self) -> list[str]:
        out: list[str] = [self.nodes[0]]
        for arrow, node in zip(self.arrows, self.nodes[1:]):
            out.append(arrow)
            out.append(node)
        return out

    def render(self) -> str:
        return " ".join(self.tokens())

    def __len__(self) -> int:
        return len(self.nodes)


@dataclass(frozen=True)
class ConditioningSet:
    """Explicit adjustments plus the selection nodes folded in.

    ``effective = explicit ∪ selected − {query endpoints}``; the endpoints are
    excluded so that queries *about* a selection node (as in the
    transportability check) do not condition on it.
    """

    explicit: frozenset[str]
    effective: frozenset[str]


def conditioning_for(dag: Dag, a: str, b: str,
                     explicit: Iterable[str] = ()) -> ConditioningSet:
    """Validate a query and compute its effective conditioning set.

    Raises ``UnknownNode`` for names outside the graph, :class:`SameNode` when
    the endpoints coincide, :class:`LatentInSet` when a latent node is
    conditioned on explicitly, and :class:`EndpointInSet` when an endpoint
    appears in the explicit set.
    """
    explicit = frozenset(explicit)
    dag._require(a, b, *explicit)
    if a == b:
        raise SameNode(f"endpoints must differ, got {a!r} twice")
    bad_latent = sorted(explicit & dag.latent_nodes)
    if bad_latent:
        raise LatentInSet(f"cannot condition on latent node(s): {', '.join(bad_latent)}")
    if a in explicit or b in explicit:
        raise EndpointInSet(f"conditioning set must not contain the endpoints {a!r}, {b!r}")
    return ConditioningSet(explicit=explicit,
                           effective=(explicit | dag.selected_nodes) - {a, b})


@dataclass(frozen=True)
class PathClassification:
    """Open/blocked verdict for one path under one conditioning set.

    ``blockers`` lists ``(node, reason)`` pairs, reason one of
    ``UnadjustedCollider`` / ``AdjustedNonCollider``; ``openers`` lists
    ``(collider, witness)`` pairs where the witness is the conditioned
    descendant that opened the collider (the collider itself when it is
    conditioned on directly). ``roles`` labels every interior node.
    """

    path: Path
    causal: bool
    open: bool
    roles: tuple[tuple[str, str], ...]
    blockers: tuple[tuple[str, str], ...]
    openers: tuple[tuple[str, str], ...]


def classify_path(dag: Dag, path: Path, z: ConditioningSet) -> PathClassification:
    """Apply the path rules: a non-collider blocks iff conditioned on; a
    collider blocks iff none of its descendants (itself included) is."""
    effective = z.effective
    roles: list[tuple[str, str]] = []
    blockers: list[tuple[str, str]] = []
    openers: list[tuple[str, str]] = []
    for i in range(1, len(path.nodes) - 1):
        name = path.nodes[i]
        role = path.role_of(i)
        roles.append((name, role))
        if role == COLLIDER:
            conditioned = dag.descendants(name) & effective
            if conditioned:
                witness = name if name in conditioned else min(conditioned)
                openers.append((name, witness))
            else:
                blockers.append((name, UNADJUSTED_COLLIDER))
        elif name in effective:
            blockers.append((name, ADJUSTED_NON_COLLIDER))
    return PathClassification(path=path, causal=path.causal, open=not blockers,
                              roles=tuple(roles), blockers=tuple(blockers),
                              openers=tuple(openers))


def enumerate_paths(dag: Dag, a: str, b: str, cap: int = DEFAULT_PATH_CAP) -> list[Path]:
    """All simple paths between two nodes, in lexicographic node-sequence order.

    Raises :class:`PathExplosion` as soon as the count would exceed ``cap``.
    """
    dag._require(a, b)
    if a == b:
        raise SameNode(f"endpoints must differ, got {a!r} twice")
    return list(_iter_paths(dag, a, b, cap))


def _iter_paths(dag: Dag, a: str, b: str, cap: int) -> Iterator[Path]:
    found = 0
    stack: list[str] = [a]
    on_stack = {a}

    def visit() -> Iterator[Path]:
        nonlocal found
        here = stack[-1]
        if here == b:
            found += 1
            if found > cap:
                raise PathExplosion(cap)
            yield Path.from_nodes(dag, stack)
            return
        for nxt in sorted(dag.neighbors(here)):
            if nxt in on_stack:
                continue
            stack.append(nxt)
            on_stack.add(nxt)
            yield from visit()
            stack.pop()
            on_stack.remove(nxt)

    yield from visit()


@dataclass(frozen=True)
class SeparationResult:
    a: str
    b: str
    conditioning: ConditioningSet
    separated: bool
    open_paths: tuple[Path, ...]
    classifications: tuple[PathClassification, ...]


def d_separated(dag: Dag, a: str, b: str, given: Iterable[str] = (),
                cap: int = DEFAULT_PATH_CAP) -> SeparationResult:
    """Reference separation test: classify every simple path between a and b."""
    z = conditioning_for(dag, a, b, given)
    classifications = tuple(classify_path(dag, p, z)
                            for p in enumerate_paths(dag, a, b, cap=cap))
    open_paths = tuple(c.path for c in classifications if c.open)
    return SeparationResult(a=a, b=b, conditioning=z,
                            separated=not open_paths, open_paths=open_paths,
                            classifications=classifications)


def d_separated_fast(dag: Dag, a: str, b: str, given: Iterable[str] = ()) -> bool:
    """Boolean separation test via the moralized ancestral graph.

    Same verdict as :func:`d_separated` (property-tested), but polynomial:
    restrict to ancestors of {a, b} ∪ conditioning, marry parents, drop the
    conditioning nodes, and check whether a and b are still connected.
    """
    z = conditioning_for(dag, a, b, given).effective
    ancestral: set[str] = set()
    for v in {a, b} | z:
        ancestral |= dag.ancestors(v)

    adjacency: dict[str, set[str]] = {v: set() for v in ancestral}
    for v in ancestral:
        ps = list(dag.parents(v))  # ancestral sets are parent-closed
        for p in ps:
            adjacency[v].add(p)
            adjacency[p].add(v)
        for i, p in enumerate(ps):
            for q in ps[i + 1:]:
                adjacency[p].add(q)
                adjacency[q].add(p)

    seen = {a} | z  # conditioning nodes are removed: never traverse them
    queue = deque([a])
    while queue:
        here = queue.popleft()
        for nxt in adjacency[here]:
            if nxt == b:
                return False
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return True


def causal_interior(dag: Dag, exposure: str, outcome: str) -> frozenset[str]:
    """Nodes lying strictly inside some directed exposure→…→outcome path."""
    dag._require(exposure, outcome)
    return (dag.descendants(exposure) & dag.ancestors(outcome)) - {exposure, outcome}
