"""Adjustment-set validation and search, the graphical IV procedure, and the
transportability advisory.

Validity is defined directly on paths, not via a named criterion: a candidate
set is valid for an effect query when every target causal path stays open and
every other path is blocked under the effective conditioning set. The IV
check compares the original graph against a surgically modified copy with the
exposure's causal edges removed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

from .engine import (
    DEFAULT_PATH_CAP,
    ConditioningSet,
    Path,
    PathClassification,
    causal_interior,
    classify_path,
    conditioning_for,
    d_separated,
    enumerate_paths,
)
from .errors import (
    EndpointInSet,
    LatentInSet,
    MediatorInSet,
    NotASelectionNode,
    SameNode,
    TooManyCandidates,
)
from .graph import Dag, surgery_remove_exposure_causal_edges

DEFAULT_CANDIDATE_CAP = 20

OPEN_NON_TARGET = "OpenNonTarget"
BLOCKED_TARGET = "BlockedTarget"


@dataclass(frozen=True)
class EffectQuery:
    """What is being estimated: the total effect of exposure on outcome, or
    only the causal paths routed through every node in ``through``."""

    exposure: str
    outcome: str
    through: frozenset[str] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "through", frozenset(self.through))
        if self.exposure == self.outcome:
            raise SameNode(f"exposure and outcome must differ, got {self.exposure!r} twice")
        if self.exposure in self.through or self.outcome in self.through:
            raise EndpointInSet("through-nodes must exclude exposure and outcome")

    @property
    def is_total(self) -> bool:
        return not self.through

    def selects(self, path: Path) -> bool:
        """Whether this path is one of the target causal paths."""
        return path.causal and self.through <= set(path.interior)


@dataclass(frozen=True)
class Verdict:
    """Outcome of checking one adjustment set.

    ``violations`` pairs each failing path with a kind: ``OpenNonTarget``
    (a biasing or off-target causal path the set leaves open) or
    ``BlockedTarget`` (a target causal path the set blocks).
    """

    valid: bool
    violations: tuple[tuple[Path, str], ...]
    checked_path_count: int
    conditioning: ConditioningSet
    classifications: tuple[PathClassification, ...] = field(repr=False, default=())


def _verdict(dag: Dag, query: EffectQuery, paths: Sequence[Path],
             z: ConditioningSet) -> Verdict:
    classifications = tuple(classify_path(dag, p, z) for p in paths)
    violations = []
    for c in classifications:
        if query.selects(c.path):
            if not c.open:
                violations.append((c.path, BLOCKED_TARGET))
        elif c.open:
            violations.append((c.path, OPEN_NON_TARGET))
    return Verdict(valid=not violations, violations=tuple(violations),
                   checked_path_count=len(classifications), conditioning=z,
                   classifications=classifications)


def check_adjustment_set(dag: Dag, query: EffectQuery, w: Iterable[str] = (),
                         cap: int = DEFAULT_PATH_CAP) -> Verdict:
    """Is ``w`` a valid adjustment set for the query?

    Every target causal path must remain open and every other
    exposure–outcome path must be blocked under ``w`` plus the selection
    nodes. Raises ``LatentInSet``/``EndpointInSet``/``UnknownNode`` for
    ineligible ``w`` and ``PathExplosion`` past the path cap.
    """
    dag._require(*query.through)
    z = conditioning_for(dag, query.exposure, query.outcome, w)
    paths = enumerate_paths(dag, query.exposure, query.outcome, cap=cap)
    return _verdict(dag, query, paths, z)


def _eligible(dag: Dag, *exclude: str) -> list[str]:
    out = []
    for name in dag.node_names:
        a = dag.attrs(name)
        if a.latent or a.selected or name in exclude:
            continue
        out.append(name)
    return out


def enumerate_valid_sets(dag: Dag, query: EffectQuery,
                         candidate_cap: int = DEFAULT_CANDIDATE_CAP,
                         cap: int = DEFAULT_PATH_CAP) -> list[tuple[frozenset[str], bool]]:
    """Brute-force every subset of eligible nodes; return the valid ones.

    Eligible nodes are measurable, unselected non-endpoints. Results are
    ordered by size then lexicographically, each flagged inclusion-minimal or
    not. Raises :class:`TooManyCandidates` past ``candidate_cap`` eligible
    nodes.
    """
    dag._require(*query.through)
    pool = _eligible(dag, query.exposure, query.outcome)
    if len(pool) > candidate_cap:
        raise TooManyCandidates(
            f"{len(pool)} eligible nodes exceeds the search cap of {candidate_cap}")
    paths = enumerate_paths(dag, query.exposure, query.outcome, cap=cap)
    valid: list[frozenset[str]] = []
    for size in range(len(pool) + 1):
        for combo in combinations(pool, size):
            z = conditioning_for(dag, query.exposure, query.outcome, combo)
            if _verdict(dag, query, paths, z).valid:
                valid.append(frozenset(combo))
    return [(s, not any(t < s for t in valid)) for s in valid]


@dataclass(frozen=True)
class IvVerdict:
    """Result of the two-graph instrumental-variable check.

    The candidate passes when it is (1) d-connected with the exposure,
    (2) d-connected with the outcome in the original graph, and
    (3) d-separated from the outcome once the exposure's causal edges are
    removed — all under ``w`` plus the selection nodes.
    ``modified_open_paths`` witness a failure of (3);
    ``original_open_paths`` document how (2) holds.
    """

    candidate: str
    exposure: str
    outcome: str
    w: frozenset[str]
    relevance_ok: bool
    connected_in_original: bool
    exclusion_independence_ok: bool
    valid: bool
    original_open_paths: tuple[Path, ...]
    modified_open_paths: tuple[Path, ...]
    removed_edges: tuple[tuple[str, str], ...]
    modified: Dag = field(repr=False, default=None)  # type: ignore[assignment]


def iv_check(dag: Dag, candidate: str, exposure: str, outcome: str,
             w: Iterable[str] = (), cap: int = DEFAULT_PATH_CAP) -> IvVerdict:
    """Run the graphical IV procedure for one candidate and adjustment set.

    ``w`` may not contain latent nodes, the three query nodes, or any node on
    a directed exposure→…→outcome path (:class:`MediatorInSet` — adjusting a
    mediator would fake exclusion by blocking the causal route itself).
    Relevance is checked as d-connection, the graph-level surrogate of the
    statistical requirement.
    """
    w = frozenset(w)
    dag._require(candidate, exposure, outcome, *w)
    if len({candidate, exposure, outcome}) < 3:
        raise SameNode("candidate, exposure and outcome must be three distinct nodes")
    bad_latent = sorted(w & dag.latent_nodes)
    if bad_latent:
        raise LatentInSet(f"cannot condition on latent node(s): {', '.join(bad_latent)}")
    if w & {candidate, exposure, outcome}:
        raise EndpointInSet("adjustment set must exclude candidate, exposure and outcome")
    mediators = sorted(w & causal_interior(dag, exposure, outcome))
    if mediators:
        raise MediatorInSet(
            f"cannot adjust for mediator(s) of the exposure–outcome effect: "
            f"{', '.join(mediators)}")

    relevance = d_separated(dag, candidate, exposure, w, cap=cap)
    original = d_separated(dag, candidate, outcome, w, cap=cap)
    modified = surgery_remove_exposure_causal_edges(dag, exposure, outcome)
    removed = tuple(sorted(set(dag.edges) - set(modified.edges)))
    surgered = d_separated(modified, candidate, outcome, w, cap=cap)

    relevance_ok = not relevance.separated
    connected_in_original = not original.separated
    exclusion_ok = surgered.separated
    return IvVerdict(candidate=candidate, exposure=exposure, outcome=outcome, w=w,
                     relevance_ok=relevance_ok,
                     connected_in_original=connected_in_original,
                     exclusion_independence_ok=exclusion_ok,
                     valid=relevance_ok and connected_in_original and exclusion_ok,
                     original_open_paths=original.open_paths,
                     modified_open_paths=surgered.open_paths,
                     removed_edges=removed, modified=modified)


def iv_search(dag: Dag, exposure: str, outcome: str,
              candidate_cap: int = DEFAULT_CANDIDATE_CAP,
              cap: int = DEFAULT_PATH_CAP) -> list[tuple[str, frozenset[str]]]:
    """For each eligible candidate, the smallest adjustment set (size, then
    lexicographic) under which it passes :func:`iv_check`, if any exists."""
    if exposure == outcome:
        raise SameNode(f"exposure and outcome must differ, got {exposure!r} twice")
    dag._require(exposure, outcome)
    pool = _eligible(dag, exposure, outcome)
    if len(pool) > candidate_cap:
        raise TooManyCandidates(
            f"{len(pool)} eligible nodes exceeds the search cap of {candidate_cap}")
    mediators = causal_interior(dag, exposure, outcome)
    results: list[tuple[str, frozenset[str]]] = []
    for candidate in pool:
        w_pool = [n for n in pool if n != candidate and n not in mediators]
        for size in range(len(w_pool) + 1):
            hit = next((combo for combo in combinations(w_pool, size)
                        if iv_check(dag, candidate, exposure, outcome, combo,
                                    cap=cap).valid), None)
            if hit is not None:
                results.append((candidate, frozenset(hit)))
                break
    return results


@dataclass(frozen=True)
class TransportAdvisory:
    """Advisory (not a proof) on transporting results across the selection.

    Separation between the selection node and the outcome suggests the
    selection does not distort the outcome's dependence structure; the open
    paths are the obstruction otherwise.
    """

    selection: str
    outcome: str
    transportable_suggested: bool
    open_paths: tuple[Path, ...]
    conditioning: ConditioningSet


def transportability_check(dag: Dag, selection: str, outcome: str,
                           w: Iterable[str] = (),
                           cap: int = DEFAULT_PATH_CAP) -> TransportAdvisory:
    """d-separation between a selection node and the outcome, with the
    selection node itself excluded from its own conditioning."""
    dag._require(selection, outcome)
    if not dag.attrs(selection).selected:
        raise NotASelectionNode(f"{selection!r} is not marked as a selection node")
    result = d_separated(dag, selection, outcome, w, cap=cap)
    return TransportAdvisory(selection=selection, outcome=outcome,
                             transportable_suggested=result.separated,
                             open_paths=result.open_paths,
                             conditioning=result.conditioning)
