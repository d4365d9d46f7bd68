"""Path enumeration, path classification, and the two separation engines."""
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dsepkit.engine import (
    DEFAULT_PATH_CAP,
    Path,
    causal_interior,
    classify_path,
    conditioning_for,
    d_separated,
    d_separated_fast,
    enumerate_paths,
)
from dsepkit.errors import (
    EndpointInSet,
    InvalidPath,
    LatentInSet,
    PathExplosion,
    SameNode,
    UnknownNode,
)
from dsepkit.graph import Dag, NodeAttrs

from conftest import dag_strategy, random_dag

# The confounded mediator bench: the one graph where every rule fires at
# least once (selection, latent confounding, colliders on biasing paths).
FIG1B_E_O_PATHS = [
    "E <- C1 -> S <- U1 -> M1 -> O",
    "E <- C1 -> S <- U1 -> O",
    "E -> M1 -> O",
    "E -> M1 <- U1 -> O",
    "E -> M2 -> O",
    "E -> M2 <- U3 -> C2 -> O",
    "E <- U2 -> M2 -> O",
    "E <- U2 -> M2 <- U3 -> C2 -> O",
]


def chain(*names):
    dag = Dag({n: NodeAttrs() for n in names})
    for tail, head in zip(names, names[1:]):
        dag = dag.add_edge(tail, head)
    return dag


class TestPath:
    def test_from_nodes_reads_directions(self, fig1b):
        p = Path.from_nodes(fig1b, ("E", "M1", "U1", "O"))
        assert p.arrows == ("->", "<-", "->")
        assert p.render() == "E -> M1 <- U1 -> O"
        assert p.tokens() == ["E", "->", "M1", "<-", "U1", "->", "O"]

    def test_from_nodes_rejects_non_adjacent(self, fig1b):
        with pytest.raises(InvalidPath):
            Path.from_nodes(fig1b, ("E", "O"))

    def test_interior(self, fig1b):
        p = Path.from_nodes(fig1b, ("E", "M1", "O"))
        assert p.interior == ("M1",)
        assert p.causal

    def test_single_edge_path(self, fig1a):
        p = Path.from_nodes(fig1a, ("Sex", "Height"))
        assert p.interior == ()
        assert p.causal


class TestEnumeration:
    def test_fig1b_exposure_outcome_table(self, fig1b):
        paths = enumerate_paths(fig1b, "E", "O")
        assert [p.render() for p in paths] == FIG1B_E_O_PATHS

    def test_order_is_lexicographic(self, fig1b):
        paths = enumerate_paths(fig1b, "E", "O")
        assert [p.nodes for p in paths] == sorted(p.nodes for p in paths)

    def test_direct_edge(self, fig1a):
        paths = enumerate_paths(fig1a, "Sex", "Height")
        assert [p.render() for p in paths] == ["Sex -> Height"]

    def test_disconnected_pair(self):
        dag = Dag({"A": NodeAttrs(), "B": NodeAttrs()})
        assert enumerate_paths(dag, "A", "B") == []

    def test_cap_raises(self):
        dag = Dag({f"N{i}": NodeAttrs() for i in range(8)})
        for i in range(8):
            for j in range(i + 1, 8):
                dag = dag.add_edge(f"N{i}", f"N{j}")
        with pytest.raises(PathExplosion):
            enumerate_paths(dag, "N0", "N7", cap=10)

    def test_cap_boundary_on_small_complete_graph(self):
        # Complete graph on four nodes: the walk may cross edges against
        # their arrows, so A..D has exactly 5 simple routes, not 2.
        dag = Dag({n: NodeAttrs() for n in "ABCD"})
        for i, tail in enumerate("ABCD"):
            for head in "ABCD"[i + 1:]:
                dag = dag.add_edge(tail, head)
        assert len(enumerate_paths(dag, "A", "D", cap=5)) == 5
        with pytest.raises(PathExplosion):
            enumerate_paths(dag, "A", "D", cap=4)

    def test_cap_propagates_through_dsep(self, fig1b):
        with pytest.raises(PathExplosion):
            d_separated(fig1b, "E", "O", cap=2)


class TestConditioning:
    def test_selection_nodes_join_implicitly(self, fig1b):
        z = conditioning_for(fig1b, "E", "O", ())
        assert z.explicit == frozenset()
        assert z.effective == {"S"}

    def test_explicit_union_selected(self, fig1b):
        z = conditioning_for(fig1b, "E", "O", ("C1",))
        assert z.effective == {"C1", "S"}

    def test_endpoints_dropped_from_effective(self, fig1b):
        # S is a selection node *and* a query endpoint here; it must not
        # condition its own query.
        z = conditioning_for(fig1b, "S", "O", ())
        assert z.effective == frozenset()

    def test_latent_rejected(self, fig1b):
        with pytest.raises(LatentInSet):
            conditioning_for(fig1b, "E", "O", ("U1",))

    def test_endpoint_rejected(self, fig1b):
        with pytest.raises(EndpointInSet):
            conditioning_for(fig1b, "E", "O", ("E",))

    def test_same_node_rejected(self, fig1b):
        with pytest.raises(SameNode):
            conditioning_for(fig1b, "E", "E", ())

    def test_unknown_node_rejected(self, fig1b):
        with pytest.raises(UnknownNode):
            conditioning_for(fig1b, "E", "Nope", ())


class TestClassification:
    def test_selection_collider_opens_biasing_path(self, fig1b):
        z = conditioning_for(fig1b, "E", "O", ())
        p = Path.from_nodes(fig1b, ("E", "C1", "S", "U1", "O"))
        c = classify_path(fig1b, p, z)
        assert not c.causal
        assert c.open
        assert c.blockers == ()
        assert c.openers == (("S", "S"),)

    def test_adjusting_fork_blocks_it(self, fig1b):
        z = conditioning_for(fig1b, "E", "O", ("C1",))
        p = Path.from_nodes(fig1b, ("E", "C1", "S", "U1", "O"))
        c = classify_path(fig1b, p, z)
        assert not c.open
        assert c.blockers == (("C1", "AdjustedNonCollider"),)
        assert c.openers == (("S", "S"),)

    def test_unconditioned_collider_blocks(self, fig1b):
        z = conditioning_for(fig1b, "E", "O", ())
        p = Path.from_nodes(fig1b, ("E", "M2", "U3", "C2", "O"))
        c = classify_path(fig1b, p, z)
        assert not c.open
        assert c.blockers == (("M2", "UnadjustedCollider"),)

    def test_descendant_witness_opens_collider(self, fig1a):
        z = conditioning_for(fig1a, "Sex", "Nutrition", ("PlaysBasketball",))
        p = Path.from_nodes(fig1a, ("Sex", "Height", "Nutrition"))
        c = classify_path(fig1a, p, z)
        assert c.open
        assert c.openers == (("Height", "PlaysBasketball"),)
        assert c.roles == (("Height", "collider"),)

    def test_roles_cover_chain_and_fork(self, fig1b):
        z = conditioning_for(fig1b, "E", "O", ())
        p = Path.from_nodes(fig1b, ("E", "U2", "M2", "O"))
        c = classify_path(fig1b, p, z)
        assert c.roles == (("U2", "fork"), ("M2", "chain"))
        assert c.open

    def test_causal_path_marked(self, fig1b):
        z = conditioning_for(fig1b, "E", "O", ())
        c = classify_path(fig1b, Path.from_nodes(fig1b, ("E", "M1", "O")), z)
        assert c.causal and c.open and c.blockers == () and c.openers == ()

    def test_fig1b_full_table(self, fig1b):
        z = conditioning_for(fig1b, "E", "O", ())
        got = [(p.render(), classify_path(fig1b, p, z).open)
               for p in enumerate_paths(fig1b, "E", "O")]
        open_flags = {
            "E <- C1 -> S <- U1 -> M1 -> O": True,
            "E <- C1 -> S <- U1 -> O": True,
            "E -> M1 -> O": True,
            "E -> M1 <- U1 -> O": False,
            "E -> M2 -> O": True,
            "E -> M2 <- U3 -> C2 -> O": False,
            "E <- U2 -> M2 -> O": True,
            "E <- U2 -> M2 <- U3 -> C2 -> O": False,
        }
        assert got == [(r, open_flags[r]) for r in FIG1B_E_O_PATHS]


class TestSeparation:
    def test_collider_bench_marginal(self, fig1a):
        assert d_separated(fig1a, "Sex", "Nutrition").separated

    def test_collider_bench_conditioned(self, fig1a):
        assert not d_separated(fig1a, "Sex", "Nutrition", ("Height",)).separated

    def test_collider_bench_descendant(self, fig1a):
        r = d_separated(fig1a, "Sex", "Nutrition", ("PlaysBasketball",))
        assert not r.separated
        assert [p.render() for p in r.open_paths] == [
            "Sex -> Height <- Nutrition"]

    def test_selection_connects_s_and_o(self, fig1b):
        r = d_separated(fig1b, "S", "O")
        assert not r.separated
        assert [p.render() for p in r.open_paths] == [
            "S <- C1 -> E -> M1 -> O",
            "S <- C1 -> E -> M2 -> O",
            "S <- U1 -> M1 -> O",
            "S <- U1 -> O",
        ]

    def test_result_carries_conditioning(self, fig1b):
        r = d_separated(fig1b, "E", "O", ("C1",))
        assert r.conditioning.explicit == {"C1"}
        assert r.conditioning.effective == {"C1", "S"}
        assert len(r.classifications) == 8

    def test_chain_blocked_by_mediator(self):
        dag = chain("A", "B", "C")
        assert not d_separated(dag, "A", "C").separated
        assert d_separated(dag, "A", "C", ("B",)).separated

    def test_fast_engine_same_verdicts(self, fig1a, fig1b):
        assert d_separated_fast(fig1a, "Sex", "Nutrition")
        assert not d_separated_fast(fig1a, "Sex", "Nutrition", ("Height",))
        assert not d_separated_fast(fig1b, "S", "O")
        assert not d_separated_fast(fig1b, "E", "O", ("C1",))

    def test_fast_engine_validates_inputs(self, fig1b):
        with pytest.raises(LatentInSet):
            d_separated_fast(fig1b, "E", "O", ("U1",))


class TestCausalInterior:
    def test_fig1b(self, fig1b):
        assert causal_interior(fig1b, "E", "O") == {"M1", "M2"}

    def test_fig2a(self, fig2a):
        assert causal_interior(fig2a, "E", "O") == {"M"}

    def test_no_directed_route(self, fig1a):
        assert causal_interior(fig1a, "PlaysBasketball", "Sex") == set()


@st.composite
def separation_case(draw):
    dag = draw(dag_strategy(max_nodes=10))
    names = dag.node_names
    if len(names) < 2:
        dag = dag.add_node("A").add_node("B")
        names = dag.node_names
    a = draw(st.sampled_from(names))
    b = draw(st.sampled_from([n for n in names if n != a]))
    eligible = [n for n in names
                if n not in (a, b) and not dag.attrs(n).latent]
    z = draw(st.sets(st.sampled_from(eligible), max_size=4)) if eligible else set()
    return dag, a, b, tuple(sorted(z))


class TestProperties:
    @given(separation_case())
    @settings(max_examples=300)
    def test_fast_matches_reference(self, case):
        dag, a, b, z = case
        assert d_separated_fast(dag, a, b, z) == d_separated(dag, a, b, z).separated

    @given(separation_case())
    def test_symmetric_in_endpoints(self, case):
        dag, a, b, z = case
        assert (d_separated(dag, a, b, z).separated
                == d_separated(dag, b, a, z).separated)

    @given(separation_case())
    def test_open_without_conditioning_means_no_collider(self, case):
        dag, a, b, _ = case
        if dag.selected_nodes:
            return  # selection nodes condition implicitly
        z = conditioning_for(dag, a, b, ())
        try:
            paths = enumerate_paths(dag, a, b, cap=2000)
        except PathExplosion:
            return
        for p in paths:
            c = classify_path(dag, p, z)
            has_collider = any(role == "collider" for _, role in c.roles)
            assert c.open == (not has_collider)

    @given(separation_case())
    def test_conditioning_any_mediator_blocks_causal_path(self, case):
        dag, a, b, _ = case
        z0 = conditioning_for(dag, a, b, ())
        try:
            paths = enumerate_paths(dag, a, b, cap=2000)
        except PathExplosion:
            return
        for p in paths:
            if not p.causal or not p.interior:
                continue
            for m in p.interior:
                if dag.attrs(m).latent:
                    continue
                z = conditioning_for(dag, a, b, (m,))
                assert not classify_path(dag, p, z).open
            if not z0.effective:
                assert classify_path(dag, p, z0).open

    def test_fast_matches_reference_seeded_bulk(self):
        rng = random.Random(20240811)
        checked = 0
        for _ in range(150):
            dag = random_dag(rng, max_nodes=9)
            names = dag.node_names
            if len(names) < 2:
                continue
            for _ in range(4):
                a, b = rng.sample(names, 2)
                eligible = [n for n in names
                            if n not in (a, b) and not dag.attrs(n).latent]
                z = rng.sample(eligible, min(len(eligible), rng.randrange(3)))
                assert (d_separated_fast(dag, a, b, z)
                        == d_separated(dag, a, b, z).separated)
                checked += 1
        assert checked >= 400
