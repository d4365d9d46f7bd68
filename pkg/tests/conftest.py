import random

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from dsepkit.fixtures import load
from dsepkit.graph import Dag, NodeAttrs

settings.register_profile(
    "default",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


@pytest.fixture(scope="session")
def fig1a() -> Dag:
    return load("fig1a")


@pytest.fixture(scope="session")
def fig1b() -> Dag:
    return load("fig1b")


@pytest.fixture(scope="session")
def fig2a() -> Dag:
    return load("fig2a")


def random_dag(rng: random.Random, max_nodes: int = 12, edge_prob: float = 0.25,
               attrs: bool = True) -> Dag:
    """Random DAG via a random topological order; acyclic by construction."""
    n = rng.randint(2, max_nodes)
    names = [f"N{i}" for i in range(n)]
    rng.shuffle(names)
    edges = [(names[i], names[j])
             for i in range(n) for j in range(i + 1, n)
             if rng.random() < edge_prob]
    node_attrs = {}
    for name in names:
        if attrs and rng.random() < 0.15:
            node_attrs[name] = NodeAttrs(latent=True)
        elif attrs and rng.random() < 0.1:
            node_attrs[name] = NodeAttrs(selected=True)
        else:
            node_attrs[name] = NodeAttrs()
    return Dag(node_attrs, edges)


@st.composite
def dag_strategy(draw, max_nodes: int = 10, with_attrs: bool = True,
                 with_pos: bool = False):
    n = draw(st.integers(min_value=2, max_value=max_nodes))
    names = [f"N{i}" for i in range(n)]
    edge_flags = draw(st.lists(st.integers(0, 3),
                               min_size=n * (n - 1) // 2,
                               max_size=n * (n - 1) // 2))
    edges = []
    k = 0
    for i in range(n):
        for j in range(i + 1, n):
            if edge_flags[k] == 0:
                edges.append((names[i], names[j]))
            k += 1
    attrs = {}
    pos_floats = st.floats(allow_nan=False, allow_infinity=False,
                           min_value=-1e6, max_value=1e6)
    for name in names:
        kind = draw(st.sampled_from(["plain", "plain", "plain", "latent", "selected"])) \
            if with_attrs else "plain"
        pos = draw(st.one_of(st.none(), st.tuples(pos_floats, pos_floats))) \
            if with_pos else None
        attrs[name] = NodeAttrs(latent=kind == "latent",
                                selected=kind == "selected", pos=pos)
    return Dag(attrs, edges)
