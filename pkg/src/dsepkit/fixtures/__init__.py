"""Bundled example graphs, stored as canonical DSL text.

* ``fig1a`` — sex/nutrition/height/basketball: one collider, no latents.
* ``fig1b`` — exposure/outcome workbench graph with three latents and a
  selection node.
* ``fig2a`` — instrumental-variable setting: candidate Z, confounded
  exposure, selection into S.
"""

from importlib import resources

from ..dsl import parse
from ..graph import Dag

NAMES = ("fig1a", "fig1b", "fig2a")


def fixture_text(name: str) -> str:
    if name not in NAMES:
        raise KeyError(f"unknown fixture {name!r}; available: {', '.join(NAMES)}")
    return resources.files(__package__).joinpath(f"{name}.dag").read_text(encoding="utf-8")


def load(name: str) -> Dag:
    return parse(fixture_text(name)).dag
