#!/usr/bin/env python3
"""Record real service responses for the frontend test suite.

Runs the analysis service in-process and captures every request/response
pair the web UI's test scenarios will make, writing them to
``test/fixtures/recorded.json``.  The UI tests replay these bytes through an
injected fetch, so every verdict they assert on is a genuine service answer
without the suite needing a live server.

Regenerate after changing the service or the scenarios:

    python3 scripts/record_responses.py
"""

import json
import pathlib

from fastapi.testclient import TestClient

from dsepkit.fixtures import fixture_text
from dsepkit.service import create_app

HERE = pathlib.Path(__file__).resolve().parent
OUT = HERE.parent / "test" / "fixtures" / "recorded.json"

client = TestClient(create_app())
records = []
seen = set()


def post(endpoint, body):
    key = (endpoint, json.dumps(body, sort_keys=True, separators=(",", ":"),
                                ensure_ascii=False))
    resp = client.post(endpoint, json=body)
    if key not in seen:
        seen.add(key)
        records.append({"endpoint": endpoint, "body": body,
                        "status": resp.status_code, "response": resp.json()})
    return resp.json()


def js_number(v):
    """Render a float the way JavaScript's String(number) does (for the
    coordinate magnitudes that occur in tests)."""
    f = float(v)
    return str(int(f)) if f == int(f) else repr(f)


def dsl_from_graph(graph):
    """Mirror of the UI's dslFromGraph() writer (src/dsltext.ts): the plain
    text a canvas edit submits to /parse.  Must stay in lock-step with it."""
    lines = ["dag {"]
    for n in graph["nodes"]:
        parts = []
        if n["latent"]:
            parts.append("latent")
        if n["selected"]:
            parts.append("selected")
        if n["pos"] is not None:
            parts.append(f'pos="{js_number(n["pos"][0])},{js_number(n["pos"][1])}"')
        attrs = f" [{', '.join(parts)}]" if parts else ""
        lines.append(f"  {n['name']}{attrs}")
    for e in graph["edges"]:
        lines.append(f"  {e['tail']} -> {e['head']}")
    lines.append("}")
    return "\n".join(lines) + "\n"


def record_queries(dag, exposure, outcome, *, adjusted=(), through=(),
                   candidate=None, selections=()):
    """One debounced refresh round, exactly as QueryController issues it."""
    adjusted = sorted(adjusted)
    through = sorted(through)
    post("/api/v1/dsep",
         {"dag": dag, "a": exposure, "b": outcome, "given": adjusted})
    post("/api/v1/paths",
         {"dag": dag, "from": exposure, "to": outcome, "adjust": adjusted})
    post("/api/v1/adjustment/check",
         {"dag": dag, "exposure": exposure, "outcome": outcome,
          "through": through, "set": adjusted})
    post("/api/v1/adjustment/sets",
         {"dag": dag, "exposure": exposure, "outcome": outcome,
          "through": through})
    if candidate is not None:
        post("/api/v1/iv/check",
             {"dag": dag, "candidate": candidate, "exposure": exposure,
              "outcome": outcome, "set": adjusted})
    for selection in selections:
        given = [n for n in adjusted if n not in (selection, outcome)]
        post("/api/v1/transport",
             {"dag": dag, "selection": selection, "outcome": outcome,
              "given": given})


def main():
    # -- document loads ---------------------------------------------------
    fig1a = post("/api/v1/parse", {"dag": fixture_text("fig1a")})
    fig1b = post("/api/v1/parse", {"dag": fixture_text("fig1b")})
    fig2a = post("/api/v1/parse", {"dag": fixture_text("fig2a")})

    # Non-canonical text typed into the editor (and the re-import of the
    # canonical form it maps to), plus a failure mode.
    canon_ab = post("/api/v1/parse", {"dag": "dag { A B A -> B }"})
    post("/api/v1/parse", {"dag": canon_ab["dsl"]})
    post("/api/v1/parse", {"dag": "dag { A -> }"})

    # Canvas edits expressed through the writer: a rejected cycle edge and a
    # node drag.
    cycled = {"nodes": fig1a["nodes"],
              "edges": fig1a["edges"] + [{"tail": "Height", "head": "Sex"}]}
    post("/api/v1/parse", {"dag": dsl_from_graph(cycled)})

    moved_nodes = [dict(n) for n in fig1a["nodes"]]
    for n in moved_nodes:
        if n["name"] == "PlaysBasketball":
            n["pos"] = [240, 180]
    post("/api/v1/parse",
         {"dag": dsl_from_graph({"nodes": moved_nodes, "edges": fig1a["edges"]})})

    # A latent toggle on fig1a's Height (canvas edit round-trip).
    latent_nodes = [dict(n) for n in fig1a["nodes"]]
    for n in latent_nodes:
        if n["name"] == "Height":
            n["latent"] = True
    post("/api/v1/parse",
         {"dag": dsl_from_graph({"nodes": latent_nodes, "edges": fig1a["edges"]})})

    # -- query rounds -----------------------------------------------------
    for adjusted in ([], ["PlaysBasketball"]):
        record_queries(fig1a["dsl"], "Sex", "Nutrition", adjusted=adjusted)

    for adjusted in ([], ["M2"], ["C2", "M2"]):
        record_queries(fig1b["dsl"], "E", "O", adjusted=adjusted,
                       selections=["S"])
    record_queries(fig1b["dsl"], "E", "O", adjusted=["C1", "C2", "M2"],
                   through=["M1"], selections=["S"])

    for adjusted in ([], ["C1"], ["C2"], ["C1", "C2"], ["M"]):
        record_queries(fig2a["dsl"], "E", "O", adjusted=adjusted,
                       candidate="Z", selections=["S"])

    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_text(json.dumps(records, indent=1, ensure_ascii=False) + "\n")
    print(f"wrote {len(records)} records to {OUT}")


if __name__ == "__main__":
    main()
