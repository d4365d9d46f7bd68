"""The CLI's --json output and the HTTP responses must be the same bytes-level
payloads: both front ends build their dicts through the shared builders, and
this battery holds them to it endpoint by endpoint."""
import json
from pathlib import Path

import pytest
from click.testing import CliRunner
from fastapi.testclient import TestClient

from dsepkit.cli import main
from dsepkit.fixtures import fixture_text
from dsepkit.service import create_app

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

# (case id, fixture name, CLI argv after the file path, endpoint, body extras).
# The HTTP body always carries the fixture's DSL text under "dag".
PARITY_CASES = [
    ("parse", "fig1b",
     ["validate"], "parse", {}),
    ("paths", "fig1b",
     ["paths", "--from", "E", "--to", "O", "--adjust", "C1"],
     "paths", {"from": "E", "to": "O", "adjust": ["C1"]}),
    ("dsep", "fig1b",
     ["dsep", "--a", "E", "--b", "O", "--given", "C1"],
     "dsep", {"a": "E", "b": "O", "given": ["C1"]}),
    ("adjustment-check-valid", "fig1b",
     ["adjust", "check", "--exposure", "E", "--outcome", "O",
      "--through", "M1", "--set", "C1,C2,M2"],
     "adjustment/check",
     {"exposure": "E", "outcome": "O", "through": ["M1"],
      "set": ["C1", "C2", "M2"]}),
    ("adjustment-check-invalid", "fig1b",
     ["adjust", "check", "--exposure", "E", "--outcome", "O",
      "--through", "M1", "--set", "M2"],
     "adjustment/check",
     {"exposure": "E", "outcome": "O", "through": ["M1"], "set": ["M2"]}),
    ("adjustment-sets", "fig1b",
     ["adjust", "find", "--exposure", "E", "--outcome", "O", "--through", "M1"],
     "adjustment/sets",
     {"exposure": "E", "outcome": "O", "through": ["M1"]}),
    ("adjustment-sets-empty", "fig1b",
     ["adjust", "find", "--exposure", "E", "--outcome", "O"],
     "adjustment/sets", {"exposure": "E", "outcome": "O"}),
    ("iv-check-valid", "fig2a",
     ["iv", "check", "--candidate", "Z", "--exposure", "E", "--outcome", "O",
      "--set", "C1,C2"],
     "iv/check",
     {"candidate": "Z", "exposure": "E", "outcome": "O", "set": ["C1", "C2"]}),
    ("iv-check-invalid", "fig2a",
     ["iv", "check", "--candidate", "Z", "--exposure", "E", "--outcome", "O"],
     "iv/check", {"candidate": "Z", "exposure": "E", "outcome": "O"}),
    ("iv-search", "fig2a",
     ["iv", "find", "--exposure", "E", "--outcome", "O"],
     "iv/search", {"exposure": "E", "outcome": "O"}),
    ("iv-search-empty", "fig1b",
     ["iv", "find", "--exposure", "E", "--outcome", "O"],
     "iv/search", {"exposure": "E", "outcome": "O"}),
    ("transport", "fig1b",
     ["transport", "--selection", "S", "--outcome", "O"],
     "transport", {"selection": "S", "outcome": "O"}),
    ("simulate-sem", "fig1a",
     ["simulate", "--n", "800", "--seed", "1,2"],
     "simulate", {"n": 800, "seeds": [1, 2]}),
    ("simulate-coin", None,
     ["simulate", "--coin"], "simulate", {"coin": True}),
]

VOLATILE = {"elapsed_seconds"}


def run_case(runner, client, case):
    """Return (cli payload, http payload) with volatile timing fields removed."""
    _, fixture, argv, endpoint, extras = case
    argv = list(argv)
    body = dict(extras)
    if fixture is not None:
        file_arg = str(FIXTURES / f"{fixture}.dag")
        at = next((i for i, a in enumerate(argv) if a.startswith("--")),
                  len(argv))
        argv.insert(at, file_arg)
        body["dag"] = fixture_text(fixture)
    argv.append("--json")
    cli_result = runner.invoke(main, argv)
    assert cli_result.exit_code in (0, 3), cli_result.stderr
    cli_payload = json.loads(cli_result.stdout)
    response = client.post(f"/api/v1/{endpoint}", json=body)
    assert response.status_code == 200, response.text
    http_payload = response.json()
    for volatile in VOLATILE:
        cli_payload.pop(volatile, None)
        http_payload.pop(volatile, None)
    return cli_payload, http_payload


@pytest.fixture(scope="module")
def runner():
    return CliRunner()


@pytest.fixture(scope="module")
def client():
    with TestClient(create_app()) as c:
        yield c


@pytest.mark.parametrize("case", PARITY_CASES, ids=[c[0] for c in PARITY_CASES])
def test_cli_and_service_agree(runner, client, case):
    cli_payload, http_payload = run_case(runner, client, case)
    assert cli_payload == http_payload


def test_every_post_endpoint_is_covered():
    app = create_app()
    served = {route.path for route in app.routes
              if "POST" in getattr(route, "methods", set())}
    exercised = {f"/api/v1/{c[3]}" for c in PARITY_CASES}
    assert served == exercised
