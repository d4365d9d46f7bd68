"""One serialization layer for both front ends.

Every payload builder here returns plain JSON-ready dicts; the CLI's
``--json`` mode and the HTTP service both call these, which is what makes
their outputs field-for-field identical by construction.
"""

from __future__ import annotations

from typing import Any

from .adjust import IvVerdict, TransportAdvisory, Verdict
from .dsl import DagDocument, ParseDiagnostic, serialize
from .engine import Path, PathClassification, SeparationResult
from .graph import Dag
from .oracle import JointTable, coin_experiment, conditional_association
from .sem import CrossValidationReport


def diagnostic_payload(diag: ParseDiagnostic) -> dict[str, Any]:
    return {"line": diag.line, "column": diag.column, "severity": diag.severity,
            "code": diag.code, "message": diag.message}


def graph_payload(dag: Dag) -> dict[str, Any]:
    nodes = []
    for name in dag.node_names:
        a = dag.attrs(name)
        nodes.append({"name": name, "latent": a.latent, "selected": a.selected,
                      "pos": list(a.pos) if a.pos is not None else None})
    edges = [{"tail": t, "head": h} for t, h in sorted(dag.edges)]
    return {"nodes": nodes, "edges": edges}


def parse_payload(doc: DagDocument) -> dict[str, Any]:
    payload = graph_payload(doc.dag)
    payload["dsl"] = serialize(doc.dag)
    payload["warnings"] = [diagnostic_payload(d) for d in doc.warnings]
    return payload


def path_tokens(path: Path) -> list[str]:
    return path.tokens()


def classification_payload(c: PathClassification) -> dict[str, Any]:
    return {
        "tokens": c.path.tokens(),
        "causal": c.causal,
        "open": c.open,
        "roles": [{"node": n, "role": r} for n, r in c.roles],
        "blockers": [{"node": n, "reason": r} for n, r in c.blockers],
        "openers": [{"collider": n, "witness": w} for n, w in c.openers],
    }


def paths_payload(result: SeparationResult) -> dict[str, Any]:
    return {
        "from": result.a,
        "to": result.b,
        "adjust": sorted(result.conditioning.explicit),
        "effective": sorted(result.conditioning.effective),
        "count": len(result.classifications),
        "paths": [classification_payload(c) for c in result.classifications],
    }


def dsep_payload(result: SeparationResult) -> dict[str, Any]:
    return {
        "a": result.a,
        "b": result.b,
        "given": sorted(result.conditioning.explicit),
        "effective": sorted(result.conditioning.effective),
        "separated": result.separated,
        "open_paths": [p.tokens() for p in result.open_paths],
    }


def adjustment_check_payload(verdict: Verdict, exposure: str, outcome: str,
                             through: frozenset[str], w: frozenset[str]) -> dict[str, Any]:
    return {
        "exposure": exposure,
        "outcome": outcome,
        "through": sorted(through),
        "set": sorted(w),
        "effective": sorted(verdict.conditioning.effective),
        "valid": verdict.valid,
        "checked_path_count": verdict.checked_path_count,
        "violations": [{"tokens": p.tokens(), "kind": kind}
                       for p, kind in verdict.violations],
        "open_paths": [c.path.tokens() for c in verdict.classifications if c.open],
    }


def adjustment_sets_payload(sets: list[tuple[frozenset[str], bool]],
                            exposure: str, outcome: str,
                            through: frozenset[str]) -> dict[str, Any]:
    return {
        "exposure": exposure,
        "outcome": outcome,
        "through": sorted(through),
        "sets": [{"set": sorted(s), "minimal": minimal} for s, minimal in sets],
    }


def iv_check_payload(verdict: IvVerdict) -> dict[str, Any]:
    return {
        "candidate": verdict.candidate,
        "exposure": verdict.exposure,
        "outcome": verdict.outcome,
        "set": sorted(verdict.w),
        "relevance_ok": verdict.relevance_ok,
        "connected_in_original": verdict.connected_in_original,
        "exclusion_independence_ok": verdict.exclusion_independence_ok,
        "valid": verdict.valid,
        "original_open_paths": [p.tokens() for p in verdict.original_open_paths],
        "modified_open_paths": [p.tokens() for p in verdict.modified_open_paths],
        "removed_edges": [{"tail": t, "head": h} for t, h in verdict.removed_edges],
        "modified": graph_payload(verdict.modified),
    }


def iv_search_payload(results: list[tuple[str, frozenset[str]]],
                      exposure: str, outcome: str) -> dict[str, Any]:
    return {
        "exposure": exposure,
        "outcome": outcome,
        "results": [{"candidate": c, "set": sorted(w)} for c, w in results],
    }


def transport_payload(advisory: TransportAdvisory) -> dict[str, Any]:
    return {
        "selection": advisory.selection,
        "outcome": advisory.outcome,
        "given": sorted(advisory.conditioning.explicit),
        "effective": sorted(advisory.conditioning.effective),
        "transportable_suggested": advisory.transportable_suggested,
        "open_paths": [p.tokens() for p in advisory.open_paths],
    }


def coin_payload() -> dict[str, Any]:
    table: JointTable = coin_experiment()
    unconditional = conditional_association(table, "C1", "C2")
    given_h1 = conditional_association(table, "C1", "C2", lambda a: a["H"] == 1)
    given_z0 = conditional_association(table, "C1", "C2", lambda a: a["Z"] == 0)
    return {
        "model": "coin",
        "variables": list(table.variables),
        "atoms": [{"assignment": list(atom), "probability": str(p)}
                  for atom, p in zip(table.atoms, table.probabilities)],
        "checks": {
            "cov_c1_c2": str(unconditional.covariance),
            "corr_c1_c2_given_h1": str(given_h1.correlation),
            "cov_c1_c2_given_z0": str(given_z0.covariance),
        },
    }


def simulate_payload(report: CrossValidationReport) -> dict[str, Any]:
    def entry(e):
        return {"a": e.a, "b": e.b, "given": list(e.given),
                "effective": list(e.effective), "separated": e.separated,
                "seed": e.seed, "statistic": e.statistic, "p_value": e.p_value,
                "violation": e.violation}

    return {
        "model": "sem",
        "n": report.n,
        "alpha": report.alpha,
        "seeds": list(report.seeds),
        "separated_statements": report.separated_statements,
        "bonferroni_alpha": report.bonferroni_alpha,
        "violation_count": len(report.violations),
        "violations": [entry(e) for e in report.violations],
        "entries": [entry(e) for e in report.entries],
        "caveat": report.caveat,
        "elapsed_seconds": report.elapsed_seconds,
    }
