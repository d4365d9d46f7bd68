"""Command-line front end.

Exit codes are part of the contract: 0 for success or an affirmative
verdict, 3 for a negative analytic verdict (d-connected, invalid set, …),
1 when the input file fails to parse, 2 for usage or argument errors —
never anything else, so shell pipelines can branch on verdicts.
"""

from __future__ import annotations

import json
import os
import sys

import click

from . import adjust as adj
from .dsl import DslParseError, parse
from .engine import DEFAULT_PATH_CAP, d_separated
from .errors import DsepError
from .graph import Dag
from .jsonio import (
    adjustment_check_payload,
    adjustment_sets_payload,
    coin_payload,
    dsep_payload,
    iv_check_payload,
    iv_search_payload,
    parse_payload,
    paths_payload,
    simulate_payload,
    transport_payload,
)
from .oracle import coin_experiment, conditional_association
from .sem import cross_validate, sem_generate, sem_sample, write_csv

EXIT_OK = 0
EXIT_PARSE = 1
EXIT_USAGE = 2
EXIT_NEGATIVE = 3


def _path_cap() -> int:
    raw = os.environ.get("DSEP_PATH_CAP")
    if raw is None:
        return DEFAULT_PATH_CAP
    try:
        cap = int(raw)
        if cap < 1:
            raise ValueError
        return cap
    except ValueError:
        click.echo(f"error: DSEP_PATH_CAP must be a positive integer, got {raw!r}",
                   err=True)
        sys.exit(EXIT_USAGE)


def _load_doc(path: str):
    try:
        with open(path, encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        click.echo(f"error: cannot read {path}: {exc.strerror}", err=True)
        sys.exit(EXIT_USAGE)
    try:
        doc = parse(text)
    except DslParseError as exc:
        for diag in exc.diagnostics:
            click.echo(diag.render(path), err=True)
        sys.exit(EXIT_PARSE)
    for warning in doc.warnings:
        click.echo(warning.render(path), err=True)
    return doc


def _load(path: str) -> Dag:
    return _load_doc(path).dag


def _split(value: str | None) -> list[str]:
    if not value:
        return []
    return [part for part in value.split(",") if part]


def _emit(payload: dict) -> None:
    click.echo(json.dumps(payload, indent=2, sort_keys=True))


def _fail(exc: DsepError) -> None:
    click.echo(f"error: {exc.code}: {exc}", err=True)
    sys.exit(EXIT_USAGE)


def _render_set(names) -> str:
    return "{" + ", ".join(sorted(names)) + "}"


@click.group()
def main() -> None:
    """Analyze causal diagrams: paths, separation, adjustment sets,
    instruments, transportability, and simulation cross-checks."""


@main.command()
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("--json", "as_json", is_flag=True)
def validate(file: str, as_json: bool) -> None:
    """Parse a .dag file and report diagnostics."""
    doc = _load_doc(file)
    if as_json:
        _emit(parse_payload(doc))
    else:
        click.echo(f"ok: {len(doc.dag.node_names)} nodes, "
                   f"{len(doc.dag.edges)} edges")


@main.command()
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("--from", "from_", required=True, metavar="NODE")
@click.option("--to", required=True, metavar="NODE")
@click.option("--adjust", default="", metavar="X,Y", help="Explicit adjustments.")
@click.option("--json", "as_json", is_flag=True)
def paths(file: str, from_: str, to: str, adjust: str, as_json: bool) -> None:
    """List every simple path between two nodes with its classification."""
    dag = _load(file)
    try:
        result = d_separated(dag, from_, to, _split(adjust), cap=_path_cap())
    except DsepError as exc:
        _fail(exc)
    if as_json:
        _emit(paths_payload(result))
        return
    click.echo(f"{len(result.classifications)} path(s) from {from_} to {to} "
               f"adjusting {_render_set(result.conditioning.effective)}:")
    for c in result.classifications:
        kind = "causal" if c.causal else "biasing"
        state = "open" if c.open else "blocked"
        notes = []
        for node, reason in c.blockers:
            notes.append(f"blocked at {node} ({reason})")
        for node, witness in c.openers:
            notes.append(f"collider {node} opened via {witness}")
        suffix = f"  [{'; '.join(notes)}]" if notes else ""
        click.echo(f"  {c.path.render()}  {kind}  {state}{suffix}")


@main.command(name="dsep")
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("--a", "a", required=True, metavar="NODE")
@click.option("--b", "b", required=True, metavar="NODE")
@click.option("--given", default="", metavar="X,Y")
@click.option("--json", "as_json", is_flag=True)
def dsep_cmd(file: str, a: str, b: str, given: str, as_json: bool) -> None:
    """Decide d-separation; exit 0 if separated, 3 if connected."""
    dag = _load(file)
    try:
        result = d_separated(dag, a, b, _split(given), cap=_path_cap())
    except DsepError as exc:
        _fail(exc)
    if as_json:
        _emit(dsep_payload(result))
    elif result.separated:
        click.echo(f"d-separated: {a} and {b} given "
                   f"{_render_set(result.conditioning.effective)}")
    else:
        click.echo(f"d-connected: {a} and {b} given "
                   f"{_render_set(result.conditioning.effective)}; open paths:")
        for p in result.open_paths:
            click.echo(f"  {p.render()}")
    if not result.separated:
        sys.exit(EXIT_NEGATIVE)


@main.group()
def adjust() -> None:
    """Validate or enumerate adjustment sets."""


def _query(exposure: str, outcome: str, through: str) -> adj.EffectQuery:
    try:
        return adj.EffectQuery(exposure, outcome, frozenset(_split(through)))
    except DsepError as exc:
        _fail(exc)


@adjust.command(name="check")
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("--exposure", required=True, metavar="NODE")
@click.option("--outcome", required=True, metavar="NODE")
@click.option("--through", default="", metavar="M1,M2",
              help="Restrict the target to causal paths through these nodes.")
@click.option("--set", "w", default="", metavar="X,Y")
@click.option("--json", "as_json", is_flag=True)
def adjust_check(file: str, exposure: str, outcome: str, through: str, w: str,
                 as_json: bool) -> None:
    """Check one candidate adjustment set; exit 0 valid, 3 invalid."""
    dag = _load(file)
    query = _query(exposure, outcome, through)
    try:
        verdict = adj.check_adjustment_set(dag, query, _split(w), cap=_path_cap())
    except DsepError as exc:
        _fail(exc)
    if as_json:
        _emit(adjustment_check_payload(verdict, exposure, outcome,
                                       query.through, frozenset(_split(w))))
    elif verdict.valid:
        click.echo(f"VALID: {_render_set(_split(w))} adjusts for "
                   f"{exposure} -> {outcome}"
                   + (f" through {_render_set(query.through)}" if query.through else ""))
    else:
        click.echo(f"INVALID: {_render_set(_split(w))} fails for "
                   f"{exposure} -> {outcome}; violations:")
        for path, kind in verdict.violations:
            click.echo(f"  {path.render()}  {kind}")
    if not verdict.valid:
        sys.exit(EXIT_NEGATIVE)


@adjust.command(name="find")
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("--exposure", required=True, metavar="NODE")
@click.option("--outcome", required=True, metavar="NODE")
@click.option("--through", default="", metavar="M1,M2")
@click.option("--json", "as_json", is_flag=True)
def adjust_find(file: str, exposure: str, outcome: str, through: str,
                as_json: bool) -> None:
    """Enumerate all valid adjustment sets; exit 3 when none exist."""
    dag = _load(file)
    query = _query(exposure, outcome, through)
    try:
        sets = adj.enumerate_valid_sets(dag, query, cap=_path_cap())
    except DsepError as exc:
        _fail(exc)
    if as_json:
        _emit(adjustment_sets_payload(sets, exposure, outcome, query.through))
    elif sets:
        for s, minimal in sets:
            click.echo(f"  {_render_set(s)}" + ("  (minimal)" if minimal else ""))
    else:
        click.echo("no valid adjustment sets")
    if not sets:
        sys.exit(EXIT_NEGATIVE)


@main.group()
def iv() -> None:
    """Graphical instrumental-variable checks."""


@iv.command(name="check")
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("--candidate", required=True, metavar="NODE")
@click.option("--exposure", required=True, metavar="NODE")
@click.option("--outcome", required=True, metavar="NODE")
@click.option("--set", "w", default="", metavar="X,Y")
@click.option("--json", "as_json", is_flag=True)
def iv_check_cmd(file: str, candidate: str, exposure: str, outcome: str, w: str,
                 as_json: bool) -> None:
    """Run the two-graph instrument check; exit 0 valid, 3 invalid."""
    dag = _load(file)
    try:
        verdict = adj.iv_check(dag, candidate, exposure, outcome, _split(w),
                               cap=_path_cap())
    except DsepError as exc:
        _fail(exc)
    if as_json:
        _emit(iv_check_payload(verdict))
    else:
        state = "VALID" if verdict.valid else "INVALID"
        click.echo(f"{state}: {candidate} as instrument for {exposure} -> {outcome} "
                   f"with {_render_set(verdict.w)}")
        click.echo(f"  relevance (candidate-exposure connected): "
                   f"{'yes' if verdict.relevance_ok else 'NO'}")
        click.echo(f"  connected to outcome in original graph: "
                   f"{'yes' if verdict.connected_in_original else 'NO'}")
        click.echo(f"  separated from outcome after removing "
                   f"{', '.join(f'{t} -> {h}' for t, h in verdict.removed_edges) or 'nothing'}: "
                   f"{'yes' if verdict.exclusion_independence_ok else 'NO'}")
        if verdict.modified_open_paths:
            click.echo("  still-open paths in the modified graph:")
            for p in verdict.modified_open_paths:
                click.echo(f"    {p.render()}")
        if verdict.valid and verdict.original_open_paths:
            click.echo("  candidate-outcome association flows via:")
            for p in verdict.original_open_paths:
                click.echo(f"    {p.render()}")
    if not verdict.valid:
        sys.exit(EXIT_NEGATIVE)


@iv.command(name="find")
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("--exposure", required=True, metavar="NODE")
@click.option("--outcome", required=True, metavar="NODE")
@click.option("--json", "as_json", is_flag=True)
def iv_find(file: str, exposure: str, outcome: str, as_json: bool) -> None:
    """List candidates with their smallest validating adjustment set."""
    dag = _load(file)
    try:
        results = adj.iv_search(dag, exposure, outcome, cap=_path_cap())
    except DsepError as exc:
        _fail(exc)
    if as_json:
        _emit(iv_search_payload(results, exposure, outcome))
    elif results:
        for candidate, w in results:
            click.echo(f"  {candidate} with {_render_set(w)}")
    else:
        click.echo("no valid instrument candidates")
    if not results:
        sys.exit(EXIT_NEGATIVE)


@main.command()
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("--selection", required=True, metavar="NODE")
@click.option("--outcome", required=True, metavar="NODE")
@click.option("--given", default="", metavar="X,Y")
@click.option("--json", "as_json", is_flag=True)
def transport(file: str, selection: str, outcome: str, given: str,
              as_json: bool) -> None:
    """Advise on transporting results across the selection; exit 0/3."""
    dag = _load(file)
    try:
        advisory = adj.transportability_check(dag, selection, outcome,
                                              _split(given), cap=_path_cap())
    except DsepError as exc:
        _fail(exc)
    if as_json:
        _emit(transport_payload(advisory))
    elif advisory.transportable_suggested:
        click.echo(f"SUGGESTED: {selection} and {outcome} are d-separated")
    else:
        click.echo(f"NOT SUGGESTED: {selection} and {outcome} are d-connected via:")
        for p in advisory.open_paths:
            click.echo(f"  {p.render()}")
    if not advisory.transportable_suggested:
        sys.exit(EXIT_NEGATIVE)


@main.command()
@click.argument("file", type=click.Path(exists=True, dir_okay=False), required=False)
@click.option("--coin", is_flag=True, help="Exact two-coin collider table instead of a SEM run.")
@click.option("--n", default=10000, type=click.IntRange(min=1), show_default=True)
@click.option("--seed", default="0", metavar="K[,K2,...]", show_default=True)
@click.option("--alpha", default=0.01, type=click.FloatRange(min=0, min_open=True),
              show_default=True)
@click.option("--csv", "csv_out", type=click.Path(dir_okay=False), default=None,
              help="Also write the first seed's sample as CSV.")
@click.option("--json", "as_json", is_flag=True)
def simulate(file: str | None, coin: bool, n: int, seed: str, alpha: float,
             csv_out: str | None, as_json: bool) -> None:
    """Cross-validate the graph against sampled data, or print the exact
    coin-experiment table."""
    if coin:
        if as_json:
            _emit(coin_payload())
        else:
            table = coin_experiment()
            click.echo("exact joint table (C1, C2, H, Z):")
            for atom, p in zip(table.atoms, table.probabilities):
                click.echo(f"  {atom}  {p}")
            plain = conditional_association(table, "C1", "C2")
            h1 = conditional_association(table, "C1", "C2", lambda a: a["H"] == 1)
            z0 = conditional_association(table, "C1", "C2", lambda a: a["Z"] == 0)
            click.echo(f"cov(C1,C2) = {plain.covariance}")
            click.echo(f"corr(C1,C2 | H=1) = {h1.correlation}")
            click.echo(f"cov(C1,C2 | Z=0) = {z0.covariance}")
        return
    if file is None:
        click.echo("error: a .dag file is required unless --coin is given", err=True)
        sys.exit(EXIT_USAGE)
    dag = _load(file)
    try:
        seeds = [int(part) for part in seed.split(",") if part]
        if not seeds:
            raise ValueError
    except ValueError:
        click.echo(f"error: --seed must be comma-separated integers, got {seed!r}",
                   err=True)
        sys.exit(EXIT_USAGE)
    report = cross_validate(dag, seeds, n, alpha)
    if csv_out is not None:
        write_csv(sem_sample(sem_generate(dag, seeds[0]), n), csv_out)
    if as_json:
        _emit(simulate_payload(report))
    else:
        click.echo(f"{report.separated_statements} separated statements tested "
                   f"at n={n}, alpha={alpha} (Bonferroni {report.bonferroni_alpha:.3g})")
        if report.violations:
            click.echo(f"{len(report.violations)} VIOLATION(S):")
            for e in report.violations:
                click.echo(f"  {e.a} vs {e.b} given {_render_set(e.given)} "
                           f"seed {e.seed}: p={e.p_value:.3g}")
        else:
            click.echo("no separated statement rejected")
        click.echo(f"note: {report.caveat}")
    if report.violations:
        sys.exit(EXIT_NEGATIVE)


if __name__ == "__main__":
    main()
