"""Linear-Gaussian structural equations and conditional-independence testing.

Each node is a weighted sum of its parents plus unit-variance Gaussian
noise, generated in topological order. Edge coefficients are drawn with
magnitude in [0.5, 1.5] by default — bounded away from zero on purpose, so
that d-connected pairs stay statistically detectable at practical sample
sizes (a faithfulness device, not an afterthought).

The cross-validation battery asserts one direction only: graphically
separated pairs must test independent (up to the documented error budget).
The converse is reported but never asserted, because coefficient
cancellation can make a d-connected pair numerically independent.

Selection nodes are handled by covariate adjustment: their columns join the
conditioning set of every test, mirroring how the graph side folds them into
the effective conditioning set.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Mapping, Sequence

import numpy as np
import pandas as pd

from .engine import conditioning_for, d_separated_fast
from .errors import InsufficientSamples, SingularCovariance
from .graph import Dag

DEFAULT_COEFF_RANGE = (0.5, 1.5)


@dataclass(frozen=True)
class LinearSem:
    dag: Dag
    coefficients: Mapping[tuple[str, str], float]
    noise_std: Mapping[str, float]
    seed: int


def sem_generate(dag: Dag, seed: int,
                 coeff_range: tuple[float, float] = DEFAULT_COEFF_RANGE) -> LinearSem:
    """Draw edge coefficients uniformly from ±[lo, hi]; deterministic in seed.

    The coefficient stream is keyed on (seed, 0) and the data stream on
    (seed, 1), so the same seed always yields the same model *and* the same
    samples without the two draws interfering.
    """
    lo, hi = coeff_range
    rng = np.random.default_rng([seed, 0])
    coefficients = {}
    for edge in sorted(dag.edges):
        magnitude = rng.uniform(lo, hi)
        sign = 1.0 if rng.uniform() < 0.5 else -1.0
        coefficients[edge] = sign * magnitude
    noise = {name: 1.0 for name in dag.node_names}
    return LinearSem(dag=dag, coefficients=coefficients, noise_std=noise, seed=seed)


def sem_sample(sem: LinearSem, n: int) -> pd.DataFrame:
    """n iid rows, one column per node, generated parents-first."""
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = np.random.default_rng([sem.seed, 1])
    columns: dict[str, np.ndarray] = {}
    for node in sem.dag.topological_order():
        value = rng.standard_normal(n) * sem.noise_std[node]
        for parent in sorted(sem.dag.parents(node)):
            value = value + sem.coefficients[(parent, node)] * columns[parent]
        columns[node] = value
    return pd.DataFrame({name: columns[name] for name in sem.dag.node_names})


def write_csv(data: pd.DataFrame, path_or_buf) -> None:
    """Plain CSV: header of column names, LF line endings, '.' decimals."""
    data.to_csv(path_or_buf, index=False, lineterminator="\n")


@dataclass(frozen=True)
class CiTestResult:
    pair: tuple[str, str]
    given: tuple[str, ...]
    statistic: float  # partial correlation
    n: int
    p_value: float
    reject_independence: bool


def _residualize(target: np.ndarray, covariates: np.ndarray) -> np.ndarray:
    coefs, *_ = np.linalg.lstsq(covariates, target, rcond=None)
    return target - covariates @ coefs


def ci_test(data: pd.DataFrame, x: str, y: str, given: Iterable[str] = (),
            alpha: float = 0.01) -> CiTestResult:
    """Fisher-z test of partial correlation between two columns.

    The partial correlation comes from regression residuals; the z-transform
    uses n − |given| − 3 effective observations. Perfectly correlated
    residuals report statistic ±1 with p = 0 rather than erroring.
    """
    given = tuple(sorted(given))
    n = len(data)
    if n <= len(given) + 3:
        raise InsufficientSamples(
            f"need more than |given| + 3 = {len(given) + 3} rows, got {n}")
    xv = data[x].to_numpy(dtype=float)
    yv = data[y].to_numpy(dtype=float)
    covariates = np.column_stack(
        [np.ones(n)] + [data[g].to_numpy(dtype=float) for g in given])
    rx = _residualize(xv, covariates)
    ry = _residualize(yv, covariates)
    sx = float(np.sqrt(rx @ rx))
    sy = float(np.sqrt(ry @ ry))
    # A column that the covariates reproduce exactly leaves only float fuzz
    # behind; judge "zero" relative to the column's own scale.
    tiny_x = 1e-8 * max(1.0, float(np.sqrt(xv @ xv)))
    tiny_y = 1e-8 * max(1.0, float(np.sqrt(yv @ yv)))
    if sx <= tiny_x or sy <= tiny_y:
        raise SingularCovariance(
            f"residual variance is zero for {x if sx <= tiny_x else y}")
    r = float((rx @ ry) / (sx * sy))
    if not math.isfinite(r):
        raise SingularCovariance(f"partial correlation of {x}, {y} is not finite")
    r = max(-1.0, min(1.0, r))
    dof = n - len(given) - 3
    if abs(r) >= 1.0:
        statistic, p_value = math.copysign(1.0, r), 0.0
    else:
        z = math.atanh(r) * math.sqrt(dof)
        p_value = math.erfc(abs(z) / math.sqrt(2.0))
        statistic = r
    return CiTestResult(pair=(x, y), given=given, statistic=statistic, n=n,
                        p_value=p_value, reject_independence=p_value < alpha)


@dataclass(frozen=True)
class BatteryEntry:
    a: str
    b: str
    given: tuple[str, ...]       # explicit conditioning requested
    effective: tuple[str, ...]   # what the data-side test actually adjusts for
    separated: bool
    seed: int
    statistic: float
    p_value: float
    violation: bool              # separated claim rejected at the Bonferroni level


@dataclass(frozen=True)
class CrossValidationReport:
    n: int
    alpha: float
    seeds: tuple[int, ...]
    separated_statements: int
    bonferroni_alpha: float
    entries: tuple[BatteryEntry, ...]
    violations: tuple[BatteryEntry, ...]
    caveat: str
    elapsed_seconds: float


_CAVEAT = ("one-sided check: separation must test independent, but "
           "d-connection does not guarantee detectable dependence "
           "(coefficients may cancel), so connected pairs are reported, "
           "never asserted")


def _battery(dag: Dag, max_given: int = 2):
    measurable = [v for v in dag.node_names if not dag.attrs(v).latent]
    for i, a in enumerate(measurable):
        for b in measurable[i + 1:]:
            others = [v for v in measurable if v not in (a, b)]
            for size in range(min(max_given, len(others)) + 1):
                for combo in combinations(others, size):
                    yield a, b, combo


def cross_validate(dag: Dag, seeds: Sequence[int], n: int,
                   alpha: float = 0.01) -> CrossValidationReport:
    """Check every graphical separation statement against sampled data.

    For each measurable pair and conditioning set of size ≤ 2, if the graph
    says separated, the Fisher-z test on each seed's sample must not reject
    at the Bonferroni-adjusted level. The report lists every test; the
    ``violations`` tuple is what callers assert empty.
    """
    started = time.monotonic()
    statements = [(a, b, g, d_separated_fast(dag, a, b, g))
                  for a, b, g in _battery(dag)]
    separated_total = sum(1 for *_, sep in statements if sep) * len(seeds)
    bonferroni = alpha / max(separated_total, 1)

    entries: list[BatteryEntry] = []
    for seed in seeds:
        data = sem_sample(sem_generate(dag, seed), n)
        for a, b, g, sep in statements:
            effective = tuple(sorted(conditioning_for(dag, a, b, g).effective))
            result = ci_test(data, a, b, effective, alpha)
            entries.append(BatteryEntry(
                a=a, b=b, given=g, effective=effective, separated=sep,
                seed=seed, statistic=result.statistic, p_value=result.p_value,
                violation=sep and result.p_value < bonferroni))
    violations = tuple(e for e in entries if e.violation)
    return CrossValidationReport(
        n=n, alpha=alpha, seeds=tuple(seeds),
        separated_statements=separated_total, bonferroni_alpha=bonferroni,
        entries=tuple(entries), violations=violations, caveat=_CAVEAT,
        elapsed_seconds=time.monotonic() - started)
