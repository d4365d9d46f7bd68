"""Exact discrete probability oracle.

Joint distributions over finitely many atoms with ``fractions.Fraction``
probabilities, so conditional covariances and correlations are exact
rationals — test expectations, not tolerances. The built-in two-coin
experiment (two fair coins, their sum, and an indicator of double heads) is
the canonical fixture for collider conditioning: restricting attention to a
function of both coins makes the independent coins anticorrelated.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt, sqrt
from typing import Callable, Mapping

import numpy as np
import pandas as pd

from .errors import DegenerateVariance, ZeroProbabilityEvent

Assignment = Mapping[str, int]
Event = Callable[[Assignment], bool]


@dataclass(frozen=True)
class JointTable:
    """A finite joint distribution with exact rational probabilities."""

    variables: tuple[str, ...]
    atoms: tuple[tuple[int, ...], ...]
    probabilities: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.atoms) != len(self.probabilities):
            raise ValueError("one probability per atom required")
        if any(p < 0 for p in self.probabilities):
            raise ValueError("probabilities must be non-negative")
        if sum(self.probabilities, Fraction(0)) != 1:
            raise ValueError("probabilities must sum to exactly 1")
        if any(len(a) != len(self.variables) for a in self.atoms):
            raise ValueError("each atom must assign every variable")

    def assignments(self):
        for atom, p in zip(self.atoms, self.probabilities):
            yield dict(zip(self.variables, atom)), p

    def probability(self, event: Event | None = None) -> Fraction:
        total = Fraction(0)
        for a, p in self.assignments():
            if event is None or event(a):
                total += p
        return total

    def expectation(self, expr: Callable[[Assignment], int],
                    event: Event | None = None) -> Fraction:
        mass = self.probability(event)
        if mass == 0:
            raise ZeroProbabilityEvent("conditioning event has probability 0")
        total = Fraction(0)
        for a, p in self.assignments():
            if event is None or event(a):
                total += Fraction(expr(a)) * p
        return total / mass

    def support(self, variable: str) -> tuple[int, ...]:
        i = self.variables.index(variable)
        return tuple(sorted({atom[i] for atom in self.atoms}))

    def sample(self, n: int, seed: int) -> pd.DataFrame:
        """Draw n iid rows from the joint (float-weighted; sampling only)."""
        rng = np.random.default_rng(seed)
        weights = np.asarray([float(p) for p in self.probabilities])
        idx = rng.choice(len(self.atoms), size=n, p=weights)
        data = np.asarray(self.atoms)[idx]
        return pd.DataFrame(data, columns=list(self.variables))


def coin_experiment() -> JointTable:
    """Two independent fair coins C1, C2; H = C1 + C2; Z = 1 iff both heads."""
    atoms = []
    for c1 in (0, 1):
        for c2 in (0, 1):
            h = c1 + c2
            z = 1 if h == 2 else 0
            atoms.append((c1, c2, h, z))
    quarter = Fraction(1, 4)
    return JointTable(variables=("C1", "C2", "H", "Z"),
                      atoms=tuple(atoms),
                      probabilities=(quarter,) * 4)


def _rational_sqrt(value: Fraction) -> Fraction | None:
    """Exact square root when one exists, else None."""
    if value < 0:
        raise ValueError("square root of a negative rational")
    num, den = value.numerator, value.denominator
    rn, rd = isqrt(num), isqrt(den)
    if rn * rn == num and rd * rd == den:
        return Fraction(rn, rd)
    return None


@dataclass(frozen=True)
class Association:
    """Conditional first and second moments of a variable pair.

    ``covariance`` is always an exact rational. ``correlation`` stays exact
    whenever the variance product has a rational square root (every built-in
    fixture does) and falls back to a float otherwise; it raises
    :class:`DegenerateVariance` when either conditional variance is zero.
    """

    x: str
    y: str
    mean_x: Fraction
    mean_y: Fraction
    variance_x: Fraction
    variance_y: Fraction
    covariance: Fraction

    @property
    def correlation(self) -> Fraction | float:
        if self.variance_x == 0 or self.variance_y == 0:
            raise DegenerateVariance(
                f"correlation undefined: zero conditional variance for "
                f"{self.x if self.variance_x == 0 else self.y}")
        product = self.variance_x * self.variance_y
        root = _rational_sqrt(product)
        if root is not None:
            return self.covariance / root
        return float(self.covariance) / sqrt(float(product))


def conditional_association(table: JointTable, x: str, y: str,
                            event: Event | None = None) -> Association:
    """Exact covariance (and correlation on demand) of x and y given an event.

    Raises :class:`ZeroProbabilityEvent` when the event has no mass.
    """
    if x not in table.variables or y not in table.variables:
        raise ValueError(f"unknown variable among {x!r}, {y!r}")
    mean_x = table.expectation(lambda a: a[x], event)
    mean_y = table.expectation(lambda a: a[y], event)
    e_xx = table.expectation(lambda a: a[x] * a[x], event)
    e_yy = table.expectation(lambda a: a[y] * a[y], event)
    e_xy = table.expectation(lambda a: a[x] * a[y], event)
    return Association(x=x, y=y, mean_x=mean_x, mean_y=mean_y,
                       variance_x=e_xx - mean_x * mean_x,
                       variance_y=e_yy - mean_y * mean_y,
                       covariance=e_xy - mean_x * mean_y)
