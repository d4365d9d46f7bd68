"""Exact finite joint distributions and the two-coin bench.

The expected moments are derived *inside this file* by brute-force summation
over a hand-written copy of the probability table, so the production code is
checked against arithmetic it never touches.
"""
import math
from fractions import Fraction

import numpy as np
import pytest

from dsepkit.oracle import (
    Association,
    DegenerateVariance,
    JointTable,
    ZeroProbabilityEvent,
    coin_experiment,
    conditional_association,
)

# Two fair coins; H counts heads; Z indicates both heads.  Written out
# longhand on purpose — this table is the ground truth the module must match.
HAND_TABLE = [
    # (C1, C2, H, Z): probability
    ((0, 0, 0, 0), Fraction(1, 4)),
    ((0, 1, 1, 0), Fraction(1, 4)),
    ((1, 0, 1, 0), Fraction(1, 4)),
    ((1, 1, 2, 1), Fraction(1, 4)),
]
VARS = ("C1", "C2", "H", "Z")


def hand_moments(x, y, event=None):
    """Conditional mean/variance/covariance summed straight off HAND_TABLE."""
    ix, iy = VARS.index(x), VARS.index(y)
    rows = [(a, p) for a, p in HAND_TABLE
            if not event or all(a[VARS.index(k)] == v for k, v in event.items())]
    total = sum(p for _, p in rows)
    assert total > 0
    ex = sum(p * a[ix] for a, p in rows) / total
    ey = sum(p * a[iy] for a, p in rows) / total
    exx = sum(p * a[ix] ** 2 for a, p in rows) / total
    eyy = sum(p * a[iy] ** 2 for a, p in rows) / total
    exy = sum(p * a[ix] * a[iy] for a, p in rows) / total
    return ex, ey, exx - ex * ex, eyy - ey * ey, exy - ex * ey


class TestHandDerivation:
    """Pin the bench's three headline numbers by independent arithmetic."""

    def test_marginal_covariance_is_zero(self):
        *_, cov = hand_moments("C1", "C2")
        assert cov == 0

    def test_conditioning_on_the_sum_makes_coins_opposite(self):
        ex, ey, vx, vy, cov = hand_moments("C1", "C2", {"H": 1})
        assert cov == Fraction(-1, 4)
        assert vx == vy == Fraction(1, 4)
        assert cov / Fraction(1, 4) == -1  # correlation, exactly

    def test_conditioning_on_the_indicator_induces_bias(self):
        *_, cov = hand_moments("C1", "C2", {"Z": 0})
        assert cov == Fraction(-1, 9)


class TestCoinExperiment:
    def test_table_matches_hand_copy(self):
        table = coin_experiment()
        assert table.variables == VARS
        got = sorted(zip(table.atoms, table.probabilities))
        assert got == sorted(HAND_TABLE)

    def test_structural_identities(self):
        table = coin_experiment()
        for (c1, c2, h, z), _ in zip(table.atoms, table.probabilities):
            assert h == c1 + c2
            assert z == int(c1 == 1 and c2 == 1)

    def test_marginals(self):
        table = coin_experiment()
        assert table.probability(lambda a: a["C1"] == 1) == Fraction(1, 2)
        assert table.probability(lambda a: a["H"] == 1) == Fraction(1, 2)
        assert table.probability(lambda a: a["Z"] == 1) == Fraction(1, 4)
        assert table.probability(lambda a: True) == 1

    def test_support(self):
        table = coin_experiment()
        assert table.support("H") == (0, 1, 2)
        assert table.support("Z") == (0, 1)


class TestConditionalAssociation:
    def test_unconditional_matches_hand_arithmetic(self):
        a = conditional_association(coin_experiment(), "C1", "C2")
        ex, ey, vx, vy, cov = hand_moments("C1", "C2")
        assert (a.mean_x, a.mean_y) == (ex, ey)
        assert (a.variance_x, a.variance_y) == (vx, vy)
        assert a.covariance == cov == 0
        assert a.correlation == 0

    def test_given_one_head_exact_minus_one(self):
        a = conditional_association(coin_experiment(), "C1", "C2", lambda a: a["H"] == 1)
        assert a.covariance == Fraction(-1, 4)
        assert a.correlation == Fraction(-1)
        assert isinstance(a.correlation, Fraction)

    def test_given_not_both_heads(self):
        a = conditional_association(coin_experiment(), "C1", "C2", lambda a: a["Z"] == 0)
        assert a.covariance == Fraction(-1, 9)
        assert a.mean_x == a.mean_y == Fraction(1, 3)

    def test_degenerate_slice_raises_on_correlation_only(self):
        a = conditional_association(coin_experiment(), "C1", "C2", lambda a: a["Z"] == 1)
        assert a.variance_x == 0
        assert a.covariance == 0  # moments themselves are still well-defined
        with pytest.raises(DegenerateVariance):
            a.correlation

    def test_impossible_event(self):
        with pytest.raises(ZeroProbabilityEvent):
            conditional_association(coin_experiment(), "C1", "C2", lambda a: a["H"] == 3)

    def test_unknown_variable(self):
        with pytest.raises(ValueError):
            conditional_association(coin_experiment(), "C1", "Nope")

    def test_irrational_correlation_falls_back_to_float(self):
        table = JointTable(
            ("X", "Y"),
            ((0, 0), (1, 1), (2, 1)),
            (Fraction(1, 3), Fraction(1, 3), Fraction(1, 3)),
        )
        r = conditional_association(table, "X", "Y").correlation
        assert isinstance(r, float)
        assert r == pytest.approx(math.sqrt(3) / 2)


class TestTableValidation:
    def test_probabilities_must_sum_to_one(self):
        with pytest.raises(ValueError):
            JointTable(("X",), ((0,), (1,)),
                       (Fraction(1, 2), Fraction(1, 3)))

    def test_probabilities_must_be_non_negative(self):
        with pytest.raises(ValueError):
            JointTable(("X",), ((0,), (1,)),
                       (Fraction(3, 2), Fraction(-1, 2)))

    def test_atom_arity_must_match(self):
        with pytest.raises(ValueError):
            JointTable(("X", "Y"), ((0,),), (Fraction(1),))

    def test_one_probability_per_atom(self):
        with pytest.raises(ValueError):
            JointTable(("X",), ((0,),), (Fraction(1, 2), Fraction(1, 2)))


class TestSampling:
    def test_shape_columns_and_support(self):
        df = coin_experiment().sample(500, seed=3)
        assert df.shape == (500, 4)
        assert tuple(df.columns) == VARS
        atoms = {a for a, _ in HAND_TABLE}
        assert all(tuple(row) in atoms for row in df.itertuples(index=False))

    def test_deterministic_per_seed(self):
        t = coin_experiment()
        assert t.sample(200, seed=9).equals(t.sample(200, seed=9))
        assert not t.sample(200, seed=9).equals(t.sample(200, seed=10))

    def test_sampled_correlation_given_one_head_is_exactly_minus_one(self):
        df = coin_experiment().sample(20000, seed=11)
        sub = df[df["H"] == 1]
        assert len(sub) > 0
        r = np.corrcoef(sub["C1"], sub["C2"])[0, 1]
        assert r == pytest.approx(-1.0, abs=1e-12)

    def test_sampled_covariance_given_no_jackpot_near_exact_value(self):
        df = coin_experiment().sample(100000, seed=12)
        sub = df[df["Z"] == 0]
        cov = np.cov(sub["C1"], sub["C2"], ddof=0)[0, 1]
        assert cov == pytest.approx(float(Fraction(-1, 9)), abs=0.01)

    def test_frequencies_approach_quarter_each(self):
        df = coin_experiment().sample(40000, seed=13)
        counts = df.groupby(list(VARS)).size()
        assert len(counts) == 4
        assert (abs(counts / 40000 - 0.25) < 0.02).all()


class TestExpectation:
    def test_expectation_of_product(self):
        table = coin_experiment()
        e = table.expectation(lambda a: a["C1"] * a["C2"], lambda a: a["H"] == 1)
        assert e == 0

    def test_expectation_unconditional(self):
        table = coin_experiment()
        assert table.expectation(lambda a: a["H"]) == 1

    def test_expectation_zero_probability_event(self):
        with pytest.raises(ZeroProbabilityEvent):
            coin_experiment().expectation(lambda a: a["H"], lambda a: a["Z"] == 2)
