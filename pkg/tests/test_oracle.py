"""Tests for the closed-form cyclotomic reference."""

from __future__ import annotations

from fractions import Fraction

import pytest

from orbidisk.oracle import (
    Cyclotomic6,
    CycloSeries,
    NonRationalCoefficientError,
    elementary_symmetric,
    kappa,
    oracle_generating_functions,
    oracle_table,
    zeta_power,
)


def test_cyclotomic_ring_laws():
    z = zeta_power(1)
    assert z * z == Cyclotomic6.of(-1, 1)  # zeta^2 = zeta - 1
    assert zeta_power(3) == Cyclotomic6.of(-1)
    assert zeta_power(6) == Cyclotomic6.of(1)
    a = Cyclotomic6.of(Fraction(1, 2), Fraction(-2, 3))
    b = Cyclotomic6.of(3, Fraction(1, 5))
    assert a * b == b * a
    assert (a + b) * a == a * a + b * a


def test_kappa_values_at_zero():
    assert kappa(0, 3).coefficient(0, 0) == zeta_power(1)
    assert kappa(1, 3).coefficient(0, 0) == Cyclotomic6.of(-1)
    assert kappa(2, 3).coefficient(0, 0) == zeta_power(5)
    # first order in the first deformation direction
    assert kappa(0, 3).coefficient(1, 0) == zeta_power(2) * Fraction(1, 3)
    with pytest.raises(ValueError):
        kappa(3, 2)


def test_elementary_symmetric_constants():
    s1, s2, s3 = elementary_symmetric(6)
    assert s1.coefficient(0, 0).is_zero()
    assert s2.coefficient(0, 0).is_zero()
    assert s3.coefficient(0, 0) == Cyclotomic6.of(-1)
    # the product of the deformed roots stays exactly -1
    for key, v in s3.terms.items():
        if key != (0, 0):
            assert v.is_zero()


def test_generating_functions_rational():
    g112, g122 = oracle_generating_functions(9)
    assert all(isinstance(v, Fraction) for v in g112.values())
    assert g112[(1, 0)] == 1
    assert g112[(0, 2)] == Fraction(1, 6)
    assert (0, 0) not in g112
    # the two sectors are exchanged by transposition
    for (a, b), v in g112.items():
        assert g122.get((b, a), Fraction(0)) == v


def test_rationality_guard_trips_on_bad_series():
    # a series with a surviving zeta part must raise
    s = CycloSeries(2, {(1, 0): Cyclotomic6.of(0, 1)})
    with pytest.raises(NonRationalCoefficientError):
        s.terms[(1, 0)].rational()


def test_oracle_table_paper_values():
    table = oracle_table(6, 6)
    assert table[(4, 0)] == Fraction(1, 648)
    assert table[(6, 5)] == Fraction(-1, 5101833600)
    assert table[(5, 6)] == 0
    assert table[(3, 5)] == Fraction(-1, 1574640)
    assert table[(0, 2)] == Fraction(1, 6)
    assert table[(2, 1)] == Fraction(-1, 18)
    assert table[(6, 2)] == Fraction(1, 3149280)
    assert table[(1, 0)] == 1 and table[(0, 0)] == 0


def test_oracle_matches_pipeline(quotient_plane_tables):
    _, g112, g122 = quotient_plane_tables
    o112, o122 = oracle_generating_functions(8)
    pipe112 = {
        tuple(int(x) for x in e): c for e, c in g112.series.terms() if sum(e) <= 8
    }
    pipe122 = {
        tuple(int(x) for x in e): c for e, c in g122.series.terms() if sum(e) <= 8
    }
    assert pipe112 == {k: v for k, v in o112.items() if sum(k) <= 8 and v}
    assert pipe122 == {k: v for k, v in o122.items() if sum(k) <= 8 and v}
