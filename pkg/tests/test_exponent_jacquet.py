from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from degps.exponent import (Exponent, Triple, dual_leading_exponent, format_rational, full_pairing,
                            initial_exponent, parse_exponent, parse_rational, rho_shift)
from degps.jacquet import (InvalidInitialExponentError, antidominant_multiplicity_check, jacquet_of_triple,
                           jacquet_to_torus, maximal_theta)
from degps.rootdata import build_root_datum
from degps.weyl import apply, stabilizer, to_antidominant, weyl_table


def test_rho_shifts(e6):
    assert [rho_shift(e6, i) for i in e6.nodes] == [5, Fraction(9, 2), Fraction(7, 2), Fraction(5, 2),
                                                   Fraction(7, 2), 5]


def test_initial_exponent_example(e6):
    lam = initial_exponent(e6, Triple(3, Fraction(-1, 2)))
    assert lam.real == (-1, -1, 3, -1, -1, -1)


@pytest.mark.parametrize("text", ["0", "-7/2", "5", "1/3"])
def test_rational_roundtrip(text):
    assert format_rational(parse_rational(text)) == text


def test_exponent_text_roundtrip():
    lam = Exponent.of([0, 0, 0, -1, 0, 0], [1, 1, 1, 1, 1, 1], 3)
    assert str(lam) == "(0,0,0,-1,0,0; 1,1,1,1,1,1 mod 3)"
    assert parse_exponent(str(lam)) == lam


def _inverse_on_root(datum, mat, beta):
    """Simple-root coordinates of w^{-1} beta."""
    inv = np.round(np.linalg.inv(mat)).astype(np.int64)
    weight = inv @ (datum.cartan @ np.array(beta))
    coords = np.array(datum.cartan_inverse, dtype=object).dot(weight.astype(object))
    assert all(Fraction(c).denominator == 1 for c in coords)
    return tuple(int(c) for c in coords)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(-4, 4), min_size=6, max_size=6), st.lists(st.integers(0, 2), min_size=6, max_size=6),
       st.integers(0, 51839), st.integers(0, 35))
def test_full_pairing_commutes_with_weyl_action(real, tors, k, r):
    e6 = build_root_datum("E6")
    table = weyl_table(e6)
    lam = Exponent.of([Fraction(x, 2) for x in real], tors, 3)
    beta = e6.positive_roots[r]
    w = table.element(k)
    moved = full_pairing(e6, apply(e6, w, lam), beta)
    back = _inverse_on_root(e6, w.matrix, beta)
    sign = 1 if any(c > 0 for c in back) else -1
    base = full_pairing(e6, lam, tuple(sign * c for c in back))
    assert (moved.real, moved.torsion) == (sign * base.real, (sign * base.torsion) % 3)


@pytest.mark.parametrize("i,size", [(1, 27), (2, 72), (3, 216), (4, 720), (5, 216), (6, 27)])
def test_jacquet_sizes(e6, e6_table, i, size):
    assert jacquet_of_triple(e6, Triple(i, Fraction(-1, 2)), e6_table).size == size


def test_invalid_initial_exponent(e6, e6_table):
    with pytest.raises(InvalidInitialExponentError):
        jacquet_to_torus(e6, maximal_theta(e6, 1), Exponent.of([0] * 6), e6_table)


@pytest.mark.parametrize("t,mult", [(Triple(1, -2), 4), (Triple(4, Fraction(-1, 2), 3), 3)])
def test_antidominant_multiplicity_anchors(e6, e6_table, t, mult):
    ms = jacquet_of_triple(e6, t, e6_table)
    _, lad = to_antidominant(e6, initial_exponent(e6, t))
    assert ms.mult(lad) == mult == stabilizer(e6, lad, e6_table, with_generators=False).order


@pytest.mark.parametrize("i", [1, 2, 3, 4])
@pytest.mark.parametrize("s", [Fraction(-1, 2), Fraction(-1), Fraction(-3, 2), Fraction(-2), Fraction(-3)])
def test_antidominant_lemma_holds(e6, e6_table, i, s):
    ok, found = antidominant_multiplicity_check(e6, maximal_theta(e6, i), initial_exponent(e6, Triple(i, s)),
                                                e6_table)
    assert ok, found


def test_dual_leading_exponent_in_orbit(e6, e6_table):
    t = Triple(3, Fraction(-1, 2))
    lam1 = dual_leading_exponent(e6, t, e6_table)
    assert lam1.real[4] == Fraction(1, 2) + Fraction(7, 2)
    assert jacquet_of_triple(e6, t, e6_table).mult(lam1) >= 1
