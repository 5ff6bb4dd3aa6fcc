from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from degps.analyzer import (NotRegularError, candidate_points, classify, contragredient_triple, corank2_partners,
                            is_regular, maximal_partners, rc_corank2, rc_partner_search, regular_reducibility,
                            regular_reducibility_values, singular_values, torsion_orders)
from degps.exponent import Triple, parse_rational
from degps.rootdata import build_root_datum
from degps.weyl import weyl_table


def T(i, s, m=1):
    return Triple(i, parse_rational(s), m)


def test_torsion_orders(e6):
    assert [torsion_orders(e6, i) for i in e6.nodes] == [(1,), (1, 2), (1, 2), (1, 2, 3), (1, 2), (1,)]


def test_p1_columns(e6):
    from degps.catalog import scan_columns

    assert [s for s in scan_columns(e6, 1, (1,)) if s <= 0] == [Fraction(k) for k in range(-6, 1)]
    assert Fraction(-6) not in singular_values(e6, 1)


def test_a1_scan():
    a1 = build_root_datum("A1")
    table = weyl_table(a1)
    pts = sorted(set(singular_values(a1, 1)) | set(regular_reducibility_values(a1, 1, 1)))
    reducible = [s for s in pts if classify(a1, Triple(1, s), table).verdict == "reducible"]
    assert reducible == [-1, 1]
    assert classify(a1, Triple(1, 0), table).verdict == "irreducible"


def test_regular_reducibility_needs_regular(e6, e6_table):
    with pytest.raises(NotRegularError):
        regular_reducibility(e6, T(1, "-3"), e6_table)


def test_regular_examples(e6, e6_table):
    red, beta = regular_reducibility(e6, T(1, "-6"), e6_table)
    assert red and beta is not None
    rec = classify(e6, T(1, "1/3"), e6_table)
    assert rec.regular and rec.verdict == "irreducible"


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([1, 2, 3, 4]), st.integers(-16, 16), st.sampled_from([1, 2, 3]))
def test_regular_verdicts_invariant_under_contragredient(i, twice_s, m):
    e6 = build_root_datum("E6")
    table = weyl_table(e6)
    t = Triple(i, Fraction(twice_s, 2), m)
    if not is_regular(e6, t, table):
        return
    dual = contragredient_triple(e6, t)
    assert is_regular(e6, dual, table)
    assert regular_reducibility(e6, t, table)[0] == regular_reducibility(e6, dual, table)[0]


@pytest.mark.parametrize("t,partner", [
    (T(1, "-3"), "[6,-3,1]"),
    (T(2, "-7/2"), "[1,-3,1]"),
    (T(3, "-5/2"), "[6,-1,1]"),
])
def test_maximal_partner_examples(e6, e6_table, t, partner):
    assert str(rc_partner_search(e6, t, e6_table)) == partner


def test_every_quoted_maximal_partner(e6, e6_table, golden):
    for row in golden:
        if row.partner.startswith("["):
            if row.partner.startswith("[["):
                continue
            got = rc_partner_search(e6, Triple(row.i, row.s, row.m), e6_table)
            assert str(got) == row.partner, row


@pytest.mark.parametrize("t,quoted", [
    (T(2, "-1/2"), "[[1,2],[0,-1],[0,0]]"),
    (T(4, "-1/2"), "[[3,6],[1/2,-3/2],[0,0]]"),
    (T(4, "-1/2", 2), "[[1,5],[1/2,1/2],[1,1]]"),
])
def test_quoted_corank2_partners_certify(e6, e6_table, t, quoted):
    assert rc_partner_search(e6, t, e6_table) is None
    assert quoted in [str(p) for p in corank2_partners(e6, t, e6_table)]
    assert str(rc_corank2(e6, t, e6_table, prefer=quoted)) == quoted


def test_partner_shares_antidominant_exponent(e6, e6_table):
    from degps.weyl import same_orbit
    from degps.exponent import initial_exponent

    for t in [T(1, "-3"), T(4, "-1", 2), T(3, "-3/2")]:
        for p in maximal_partners(e6, t, e6_table):
            assert same_orbit(e6_table, p.exponent, initial_exponent(e6, t))


def test_positive_s_via_contragredient(e6, e6_table):
    rec = classify(e6, T(1, "3"), e6_table)
    assert rec.verdict == "reducible"
    assert rec.methods[0].startswith("contragredient [6,-3,1]")
    assert rec.socle.kind == "unique_sub_positive_s"


def test_curated_point(e6, e6_table):
    rec = classify(e6, T(4, "-1/2", 3), e6_table)
    assert rec.verdict == "reducible"
    assert rec.socle.length_bound == 3
    assert any("R-group of order 3" in ln for ln in rec.certificate_lines)


def test_classification_is_deterministic(e6, e6_table):
    a = classify(e6, T(3, "-3/2"), e6_table).to_dict()
    b = classify(e6, T(3, "-3/2"), e6_table).to_dict()
    assert a == b


def test_candidate_points_are_not_regular(e6, e6_table):
    for s, m in candidate_points(e6, 2, e6_table):
        assert not is_regular(e6, Triple(2, s, m), e6_table)
