from collections import Counter
from fractions import Fraction

import pytest

from degps import branching
from degps.branching import (RULE_SIZES, SoundnessError, applicable_rules, irreducibility_test, saturate,
                             socle_analysis)
from degps.exponent import Exponent, Triple
from degps.jacquet import jacquet_of_triple
from degps.rootdata import build_root_datum
from degps.weyl import WeylElement, apply, weyl_table


def constituent_by_brute_force(table, a, b, lam):
    """Jacquet module of i_{M_a}(lam) inside the rank-2 Levi on {a, b}: sum over w shortest in w<s_a>."""
    d = table.datum
    sa = WeylElement.from_word(d, (a,))
    out = Counter()
    for k in table.parabolic_indices((a, b)):
        w = table.element(int(k))
        if w.length < table.element(table.index_of(w * sa)).length:
            out[apply(d, w, lam)] += 1
    return out


def a2_triggers(datum):
    for a in datum.nodes:
        for b in sorted(datum.adjacency[a]):
            for sign in (-1, 1):
                for other in (Fraction(-1), Fraction(1, 2), Fraction(0)):
                    real = [other] * datum.rank
                    real[a - 1], real[b - 1] = Fraction(sign), Fraction(0)
                    yield a, b, Exponent.of(real)


@pytest.mark.parametrize("label", ["A2", "A3", "E6"])
def test_a2_rule_matches_brute_force(label):
    d = build_root_datum(label)
    table = weyl_table(d)
    checked = 0
    for a, b, lam in a2_triggers(d):
        rules = [r for r in applicable_rules(d, lam) if r.kind == "A2" and r.nodes == (a, b)]
        assert len(rules) == 1
        assert dict(rules[0].contribution.counts) == constituent_by_brute_force(table, a, b, lam)
        assert rules[0].d == 2
        checked += 1
    assert checked > 0


def test_rule_sizes_and_orbits(e6, e6_table):
    ms = jacquet_of_triple(e6, Triple(4, Fraction(-1, 2)), e6_table)
    seen = set()
    for mu in ms:
        for rule in applicable_rules(e6, mu):
            seen.add(rule.kind)
            if rule.kind != "golden":
                assert rule.contribution.size == RULE_SIZES[rule.kind]
            for nu in rule.contribution:
                assert nu in ms
    assert {"A1", "A2"} <= seen


def test_d4_rule_size(e6):
    lam = Exponent.of([-1, 0, 0, -1, 0, Fraction(-1, 2)])
    d4 = [r for r in applicable_rules(e6, lam) if r.kind == "D4"]
    assert len(d4) == 1 and d4[0].nodes == (4, 2, 3, 5)
    assert d4[0].contribution.size == 22
    assert d4[0].contribution.mult(lam) == d4[0].d >= 1


def test_worked_trace(e6, e6_table):
    res = irreducibility_test(e6, Triple(1, -2), table=e6_table)
    assert res.irreducible and res.fixpoint.total == 27 == res.target
    text = "\n".join(res.trace)
    assert "START (-1,0,-1,-1,0,-1) [bound=4]" in text
    assert "2×(-1,-1,-2,1,-1,-1)" in text
    assert "2×(-3,-1,2,-1,-1,-1)" in text
    for line in res.trace[1:]:
        assert line.startswith("RULE ")


def test_endpoint_test_needed(e6, e6_table):
    res = irreducibility_test(e6, Triple(3, Fraction(-1, 2)), table=e6_table)
    assert res.irreducible
    assert res.method.startswith("endpoint test")
    assert res.fixpoint.total < res.target
    assert any(ln.startswith("ENDPOINT") for ln in res.trace)


def test_bounds_never_exceed_multiplicity(e6, e6_table):
    for t in [Triple(1, -2), Triple(2, Fraction(-1, 2)), Triple(4, Fraction(-1, 2), 3)]:
        ambient = jacquet_of_triple(e6, t, e6_table)
        lad, order = branching.antidominant_start(e6, t, e6_table)
        fp = saturate(e6, ambient, lad, order)
        assert not fp.bounds.clamps
        assert all(v <= ambient.mult(lam) for lam, v in fp.bounds.bounds.items())


def test_inflated_start_is_caught(e6, e6_table, monkeypatch):
    real = branching.antidominant_start

    def inflated(datum, t, table=None):
        lad, order = real(datum, t, table)
        return lad, order + 1

    monkeypatch.setattr(branching, "antidominant_start", inflated)
    with pytest.raises(SoundnessError):
        irreducibility_test(e6, Triple(1, -2), table=e6_table)


def test_r_group_start_bound(e6, e6_table):
    lad, order = branching.antidominant_start(e6, Triple(4, Fraction(-1, 2), 3), e6_table)
    assert lad == Exponent.of([0, 0, 0, -1, 0, 0], [1] * 6, 3)
    assert order == 1


def test_socle_cases(e6, e6_table):
    kind = lambda t: socle_analysis(e6, t, table=e6_table)[0].kind
    assert kind(Triple(1, -3)) == "unique_sub_case_I"
    assert kind(Triple(2, Fraction(-5, 2))) == "unique_sub_case_II"
    summary, lines = socle_analysis(e6, Triple(4, Fraction(-1, 2), 3), table=e6_table)
    assert summary.kind == "curated_case_III" and summary.length_bound == 3
    assert any("<w_3165> of order 3" in ln for ln in lines)
