from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from degps.rootdata import (NotFiniteTypeError, NotSimplyLacedError, RootDatumError, build_root_datum,
                            diagram_automorphism, pairing, read_cartan_file, rho_levi, weyl_order_of_type,
                            weyl_subgroup_order)

E6_ROOTS = 36


def test_e6_positive_roots(e6):
    assert len(e6.positive_roots) == E6_ROOTS
    assert max(sum(b) for b in e6.positive_roots) == 11
    assert (1, 2, 2, 3, 2, 1) in e6.positive_roots


def test_bourbaki_labels(e6):
    assert e6.adjacency[4] == {2, 3, 5}
    assert e6.adjacency[2] == {4}
    assert e6.adjacency[1] == {3}


@pytest.mark.parametrize("label,count", [("A1", 1), ("A2", 3), ("A3", 6), ("D4", 12), ("D5", 20), ("E6", 36)])
def test_root_counts(label, count):
    assert len(build_root_datum(label).positive_roots) == count


def test_non_simply_laced_rejected():
    with pytest.raises(NotSimplyLacedError):
        build_root_datum([[2, -2], [-1, 2]])


def test_affine_rejected():
    with pytest.raises(NotFiniteTypeError):
        build_root_datum([[2, -1, -1], [-1, 2, -1], [-1, -1, 2]])


def test_cartan_file(tmp_path):
    p = tmp_path / "a2.txt"
    p.write_text("2\n2 -1\n-1 2\n")
    assert build_root_datum(read_cartan_file(p)).type_label == "A2"
    p.write_text("3\n2 -1\n")
    with pytest.raises(RootDatumError):
        read_cartan_file(p)


def test_opposition_involution(e6):
    assert diagram_automorphism(e6) == {1: 6, 2: 2, 3: 5, 4: 4, 5: 3, 6: 1}


def test_levi_orders(e6):
    assert [weyl_subgroup_order(e6, [j for j in e6.nodes if j != i]) for i in e6.nodes] == \
        [1920, 720, 240, 72, 240, 1920]
    assert weyl_order_of_type("E6") == 51840


def test_rho_levi_full_group_is_rho(e6):
    assert rho_levi(e6, e6.nodes) == tuple(Fraction(1) for _ in e6.nodes)


small = st.fractions(min_value=-5, max_value=5, max_denominator=6)
weights = st.lists(small, min_size=6, max_size=6)


@settings(max_examples=60, deadline=None)
@given(weights, weights, small, st.integers(0, E6_ROOTS - 1))
def test_pairing_is_linear(a, b, c, k):
    e6 = build_root_datum("E6")
    beta = e6.positive_roots[k]
    combo = [x + c * y for x, y in zip(a, b)]
    assert pairing(e6, combo, beta) == pairing(e6, a, beta) + c * pairing(e6, b, beta)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, E6_ROOTS - 1))
def test_root_weight_pairs_to_two(k):
    e6 = build_root_datum("E6")
    beta = e6.positive_roots[k]
    as_weight = e6.cartan @ np.array(beta)
    assert pairing(e6, as_weight, beta) == 2
