from fractions import Fraction
from itertools import chain, combinations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from degps.exponent import Exponent
from degps.rootdata import build_root_datum, weyl_order_of_type
from degps.weyl import (WeylElement, act_many, apply, enumerate_weyl, minimal_coset_indices, orbit_count,
                        reflection_matrix, same_orbit, stabilizer, to_antidominant, weyl_table)


def subsets(nodes):
    return chain.from_iterable(combinations(nodes, r) for r in range(len(nodes) + 1))


def shortest_in_double_coset(table, theta_l, theta_m):
    """Indices that are the unique shortest element of W_L w W_M, by closing each double coset."""
    d = table.datum
    left = [reflection_matrix(d, j) for j in theta_l]
    right = [reflection_matrix(d, j) for j in theta_m]
    seen = np.full(len(table), -1)
    best = []
    for start in range(len(table)):
        if seen[start] >= 0:
            continue
        seen[start] = start
        members, frontier = [start], [start]
        while frontier:
            nxt = []
            for k in frontier:
                g = table.mats[k]
                for h in [s @ g for s in left] + [g @ s for s in right]:
                    p = table.index_of_matrix(h)
                    if seen[p] < 0:
                        seen[p] = start
                        members.append(p)
                        nxt.append(p)
            frontier = nxt
        lens = table.lengths[members]
        shortest = [members[i] for i in np.nonzero(lens == lens.min())[0]]
        assert len(shortest) == 1
        best.append(shortest[0])
    return sorted(best)


@pytest.mark.parametrize("label", ["A3", "D4"])
def test_coset_filter_matches_brute_force(label):
    d = build_root_datum(label)
    table = enumerate_weyl(d, cache=False)
    for theta_l in subsets(d.nodes):
        for theta_m in subsets(d.nodes):
            got = minimal_coset_indices(table, theta_l, theta_m).tolist()
            assert got == shortest_in_double_coset(table, theta_l, theta_m), (theta_l, theta_m)


@pytest.mark.parametrize("label", ["A1", "A2", "A3", "D4", "D5", "E6"])
def test_group_order(label):
    assert len(weyl_table(build_root_datum(label))) == weyl_order_of_type(label)


def test_length_equals_inversions_d5():
    table = weyl_table(build_root_datum("D5"))
    for k in range(0, len(table), 7):
        assert table.inversion_count(k) == len(table.words[k])


def test_length_equals_inversions_e6_sample(e6_table):
    rng = np.random.default_rng(3)
    for k in rng.integers(0, len(e6_table), 300):
        assert e6_table.inversion_count(int(k)) == len(e6_table.words[int(k)])
    assert e6_table.lengths.max() == 36


def test_reduced_words_are_consistent(e6, e6_table):
    for k in range(0, len(e6_table), 997):
        assert np.array_equal(WeylElement.from_word(e6, e6_table.words[k]).matrix, e6_table.mats[k])


def test_cache_roundtrip_and_corruption(tmp_path):
    d = build_root_datum("D4")
    fresh = enumerate_weyl(d, cache=tmp_path)
    files = list(tmp_path.glob("*.npz"))
    assert len(files) == 1
    again = enumerate_weyl(d, cache=tmp_path)
    assert again.words == fresh.words
    files[0].write_bytes(b"garbage")
    recovered = enumerate_weyl(d, cache=tmp_path)
    assert recovered.words == fresh.words


def test_cache_env(tmp_path, monkeypatch):
    from degps.weyl import CACHE_ENV, cache_dir

    monkeypatch.setenv(CACHE_ENV, str(tmp_path))
    assert cache_dir() == tmp_path


half_integers = st.integers(-6, 6).map(lambda n: Fraction(n, 2))


@st.composite
def e6_exponents(draw):
    m = draw(st.sampled_from([1, 2, 3]))
    real = draw(st.lists(half_integers, min_size=6, max_size=6))
    tors = draw(st.lists(st.integers(0, m - 1), min_size=6, max_size=6))
    return Exponent.of(real, tors, m)


@settings(max_examples=100, deadline=None)
@given(e6_exponents())
def test_orbit_stabilizer(lam):
    table = weyl_table(build_root_datum("E6"))
    stab = stabilizer(table.datum, lam, table, with_generators=False).order
    assert orbit_count(table, lam) * stab == len(table)


@settings(max_examples=40, deadline=None)
@given(e6_exponents(), st.integers(0, 51839))
def test_antidominant_is_orbit_invariant(lam, k):
    table = weyl_table(build_root_datum("E6"))
    mu = apply(table.datum, table.element(k), lam)
    assert same_orbit(table, lam, mu)
    w, lad = to_antidominant(table.datum, lam)
    assert all(x <= 0 for x in lad.real)
    assert apply(table.datum, w, lam) == lad


def test_stabilizer_generators(e6, e6_table):
    lam = Exponent.of([0, 0, 0, -1, 0, 0], [1, 1, 1, 1, 1, 1], 3)
    info = stabilizer(e6, lam, e6_table)
    assert info.order == 3
    for g in info.generators:
        assert apply(e6, g, lam) == lam


def test_act_many_matches_apply(e6, e6_table):
    lam = Exponent.of([Fraction(1, 2), -1, 0, 2, -1, 1], [0, 1, 0, 1, 0, 0], 2)
    idx = np.arange(0, len(e6_table), 1234)
    assert act_many(e6_table, idx, lam) == [apply(e6, e6_table.element(int(k)), lam) for k in idx]
