"""Invariant suites run by ``degps selftest``; each check returns (name, ok, detail)."""
from __future__ import annotations

import time
from collections import Counter
from fractions import Fraction
from typing import Callable

import numpy as np

from .analyzer import classify, regular_reducibility_values, singular_values
from .branching import RULE_SIZES, applicable_rules, _d4_coset_words
from .exponent import Exponent, Triple, initial_exponent
from .jacquet import antidominant_multiplicity_check, maximal_theta
from .rootdata import (NotSimplyLacedError, RootDatum, build_root_datum, weyl_order_of_type,
                       weyl_subgroup_order)
from .weyl import (WeylElement, act_many, apply, enumerate_weyl, minimal_coset_indices, orbit_count, stabilizer,
                   weyl_table)

Check = tuple[str, bool, str]


def check_weyl_orders(datum: RootDatum) -> Check:
    table = weyl_table(datum)
    expected = weyl_order_of_type(datum.type_label)
    parts = [f"|W|={len(table)}"]
    ok = len(table) == expected
    for i in datum.nodes:
        wm = weyl_subgroup_order(datum, maximal_theta(datum, i))
        reps = len(minimal_coset_indices(table, (), maximal_theta(datum, i)))
        ok &= wm * reps == len(table)
        parts.append(f"P{i}:{wm}/{reps}")
    return "weyl orders and coset sizes", ok, " ".join(parts)


def check_cache_independence(datum: RootDatum) -> Check:
    fresh = enumerate_weyl(datum, cache=False)
    cached = weyl_table(datum)
    ok = fresh.words == cached.words and np.array_equal(fresh.mats, cached.mats)
    return "cached and fresh enumerations agree", ok, f"{len(fresh)} elements"


def check_orbit_stabilizer(datum: RootDatum, samples: int = 20, seed: int = 7) -> Check:
    table = weyl_table(datum)
    rng = np.random.default_rng(seed)
    bad = 0
    for _ in range(samples):
        m = int(rng.integers(1, 4))
        lam = Exponent.of([Fraction(int(x), 2) for x in rng.integers(-3, 4, datum.rank)],
                          [int(x) for x in rng.integers(0, m, datum.rank)], m)
        orbit = orbit_count(table, lam)
        bad += orbit * stabilizer(datum, lam, table, with_generators=False).order != len(table)
    return "orbit-stabilizer identity", bad == 0, f"{samples} random exponents, {bad} failures"


def check_antidominant_lemma(datum: RootDatum) -> Check:
    table = weyl_table(datum)
    bad, count = 0, 0
    for i in datum.nodes:
        for s in singular_values(datum, i)[:4]:
            t = Triple(i, s, 1)
            ok, found = antidominant_multiplicity_check(datum, maximal_theta(datum, i), initial_exponent(datum, t), table)
            bad += not ok
            count += 1
    return "anti-dominant multiplicity equals stabilizer order", bad == 0, f"{count} triples"


def check_rule_sizes(datum: RootDatum) -> Check:
    table = weyl_table(datum)
    seen = Counter()
    bad = 0
    for i in datum.nodes:
        lam0 = initial_exponent(datum, Triple(i, singular_values(datum, i)[0], 1))
        for mu in set(act_many(table, minimal_coset_indices(table, (), maximal_theta(datum, i)), lam0)):
            for rule in applicable_rules(datum, mu):
                size = rule.contribution.size
                want = weyl_subgroup_order(datum, rule.nodes) if rule.kind == "golden" else RULE_SIZES[rule.kind]
                bad += size != want or rule.d < 1
                seen[rule.kind] += 1
    detail = ", ".join(f"{k}:{seen[k]}" for k in sorted(seen))
    return "rule contribution sizes", bad == 0, detail


def check_d4_cosets(datum: RootDatum) -> Check:
    for b in datum.nodes:
        nbrs = tuple(sorted(datum.adjacency[b]))
        if len(nbrs) >= 3:
            words = _d4_coset_words(datum, b, nbrs[:3])
            return "D4 coset representatives", len(words) == 24, f"centre {b}: {len(words)} representatives"
    return "D4 coset representatives", True, "no branch node"


def a2_rule_oracle() -> Check:
    """A2 rule contribution vs the constituent i_{M_a}(lam) computed over all six elements."""
    datum = build_root_datum("A2")
    table = weyl_table(datum)
    bad = 0
    cases = 0
    for a, b in ((1, 2), (2, 1)):
        for sign in (-1, 1):
            for tors, m in (((0, 0), 1), ((0, 1), 3)):
                real = [Fraction(0), Fraction(0)]
                real[a - 1] = Fraction(sign)
                lam = Exponent.of(real, tors, m)
                if lam.torsion[a - 1]:
                    continue
                rules = [r for r in applicable_rules(datum, lam) if r.kind == "A2" and r.nodes == (a, b)]
                if not rules:
                    continue
                cases += 1
                sa = WeylElement.from_word(datum, (a,))
                reps = []
                for k in range(len(table)):
                    w = table.element(k)
                    if w.length < table.element(table.index_of(w * sa)).length:
                        reps.append(w)
                oracle = Counter(apply(datum, w, lam) for w in reps)
                bad += len(reps) != 3 or dict(oracle) != dict(rules[0].contribution.counts)
    return "A2 rule equals brute-force constituent", bad == 0 and cases > 0, f"{cases} cases"


def a1_scan() -> Check:
    datum = build_root_datum("A1")
    table = weyl_table(datum)
    pts = sorted(set(singular_values(datum, 1)) | set(regular_reducibility_values(datum, 1, 1)))
    red = [s for s in pts if classify(datum, Triple(1, s, 1), table).verdict == "reducible"]
    return "A1 reducibility points", red == [-1, 1], f"reducible at {[str(s) for s in red]}"


def b2_rejected() -> Check:
    try:
        build_root_datum([[2, -2], [-1, 2]])
    except NotSimplyLacedError as exc:
        return "non-simply-laced input rejected", True, type(exc).__name__
    return "non-simply-laced input rejected", False, "accepted B2"


def run_selftest(datum: RootDatum) -> list[Check]:
    suites: list[Callable[[], Check]] = [
        lambda: check_weyl_orders(datum),
        lambda: check_cache_independence(datum),
        lambda: check_orbit_stabilizer(datum),
        lambda: check_antidominant_lemma(datum),
        lambda: check_rule_sizes(datum),
        lambda: check_d4_cosets(datum),
        a2_rule_oracle,
        a1_scan,
        b2_rejected,
    ]
    out = []
    for suite in suites:
        t0 = time.perf_counter()
        name, ok, detail = suite()
        out.append((name, ok, f"{detail} [{time.perf_counter() - t0:.2f}s]"))
    return out
