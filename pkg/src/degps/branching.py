"""Branching rules, the irreducibility fixpoint and socle analysis.

A bound map records, for each exponent, a lower bound on its multiplicity in
the torus Jacquet module of one irreducible subquotient pi' of pi (the one
containing a chosen anti-dominant exponent).  Rules propagate bounds:
if lam occurs in pi' and sigma is the unique irreducible representation of a
small Levi L whose Jacquet module contains lam, then
ceil(B(lam)/d) x r_T^L(sigma) <= r_T^G(pi') with d = mult of lam in r_T^L(sigma).
"""
from __future__ import annotations

import math
from collections import Counter, deque
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations

import numpy as np

from .exponent import Exponent, Triple, dual_leading_exponent, initial_exponent, simple_pairing
from .jacquet import ExponentMultiset, jacquet_of_triple
from .rootdata import RootDatum, weyl_subgroup_order
from .weyl import (WeylElement, WeylGroupTable, act_many, apply, reflection_subgroup_order, stabilizer,
                   to_antidominant, weyl_table)

RULE_ORDER = ("golden", "A1", "A2", "A3", "D4")
RULE_SIZES = {"A1": 2, "A2": 3, "A3": 6, "D4": 22}


class SoundnessError(RuntimeError):
    """A bound exceeded the multiplicity in r_T^G pi: an unsound rule application."""


@dataclass(frozen=True)
class BranchingRule:
    kind: str
    nodes: tuple[int, ...]
    trigger: Exponent
    contribution: ExponentMultiset
    d: int

    def label(self) -> str:
        return f"{self.kind}@{','.join(map(str, self.nodes))}"


def _s(datum: RootDatum, j: int, lam: Exponent) -> Exponent:
    return apply(datum, WeylElement.from_word(datum, (j,)), lam)


def _is_pm_one(lam: Exponent, j: int) -> bool:
    p = simple_pairing(lam, j)
    return p.torsion == 0 and abs(p.real) == 1


def _is_zero(lam: Exponent, j: int) -> bool:
    return simple_pairing(lam, j).is_zero()


def _rule(kind, nodes, lam, items) -> BranchingRule:
    contrib = ExponentMultiset.from_counts(Counter(items))
    return BranchingRule(kind, tuple(nodes), lam, contrib, contrib.mult(lam))


# ---------------------------------------------------------------------------
# D4 contribution


@lru_cache(maxsize=None)
def _d4_coset_words(datum: RootDatum, center: int, arms: tuple[int, ...]) -> tuple[tuple[int, ...], ...]:
    """Reduced words of W_M^{M',T} for M of type D4 and M' its Levi on the three arms.

    These are the 24 shortest representatives of W_M / W_{M'}; both 1 and s_center
    are among them.
    """
    nodes = (center,) + arms
    table = weyl_table(datum)
    idx = table.parabolic_indices(nodes)
    keep = idx[np.all(table.simple_root_images_positive[np.ix_(idx, [a - 1 for a in arms])], axis=1)]
    words = tuple(table.words[k] for k in keep)
    if len(idx) != 192 or len(keep) != 24 or () not in words or (center,) not in words:
        raise RuntimeError(f"D4 self-check failed: |W_M|={len(idx)}, |W_M^(M',T)|={len(keep)}")
    return words


def d4_contribution(datum: RootDatum, center: int, arms: tuple[int, ...], lam: Exponent) -> list[Exponent]:
    """Jacquet module of the unique D4-constituent containing lam (centre pairing -1, arms 0).

    Sum of w.(w0.lam) over the coset representatives other than 1 and s_center,
    where w0 = s_c s_a s_b s_d s_c.
    """
    w0 = (center,) + arms + (center,)
    top = apply(datum, WeylElement.from_word(datum, w0), lam)
    table = weyl_table(datum)
    words = [w for w in _d4_coset_words(datum, center, arms) if w not in ((), (center,))]
    idx = np.array([table.index_of(WeylElement.from_word(datum, w)) for w in words])
    return act_many(table, idx, top)


# ---------------------------------------------------------------------------
# rule detection


def applicable_rules(datum: RootDatum, lam: Exponent) -> list[BranchingRule]:
    rules: list[BranchingRule] = []
    zero = [j for j in datum.nodes if _is_zero(lam, j)]
    if zero:
        order = weyl_subgroup_order(datum, zero)
        rules.append(BranchingRule("golden", tuple(zero), lam, ExponentMultiset.from_counts({lam: order}), order))
    for j in datum.nodes:
        if not _is_pm_one(lam, j):
            rules.append(_rule("A1", (j,), lam, [lam, _s(datum, j, lam)]))
    for a in datum.nodes:
        if not _is_pm_one(lam, a):
            continue
        for b in sorted(datum.adjacency[a]):
            if _is_zero(lam, b):
                sa = _s(datum, a, lam)
                rules.append(_rule("A2", (a, b), lam, [lam, lam, sa]))
    for b in datum.nodes:
        if not _is_zero(lam, b):
            continue
        nbrs = sorted(datum.adjacency[b])
        for a in nbrs:
            for c in nbrs:
                if a == c or c in datum.adjacency[a]:
                    continue
                pa, pc = simple_pairing(lam, a), simple_pairing(lam, c)
                if pa.torsion == 0 and pc.torsion == 0 and pa.real == 1 and pc.real == -1:
                    sa, sc = _s(datum, a, lam), _s(datum, c, lam)
                    sac = _s(datum, a, sc)
                    rules.append(_rule("A3", (a, b, c), lam, [lam, lam, sa, sc, sac, sac]))
    for b in datum.nodes:
        nbrs = tuple(sorted(datum.adjacency[b]))
        if len(nbrs) < 3:
            continue
        p = simple_pairing(lam, b)
        if p.torsion != 0 or p.real != -1:
            continue
        for arms in combinations(nbrs, 3):
            if all(_is_zero(lam, x) for x in arms):
                rules.append(_rule("D4", (b,) + arms, lam, d4_contribution(datum, b, arms, lam)))
    return rules


# ---------------------------------------------------------------------------
# bound propagation


@dataclass
class BoundMap:
    """Lower bounds on multiplicities in one irreducible subquotient, capped by ``ambient``."""

    ambient: ExponentMultiset
    bounds: dict[Exponent, int] = field(default_factory=dict)
    clamps: list[str] = field(default_factory=list)

    def __getitem__(self, lam: Exponent) -> int:
        return self.bounds.get(lam, 0)

    def total(self) -> int:
        return sum(self.bounds.values())

    def raise_to(self, lam: Exponent, value: int) -> bool:
        if value <= self[lam]:
            return False
        cap = self.ambient.mult(lam)
        if value > cap:
            self.clamps.append(f"bound {value} on {lam} exceeds multiplicity {cap}")
            value = cap
            if value <= self[lam]:
                return False
        self.bounds[lam] = value
        return True


def apply_rule(rule: BranchingRule, lam: Exponent, bm: BoundMap) -> tuple[int, list[Exponent]]:
    """Apply one rule instance; returns (n, exponents whose bound increased)."""
    have = bm[lam]
    if have < 1:
        return 0, []
    n = math.ceil(have / rule.d)
    changed = [mu for mu, k in rule.contribution.counts if bm.raise_to(mu, n * k)]
    return n, changed


def _trace_line(rule: BranchingRule, lam: Exponent, n: int) -> str:
    parts = ", ".join(f"{n * k}×{mu}" for mu, k in rule.contribution.counts)
    return f"RULE {rule.label()} {lam} → {{{parts}}} [n={n}]"


@dataclass
class FixpointResult:
    bounds: BoundMap
    trace: list[str]
    start: Exponent
    start_bound: int

    @property
    def total(self) -> int:
        return self.bounds.total()


def saturate(datum: RootDatum, ambient: ExponentMultiset, start: Exponent, start_bound: int) -> FixpointResult:
    bm = BoundMap(ambient)
    bm.raise_to(start, start_bound)
    trace = [f"START {start} [bound={start_bound}]"]
    queue = deque([start])
    queued = {start}
    while queue:
        lam = queue.popleft()
        queued.discard(lam)
        for rule in applicable_rules(datum, lam):
            n, changed = apply_rule(rule, lam, bm)
            if changed:
                trace.append(_trace_line(rule, lam, n))
            for mu in changed:
                if mu not in queued:
                    queue.append(mu)
                    queued.add(mu)
    return FixpointResult(bm, trace, start, start_bound)


# ---------------------------------------------------------------------------
# irreducibility and socle


@dataclass
class IrreducibilityResult:
    irreducible: bool
    method: str
    fixpoint: FixpointResult
    target: int

    @property
    def trace(self) -> list[str]:
        return self.fixpoint.trace


def antidominant_start(datum: RootDatum, t: Triple, table: WeylGroupTable | None = None):
    """lam_ad and the sound starting bound for it.

    Every constituent containing lam_ad contains it at least |W'| times, W' the
    subgroup generated by reflections fixing lam_ad.  When the R-group
    Stab/W' is trivial this is the full multiplicity |Stab|.
    """
    table = table or weyl_table(datum)
    lam0 = initial_exponent(datum, t)
    _, lad = to_antidominant(datum, lam0)
    return lad, reflection_subgroup_order(datum, lad, table)


def endpoint_test(ambient: ExponentMultiset, bounds: BoundMap, lam0: Exponent, lam1: Exponent) -> bool:
    """Sub = quotient test.

    Every irreducible subrepresentation contains lam0 and every irreducible
    quotient contains lam1.  If pi_0 already holds all copies of both, it is
    the unique sub, the unique quotient and occurs once, so pi = pi_0.
    """
    m0, m1 = ambient.mult(lam0), ambient.mult(lam1)
    return m0 >= 1 and m1 >= 1 and bounds[lam0] == m0 and bounds[lam1] == m1


def irreducibility_test(datum: RootDatum, t: Triple, ambient: ExponentMultiset | None = None,
                        table: WeylGroupTable | None = None) -> IrreducibilityResult:
    """Saturate branching rules from the anti-dominant exponent, then try the endpoint test."""
    table = table or weyl_table(datum)
    ambient = ambient or jacquet_of_triple(datum, t, table)
    lad, order = antidominant_start(datum, t, table)
    fp = saturate(datum, ambient, lad, order)
    target = ambient.size
    if fp.bounds.clamps:
        raise SoundnessError(f"{t}: " + "; ".join(fp.bounds.clamps))
    if fp.total == target:
        return IrreducibilityResult(True, f"branching fixpoint, {fp.total}/{target}", fp, target)
    lam0 = initial_exponent(datum, t)
    lam1 = dual_leading_exponent(datum, t, table)
    if endpoint_test(ambient, fp.bounds, lam0, lam1):
        fp.trace.append(f"ENDPOINT pi_0 carries all {ambient.mult(lam0)}×{lam0} and all "
                        f"{ambient.mult(lam1)}×{lam1}: unique sub = unique quotient = pi_0")
        return IrreducibilityResult(True, f"endpoint test (fixpoint {fp.total}/{target})", fp, target)
    return IrreducibilityResult(False, f"inconclusive, fixpoint {fp.total}/{target}", fp, target)


@dataclass(frozen=True)
class SocleSummary:
    kind: str  # unique_sub_case_I | unique_sub_case_II | unique_sub_regular | unique_sub_positive_s | curated_case_III | length_bound | unknown
    length_bound: int
    notes: str = ""

    @property
    def unique_sub(self) -> bool:
        return self.kind.startswith("unique_sub") or (self.kind == "curated_case_III" and self.length_bound == 1)

    def describe(self) -> str:
        text = {
            "unique_sub_case_I": "unique sub (Case I)",
            "unique_sub_case_II": "unique sub (Case II)",
            "unique_sub_regular": "unique sub and unique quotient, multiplicity one (regular)",
            "unique_sub_positive_s": "unique sub (s > 0)",
            "curated_case_III": f"Case III, socle length {self.length_bound}",
            "length_bound": f"socle length <= {self.length_bound}",
            "unknown": "unknown",
        }[self.kind]
        return text


@dataclass(frozen=True)
class CuratedCaseIII:
    length: int
    note: str
    lam_ad: tuple | None = None
    stab_order: int | None = None
    stab_word: tuple[int, ...] | None = None
    to_ad_word: tuple[int, ...] | None = None


# Points whose socle needs induction in stages plus unitarity/standard-module
# arguments; the checkable facts below are verified before the annotation is used.
CURATED_CASE_III: dict[tuple[str, int, str, int], CuratedCaseIII] = {
    ("E6", 4, "-1/2", 1): CuratedCaseIII(
        1,
        "embeds in i_T^G(lam_ad) through M' = M_6, M'' = M_{1,2,3,5}; unique irreducible subrepresentation",
    ),
    ("E6", 4, "-1/2", 3): CuratedCaseIII(
        3,
        "lam_ad = w_42354 . lam_0, Stab = <w_3165> of order 3, i_T^{M_4} lam_ad splits into 3 summands; "
        "maximal semisimple subrepresentation of length 3, unique irreducible quotient",
        lam_ad=((0, 0, 0, -1, 0, 0), (1, 1, 1, 1, 1, 1)),
        stab_order=3,
        stab_word=(3, 1, 6, 5),
        to_ad_word=(4, 2, 3, 5, 4),
    ),
}


def curated_key(datum: RootDatum, t: Triple) -> tuple[str, int, str, int]:
    from .exponent import format_rational

    return (datum.type_label, t.i, format_rational(t.s), t.m)


def validate_curated(datum: RootDatum, t: Triple, entry: CuratedCaseIII, ambient: ExponentMultiset,
                     table: WeylGroupTable | None = None) -> list[str]:
    """Check the machine-checkable facts behind a curated annotation; returns certificate lines."""
    table = table or weyl_table(datum)
    lam0 = initial_exponent(datum, t)
    lad, order = antidominant_start(datum, t, table)
    mult0 = ambient.mult(lam0)
    lines = [f"CURATED mult(lam_0) = {mult0} > 1, Case I not applicable"]
    if mult0 <= 1:
        raise ValueError(f"curated annotation for {t} contradicts mult(lam_0) = {mult0}")
    if entry.lam_ad is not None:
        expected = Exponent.of(entry.lam_ad[0], entry.lam_ad[1], t.m)
        if lad != expected:
            raise ValueError(f"curated annotation for {t}: anti-dominant exponent {lad} != {expected}")
        lines.append(f"CURATED lam_ad = {lad}")
    if entry.to_ad_word is not None:
        w = WeylElement.from_word(datum, entry.to_ad_word)
        if apply(datum, w, lam0) != lad:
            raise ValueError(f"curated annotation for {t}: w_{''.join(map(str, entry.to_ad_word))} . lam_0 != lam_ad")
        lines.append(f"CURATED lam_ad = w_{''.join(map(str, entry.to_ad_word))} . lam_0")
    if entry.stab_order is not None:
        st = stabilizer(datum, lad, table)
        if st.order != entry.stab_order or ambient.mult(lad) != entry.stab_order:
            raise ValueError(f"curated annotation for {t}: stabilizer order {st.order}, mult {ambient.mult(lad)}")
        if entry.stab_word is not None:
            g = WeylElement.from_word(datum, entry.stab_word)
            if apply(datum, g, lad) != lad or g == WeylElement.from_word(datum, ()):
                raise ValueError(f"curated annotation for {t}: w_{entry.stab_word} does not fix lam_ad")
            lines.append(f"CURATED Stab_W(lam_ad) = <w_{''.join(map(str, entry.stab_word))}> of order {st.order}")
        lines.append(f"CURATED mult(lam_ad) = {ambient.mult(lad)}")
        refl = reflection_subgroup_order(datum, lad, table)
        lines.append(f"CURATED reflection part of Stab has order {refl}; R-group of order {st.order // refl}")
        if st.order // refl != entry.length:
            raise ValueError(f"curated annotation for {t}: R-group order {st.order // refl} != length {entry.length}")
    lines.append(f"CURATED {entry.note}")
    return lines


def socle_analysis(datum: RootDatum, t: Triple, ambient: ExponentMultiset | None = None,
                   table: WeylGroupTable | None = None) -> tuple[SocleSummary, list[str]]:
    """Bound the socle of a reducible non-regular I_P(chi, s) with s <= 0."""
    table = table or weyl_table(datum)
    if t.s > 0:
        return SocleSummary("unique_sub_positive_s", 1, "s > 0: unique irreducible subrepresentation"), []
    ambient = ambient or jacquet_of_triple(datum, t, table)
    lam0 = initial_exponent(datum, t)
    mult0 = ambient.mult(lam0)
    if mult0 == 1:
        return SocleSummary("unique_sub_case_I", 1, "mult(lam_0) = 1"), [f"CASE I mult({lam0}) = 1"]
    lad, order = antidominant_start(datum, t, table)
    fp = saturate(datum, ambient, lad, order)
    if fp.bounds.clamps:
        raise SoundnessError(f"{t}: " + "; ".join(fp.bounds.clamps))
    if fp.bounds[lam0] == mult0:
        return (SocleSummary("unique_sub_case_II", 1, f"bound on lam_0 reaches {mult0}"),
                [f"CASE II bound({lam0}) = mult = {mult0}"] + fp.trace)
    lines = [f"LENGTH socle length <= mult({lam0}) = {mult0}; Case II bound reached {fp.bounds[lam0]}"]
    entry = CURATED_CASE_III.get(curated_key(datum, t))
    if entry is not None:
        lines += validate_curated(datum, t, entry, ambient, table)
        return SocleSummary("curated_case_III", entry.length, entry.note), lines
    return SocleSummary("length_bound", mult0, "Case I/II inconclusive"), lines
