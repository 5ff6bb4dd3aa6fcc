"""Regularity, candidate points, reducibility criteria and the classification pipeline."""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable

import numpy as np

from .branching import (CURATED_CASE_III, SocleSummary, SoundnessError, curated_key, irreducibility_test,
                        socle_analysis, validate_curated)
from .exponent import (Exponent, Triple, format_rational, full_pairing, initial_exponent, is_unit_pairing,
                       rho_shift)
from .jacquet import (ExponentMultiset, exponent_row, jacquet_of_triple, jacquet_row_counts,
                      maximal_theta)
from .rootdata import RootDatum, diagram_automorphism, rho_levi
from .weyl import (WeylGroupTable, minimal_coset_indices, orbit_with_levi_shape, same_orbit,
                   stabilizer, to_antidominant, weyl_table)

VERDICTS = ("irreducible", "reducible", "inconclusive")
REGULAR_SOCLE = SocleSummary("unique_sub_regular", 1, "regular induction")


class NotRegularError(ValueError):
    """Regular-case reducibility was requested for a non-regular triple."""


# ---------------------------------------------------------------------------
# regularity and candidate points


def is_regular(datum: RootDatum, t: Triple, table: WeylGroupTable | None = None) -> bool:
    table = table or weyl_table(datum)
    return stabilizer(datum, initial_exponent(datum, t), table, with_generators=False).order == 1


def _real_part_at_zero(datum: RootDatum, i: int) -> np.ndarray:
    lam = initial_exponent(datum, Triple(i, 0))
    return np.array(lam.real, dtype=object)


def singular_values(datum: RootDatum, i: int) -> list[Fraction]:
    """All s where the real part of the initial exponent is orthogonal to some positive coroot."""
    v0 = _real_part_at_zero(datum, i)
    out = set()
    for beta in datum.positive_roots:
        if beta[i - 1]:
            out.add(-Fraction(sum(b * x for b, x in zip(beta, v0))) / beta[i - 1])
    return sorted(out)


@lru_cache(maxsize=None)
def _torsion_orders(datum: RootDatum, i: int) -> tuple[int, ...]:
    table = weyl_table(datum)
    idx = minimal_coset_indices(table, (), maximal_theta(datum, i))
    diffs = table.mats[idx][:, :, i - 1] - np.eye(datum.rank, dtype=np.int64)[:, i - 1]
    inv = np.array(datum.cartan_inverse, dtype=object)
    out = {1}
    for d in diffs:
        if not d.any():
            continue
        coords = inv.dot(d.astype(object))
        g = 0
        for c in coords:
            if Fraction(c).denominator != 1:
                raise ArithmeticError("w.omega - omega is not in the root lattice")
            g = math.gcd(g, int(c))
        out.update(k for k in range(1, g + 1) if g % k == 0)
    return tuple(sorted(out))


def torsion_orders(datum: RootDatum, i: int) -> tuple[int, ...]:
    """{1} together with every divisor of m_0(w) = gcd of the root coordinates of w.omega_i - omega_i."""
    return _torsion_orders(datum, i)


def candidate_points(datum: RootDatum, i: int, table: WeylGroupTable | None = None) -> set[tuple[Fraction, int]]:
    table = table or weyl_table(datum)
    return {(s, m) for s in singular_values(datum, i) for m in torsion_orders(datum, i)
            if not is_regular(datum, Triple(i, s, m), table)}


def regular_reducibility_values(datum: RootDatum, i: int, m: int) -> list[Fraction]:
    """s with <chi_{M,s}, beta^vee> = +-1 for a root beta outside the Levi with m | beta_i."""
    v0 = _real_part_at_zero(datum, i)
    out = set()
    for beta in datum.positive_roots:
        c = beta[i - 1]
        if c == 0 or c % m:
            continue
        base = Fraction(sum(b * x for b, x in zip(beta, v0)))
        for target in (-1, 1):
            out.add((target - base) / c)
    return sorted(out)


def regular_reducibility(datum: RootDatum, t: Triple, table: WeylGroupTable | None = None
                         ) -> tuple[bool, tuple[int, ...] | None]:
    """(reducible, witnessing root) for a regular triple."""
    table = table or weyl_table(datum)
    if not is_regular(datum, t, table):
        raise NotRegularError(f"{t} is not regular")
    lam0 = initial_exponent(datum, t)
    for beta in datum.positive_roots:
        if beta[t.i - 1] and is_unit_pairing(full_pairing(datum, lam0, beta)):
            return True, beta
    return False, None


# ---------------------------------------------------------------------------
# partners


@dataclass(frozen=True)
class PartnerDescriptor:
    """A representation sharing lam_ad with the subject.

    form "maximal": I_{P_i'}(chi^c, s') with chi^c of order ``m``.
    form "corank2": induction from M_Theta, Theta = Delta minus ``nodes``.
    """

    form: str
    nodes: tuple[int, ...]
    s: tuple[Fraction, ...]
    classes: tuple[int, ...]
    m: int
    exponent: Exponent
    test: str

    def __str__(self) -> str:
        if self.form == "maximal":
            text = f"[{self.nodes[0]},{format_rational(self.s[0])},{self.m}]"
            if self.classes[0] not in (0, 1):
                text += f" (class {self.classes[0]})"
            return text
        ns = ",".join(map(str, self.nodes))
        ss = ",".join(format_rational(x) for x in self.s)
        ks = ",".join(map(str, self.classes))
        return f"[[{ns}],[{ss}],[{ks}]]"

    def to_dict(self) -> dict:
        return {"form": self.form, "descriptor": str(self), "exponent": str(self.exponent),
                "test": self.test}


def containment_test(ambient: ExponentMultiset, other: ExponentMultiset, lam0: Exponent) -> str | None:
    """Which of the three RC-(3) tests shows r_T pi is not below r_T sigma, in cost order."""
    if ambient.size > other.size:
        return "a"
    if ambient.mult(lam0) > other.mult(lam0):
        return "b"
    if any(n > other.mult(e) for e, n in ambient.counts):
        return "c"
    return None


def _row_containment(ambient: Counter, lam0_row: tuple, other: Counter) -> str | None:
    """containment_test on integer-row counters."""
    if sum(ambient.values()) > sum(other.values()):
        return "a"
    if ambient[lam0_row] > other[lam0_row]:
        return "b"
    if any(n > other[r] for r, n in ambient.items()):
        return "c"
    return None


class _RowContext:
    """Integer-row view of the ambient Jacquet module, shared by all candidates in one orbit."""

    def __init__(self, ambient: ExponentMultiset, lam0: Exponent, lam_ad: Exponent):
        self.den = math.lcm(*(x.denominator for x in lam_ad.real))
        self.rows = Counter({exponent_row(e, self.den): n for e, n in ambient.counts})
        self.lam0 = exponent_row(lam0, self.den)

    def test(self, datum, theta, mu, table) -> tuple[str | None, int]:
        other = jacquet_row_counts(datum, theta, mu, self.den, table)
        return _row_containment(self.rows, self.lam0, other), sum(other.values())


TEST_TEXT = {
    "a": "|W^(M,T)| > |W^(M',T)|",
    "b": "mult of the initial exponent is larger in pi",
    "c": "r_T pi is not contained in r_T sigma",
}


def _check_shared(table: WeylGroupTable, lam_ad: Exponent, mu: Exponent) -> None:
    if not same_orbit(table, mu, lam_ad):
        raise AssertionError(f"partner exponent {mu} does not share the anti-dominant exponent {lam_ad}")


def maximal_partners(datum: RootDatum, t: Triple, table: WeylGroupTable | None = None,
                     ambient: ExponentMultiset | None = None) -> list[PartnerDescriptor]:
    """Every degenerate principal series sharing lam_ad and certifying RC-(3), best first.

    Preference: smaller Jacquet module, then s' <= 0, then smaller node index.
    """
    table = table or weyl_table(datum)
    ambient = ambient or jacquet_of_triple(datum, t, table)
    lam0 = initial_exponent(datum, t)
    _, lam_ad = to_antidominant(datum, lam0)
    ctx = _RowContext(ambient, lam0, lam_ad)
    found = []
    # table order is by length, so orbit order is by the shortest element reaching mu
    for order, mu in enumerate(orbit_with_levi_shape(table, lam_ad, 1, exact=False)):
        if mu == lam0:
            continue
        for ip in datum.nodes:
            if any(mu.real[j - 1] != -1 or mu.torsion[j - 1] != 0 for j in datum.nodes if j != ip):
                continue
            c = mu.torsion[ip - 1]
            mp = t.m // math.gcd(c, t.m) if c else 1
            sp = mu.real[ip - 1] - rho_shift(datum, ip)
            test, size = ctx.test(datum, maximal_theta(datum, ip), mu, table)
            if test is None:
                continue
            _check_shared(table, lam_ad, mu)
            desc = PartnerDescriptor("maximal", (ip,), (sp,), (c,), mp, mu, test)
            found.append(((size, sp > 0, ip, order), desc))
    return [d for _, d in sorted(found, key=lambda x: x[0])]


def rc_partner_search(datum: RootDatum, t: Triple, table: WeylGroupTable | None = None,
                      ambient: ExponentMultiset | None = None) -> PartnerDescriptor | None:
    partners = maximal_partners(datum, t, table, ambient)
    return partners[0] if partners else None


def corank2_descriptor_s(datum: RootDatum, theta: Iterable[int], mu: Exponent, nodes: tuple[int, ...]
                         ) -> tuple[Fraction, ...]:
    """s-values of a corank-2 descriptor: coordinates at the two free nodes, both shifted by
    the rho_M coordinate of the first free node."""
    rho = rho_levi(datum, theta)
    shift = rho[nodes[0] - 1]
    return tuple(mu.real[j - 1] + shift for j in nodes)


def corank2_partners(datum: RootDatum, t: Triple, table: WeylGroupTable | None = None,
                     ambient: ExponentMultiset | None = None) -> list[PartnerDescriptor]:
    """Inductions from corank-2 Levis sharing lam_ad and certifying RC-(3), in orbit order."""
    table = table or weyl_table(datum)
    ambient = ambient or jacquet_of_triple(datum, t, table)
    lam0 = initial_exponent(datum, t)
    _, lam_ad = to_antidominant(datum, lam0)
    ctx = _RowContext(ambient, lam0, lam_ad)
    found = []
    for mu in orbit_with_levi_shape(table, lam_ad, 2):
        theta = [j for j in datum.nodes if mu.real[j - 1] == -1 and mu.torsion[j - 1] == 0]
        if len(theta) != datum.rank - 2:
            continue
        nodes = tuple(j for j in datum.nodes if j not in theta)
        test, _ = ctx.test(datum, theta, mu, table)
        if test is None:
            continue
        _check_shared(table, lam_ad, mu)
        s = corank2_descriptor_s(datum, theta, mu, nodes)
        classes = tuple(mu.torsion[j - 1] for j in nodes)
        found.append(PartnerDescriptor("corank2", nodes, s, classes, t.m, mu, test))
    return found


def rc_corank2(datum: RootDatum, t: Triple, table: WeylGroupTable | None = None,
               ambient: ExponentMultiset | None = None, prefer: str | None = None
               ) -> PartnerDescriptor | None:
    """First certifying corank-2 partner, or the one whose descriptor equals ``prefer`` if it certifies."""
    partners = corank2_partners(datum, t, table, ambient)
    if prefer is not None:
        for p in partners:
            if str(p) == prefer:
                return p
    return partners[0] if partners else None


# ---------------------------------------------------------------------------
# pipeline


@dataclass
class ClassificationRecord:
    group: str
    triple: Triple
    regular: bool
    verdict: str
    automatic_verdict: str
    methods: list[str] = field(default_factory=list)
    partner: PartnerDescriptor | None = None
    socle: SocleSummary | None = None
    certificate_lines: list[str] = field(default_factory=list)
    clamps: int = 0

    def __post_init__(self):
        if self.verdict not in VERDICTS:
            raise ValueError(f"unknown verdict {self.verdict}")
        if self.verdict == "reducible" and not self.methods:
            raise ValueError("a reducible verdict needs a certificate")

    def to_dict(self) -> dict:
        return {
            "group": self.group,
            "i": self.triple.i,
            "s": format_rational(self.triple.s),
            "m": self.triple.m,
            "regular": self.regular,
            "verdict": self.verdict,
            "methods": list(self.methods),
            "partner": None if self.partner is None else self.partner.to_dict(),
            "socle": None if self.socle is None else self.socle.describe(),
            "certificate_lines": list(self.certificate_lines),
        }


def contragredient_triple(datum: RootDatum, t: Triple) -> Triple:
    return Triple(diagram_automorphism(datum)[t.i], -t.s, t.m)


def _classify_regular(datum: RootDatum, t: Triple, table: WeylGroupTable) -> ClassificationRecord:
    red, beta = regular_reducibility(datum, t, table)
    if red:
        p = full_pairing(datum, initial_exponent(datum, t), beta)
        methods = [f"regular: <chi_(M,s), beta^vee> = {format_rational(p.real)} for beta = {beta}"]
        verdict = "reducible"
    else:
        methods = ["regular: no root outside the Levi pairs to +-1"]
        verdict = "irreducible"
    return ClassificationRecord(datum.type_label, t, True, verdict, verdict, methods, socle=REGULAR_SOCLE)


def _socle(datum, t, ambient, table, rec: ClassificationRecord) -> None:
    summary, lines = socle_analysis(datum, t, ambient, table)
    rec.socle = summary
    rec.certificate_lines += [f"SOCLE {summary.describe()}"] + [ln for ln in lines if not ln.startswith("RULE")]


def classify(datum: RootDatum, t: Triple, table: WeylGroupTable | None = None,
             prefer_corank2: str | None = None, trace: bool = False) -> ClassificationRecord:
    """Regularity, then RC with maximal partners, the branching fixpoint, RC with corank-2
    partners and finally curated annotations."""
    table = table or weyl_table(datum)
    if is_regular(datum, t, table):
        return _classify_regular(datum, t, table)
    if t.s > 0:
        dual = contragredient_triple(datum, t)
        rec = classify(datum, dual, table, trace=trace)
        out = ClassificationRecord(datum.type_label, t, False, rec.verdict, rec.automatic_verdict,
                                   [f"contragredient {dual}: {m}" for m in rec.methods], rec.partner,
                                   None, list(rec.certificate_lines), rec.clamps)
        if out.verdict == "reducible":
            out.socle = SocleSummary("unique_sub_positive_s", 1, "s > 0: unique irreducible subrepresentation")
        return out

    ambient = jacquet_of_triple(datum, t, table)
    rec = ClassificationRecord(datum.type_label, t, False, "inconclusive", "inconclusive")

    partner = rc_partner_search(datum, t, table, ambient)
    if partner is not None:
        rec.partner = partner
        rec.methods.append(f"RC partner {partner}, test ({partner.test}): {TEST_TEXT[partner.test]}")
    else:
        irr = irreducibility_test(datum, t, ambient, table)
        rec.clamps = len(irr.fixpoint.bounds.clamps)
        if trace:
            rec.certificate_lines += irr.trace
        if irr.irreducible:
            rec.verdict = rec.automatic_verdict = "irreducible"
            rec.methods.append(irr.method)
            return rec
        rec.methods.append(f"branching: {irr.method}")
        partner = rc_corank2(datum, t, table, ambient, prefer_corank2)
        if partner is not None:
            rec.partner = partner
            rec.methods.append(f"RC corank-2 partner {partner}, test ({partner.test}): {TEST_TEXT[partner.test]}")

    if partner is not None:
        rec.verdict = rec.automatic_verdict = "reducible"
    entry = CURATED_CASE_III.get(curated_key(datum, t))
    if rec.verdict == "inconclusive" and entry is not None and entry.length > 1:
        rec.certificate_lines += validate_curated(datum, t, entry, ambient, table)
        rec.verdict = "reducible"
        rec.methods.append(f"curated Case III: socle of length {entry.length}")
    if rec.verdict == "reducible":
        _socle(datum, t, ambient, table, rec)
    return rec


__all__ = [
    "ClassificationRecord", "NotRegularError", "PartnerDescriptor", "REGULAR_SOCLE", "SoundnessError",
    "candidate_points", "classify", "containment_test", "contragredient_triple", "corank2_partners",
    "is_regular", "maximal_partners", "rc_corank2", "rc_partner_search", "regular_reducibility",
    "regular_reducibility_values", "singular_values", "torsion_orders",
]
