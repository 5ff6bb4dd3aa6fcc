"""Characters of the torus: a rational part plus a finite-order part.

An exponent is stored in the fundamental-weight basis as ``real`` (rationals)
and ``torsion`` (integers mod ``m``).  The finite-order part is chi o mu where
chi is a fixed character of order m, normalised to the class 1 in Z/m, and mu
is the integer weight recorded mod m.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .rootdata import RootDatum, diagram_automorphism, pairing, rho_levi


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_rational(text: str) -> Fraction:
    return Fraction(text.strip())


@dataclass(frozen=True, order=True)
class Exponent:
    real: tuple[Fraction, ...]
    torsion: tuple[int, ...]
    m: int = 1

    def __post_init__(self):
        if self.m < 1:
            raise ValueError(f"torsion order must be >= 1, got {self.m}")
        if len(self.real) != len(self.torsion):
            raise ValueError("real and torsion parts must have the same length")
        object.__setattr__(self, "real", tuple(Fraction(x) for x in self.real))
        object.__setattr__(self, "torsion", tuple(int(c) % self.m for c in self.torsion))

    @classmethod
    def of(cls, real: Sequence, torsion: Sequence[int] | None = None, m: int = 1) -> "Exponent":
        if torsion is None:
            torsion = (0,) * len(real)
        return cls(tuple(real), tuple(torsion), m)

    @property
    def rank(self) -> int:
        return len(self.real)

    @property
    def has_torsion(self) -> bool:
        return any(self.torsion)

    def inverse_torsion(self) -> "Exponent":
        return Exponent(self.real, tuple(-c for c in self.torsion), self.m)

    def __str__(self) -> str:
        re_ = ",".join(format_rational(x) for x in self.real)
        if self.m == 1:
            return f"({re_})"
        tors = ",".join(str(c) for c in self.torsion)
        return f"({re_}; {tors} mod {self.m})"


def parse_exponent(text: str) -> Exponent:
    body = text.strip()
    if not (body.startswith("(") and body.endswith(")")):
        raise ValueError(f"bad exponent {text!r}")
    body = body[1:-1]
    if ";" in body:
        re_part, tors_part = body.split(";")
        tors_part, m = tors_part.rsplit("mod", 1)
        torsion = tuple(int(c) for c in tors_part.split(","))
        m = int(m)
    else:
        re_part, torsion, m = body, None, 1
    real = tuple(parse_rational(x) for x in re_part.split(","))
    return Exponent.of(real, torsion, m)


@dataclass(frozen=True)
class Triple:
    """The data [i, s, m] of I_P(chi, s) with P = P_i and ord(chi) = m."""

    i: int
    s: Fraction
    m: int = 1

    def __post_init__(self):
        object.__setattr__(self, "s", Fraction(self.s))
        if self.m < 1:
            raise ValueError("order must be >= 1")
        if self.i < 1:
            raise ValueError("parabolic index must be >= 1")

    def __str__(self) -> str:
        return f"[{self.i},{format_rational(self.s)},{self.m}]"


@dataclass(frozen=True)
class FullPairing:
    real: Fraction
    torsion: int
    m: int = 1

    def is_unit(self) -> bool:
        return is_unit_pairing(self)

    def is_zero(self) -> bool:
        return self.real == 0 and self.torsion == 0

    def __iter__(self):
        yield self.real
        yield self.torsion


def is_unit_pairing(p: FullPairing) -> bool:
    return p.torsion == 0 and abs(p.real) == 1


def full_pairing(datum: RootDatum, lam: Exponent, beta: Sequence[int]) -> FullPairing:
    r = pairing(datum, lam.real, beta)
    t = sum(c * x for c, x in zip(beta, lam.torsion)) % lam.m
    return FullPairing(r, t, lam.m)


def simple_pairing(lam: Exponent, j: int) -> FullPairing:
    """Full pairing with the simple coroot of node j (1-based)."""
    return FullPairing(lam.real[j - 1], lam.torsion[j - 1], lam.m)


def rho_shift(datum: RootDatum, i: int) -> Fraction:
    """Coordinate at i of -rho of the Levi of P_i; the initial exponent has s + shift there."""
    theta = [j for j in datum.nodes if j != i]
    return -rho_levi(datum, theta)[i - 1]


def initial_exponent(datum: RootDatum, t: Triple, torsion_class: int = 1) -> Exponent:
    if not 1 <= t.i <= datum.rank:
        raise IndexError(f"parabolic index {t.i} out of range")
    real = [Fraction(-1)] * datum.rank
    real[t.i - 1] = t.s + rho_shift(datum, t.i)
    torsion = [0] * datum.rank
    torsion[t.i - 1] = torsion_class
    return Exponent(tuple(real), tuple(torsion), t.m)


def s_from_coordinate(datum: RootDatum, i: int, coord: Fraction) -> Fraction:
    return Fraction(coord) - rho_shift(datum, i)


class OrbitMembershipError(RuntimeError):
    """A constructed exponent was expected in a Weyl orbit but is not."""


def dual_leading_exponent(datum: RootDatum, t: Triple, table=None) -> Exponent:
    """Leading exponent of the contragredient, lying in the orbit of the initial exponent.

    It is the initial exponent of [theta(i), -s, m] with the inverse torsion
    class, theta the opposition involution.
    """
    theta = diagram_automorphism(datum)
    lam1 = initial_exponent(datum, Triple(theta[t.i], -t.s, t.m), torsion_class=-1)
    from .weyl import same_orbit, weyl_table

    table = table or weyl_table(datum)
    if not same_orbit(table, lam1, initial_exponent(datum, t)):
        raise OrbitMembershipError(f"{lam1} is not in the Weyl orbit of the initial exponent of {t}")
    return lam1
