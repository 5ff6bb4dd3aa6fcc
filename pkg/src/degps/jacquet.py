"""Torus Jacquet modules of degenerate principal series as exponent multisets."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

import numpy as np

from .exponent import Exponent, Triple, initial_exponent, simple_pairing
from .rootdata import RootDatum
from .weyl import WeylGroupTable, act_many, minimal_coset_indices, stabilizer, weyl_table


class InvalidInitialExponentError(ValueError):
    """The exponent is not the torus restriction of a character of the Levi."""


@dataclass(frozen=True)
class ExponentMultiset(Mapping[Exponent, int]):
    """Immutable multiset of exponents; iteration follows the exponents' sort order."""

    counts: tuple[tuple[Exponent, int], ...]

    @classmethod
    def from_iterable(cls, items: Iterable[Exponent]) -> "ExponentMultiset":
        return cls.from_counts(Counter(items))

    @classmethod
    def from_counts(cls, counts: Mapping[Exponent, int]) -> "ExponentMultiset":
        pairs = sorted((e, int(n)) for e, n in counts.items() if n > 0)
        return cls(tuple(pairs))

    def __post_init__(self):
        object.__setattr__(self, "_map", dict(self.counts))

    def __getitem__(self, lam: Exponent) -> int:
        return self._map[lam]

    def __iter__(self) -> Iterator[Exponent]:
        return (e for e, _ in self.counts)

    def __len__(self) -> int:
        return len(self.counts)

    def __contains__(self, lam) -> bool:
        return lam in self._map

    @property
    def size(self) -> int:
        return sum(n for _, n in self.counts)

    def mult(self, lam: Exponent) -> int:
        return self._map.get(lam, 0)

    def __add__(self, other: "ExponentMultiset") -> "ExponentMultiset":
        c = Counter(self._map)
        c.update(other._map)
        return ExponentMultiset.from_counts(c)

    def scaled(self, n: int) -> "ExponentMultiset":
        return ExponentMultiset.from_counts({e: n * k for e, k in self.counts})

    def to_lines(self) -> list[str]:
        return [f"{n} × {e}" for e, n in self.counts]


def multiplicity(ms: ExponentMultiset, lam: Exponent) -> int:
    return ms.mult(lam)


def multiset_leq(a: Mapping[Exponent, int], b: Mapping[Exponent, int]) -> bool:
    return all(n <= b.get(e, 0) for e, n in a.items())


def check_initial_exponent(theta: Iterable[int], lam0: Exponent) -> None:
    for j in theta:
        p = simple_pairing(lam0, j)
        if p.real != -1 or p.torsion != 0:
            raise InvalidInitialExponentError(
                f"{lam0} is not a valid initial exponent for this Levi: pairing with node {j} is {tuple(p)}"
            )


def jacquet_to_torus(datum: RootDatum, theta: Iterable[int], lam0: Exponent,
                     table: WeylGroupTable | None = None) -> ExponentMultiset:
    """r_T^G i_M^G of the character of M_theta with torus restriction lam0."""
    theta = frozenset(theta)
    check_initial_exponent(theta, lam0)
    table = table or weyl_table(datum)
    idx = minimal_coset_indices(table, (), theta)
    return ExponentMultiset.from_iterable(act_many(table, idx, lam0))


def maximal_theta(datum: RootDatum, i: int) -> frozenset[int]:
    return frozenset(j for j in datum.nodes if j != i)


def jacquet_of_triple(datum: RootDatum, t: Triple, table: WeylGroupTable | None = None) -> ExponentMultiset:
    return jacquet_to_torus(datum, maximal_theta(datum, t.i), initial_exponent(datum, t), table)


def antidominant_multiplicity_check(datum: RootDatum, theta: Iterable[int], lam0: Exponent,
                                    table: WeylGroupTable | None = None) -> tuple[bool, dict[Exponent, tuple[int, int]]]:
    """Compare multiplicity and stabilizer order for every anti-dominant exponent.

    Returns (all equal, {lam_ad: (multiplicity, |Stab|)}).
    """
    table = table or weyl_table(datum)
    ms = jacquet_to_torus(datum, theta, lam0, table)
    found = {}
    for lam in ms:
        if all(x <= 0 for x in lam.real):
            found[lam] = (ms.mult(lam), stabilizer(datum, lam, table, with_generators=False).order)
    return all(a == b for a, b in found.values()) and bool(found), found


def jacquet_row_counts(datum: RootDatum, theta: Iterable[int], lam0: Exponent, den: int,
                       table: WeylGroupTable | None = None) -> Counter:
    """jacquet_to_torus as a Counter of integer rows (den * real part, torsion), for fast comparisons."""
    theta = frozenset(theta)
    check_initial_exponent(theta, lam0)
    table = table or weyl_table(datum)
    mats = table.mats[minimal_coset_indices(table, (), theta)]
    vec = np.array([int(x * den) for x in lam0.real], dtype=np.int64)
    if any(x * den % 1 for x in lam0.real):
        raise ValueError(f"denominator {den} does not clear {lam0}")
    rows = np.hstack([mats @ vec, (mats @ np.array(lam0.torsion, dtype=np.int64)) % lam0.m])
    uniq, counts = np.unique(rows, axis=0, return_counts=True)
    return Counter({tuple(r): int(c) for r, c in zip(uniq.tolist(), counts.tolist())})


def exponent_row(lam: Exponent, den: int) -> tuple[int, ...]:
    return tuple(int(x * den) for x in lam.real) + tuple(lam.torsion)
