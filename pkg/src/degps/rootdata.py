"""Simply-laced root data of finite type (A, D, E).

Nodes are labelled 1..rank (Bourbaki numbering).  Roots are stored as integer
tuples in simple-root coordinates; weights are tuples of ``Fraction`` in the
fundamental-weight basis, so the pairing of a weight with a simple coroot is
just the corresponding coordinate.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

Weight = tuple  # tuple[Fraction, ...] in the omega basis


class RootDatumError(ValueError):
    """Rejected Cartan matrix or type label."""


class NotSimplyLacedError(RootDatumError):
    pass


class NotFiniteTypeError(RootDatumError):
    pass


_MAX_ROOTS = 10_000


def _edges_for_type(family: str, n: int) -> list[tuple[int, int]]:
    if family == "A":
        if n < 1:
            raise RootDatumError(f"A{n}: rank must be >= 1")
        return [(i, i + 1) for i in range(1, n)]
    if family == "D":
        if n < 4:
            raise RootDatumError(f"D{n}: rank must be >= 4")
        chain = [(i, i + 1) for i in range(1, n - 1)]
        return chain + [(n - 2, n)]
    if family == "E":
        if n not in (6, 7, 8):
            raise RootDatumError(f"E{n}: only E6, E7, E8 exist")
        return [(1, 3), (3, 4), (2, 4)] + [(i, i + 1) for i in range(4, n)]
    raise NotSimplyLacedError(f"type {family}{n} is not simply laced (only A, D, E accepted)")


def cartan_from_type(label: str) -> np.ndarray:
    m = re.fullmatch(r"\s*([A-Ga-g])\s*(\d+)\s*", label)
    if not m:
        raise RootDatumError(f"cannot parse type label {label!r}")
    family, n = m.group(1).upper(), int(m.group(2))
    edges = _edges_for_type(family, n)
    cartan = 2 * np.eye(n, dtype=np.int64)
    for a, b in edges:
        cartan[a - 1, b - 1] = cartan[b - 1, a - 1] = -1
    return cartan


def read_cartan_file(path: str | Path) -> np.ndarray:
    """Parse a Cartan matrix file: first line the rank, then one row per line."""
    lines = [ln.split() for ln in Path(path).read_text().splitlines() if ln.strip()]
    if not lines:
        raise RootDatumError(f"{path}: empty file")
    try:
        rank = int(lines[0][0])
        rows = [[int(x) for x in row] for row in lines[1:]]
    except ValueError as exc:
        raise RootDatumError(f"{path}: non-integer entry ({exc})") from None
    if len(rows) != rank or any(len(r) != rank for r in rows):
        raise RootDatumError(f"{path}: expected {rank} rows of {rank} integers")
    return np.array(rows, dtype=np.int64)


def _is_positive_definite(cartan: np.ndarray) -> bool:
    # exact leading-principal-minor test via fraction-free elimination
    a = [[Fraction(int(x)) for x in row] for row in cartan]
    n = len(a)
    for k in range(n):
        if a[k][k] <= 0:
            return False
        for i in range(k + 1, n):
            f = a[i][k] / a[k][k]
            for j in range(k, n):
                a[i][j] -= f * a[k][j]
    return True


def validate_cartan(cartan: np.ndarray) -> None:
    c = np.asarray(cartan)
    if c.ndim != 2 or c.shape[0] != c.shape[1] or c.shape[0] == 0:
        raise RootDatumError("Cartan matrix must be square and non-empty")
    if np.any(np.diag(c) != 2):
        raise RootDatumError("Cartan matrix diagonal must be 2")
    off = c[~np.eye(c.shape[0], dtype=bool)]
    if np.any(off > 0):
        raise RootDatumError("off-diagonal Cartan entries must be <= 0")
    if not np.array_equal(c, c.T) or np.any(off < -1):
        raise NotSimplyLacedError("Cartan matrix is not simply laced (must be symmetric with entries in {0,-1})")
    if not _is_positive_definite(c):
        raise NotFiniteTypeError("Cartan matrix is not of finite type")


def _components(nodes: Iterable[int], adj: dict[int, set[int]]) -> list[list[int]]:
    nodes = set(nodes)
    seen: set[int] = set()
    comps = []
    for start in sorted(nodes):
        if start in seen:
            continue
        stack, comp = [start], []
        seen.add(start)
        while stack:
            v = stack.pop()
            comp.append(v)
            for u in adj[v] & nodes:
                if u not in seen:
                    seen.add(u)
                    stack.append(u)
        comps.append(sorted(comp))
    return comps


def _walk(start: int, prev: int | None, comp: set[int], adj: dict[int, set[int]]) -> list[int]:
    path = [start]
    while True:
        nxt = [u for u in adj[path[-1]] & comp if u != prev and u not in path]
        if not nxt:
            return path
        prev = path[-1]
        path.append(nxt[0])


def classify_component(comp: Sequence[int], adj: dict[int, set[int]]) -> tuple[str, tuple[int, ...]]:
    """Type label and canonical node order of a connected simply-laced diagram.

    Chains are listed from their smaller end; branched diagrams list the
    trivalent node first and then each arm outward, arms sorted by
    (length, first node).
    """
    cset = set(comp)
    n = len(comp)
    deg = {v: len(adj[v] & cset) for v in comp}
    branch = [v for v in comp if deg[v] == 3]
    if not branch:
        ends = sorted(v for v in comp if deg[v] <= 1)
        return f"A{n}", tuple(_walk(ends[0], None, cset, adj))
    if len(branch) != 1 or max(deg.values()) > 3:
        raise NotFiniteTypeError(f"component {comp} is not a finite-type diagram")
    center = branch[0]
    arms = sorted((_walk(u, center, cset, adj) for u in adj[center] & cset), key=lambda a: (len(a), a[0]))
    lens = tuple(len(a) for a in arms)
    if lens[:2] == (1, 1):
        label = f"D{n}"
    elif lens in ((1, 2, 2), (1, 2, 3), (1, 2, 4)):
        label = f"E{n}"
    else:
        raise NotFiniteTypeError(f"component {comp} is not a finite-type diagram")
    return label, (center,) + tuple(v for a in arms for v in a)


_WEYL_ORDER_CACHE: dict[str, int] = {"E6": 51_840, "E7": 2_903_040, "E8": 696_729_600}


def weyl_order_of_type(label: str) -> int:
    from math import factorial

    family, n = label[0], int(label[1:])
    if family == "A":
        return factorial(n + 1)
    if family == "D":
        return 2 ** (n - 1) * factorial(n)
    return _WEYL_ORDER_CACHE[label]


@dataclass(frozen=True, eq=False)
class RootDatum:
    cartan: np.ndarray
    type_label: str
    positive_roots: tuple[tuple[int, ...], ...] = field(repr=False)

    @property
    def rank(self) -> int:
        return self.cartan.shape[0]

    @property
    def nodes(self) -> tuple[int, ...]:
        return tuple(range(1, self.rank + 1))

    @cached_property
    def adjacency(self) -> dict[int, set[int]]:
        return {
            i: {j for j in self.nodes if j != i and self.cartan[i - 1, j - 1] != 0}
            for i in self.nodes
        }

    @property
    def diagram_edges(self) -> list[tuple[int, int]]:
        return [(i, j) for i in self.nodes for j in sorted(self.adjacency[i]) if i < j]

    @cached_property
    def root_array(self) -> np.ndarray:
        """Positive roots as an (N, rank) integer array in simple-root coordinates."""
        return np.array(self.positive_roots, dtype=np.int64)

    @cached_property
    def root_index(self) -> dict[tuple[int, ...], int]:
        return {r: k for k, r in enumerate(self.positive_roots)}

    @cached_property
    def cartan_inverse(self) -> tuple[tuple[Fraction, ...], ...]:
        n = self.rank
        a = [[Fraction(int(x)) for x in row] + [Fraction(int(i == j)) for j in range(n)]
             for i, row in enumerate(self.cartan)]
        for k in range(n):
            p = next(i for i in range(k, n) if a[i][k] != 0)
            a[k], a[p] = a[p], a[k]
            piv = a[k][k]
            a[k] = [x / piv for x in a[k]]
            for i in range(n):
                if i != k and a[i][k] != 0:
                    f = a[i][k]
                    a[i] = [x - f * y for x, y in zip(a[i], a[k])]
        return tuple(tuple(row[n:]) for row in a)

    @cached_property
    def height_form(self) -> np.ndarray:
        """Integer vector h with h . v > 0 iff the omega-coordinate vector v is a positive root.

        Proportional to the height functional (sum of simple-root coordinates).
        """
        from math import lcm

        col_sums = [sum(self.cartan_inverse[i][j] for i in range(self.rank)) for j in range(self.rank)]
        den = lcm(*(c.denominator for c in col_sums))
        return np.array([int(c * den) for c in col_sums], dtype=np.int64)

    def __repr__(self) -> str:
        return f"RootDatum({self.type_label}, rank={self.rank}, |Phi+|={len(self.positive_roots)})"


def _generate_positive_roots(cartan: np.ndarray) -> tuple[tuple[int, ...], ...]:
    n = cartan.shape[0]
    simple = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    found = set(simple)
    frontier = list(simple)
    while frontier:
        nxt = []
        for beta in frontier:
            for i in range(n):
                p = sum(beta[j] * int(cartan[i, j]) for j in range(n))
                if p == 0:
                    continue
                gamma = tuple(beta[j] - (p if j == i else 0) for j in range(n))
                if all(c >= 0 for c in gamma) and any(gamma) and gamma not in found:
                    found.add(gamma)
                    nxt.append(gamma)
        if len(found) > _MAX_ROOTS:
            raise NotFiniteTypeError("root closure did not terminate")
        frontier = nxt
    return tuple(sorted(found))


def _label_for_cartan(cartan: np.ndarray) -> str:
    n = cartan.shape[0]
    adj = {i: {j for j in range(1, n + 1) if j != i and cartan[i - 1, j - 1] != 0} for i in range(1, n + 1)}
    comps = _components(range(1, n + 1), adj)
    return "x".join(classify_component(c, adj)[0] for c in comps)


def build_root_datum(source: str | np.ndarray | Sequence[Sequence[int]]) -> RootDatum:
    """Build a root datum from a type label ("E6", "D4", ...) or a Cartan matrix."""
    if isinstance(source, str):
        cartan = cartan_from_type(source)
        label = source.strip().upper()
    else:
        cartan = np.array(source, dtype=np.int64)
        validate_cartan(cartan)
        label = _label_for_cartan(cartan)
    validate_cartan(cartan)
    cartan.setflags(write=False)
    return RootDatum(cartan=cartan, type_label=label, positive_roots=_generate_positive_roots(cartan))


def _check_node(datum: RootDatum, i: int) -> None:
    if not 1 <= i <= datum.rank:
        raise IndexError(f"node {i} out of range 1..{datum.rank}")


def as_weight(values: Iterable) -> Weight:
    return tuple(Fraction(v) for v in values)


def pairing(datum: RootDatum, lam: Sequence, beta: Sequence[int]) -> Fraction:
    """<lam, beta-check> for a positive root beta given in simple-root coordinates."""
    return sum((Fraction(c) * Fraction(x) for c, x in zip(beta, lam) if c), Fraction(0))


def simple_root(datum: RootDatum, i: int) -> tuple[int, ...]:
    _check_node(datum, i)
    return tuple(int(j == i) for j in datum.nodes)


def simple_root_as_weight(datum: RootDatum, i: int) -> Weight:
    _check_node(datum, i)
    return tuple(Fraction(int(x)) for x in datum.cartan[:, i - 1])


def root_as_weight(datum: RootDatum, beta: Sequence[int]) -> Weight:
    v = datum.cartan @ np.asarray(beta, dtype=np.int64)
    return tuple(Fraction(int(x)) for x in v)


def levi_roots(datum: RootDatum, theta: Iterable[int]) -> list[tuple[int, ...]]:
    """Positive roots lying in the span of the simple roots in theta."""
    outside = [j - 1 for j in datum.nodes if j not in set(theta)]
    return [b for b in datum.positive_roots if all(b[j] == 0 for j in outside)]


def rho_levi(datum: RootDatum, theta: Iterable[int]) -> Weight:
    theta = set(theta)
    for j in theta:
        _check_node(datum, j)
    total = np.zeros(datum.rank, dtype=np.int64)
    for beta in levi_roots(datum, theta):
        total += datum.cartan @ np.array(beta, dtype=np.int64)
    return tuple(Fraction(int(x), 2) for x in total)


def complement(datum: RootDatum, nodes: Iterable[int]) -> frozenset[int]:
    return frozenset(datum.nodes) - frozenset(nodes)


def subdiagram_components(datum: RootDatum, theta: Iterable[int]) -> list[tuple[str, tuple[int, ...]]]:
    theta = set(theta)
    comps = _components(theta, datum.adjacency)
    return [classify_component(c, datum.adjacency) for c in comps]


def diagram_automorphism(datum: RootDatum) -> dict[int, int]:
    """The opposition involution i -> j with -w_long(alpha_i) = alpha_j.

    E6: 1<->6, 3<->5.  A_n: i<->n+1-i.  D_n, n odd: swaps the two short arms.
    D_n with n even, E7, E8: identity (for D4 this is the trivial choice among
    the diagram symmetries).  Only the E6 involution is consumed downstream.
    """
    perm = {i: i for i in datum.nodes}
    for label, order in subdiagram_components(datum, datum.nodes):
        n = len(order)
        if label.startswith("A"):
            for k, v in enumerate(order):
                perm[v] = order[n - 1 - k]
        elif label.startswith("D") and n % 2 == 1:
            perm[order[1]], perm[order[2]] = order[2], order[1]
        elif label == "E6":
            # order: center, short arm, then the two length-2 arms
            a, b = order[2:4], order[4:6]
            for x, y in zip(a, b):
                perm[x], perm[y] = y, x
    return perm


def weyl_subgroup_order(datum: RootDatum, theta: Iterable[int]) -> int:
    out = 1
    for label, _ in subdiagram_components(datum, theta):
        out *= weyl_order_of_type(label)
    return out
