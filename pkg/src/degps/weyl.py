"""Weyl group enumeration, coset representatives, stabilizers and dominance.

Words are tuples of 1-based node labels read as a left-to-right product, so
``(4, 2, 3, 5, 4)`` is s4 s2 s3 s5 s4 and its rightmost letter acts first.
The action on the omega basis is by integer matrices; the torsion part of an
exponent is acted on by the same matrix mod m.
"""
from __future__ import annotations

import hashlib
import json
import logging
import os
import tempfile
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import lcm
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .exponent import Exponent
from .rootdata import RootDatum, simple_root_as_weight, weyl_subgroup_order  # noqa: F401

log = logging.getLogger(__name__)

CACHE_FORMAT_VERSION = 1
CACHE_ENV = "DEGPS_CACHE_DIR"


def reflection_matrix(datum: RootDatum, i: int) -> np.ndarray:
    """Matrix of s_i on omega coordinates: lam -> lam - lam_i * alpha_i."""
    n = datum.rank
    s = np.eye(n, dtype=np.int64)
    s[:, i - 1] -= datum.cartan[:, i - 1]
    return s


def word_matrix(datum: RootDatum, word: Sequence[int]) -> np.ndarray:
    mat = np.eye(datum.rank, dtype=np.int64)
    for i in word:
        mat = mat @ reflection_matrix(datum, i)
    return mat


@dataclass(frozen=True, eq=False)
class WeylElement:
    word: tuple[int, ...]
    matrix: np.ndarray

    @classmethod
    def from_word(cls, datum: RootDatum, word: Sequence[int]) -> "WeylElement":
        return cls(tuple(word), word_matrix(datum, word))

    @property
    def length(self) -> int:
        return len(self.word)

    def __eq__(self, other) -> bool:
        return isinstance(other, WeylElement) and np.array_equal(self.matrix, other.matrix)

    def __hash__(self) -> int:
        return hash(self.matrix.tobytes())

    def __mul__(self, other: "WeylElement") -> "WeylElement":
        # concatenated word need not be reduced; callers that care go through the table
        return WeylElement(self.word + other.word, self.matrix @ other.matrix)

    def word_str(self) -> str:
        return "-".join(map(str, self.word)) if self.word else "e"

    def __repr__(self) -> str:
        return f"WeylElement({self.word_str()})"


def reflect(datum: RootDatum, i: int, lam: Sequence) -> tuple[Fraction, ...]:
    a = simple_root_as_weight(datum, i)
    c = Fraction(lam[i - 1])
    return tuple(Fraction(x) - c * y for x, y in zip(lam, a))


def apply(datum: RootDatum, w: WeylElement, lam: Exponent) -> Exponent:
    mat = [[int(x) for x in row] for row in w.matrix]
    real = tuple(sum((row[k] * lam.real[k] for k in range(len(row))), Fraction(0)) for row in mat)
    tors = tuple(sum(row[k] * lam.torsion[k] for k in range(len(row))) for row in mat)
    return Exponent(real, tors, lam.m)


# ---------------------------------------------------------------------------
# enumeration


class WeylGroupTable:
    """All elements of W with reduced words, lengths and action matrices."""

    def __init__(self, datum: RootDatum, words: list[tuple[int, ...]], mats: np.ndarray):
        self.datum = datum
        self.words = words
        self.mats = mats
        self.lengths = np.array([len(w) for w in words], dtype=np.int64)
        rho = np.ones(datum.rank, dtype=np.int64)
        images = mats @ rho
        self._index = {tuple(v): k for k, v in enumerate(images.tolist())}
        if len(self._index) != len(words):
            raise RuntimeError("Weyl table has repeated elements")

    def __len__(self) -> int:
        return len(self.words)

    @property
    def order(self) -> int:
        return len(self.words)

    def element(self, k: int) -> WeylElement:
        return WeylElement(self.words[k], self.mats[k])

    def index_of_matrix(self, mat: np.ndarray) -> int:
        return self._index[tuple((mat @ np.ones(self.datum.rank, dtype=np.int64)).tolist())]

    def index_of(self, w: WeylElement) -> int:
        return self.index_of_matrix(w.matrix)

    def canonical(self, w: WeylElement) -> WeylElement:
        """Same element with the table's reduced word."""
        return self.element(self.index_of(w))

    @cached_property
    def identity_index(self) -> int:
        return self.index_of_matrix(np.eye(self.datum.rank, dtype=np.int64))

    @cached_property
    def longest_index(self) -> int:
        return int(np.argmax(self.lengths))

    @property
    def w_long(self) -> WeylElement:
        return self.element(self.longest_index)

    @cached_property
    def simple_root_images_positive(self) -> np.ndarray:
        """(N, rank) bool: w(alpha_j) > 0."""
        simple = np.asarray(self.datum.cartan, dtype=np.int64)  # column j = alpha_j
        imgs = np.einsum("nij,jk->nik", self.mats, simple)  # column j = w(alpha_j)
        heights = np.einsum("j,njk->nk", self.datum.height_form, imgs)
        return heights > 0

    @cached_property
    def inverse_images_positive(self) -> np.ndarray:
        """(N, rank) bool: w^{-1}(alpha_j) > 0, i.e. <w rho, alpha_j-check> > 0."""
        return (self.mats @ np.ones(self.datum.rank, dtype=np.int64)) > 0

    @cached_property
    def letter_masks(self) -> np.ndarray:
        return np.array([sum(1 << (i - 1) for i in set(w)) for w in self.words], dtype=np.int64)

    def parabolic_indices(self, theta: Iterable[int]) -> np.ndarray:
        mask = sum(1 << (j - 1) for j in set(theta))
        return np.nonzero((self.letter_masks & ~mask) == 0)[0]

    def inversion_count(self, k: int) -> int:
        """Number of positive roots sent to negative roots by element k."""
        roots_w = self.datum.cartan @ self.datum.root_array.T  # omega coords, one column per root
        imgs = self.mats[k] @ roots_w
        return int(np.sum(self.datum.height_form @ imgs < 0))


def _enumerate(datum: RootDatum) -> tuple[list[tuple[int, ...]], np.ndarray]:
    n = datum.rank
    gens = [reflection_matrix(datum, i) for i in datum.nodes]
    rho = np.ones(n, dtype=np.int64)
    ident = np.eye(n, dtype=np.int64)
    seen = {tuple(rho.tolist())}
    words: list[tuple[int, ...]] = [()]
    mats = [ident]
    frontier_words = [()]
    frontier = ident[None]
    while len(frontier_words):
        new_words, new_mats = [], []
        for gi, g in enumerate(gens):
            cand = np.einsum("ij,njk->nik", g, frontier)
            keys = (cand @ rho).tolist()
            for k, key in enumerate(keys):
                key = tuple(key)
                if key in seen:
                    continue
                seen.add(key)
                new_words.append((gi + 1,) + frontier_words[k])
                new_mats.append(cand[k])
        words.extend(new_words)
        mats.extend(new_mats)
        frontier_words = new_words
        frontier = np.array(new_mats, dtype=np.int64).reshape(-1, n, n)
    return words, np.array(mats, dtype=np.int64)


def cache_dir() -> Path:
    return Path(os.environ.get(CACHE_ENV) or Path.home() / ".cache" / "degps")


def _cache_path(datum: RootDatum, directory: Path) -> Path:
    tag = hashlib.sha256(datum.cartan.tobytes()).hexdigest()[:12]
    return directory / f"weyl-{datum.type_label}-{tag}-v{CACHE_FORMAT_VERSION}.npz"


def _checksum(words_arr: np.ndarray, mats: np.ndarray) -> str:
    h = hashlib.sha256()
    h.update(words_arr.tobytes())
    h.update(mats.astype(np.int16).tobytes())
    return h.hexdigest()


def _words_array(words: list[tuple[int, ...]]) -> np.ndarray:
    width = max((len(w) for w in words), default=0)
    arr = np.zeros((len(words), max(width, 1)), dtype=np.int8)
    for k, w in enumerate(words):
        arr[k, : len(w)] = w
    return arr


def _load_cache(datum: RootDatum, path: Path):
    try:
        with np.load(path, allow_pickle=False) as data:
            header = json.loads(str(data["header"]))
            words_arr = data["words"]
            mats = data["mats"].astype(np.int64)
    except Exception as exc:  # unreadable or truncated file
        log.warning("ignoring unreadable Weyl cache %s: %s", path, exc)
        return None
    ok = (
        header.get("format_version") == CACHE_FORMAT_VERSION
        and header.get("type") == datum.type_label
        and header.get("cartan") == datum.cartan.tolist()
        and header.get("count") == len(words_arr) == len(mats)
        and header.get("checksum") == _checksum(words_arr, mats)
    )
    if not ok:
        log.warning("Weyl cache %s failed validation, recomputing", path)
        return None
    words = [tuple(int(x) for x in row if x) for row in words_arr]
    return words, mats


def _write_cache(datum: RootDatum, path: Path, words, mats) -> None:
    words_arr = _words_array(words)
    header = {
        "format_version": CACHE_FORMAT_VERSION,
        "type": datum.type_label,
        "cartan": datum.cartan.tolist(),
        "count": len(words),
        "checksum": _checksum(words_arr, mats),
    }
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            np.savez(fh, header=np.array(json.dumps(header)), words=words_arr, mats=mats.astype(np.int16))
        os.replace(tmp, path)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise


_TABLES: dict[bytes, WeylGroupTable] = {}


def enumerate_weyl(datum: RootDatum, cache: Path | str | None | bool = None) -> WeylGroupTable:
    """Enumerate W by orbit of rho under simple reflections (BFS => reduced words).

    ``cache`` is a directory, ``None`` for the default location, or ``False``
    to skip the disk cache entirely.
    """
    loaded = None
    path = None
    if cache is not False:
        path = _cache_path(datum, Path(cache) if cache else cache_dir())
        if path.exists():
            loaded = _load_cache(datum, path)
    if loaded is None:
        words, mats = _enumerate(datum)
        if path is not None:
            try:
                _write_cache(datum, path, words, mats)
            except OSError as exc:
                log.warning("could not write Weyl cache %s: %s", path, exc)
    else:
        words, mats = loaded
    return WeylGroupTable(datum, words, mats)


def weyl_table(datum: RootDatum, cache: Path | str | None | bool = None) -> WeylGroupTable:
    """Process-wide memoised :func:`enumerate_weyl`."""
    key = datum.cartan.tobytes()
    if key not in _TABLES:
        _TABLES[key] = enumerate_weyl(datum, cache)
    return _TABLES[key]


# ---------------------------------------------------------------------------
# cosets, orbits, stabilizers


def minimal_coset_indices(table: WeylGroupTable, theta_l: Iterable[int], theta_m: Iterable[int]) -> np.ndarray:
    """Indices of W^{M,L}: w(Phi_M^+) > 0 and w^{-1}(Phi_L^+) > 0."""
    ok = np.ones(len(table), dtype=bool)
    for j in set(theta_m):
        ok &= table.simple_root_images_positive[:, j - 1]
    for j in set(theta_l):
        ok &= table.inverse_images_positive[:, j - 1]
    return np.nonzero(ok)[0]


def minimal_coset_reps(datum: RootDatum, theta_l: Iterable[int], theta_m: Iterable[int],
                       table: WeylGroupTable | None = None) -> list[WeylElement]:
    table = table or weyl_table(datum)
    return [table.element(k) for k in minimal_coset_indices(table, theta_l, theta_m)]


def scale_real(lams: Sequence[Exponent]) -> tuple[np.ndarray, int]:
    den = lcm(*(x.denominator for lam in lams for x in lam.real)) if lams else 1
    arr = np.array([[int(x * den) for x in lam.real] for lam in lams], dtype=np.int64)
    return arr, den


def act_many(table: WeylGroupTable, indices: np.ndarray | None, lam: Exponent) -> list[Exponent]:
    """[w . lam for w in indices] (all of W when indices is None)."""
    mats = table.mats if indices is None else table.mats[indices]
    vec, den = scale_real([lam])
    real = mats @ vec[0]
    tors = (mats @ np.array(lam.torsion, dtype=np.int64)) % lam.m
    out = []
    for r, t in zip(real.tolist(), tors.tolist()):
        out.append(Exponent(tuple(Fraction(x, den) for x in r), tuple(t), lam.m))
    return out


def to_antidominant(datum: RootDatum, lam: Exponent) -> tuple[WeylElement, Exponent]:
    """Move Real(lam) into the closed negative chamber, lowest-index descent first."""
    word: list[int] = []
    cur = lam
    while True:
        j = next((k + 1 for k, x in enumerate(cur.real) if x > 0), None)
        if j is None:
            break
        a = simple_root_as_weight(datum, j)
        c = cur.real[j - 1]
        ct = cur.torsion[j - 1]
        real = tuple(x - c * y for x, y in zip(cur.real, a))
        tors = tuple(x - ct * int(y) for x, y in zip(cur.torsion, a))
        cur = Exponent(real, tors, cur.m)
        word.insert(0, j)
    return WeylElement.from_word(datum, word), cur


def is_antidominant(lam: Exponent) -> bool:
    return all(x <= 0 for x in lam.real)


def _torsion_fixers(table: WeylGroupTable, indices: np.ndarray, lam: Exponent) -> np.ndarray:
    if lam.m == 1 or not lam.has_torsion:
        return indices
    t = np.array(lam.torsion, dtype=np.int64)
    imgs = (table.mats[indices] @ t - t) % lam.m
    return indices[np.all(imgs == 0, axis=1)]


def _generators(table: WeylGroupTable, members: np.ndarray) -> list[int]:
    """Greedy generating set, scanning members by (length, word)."""
    order = sorted(members.tolist(), key=lambda k: (table.lengths[k], table.words[k]))
    ident = table.identity_index
    group = {ident}
    gens: list[int] = []
    for k in order:
        if k in group:
            continue
        gens.append(k)
        frontier = list(group)
        while frontier:
            nxt = []
            for g in frontier:
                for h in gens:
                    p = table.index_of_matrix(table.mats[g] @ table.mats[h])
                    if p not in group:
                        group.add(p)
                        nxt.append(p)
            frontier = nxt
        if len(group) == len(members):
            break
    return gens


@dataclass(frozen=True)
class StabilizerInfo:
    order: int
    generators: tuple[WeylElement, ...]
    antidominant: Exponent
    to_ad: WeylElement  # w with w . lam = antidominant


def stabilizer_indices(table: WeylGroupTable, lam: Exponent) -> tuple[np.ndarray, WeylElement, Exponent]:
    """Indices of Stab_W(lam_ad) (real and torsion fixed), the move to lam_ad, and lam_ad."""
    w, lad = to_antidominant(table.datum, lam)
    zero = [j + 1 for j, x in enumerate(lad.real) if x == 0]
    members = _torsion_fixers(table, table.parabolic_indices(zero), lad)
    return members, w, lad


def stabilizer(datum: RootDatum, lam: Exponent, table: WeylGroupTable | None = None,
               with_generators: bool = True) -> StabilizerInfo:
    table = table or weyl_table(datum)
    members, w, lad = stabilizer_indices(table, lam)
    gens: list[WeylElement] = []
    if with_generators and len(members) > 1:
        zero = [j + 1 for j, x in enumerate(lad.real) if x == 0]
        if len(members) == weyl_subgroup_order(datum, zero):
            ad_gens = [WeylElement.from_word(datum, (j,)) for j in zero]
        else:
            ad_gens = [table.element(k) for k in _generators(table, members)]
        winv = np.round(np.linalg.inv(w.matrix)).astype(np.int64)
        for g in ad_gens:
            conj = winv @ g.matrix @ w.matrix
            gens.append(table.element(table.index_of_matrix(conj)))
    return StabilizerInfo(len(members), tuple(gens), lad, w)


def _closure(table: WeylGroupTable, gens: list[int]) -> set[int]:
    group = {table.identity_index}
    frontier = list(group)
    while frontier:
        nxt = []
        for g in frontier:
            for h in gens:
                p = table.index_of_matrix(table.mats[g] @ table.mats[h])
                if p not in group:
                    group.add(p)
                    nxt.append(p)
        frontier = nxt
    return group


def root_reflection_matrix(datum: RootDatum, beta: Sequence[int]) -> np.ndarray:
    """s_beta on fundamental-weight coordinates: v -> v - <v, beta^vee> beta."""
    b = np.array(beta, dtype=np.int64)
    return np.eye(datum.rank, dtype=np.int64) - np.outer(datum.cartan @ b, b)


def reflection_subgroup_order(datum: RootDatum, lam: Exponent, table: WeylGroupTable | None = None) -> int:
    """Order of the subgroup generated by reflections s_beta with <lam, beta^vee> trivial.

    It is a normal subgroup of Stab_W(lam); the quotient is the R-group, and
    i_T lam restricted to the relevant Levi splits into |R| pieces.
    """
    table = table or weyl_table(datum)
    gens = []
    for beta in datum.positive_roots:
        r = sum(Fraction(c) * x for c, x in zip(beta, lam.real))
        t = sum(c * x for c, x in zip(beta, lam.torsion)) % lam.m
        if r == 0 and t == 0:
            gens.append(table.index_of_matrix(root_reflection_matrix(datum, beta)))
    return len(_closure(table, gens))


def orbit_size(datum: RootDatum, lam: Exponent, table: WeylGroupTable | None = None) -> int:
    table = table or weyl_table(datum)
    return len(table) // stabilizer(datum, lam, table, with_generators=False).order


def orbit(table: WeylGroupTable, lam: Exponent) -> set[Exponent]:
    return set(act_many(table, None, lam))


def same_orbit(table: WeylGroupTable, a: Exponent, b: Exponent) -> bool:
    if a.m != b.m:
        return False
    _, ad_a = to_antidominant(table.datum, a)
    _, ad_b = to_antidominant(table.datum, b)
    if ad_a.real != ad_b.real:
        return False
    zero = [j + 1 for j, x in enumerate(ad_a.real) if x == 0]
    idx = table.parabolic_indices(zero)
    ta = np.array(ad_a.torsion, dtype=np.int64)
    tb = np.array(ad_b.torsion, dtype=np.int64)
    return bool(np.any(np.all((table.mats[idx] @ ta - tb) % a.m == 0, axis=1)))


def orbit_count(table: WeylGroupTable, lam: Exponent) -> int:
    """Number of distinct w . lam, computed on scaled integer rows without building exponents."""
    vec, _ = scale_real([lam])
    real = table.mats @ vec[0]
    tors = (table.mats @ np.array(lam.torsion, dtype=np.int64)) % lam.m
    return len(np.unique(np.hstack([real, tors]), axis=0))


def orbit_with_levi_shape(table: WeylGroupTable, lam: Exponent, free: int, exact: bool = True) -> list[Exponent]:
    """Distinct w . lam with ``free`` (at most ``free`` unless ``exact``) coordinates other than
    (-1, torsion 0), in first-reach order.

    Those are the exponents that can be initial exponents of a character of a
    Levi of corank ``free``.  Filtering happens on integer rows, so only the
    survivors are turned into exponents.
    """
    vec, den = scale_real([lam])
    real = table.mats @ vec[0]
    tors = (table.mats @ np.array(lam.torsion, dtype=np.int64)) % lam.m
    levi = (real == -den) & (tors == 0)
    nfree = table.datum.rank - levi.sum(axis=1)
    keep = np.nonzero(nfree == free if exact else nfree <= free)[0]
    rows = np.hstack([real[keep], tors[keep]])
    _, first = np.unique(rows, axis=0, return_index=True)
    out = []
    for k in sorted(keep[first].tolist()):
        out.append(Exponent(tuple(Fraction(int(x), den) for x in real[k]), tuple(int(x) for x in tors[k]), lam.m))
    return out
