"""Golden tables, scan planning, report files and regression diffs."""
from __future__ import annotations

import csv
import io
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

from .analyzer import (ClassificationRecord, candidate_points, classify, is_regular,
                       regular_reducibility_values, torsion_orders)
from .exponent import Triple, format_rational, parse_rational
from .rootdata import RootDatum, build_root_datum, read_cartan_file
from .weyl import CACHE_ENV, weyl_table

TSV_FIELDS = ("group", "i", "s", "m", "regular", "verdict", "socle", "partner")
SOCLE_CODES = {
    "unique_sub_case_I": "I",
    "unique_sub_case_II": "II",
    "curated_case_III": "III",
    "unique_sub_regular": "-",
    "unique_sub_positive_s": "sub",
}


class ConfigError(ValueError):
    """Invalid run configuration (exit code 2)."""


@dataclass(frozen=True)
class GoldenRow:
    group: str
    i: int
    s: Fraction
    m: int
    regular: bool
    verdict: str
    socle: str
    partner: str
    citation: str

    @property
    def key(self) -> tuple[str, int, Fraction, int]:
        return (self.group, self.i, self.s, self.m)


def _read_tsv(text: str) -> list[dict[str, str]]:
    body = "\n".join(ln for ln in text.splitlines() if ln and not ln.startswith("#"))
    return list(csv.DictReader(io.StringIO(body), delimiter="\t"))


def load_golden(path: str | Path | None = None) -> list[GoldenRow]:
    if path is None:
        text = resources.files("degps.data").joinpath("e6_golden.tsv").read_text()
    else:
        text = Path(path).read_text()
    rows = []
    for r in _read_tsv(text):
        rows.append(GoldenRow(r["group"], int(r["i"]), parse_rational(r["s"]), int(r["m"]),
                              r["regular"] == "yes", r["verdict"], r.get("socle", "-"),
                              r.get("partner", "-"), r.get("citation", "")))
    return rows


def golden_corank2_preferences(rows: Iterable[GoldenRow]) -> dict[tuple, str]:
    return {row.key: row.partner for row in rows if row.partner.startswith("[[")}


# ---------------------------------------------------------------------------
# configuration


@dataclass
class RunConfig:
    group: str = "E6"
    cartan_file: str | None = None
    parabolics: tuple[int, ...] | None = None
    orders: tuple[int, ...] | None = None
    s_list: tuple[Fraction, ...] | None = None
    nonpositive_only: bool = False
    jobs: int = 1
    cache_dir: str | None = None
    out: str | None = None
    trace: bool = False

    def validate(self, datum: RootDatum) -> None:
        if self.jobs < 1:
            raise ConfigError("--jobs must be >= 1")
        if self.parabolics is not None:
            bad = [i for i in self.parabolics if not 1 <= i <= datum.rank]
            if bad:
                raise ConfigError(f"parabolic index out of range 1..{datum.rank}: {bad}")
        if self.orders is not None and any(m < 1 for m in self.orders):
            raise ConfigError("character orders must be >= 1")

    def apply_cache_dir(self) -> None:
        if self.cache_dir:
            os.environ[CACHE_ENV] = self.cache_dir


def load_datum(cfg: RunConfig) -> RootDatum:
    if cfg.cartan_file:
        return build_root_datum(read_cartan_file(cfg.cartan_file))
    return build_root_datum(cfg.group)


# ---------------------------------------------------------------------------
# scan planning


def scan_columns(datum: RootDatum, i: int, orders: Sequence[int]) -> list[Fraction]:
    """Union over the orders of the non-regular points and the regular points of reducibility."""
    table = weyl_table(datum)
    cols = {s for s, m in candidate_points(datum, i, table) if m in orders}
    for m in orders:
        cols.update(s for s in regular_reducibility_values(datum, i, m) if is_regular(datum, Triple(i, s, m), table))
    return sorted(cols)


def plan_scan(datum: RootDatum, cfg: RunConfig) -> list[Triple]:
    out = []
    for i in cfg.parabolics or datum.nodes:
        orders = cfg.orders or torsion_orders(datum, i)
        cols = list(cfg.s_list) if cfg.s_list is not None else scan_columns(datum, i, orders)
        if cfg.nonpositive_only:
            cols = [s for s in cols if s <= 0]
        out += [Triple(i, s, m) for m in orders for s in cols]
    return sorted(out, key=lambda t: (t.i, t.m, t.s))


# ---------------------------------------------------------------------------
# running


_WORKER: dict = {}


def _init_worker(label: str | None, cartan: list | None, cache_dir: str | None) -> None:
    if cache_dir:
        os.environ[CACHE_ENV] = cache_dir
    datum = build_root_datum(cartan if cartan is not None else label)
    _WORKER["datum"] = datum
    _WORKER["table"] = weyl_table(datum)


def _classify_task(args) -> dict:
    i, s, m, prefer, trace = args
    rec = classify(_WORKER["datum"], Triple(i, Fraction(s), m), _WORKER["table"], prefer, trace)
    return record_row(rec)


def record_row(rec: ClassificationRecord) -> dict:
    row = rec.to_dict()
    row["socle_code"] = "-" if rec.socle is None else SOCLE_CODES.get(rec.socle.kind, f"<={rec.socle.length_bound}")
    row["clamps"] = rec.clamps
    row["automatic_verdict"] = rec.automatic_verdict
    return row


def run_scan(datum: RootDatum, triples: Sequence[Triple], cfg: RunConfig,
             preferences: dict | None = None) -> list[dict]:
    preferences = preferences or {}
    tasks = [(t.i, format_rational(t.s), t.m, preferences.get((datum.type_label, t.i, t.s, t.m)), cfg.trace)
             for t in triples]
    cartan = datum.cartan.tolist() if cfg.cartan_file else None
    init = (datum.type_label, cartan, cfg.cache_dir)
    if cfg.jobs == 1:
        _init_worker(*init)
        rows = [_classify_task(a) for a in tasks]
    else:
        with ProcessPoolExecutor(cfg.jobs, initializer=_init_worker, initargs=init) as pool:
            rows = list(pool.map(_classify_task, tasks, chunksize=1))
    return sorted(rows, key=row_key)


def row_key(row: dict) -> tuple:
    return (row["group"], int(row["i"]), int(row["m"]), parse_rational(row["s"]))


# ---------------------------------------------------------------------------
# report files


def to_tsv_line(row: dict) -> list[str]:
    partner = row["partner"]["descriptor"] if isinstance(row.get("partner"), dict) else (row.get("partner") or "-")
    return [row["group"], str(row["i"]), row["s"], str(row["m"]), "yes" if row["regular"] else "no",
            row["verdict"], row.get("socle_code", "-"), partner]


def write_reports(rows: Sequence[dict], out_dir: str | Path, stem: str = "report") -> tuple[Path, Path]:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    jpath, tpath = out_dir / f"{stem}.json", out_dir / f"{stem}.tsv"
    jpath.write_text(json.dumps(list(rows), indent=1, sort_keys=True) + "\n")
    lines = ["\t".join(TSV_FIELDS)] + ["\t".join(to_tsv_line(r)) for r in rows]
    tpath.write_text("\n".join(lines) + "\n")
    return jpath, tpath


def read_report(path: str | Path) -> list[dict]:
    """Rows of a JSON or TSV report, normalised to the TSV fields."""
    text = Path(path).read_text()
    if not text.strip():
        return []
    if text.lstrip().startswith("["):
        rows = json.loads(text)
        return [dict(zip(TSV_FIELDS, to_tsv_line(r))) for r in rows]
    return _read_tsv(text)


# ---------------------------------------------------------------------------
# diff


@dataclass
class DiffResult:
    lines: list[str] = field(default_factory=list)
    compared: int = 0

    @property
    def ok(self) -> bool:
        return not self.lines


def diff_golden(report: Sequence[dict], golden: Sequence[GoldenRow]) -> DiffResult:
    """Compare regularity and verdict for every s <= 0 row; s > 0 rows in the report are ignored."""
    res = DiffResult()
    have = {}
    for r in report:
        key = (r["group"], int(r["i"]), parse_rational(r["s"]), int(r["m"]))
        have[key] = r
    want = {g.key: g for g in golden}
    for key, g in sorted(want.items(), key=lambda kv: (kv[0][1], kv[0][3], kv[0][2])):
        label = f"{key[0]} [{key[1]},{format_rational(key[2])},{key[3]}]"
        r = have.get(key)
        if r is None:
            res.lines.append(f"MISSING {label}")
            continue
        res.compared += 1
        reg = r["regular"] in (True, "yes")
        if reg != g.regular or r["verdict"] != g.verdict:
            res.lines.append(f"DIFF {label}: got {'reg' if reg else 'non-reg'} {r['verdict']}, "
                             f"expected {'reg' if g.regular else 'non-reg'} {g.verdict} ({g.citation})")
    groups = {g.group for g in golden}
    parabolics = {(g.group, g.i) for g in golden}
    for key in sorted(set(have) - set(want), key=lambda k: (k[1], k[3], k[2])):
        if key[0] in groups and (key[0], key[1]) in parabolics and key[2] <= 0:
            res.lines.append(f"EXTRA {key[0]} [{key[1]},{format_rational(key[2])},{key[3]}]")
    return res
