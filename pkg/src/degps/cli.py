"""Command line: degps {scan, analyze, weyl, diff-golden, selftest}.

Exit codes: 0 success, 1 golden diff or failed check, 2 usage/config error,
3 soundness error (a branching bound exceeded a multiplicity).
"""
from __future__ import annotations

import argparse
import json
import logging
import re
import sys
import time
from fractions import Fraction
from pathlib import Path

from .analyzer import classify
from .branching import SoundnessError
from .catalog import (ConfigError, RunConfig, diff_golden, golden_corank2_preferences, load_datum, load_golden,
                      plan_scan, read_report, record_row, run_scan, write_reports)
from .exponent import Triple
from .jacquet import maximal_theta
from .rootdata import RootDatumError, weyl_subgroup_order
from .weyl import _cache_path, cache_dir, minimal_coset_indices, weyl_table

EXIT_OK, EXIT_DIFF, EXIT_USAGE, EXIT_SOUNDNESS = 0, 1, 2, 3

_NEG_VALUE = re.compile(r"^-\d[\d/,.\-]*$")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _protect_negative_values(argv: list[str]) -> list[str]:
    """Let values such as -1/2 or -3,-1/2 through argparse; Fraction ignores the leading space."""
    return [" " + a if _NEG_VALUE.match(a) else a for a in argv]


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _rational_list(text: str) -> tuple[Fraction, ...]:
    return tuple(_rational(x) for x in text.split(",") if x.strip())


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--group", default="E6", help="Cartan type label (default E6)")
    common.add_argument("--cartan", help="file with a Cartan matrix (rank, then rows); overrides --group")
    common.add_argument("--cache-dir", help="Weyl table cache directory (else $DEGPS_CACHE_DIR or ~/.cache/degps)")
    common.add_argument("-v", "--verbose", action="store_true")

    p = _Parser(prog="degps", description="Classify degenerate principal series of simply-laced groups.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sc = sub.add_parser("scan", parents=[common], help="classify every candidate point")
    sc.add_argument("--parabolic", type=_int_list, help="comma-separated maximal parabolics (default all)")
    sc.add_argument("--orders", type=_int_list, help="character orders (default: all admissible)")
    sc.add_argument("--s-list", type=_rational_list, help="explicit s values instead of the candidate set")
    sc.add_argument("--nonpositive", action="store_true", help="keep only s <= 0")
    sc.add_argument("--jobs", type=int, default=1)
    sc.add_argument("--trace", action="store_true", help="store fixpoint traces in the JSON report")
    sc.add_argument("--out", default="reports", help="output directory for report.json and report.tsv")

    an = sub.add_parser("analyze", parents=[common], help="classify one triple [i, s, m]")
    an.add_argument("i", type=int)
    an.add_argument("s", type=_rational)
    an.add_argument("m", type=int, nargs="?", default=1)
    an.add_argument("--trace", action="store_true", help="print every rule application")
    an.add_argument("--out", help="write the record as JSON to this file")

    we = sub.add_parser("weyl", parents=[common], help="Weyl group and coset sizes")
    we.add_argument("--parabolic", type=_int_list)

    dg = sub.add_parser("diff-golden", parents=[common], help="compare a report with the golden table")
    dg.add_argument("report")
    dg.add_argument("--golden", help="golden TSV (default: bundled E6 table)")

    sub.add_parser("selftest", parents=[common], help="run the invariant suites")
    return p


def _config(args) -> RunConfig:
    return RunConfig(group=args.group, cartan_file=args.cartan,
                     parabolics=getattr(args, "parabolic", None), orders=getattr(args, "orders", None),
                     s_list=getattr(args, "s_list", None), nonpositive_only=getattr(args, "nonpositive", False),
                     jobs=getattr(args, "jobs", 1), cache_dir=args.cache_dir, out=getattr(args, "out", None),
                     trace=getattr(args, "trace", False))


def _preferences(datum) -> dict:
    if datum.type_label != "E6":
        return {}
    return golden_corank2_preferences(load_golden())


def cmd_scan(args) -> int:
    cfg = _config(args)
    datum = load_datum(cfg)
    cfg.validate(datum)
    triples = plan_scan(datum, cfg)
    t0 = time.perf_counter()
    rows = run_scan(datum, triples, cfg, _preferences(datum))
    jpath, tpath = write_reports(rows, cfg.out)
    counts = {}
    for r in rows:
        counts[r["verdict"]] = counts.get(r["verdict"], 0) + 1
        print(f"[{r['i']},{r['s']},{r['m']}]\t{'reg' if r['regular'] else 'non-reg'}\t{r['verdict']}\t{r['socle_code']}")
    summary = ", ".join(f"{k} {v}" for k, v in sorted(counts.items()))
    print(f"{len(rows)} points ({summary}) in {time.perf_counter() - t0:.1f}s; wrote {jpath} and {tpath}")
    return EXIT_OK


def cmd_analyze(args) -> int:
    cfg = _config(args)
    datum = load_datum(cfg)
    if not 1 <= args.i <= datum.rank:
        raise ConfigError(f"parabolic index out of range 1..{datum.rank}: {args.i}")
    if args.m < 1:
        raise ConfigError("character order must be >= 1")
    t = Triple(args.i, args.s, args.m)
    prefer = _preferences(datum).get((datum.type_label, t.i, t.s, t.m))
    rec = classify(datum, t, weyl_table(datum), prefer, trace=args.trace)
    print(f"{datum.type_label} {t}: {'regular' if rec.regular else 'non-regular'}, {rec.verdict}")
    for m in rec.methods:
        print(f"  method: {m}")
    if rec.partner is not None:
        print(f"  partner: {rec.partner} with exponent {rec.partner.exponent}")
    if rec.socle is not None:
        print(f"  socle: {rec.socle.describe()}")
    for ln in rec.certificate_lines:
        print(f"  {ln}")
    if args.out:
        Path(args.out).write_text(json.dumps(record_row(rec), indent=1, sort_keys=True) + "\n")
    return EXIT_OK


def cmd_weyl(args) -> int:
    cfg = _config(args)
    datum = load_datum(cfg)
    cfg.validate(datum)
    path = _cache_path(datum, cache_dir())
    status = "hit" if path.exists() else "miss"
    t0 = time.perf_counter()
    table = weyl_table(datum)
    dt = time.perf_counter() - t0
    print(f"{datum.type_label}: |W| = {len(table)}")
    for i in cfg.parabolics or datum.nodes:
        wm = weyl_subgroup_order(datum, maximal_theta(datum, i))
        reps = len(minimal_coset_indices(table, (), maximal_theta(datum, i)))
        print(f"  P{i}: |W_M| = {wm}, |W^(M,T)| = {reps}")
    print(f"cache: {path} ({status}), {dt:.2f}s")
    return EXIT_OK


def cmd_diff(args) -> int:
    report = read_report(args.report)
    golden = load_golden(args.golden)
    res = diff_golden(report, golden)
    for ln in res.lines:
        print(ln)
    if res.ok:
        print(f"OK: {res.compared} golden rows match")
        return EXIT_OK
    print(f"FAIL: {len(res.lines)} discrepancies ({res.compared} rows compared)")
    return EXIT_DIFF


def cmd_selftest(args) -> int:
    from .selftest import run_selftest

    cfg = _config(args)
    datum = load_datum(cfg)
    failed = 0
    for name, ok, detail in run_selftest(datum):
        failed += not ok
        print(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")
    print(f"{'all checks passed' if not failed else f'{failed} checks failed'}")
    return EXIT_DIFF if failed else EXIT_OK


COMMANDS = {"scan": cmd_scan, "analyze": cmd_analyze, "weyl": cmd_weyl, "diff-golden": cmd_diff,
            "selftest": cmd_selftest}


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(_protect_negative_values(argv))
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    if args.cache_dir:
        RunConfig(cache_dir=args.cache_dir).apply_cache_dir()
    try:
        return COMMANDS[args.command](args)
    except SoundnessError as exc:
        print(f"soundness error: {exc}", file=sys.stderr)
        return EXIT_SOUNDNESS
    except (ConfigError, RootDatumError, FileNotFoundError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
