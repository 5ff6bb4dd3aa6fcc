#!/usr/bin/env python3
"""Full E6 scan, report files, golden diff.  Usage: run_e6_scan.py [OUT_DIR] [JOBS]"""
import sys

from degps.cli import main

if __name__ == "__main__":
    out = sys.argv[1] if len(sys.argv) > 1 else "reports"
    jobs = sys.argv[2] if len(sys.argv) > 2 else "1"
    code = main(["scan", "--group", "E6", "--jobs", jobs, "--out", out])
    if code == 0:
        code = main(["diff-golden", f"{out}/report.tsv"])
    sys.exit(code)
