#!/usr/bin/env python3
"""Branching trace for I_{P_1}(1, -2): every rule application up to the 27/27 fixpoint."""
import sys

from degps.cli import main

if __name__ == "__main__":
    sys.exit(main(["analyze", "1", "-2", "1", "--trace"]))
