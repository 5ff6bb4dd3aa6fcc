import os
import time

import pytest

from degps.catalog import RunConfig, golden_corank2_preferences, load_golden, plan_scan, run_scan
from degps.rootdata import build_root_datum
from degps.weyl import weyl_table


@pytest.fixture(scope="session")
def e6():
    return build_root_datum("E6")


@pytest.fixture(scope="session")
def e6_table(e6):
    return weyl_table(e6)


@pytest.fixture(scope="session")
def golden():
    return load_golden()


@pytest.fixture(scope="session")
def e6_scan(e6, e6_table, golden):
    """Rows of the full scan (both signs of s) over all six maximal parabolics, plus wall time."""
    cfg = RunConfig(jobs=int(os.environ.get("DEGPS_TEST_JOBS", "1")))
    triples = plan_scan(e6, cfg)
    t0 = time.perf_counter()
    rows = run_scan(e6, triples, cfg, golden_corank2_preferences(golden))
    return rows, time.perf_counter() - t0
