import runpy
import subprocess
import sys
from pathlib import Path

SCRIPTS = Path(__file__).resolve().parents[1] / "scripts"


def test_independent_rc_check():
    ns = runpy.run_path(str(SCRIPTS / "check_rc_curated_point.py"))
    assert ns["main"]() == 0


def test_trace_script_runs():
    out = subprocess.run([sys.executable, str(SCRIPTS / "trace_worked_example.py")], capture_output=True, text=True)
    assert out.returncode == 0
    assert "branching fixpoint, 27/27" in out.stdout
