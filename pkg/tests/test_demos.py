import os
import subprocess
import sys

import pytest

DEMO_DIR = os.path.join(os.path.dirname(__file__), os.pardir, "demos")


@pytest.mark.parametrize("name", sorted(os.listdir(DEMO_DIR)))
def test_demo_runs_clean(name):
    path = os.path.join(DEMO_DIR, name)
    proc = subprocess.run(
        [sys.executable, path], capture_output=True, text=True, timeout=120
    )
    assert proc.returncode == 0, proc.stderr
    assert proc.stdout.strip()
