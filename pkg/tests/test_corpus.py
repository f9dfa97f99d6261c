import subprocess
import sys
from pathlib import Path

import pytest

from fiberlab.corpus import load_entries, load_golden, run_corpus

SCRIPTS = Path(__file__).resolve().parents[1] / "scripts"


@pytest.fixture(scope="module")
def results():
    return {r.name: r for r in run_corpus()}


def test_golden_covers_every_entry():
    assert sorted(load_golden()) == sorted(n for n, _ in load_entries())


@pytest.mark.parametrize("name", [n for n, _ in load_entries()])
def test_entry_passes_audit(results, name):
    r = results[name]
    assert r.ok, [(c.name, c.detail) for c in r.checks if not c.ok]
    assert any(c.name.startswith("golden") for c in r.checks)


@pytest.mark.parametrize("script,args", [("corpus_audit.py", ["--failures-only"]),
                                         ("ramification_scan.py", ["--max-mult", "4", "--max-factor", "2"])])
def test_scripts_run(script, args):
    out = subprocess.run([sys.executable, str(SCRIPTS / script), *args], capture_output=True, text=True)
    assert out.returncode == 0, out.stdout + out.stderr
