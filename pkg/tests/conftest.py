from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from fiberlab.corpus import load_entries, resolve_fiber
from fiberlab.io import FiberDocument

settings.register_profile("fiberlab", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("fiberlab")

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def entries():
    return load_entries()


@pytest.fixture(scope="session")
def corpus_fibers(entries):
    return {n: d.fiber for n, d in entries if isinstance(d, FiberDocument)}


@pytest.fixture(scope="session")
def fiber():
    return resolve_fiber


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import LINES
    except ImportError:
        return
    if LINES:
        terminalreporter.section("acceptance criteria")
        for n in sorted(LINES):
            terminalreporter.write_line(LINES[n])
