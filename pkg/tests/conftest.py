import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from crossdm.design import example_design
from crossdm.synthesis import synthesize_bank

GOLDEN = Path(__file__).parent / "golden"


@pytest.fixture(scope="session")
def demo_spec():
    return example_design()


@pytest.fixture(scope="session")
def demo_bank(demo_spec):
    return synthesize_bank(demo_spec)


_acceptance_lines = []


@pytest.fixture
def record():
    """Log one acceptance line; the summary is printed at session end."""
    def _record(name, ok, detail=""):
        _acceptance_lines.append(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
        return ok
    return _record


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_lines:
            terminalreporter.write_line(line)
