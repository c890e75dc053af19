from __future__ import annotations

import pytest

from periodic_zeta import corpus
from periodic_zeta.oracle import census

ACCEPTANCE_KEY = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[ACCEPTANCE_KEY] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(ACCEPTANCE_KEY, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)


@pytest.fixture
def record_criterion(request):
    """Print and remember one PASS/FAIL line for an acceptance criterion."""
    lines = request.config.stash[ACCEPTANCE_KEY]

    def record(label: str, passed: bool, detail: str = "") -> bool:
        line = f"{'PASS' if passed else 'FAIL'}  {label}" + (f"  ({detail})" if detail else "")
        print(line)
        lines.append(line)
        return passed

    return record


@pytest.fixture(scope="session")
def graphs():
    return corpus.load_corpus()


@pytest.fixture(scope="session")
def example():
    return corpus.load("example")


@pytest.fixture(scope="session")
def spectra15(graphs):
    return {name: census(g, 15) for name, g in graphs.items()}
