from __future__ import annotations

import pytest

import acceptance_log
import residue_guard
from doper.funcfield import INF
from doper.operengine import MarkedLine

residue_guard.install()


def pytest_collection_modifyitems(session, config, items):
    # the residue check summarizes every dormant connection of the session, so it runs last
    last = [it for it in items if it.name == "test_criterion_8_residue_rationality"]
    for it in last:
        items.remove(it)
        items.append(it)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if acceptance_log.LINES:
        terminalreporter.section("acceptance criteria")
        for line in acceptance_log.LINES:
            terminalreporter.write_line(line)


def pytest_sessionfinish(session, exitstatus):
    residue_guard.uninstall()


@pytest.fixture
def line3():
    return MarkedLine(3, (0, 1, INF))


@pytest.fixture
def line5():
    return MarkedLine(5, (0, 1, INF))


@pytest.fixture
def line7():
    return MarkedLine(7, (0, 1, INF))
