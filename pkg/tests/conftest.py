"""Suite-wide fixtures: the acceptance scoreboard and the witness registry."""

import pytest


def pytest_configure(config):
    config._acceptance_lines = []


@pytest.fixture(scope="session")
def criteria(pytestconfig):
    """Scoreboard the acceptance tests append one PASS/FAIL line each to."""
    return pytestconfig._acceptance_lines


@pytest.fixture(scope="session")
def witness_registry():
    """(ts, tau, witness, mode) tuples collected while the suite runs.

    The final acceptance check synthesizes a net from every entry and
    verifies it implements its system under its mode.
    """
    return []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "_acceptance_lines", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
