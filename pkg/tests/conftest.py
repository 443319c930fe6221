import pytest

from coprime_approx.state import build

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def state16():
    return build(16)


@pytest.fixture(scope="session")
def state2():
    return build(2)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
