import pytest

from unitfrac.construction import Partition, construct

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def seq_1():
    return construct(Partition(1, (1,)))


@pytest.fixture(scope="session")
def seq_11():
    return construct(Partition(2, (1, 1)))


@pytest.fixture(scope="session")
def seq_2():
    return construct(Partition(2, (2,)))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
