import pytest

from rfgrowth.words import Presentation, parse_presentation


@pytest.fixture(scope="session")
def Z():
    return Presentation.free(1)


@pytest.fixture(scope="session")
def F2():
    return Presentation.free(2)


@pytest.fixture(scope="session")
def surface():
    return parse_presentation("gens: a,b,c,d\nrels: [a,b][c,d]").with_certificate()


ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def acceptance_log():
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
