import pytest

from hdgraphon.experiment import bundled_graphon

# Filled by the acceptance module, printed after the run.
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def w1():
    return bundled_graphon("w1")


@pytest.fixture(scope="session")
def w2():
    return bundled_graphon("w2_p07")


@pytest.fixture(scope="session")
def w3():
    return bundled_graphon("w3_p07")


@pytest.fixture(scope="session")
def fig2():
    return [bundled_graphon(f"fig2{c}") for c in "abc"]

