import pytest

from qpermcoh import build_as, build_asd, cycle_graph_adjacency, quotient


@pytest.fixture(scope="session")
def as4():
    return build_as(4)


@pytest.fixture(scope="session")
def A4(as4):
    return quotient(as4[0], 4)


@pytest.fixture(scope="session")
def c4():
    """``A_s(4, d)`` for the oriented 4-cycle."""
    return build_asd(4, cycle_graph_adjacency(1, 4))


# lines recorded by the acceptance suite, replayed after the run so they
# survive output capture
ACCEPTANCE_LINES: list = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
