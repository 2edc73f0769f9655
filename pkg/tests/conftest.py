import mpmath
import pytest


@pytest.fixture
def oracle():
    """mpmath context at 200 significant digits, restored afterwards."""
    with mpmath.workdps(200):
        yield mpmath.mp


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for number in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[number])
