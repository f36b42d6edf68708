import pytest

from helpers import four_mutant_kills, three_program_matrix


@pytest.fixture
def example_matrix():
    return three_program_matrix()


@pytest.fixture
def kills():
    return four_mutant_kills()


# one visible PASS/FAIL line per acceptance criterion, independent of -s
_acceptance_outcomes = []


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance.py" in report.nodeid:
        _acceptance_outcomes.append((report.nodeid.split("::")[-1], report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance_outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _acceptance_outcomes:
        verdict = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"{name}: {verdict}")
