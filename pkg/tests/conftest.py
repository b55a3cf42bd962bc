import random

import pytest


_criteria: dict[str, str] = {}


@pytest.fixture
def rng():
    return random.Random(12345)


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.failed):
        return
    for name, value in report.user_properties:
        if name == "criterion":
            _criteria[value] = "PASS" if report.passed else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_criteria, key=lambda c: int(c.split()[0])):
        terminalreporter.write_line(f"criterion {key}: {_criteria[key]}")
