"""Collects acceptance-criterion outcomes and prints one line per criterion."""
from __future__ import annotations

import pytest

CRITERIA = {
    1: "oracle equivalence, exhaustive sweep",
    2: "sampling bound and block profile",
    3: "significance fixture",
    4: "query-loop invariants on 10^6 queries",
    5: "instrumented query-cost bounds",
    6: "difference-cover offset lemma",
    7: "Las Vegas verification over 100 seeds",
    8: "derandomization certificate",
    9: "space scaling from the bench sweep",
    10: "periodicity lemmas",
}

_outcomes: dict[int, list[bool]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion n")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    number = marker.args[0]
    if report.when == "call" or (report.when == "setup" and not report.passed):
        _outcomes.setdefault(number, []).append(report.passed)


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for number, title in CRITERIA.items():
        results = _outcomes.get(number)
        if results is None:
            status = "NOT RUN"
        else:
            status = "PASS" if all(results) else "FAIL"
        terminalreporter.write_line(f"criterion {number:2d}: {status:7s} {title}")
