"""Shared test hooks.

Tests carrying ``@pytest.mark.acceptance(num, label)`` feed a summary
table printed after the run: one PASS/FAIL line per criterion, so the
acceptance gate can be read off without scanning individual test ids.
"""

import pytest

_RESULTS = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    num, label = marker.args
    if report.when == "call":
        _RESULTS[num] = (label, report.passed)
    elif report.failed:
        # setup or teardown error counts against the criterion
        _RESULTS[num] = (label, False)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_RESULTS):
        label, ok = _RESULTS[num]
        verdict = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"criterion {num}: {verdict}  {label}")
