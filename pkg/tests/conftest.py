"""Shared pytest wiring: criterion markers and the acceptance summary."""

import pytest

_RESULTS: dict[int, tuple[str, str]] = {}


def pytest_runtest_makereport(item, call):
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    n, title = mark.args
    if call.when == "call" or (call.when == "setup" and call.excinfo is not None):
        ok = call.excinfo is None
        prev = _RESULTS.get(n, ("PASS", title))[0]
        _RESULTS[n] = ("PASS" if ok and prev == "PASS" else "FAIL", title)


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_RESULTS):
        status, title = _RESULTS[n]
        terminalreporter.write_line(f"criterion {n}: {status}  {title}")
