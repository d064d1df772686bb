from __future__ import annotations

import pytest
from hypothesis import settings

settings.register_profile("ultrakit", deadline=None, print_blob=True)
settings.load_profile("ultrakit")

_RESULTS: list[tuple[str, str, str, float]] = []


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None or rep.when != "call":
        return
    number, title = marker.args
    _RESULTS.append((number, title, "PASS" if rep.passed else "FAIL", rep.duration))


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, status, seconds in sorted(_RESULTS, key=lambda r: int(r[0])):
        terminalreporter.write_line(f"[{status}] criterion {number}: {title} ({seconds:.2f} s)")
