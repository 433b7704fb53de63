from __future__ import annotations

import pytest
from hypothesis import settings

# Derandomized so property suites are reproducible headless runs.
settings.register_profile("repro", derandomize=True, deadline=None, max_examples=200)
settings.load_profile("repro")

_CRITERIA: list = []


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(label, text): acceptance criterion reported in the summary")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        label, text = mark.args
        _CRITERIA.append((label, text, "PASS" if rep.passed else "FAIL"))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for label, text, verdict in _CRITERIA:
        terminalreporter.write_line(f"{verdict}  criterion {label}: {text}")
