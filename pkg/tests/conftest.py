from __future__ import annotations

import pytest

from alphaflow.ffield import field_make


@pytest.fixture(scope="session")
def f3():
    return field_make(3)


@pytest.fixture(scope="session")
def f5():
    return field_make(5)


@pytest.fixture(scope="session")
def f9():
    return field_make(3, 2)


_CRITERIA: dict[int, list] = {}


def pytest_configure(config):
    for n in range(1, 10):
        config.addinivalue_line("markers", f"criterion_{n}: acceptance criterion {n}")


def pytest_runtest_logreport(report):
    # collect acceptance outcomes so the summary prints one line per criterion
    if "test_acceptance.py" not in report.nodeid or (report.when != "call" and not report.failed):
        return
    marker = next((m for m in report.keywords if m.startswith("criterion_")), None)
    if marker is None:
        return
    n = int(marker.split("_")[1])
    ok, secs = _CRITERIA.get(n, [True, 0.0])
    _CRITERIA[n] = [ok and not report.failed, secs + report.duration]


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    from test_acceptance import CRITERIA

    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        ok, secs = _CRITERIA[n]
        title, budget = CRITERIA[n]
        terminalreporter.write_line(
            f"criterion {n}: {'PASS' if ok else 'FAIL'}  {title}  ({secs:.1f}s, budget {budget})")
