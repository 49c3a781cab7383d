import datetime as dt
from pathlib import Path

import pytest

from peanut.frame import build_frame

DATA = Path(__file__).parent / "data"

_criteria = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    number, title = marker.args
    if report.when == "call" or (report.when == "setup" and not report.passed):
        status = "PASS" if report.passed else ("SKIP" if report.skipped else "FAIL")
        prev = _criteria.get(number, (title, "PASS"))[1]
        _criteria[number] = (title, status if prev == "PASS" else prev)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        title, status = _criteria[number]
        terminalreporter.write_line(f"criterion {number}: {status}  {title}")


def days(start, n):
    return [start + dt.timedelta(days=i) for i in range(n)]


@pytest.fixture
def data_dir():
    return DATA


@pytest.fixture
def small_frame():
    return build_frame(days(dt.date(2020, 1, 1), 3), {"x": [1.0, None, 3.0]})
