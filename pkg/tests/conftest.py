import numpy as np
import pytest

from classleak import ingest


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def four_points():
    """Negatives {1, 3}, positives {2, 4}."""
    return ingest([(1.0, 0), (3.0, 0), (2.0, 1), (4.0, 1)])


def make_dataset(neg, pos):
    return ingest([(float(x), 0) for x in neg] + [(float(x), 1) for x in pos])


_CRITERIA = {}


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark is not None:
            _CRITERIA[item.nodeid] = (mark.args[0], mark.args[1], "NOT RUN")


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


def pytest_runtest_logreport(report):
    if report.nodeid not in _CRITERIA:
        return
    n, title, state = _CRITERIA[report.nodeid]
    if report.when == "call" or report.failed:
        state = "PASS" if report.passed and state != "FAIL" else "FAIL"
        _CRITERIA[report.nodeid] = (n, title, state)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n, title, state in sorted(_CRITERIA.values()):
        terminalreporter.write_line(f"[{state}] criterion {n:2d}: {title}")
