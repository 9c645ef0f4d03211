import time

import numpy as np
import pytest

from qsarmap import fixture_path, load_fixture


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def carcinogenicity():
    return load_fixture("carcinogenicity")


@pytest.fixture(scope="session")
def hept():
    return load_fixture("hept")


@pytest.fixture(scope="session")
def carcinogenicity_csv():
    return str(fixture_path("carcinogenicity"))


@pytest.fixture
def write_csv(tmp_path):
    """Write raw CSV text to a temp file and return its path."""

    def _write(text, name="table.csv"):
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return path

    return _write


_CRITERIA = {}


class CriterionRecorder:
    """Collects one pass/fail line per acceptance criterion."""

    def __init__(self, number, title):
        self.number, self.title = number, title

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb):
        elapsed = time.perf_counter() - self.start
        status = "PASS" if exc_type is None else "FAIL"
        _CRITERIA[self.number] = f"criterion {self.number:2d} {status} ({elapsed:6.2f} s) {self.title}"
        print(_CRITERIA[self.number])
        return False


@pytest.fixture
def criterion():
    return CriterionRecorder


def pytest_terminal_summary(terminalreporter):
    if _CRITERIA:
        terminalreporter.section("acceptance criteria")
        for number in sorted(_CRITERIA):
            terminalreporter.write_line(_CRITERIA[number])
