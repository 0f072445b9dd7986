import os
import sys
import time

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile("ci", max_examples=40, deadline=None, derandomize=True,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", max_examples=300, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "ci"))

_CRITERIA = {}


class Criterion:
    def __init__(self, number, title, limit):
        self.number, self.title, self.limit = number, title, limit
        self.t0 = time.perf_counter()
        self.elapsed = None
        self.passed = False
        self.note = ""

    def done(self, passed, note=""):
        self.elapsed = time.perf_counter() - self.t0
        within = self.limit is None or self.elapsed < self.limit
        self.passed = bool(passed) and within
        self.note = note if within else f"{note} (over the {self.limit:.0f}s limit)".strip()
        return self.passed


@pytest.fixture
def criterion():
    def make(number, title, limit=None):
        c = Criterion(number, title, limit)
        _CRITERIA[number] = c
        return c
    return make


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        c = _CRITERIA[n]
        t = "n/a" if c.elapsed is None else f"{c.elapsed:.1f}s"
        status = "PASS" if c.passed else "FAIL"
        terminalreporter.write_line(f"criterion {n}: {status}  {c.title}  [{t}] {c.note}".rstrip())
