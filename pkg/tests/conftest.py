import time
from contextlib import contextmanager

import pytest

_LINES = {}


class Recorder:
    @contextmanager
    def __call__(self, number, title, budget, note=""):
        start = time.perf_counter()
        status = "FAIL"
        try:
            yield
            status = "PASS"
        finally:
            elapsed = time.perf_counter() - start
            if status == "PASS" and elapsed > budget:
                status = "FAIL"
                note = f"over time budget {budget}s"
            line = f"criterion {number}: {status}  {title}  ({elapsed:.1f}s)"
            if note and status == "FAIL":
                line += f"  [{note}]"
            _LINES[number] = line
            print(line)
        if elapsed > budget:
            pytest.fail(f"criterion {number} took {elapsed:.1f}s, budget {budget}s")


@pytest.fixture
def criterion():
    return Recorder()


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for key in sorted(_LINES):
            terminalreporter.write_line(_LINES[key])
