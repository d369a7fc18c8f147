import time
from contextlib import contextmanager

import pytest

CRITERIA = []


@pytest.fixture
def criterion():
    """Time a criterion body and record one pass/fail line for the terminal summary."""

    @contextmanager
    def run(number, title, limit=None):
        t0 = time.perf_counter()
        ok = False
        try:
            yield
            ok = True
        finally:
            elapsed = time.perf_counter() - t0
            late = limit is not None and elapsed >= limit
            status = "PASS" if ok and not late else "FAIL"
            budget = f" (limit {limit:g}s)" if limit is not None else ""
            CRITERIA.append((number, f"criterion {number} {title}: {status} in {elapsed:.2f}s{budget}"))
        assert not late, f"criterion {number} took {elapsed:.2f}s, limit {limit}s"

    return run


def pytest_terminal_summary(terminalreporter):
    if CRITERIA:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(CRITERIA):
            terminalreporter.write_line(line)
