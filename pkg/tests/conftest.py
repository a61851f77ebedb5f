import time
from contextlib import contextmanager

import pytest

ACCEPTANCE_LINES = []


class Criterion:
    """Collects the worst residual of one acceptance criterion and its wall time."""

    def __init__(self, number, title, limit, budget):
        self.number, self.title, self.limit, self.budget = number, title, limit, budget
        self.worst = 0.0
        self.margin = None
        self.failures = []
        self.elapsed = 0.0

    def observe(self, value, label=""):
        value = float(value)
        if not value <= self.limit:
            self.failures.append(f"{label}: {value:.3e}")
        self.worst = max(self.worst, value)

    def observe_margin(self, value, label=""):
        """Track a margin that must stay strictly positive."""
        value = float(value)
        if not value > 0:
            self.failures.append(f"{label}: margin {value:.3e}")
        self.margin = value if self.margin is None else min(self.margin, value)

    def require(self, ok, label):
        if not ok:
            self.failures.append(label)

    @contextmanager
    def timed(self):
        start = time.perf_counter()
        try:
            yield self
        finally:
            self.elapsed = time.perf_counter() - start
            self.require(self.elapsed <= self.budget, f"runtime {self.elapsed:.2f}s over {self.budget:g}s")
            status = "PASS" if not self.failures else "FAIL"
            if self.margin is not None:
                measure = f"smallest margin {self.margin:.2e} (must be > 0)"
            else:
                measure = f"worst {self.worst:.2e} (limit {self.limit:.0e})"
            line = (f"criterion {self.number:2d} {status}  {self.title}: {measure},"
                    f" {self.elapsed:.2f}s (budget {self.budget:g}s)")
            if self.failures:
                line += "  [" + "; ".join(self.failures[:3]) + "]"
            ACCEPTANCE_LINES.append(line)
            print(line)

    def check(self):
        assert not self.failures, "; ".join(self.failures)


@pytest.fixture
def criterion():
    return Criterion


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
