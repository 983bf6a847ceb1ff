import numpy as np
import pytest

from fefbloch.states import random_density


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def random_states(d, n, seed, rank=None):
    rng = np.random.default_rng(seed)
    return [random_density(d, rank if rank else int(rng.integers(1, d * d + 1)), rng) for _ in range(n)]


ACCEPTANCE_LINES = []


@pytest.fixture
def record():
    """Collect one summary line per acceptance criterion."""

    def _record(label, ok, detail):
        ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] {label}: {detail}")
        return ok

    return _record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
