import numpy as np
import pytest

from pdrqa.pdseq import pd_prefix

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def pd_long():
    """x_1 .. x_{2^14 + 512}: long enough for every plot in the suite."""
    return pd_prefix(2 ** 14 + 512)


@pytest.fixture(scope="session")
def acceptance_log():
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def random_words(seed, count, low=2, high=80):
    rng = np.random.default_rng(seed)
    for _ in range(count):
        size = int(rng.integers(low, high))
        yield rng.integers(0, 2, size=size).astype(np.uint8)
