import numpy as np
import pytest

from sympert import orthosymplectic_from_unitary, random_unitary, symplectic_direct_sum


def random_block_orthosymplectic(sizes, seed):
    """Symplectic direct sum of random orthosymplectic blocks of the given half-sizes."""
    blocks = [orthosymplectic_from_unitary(random_unitary(k, seed + 31 * i)) for i, k in enumerate(sizes)]
    return symplectic_direct_sum(*blocks)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
