import numpy as np
import pytest

from pacert.spine import TransitionMatrix


def dense_radius(T: TransitionMatrix) -> float:
    """Spectral radius from a dense floating-point eigensolver (oracle only)."""
    if T.dim == 0:
        return 0.0
    return float(max(abs(np.linalg.eigvals(np.array(T.to_dense(), dtype=float)))))


def dfs_row_counts(T: TransitionMatrix, l: int) -> list[int]:
    """Number of length-l paths from each vertex by walking every arc sequence."""
    dense = T.to_dense()
    d = len(dense)

    def walk(v, depth):
        if depth == 0:
            return 1
        return sum(dense[v][u] * walk(u, depth - 1) for u in range(d) if dense[v][u])

    return [walk(v, l) for v in range(d)]


@pytest.fixture
def fib():
    return TransitionMatrix.from_dense([[1, 1], [1, 0]])


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for num in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[num])
