import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20261015)


def random_spd(rng, p, cond_shift=0.5):
    a = rng.standard_normal((p, p))
    return a @ a.T + cond_shift * np.eye(p)


def random_orthonormal(rng, n, k):
    q, _ = np.linalg.qr(rng.standard_normal((n, k)))
    return q


def random_isometries(rng, n, n1, n2):
    """U1 (n x n1), U2 (n x (n - n2)) with U1 orthogonal to U2."""
    q, _ = np.linalg.qr(rng.standard_normal((n, n)))
    return q[:, :n1], q[:, n2:]


def pytest_terminal_summary(terminalreporter):
    from . import test_acceptance

    lines = test_acceptance.RESULTS
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)
