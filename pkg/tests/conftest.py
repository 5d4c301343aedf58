import numpy as np
import pytest

from mobius_sense.mobius import Mobius2x2
from mobius_sense.polycore import HomMatrixPolynomial


def rand_poly(rng, n, k, m=None, complex_=True):
    m = n if m is None else m
    B = rng.standard_normal((k + 1, m, n))
    if complex_:
        B = B + 1j * rng.standard_normal((k + 1, m, n))
    return HomMatrixPolynomial(B)


def rand_unitary(rng):
    Z = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    Q, R = np.linalg.qr(Z)
    return Mobius2x2.from_matrix(Q * (np.diag(R) / np.abs(np.diag(R))))


def rand_mobius(rng, cond_max=100.0):
    """Random complex 2x2 with cond_2 <= cond_max."""
    s = 10 ** rng.uniform(0, np.log10(cond_max))
    U, W = rand_unitary(rng).matrix, rand_unitary(rng).matrix
    scale = rng.uniform(0.5, 2.0)
    return Mobius2x2.from_matrix(scale * U @ np.diag([1.0, 1.0 / s]) @ W)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# acceptance results: criterion id -> list of (label, passed, detail)
ACCEPTANCE: dict[int, list] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for cid in sorted(ACCEPTANCE):
        parts = ACCEPTANCE[cid]
        ok = all(p for _, p, _ in parts)
        terminalreporter.write_line(f"criterion {cid:2d}: {'PASS' if ok else 'FAIL'}")
        for label, p, detail in parts:
            terminalreporter.write_line(f"    {'ok  ' if p else 'FAIL'} {label}: {detail}")
