import math

import numpy as np
import pytest

from qdiscord.spin_model import DEFAULT_G_REF, ModelEvolution, SystemSpec

G = DEFAULT_G_REF
PERIOD = 2 * math.pi / G


def model(n_chain=2, b2=0.75, bw_a=15.0, bw_b=15.0, **kw):
    return ModelEvolution(SystemSpec.from_ratio(n_chain, b2, beta_omega_A=bw_a, beta_omega_B=bw_b, **kw))


def random_density(rng, dim, rank=None):
    rank = rank or dim
    a = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    m = a @ a.conj().T
    return m / np.trace(m)


def random_unitary(rng, dim):
    q, r = np.linalg.qr(rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim)))
    return q * (np.diag(r) / np.abs(np.diag(r)))


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


ACCEPTANCE = []


def record(criterion: str, ok: bool, detail: str) -> None:
    ACCEPTANCE.append(f"[{'PASS' if ok else 'FAIL'}] criterion {criterion}: {detail}")
    assert ok, detail


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
