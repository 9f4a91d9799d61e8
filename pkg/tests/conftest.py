import numpy as np
import pytest

from quconv.encoder import CodeParams, random_encoder


@pytest.fixture
def rng():
    return np.random.default_rng(20261018)


def sample_encoders(params, count, seed=0, gates=30):
    return [random_encoder(params, [seed, i], gates) for i in range(count)]


@pytest.fixture
def qubit_111():
    return CodeParams(2, 1, 1, 1)


@pytest.fixture
def qubit_121():
    return CodeParams(2, 1, 2, 1)


@pytest.fixture
def qutrit_121():
    return CodeParams(3, 1, 2, 1)


def quiet_encoder(p):
    """Memory to memory, ancilla and logical straight to the physical qudits."""
    from quconv.encoder import permutation_encoder

    return permutation_encoder(CodeParams(p, 1, 2, 1), [2, 0, 1], label="quiet")


def leaky_encoder(p):
    """Every logical X leaks into memory and cancels there: a zero-physical loop carries logical weight."""
    from quconv.encoder import SymplecticEncoder, gate_matrix

    params = CodeParams(p, 1, 2, 1)
    E = quiet_encoder(p).matrix
    S = gate_matrix(("sum", 0, 2), 3, p)
    M = E @ np.linalg.matrix_power(S, p - 1) % p
    return SymplecticEncoder(params, M, label="leaky")


def pytest_terminal_summary(terminalreporter):
    from . import test_acceptance

    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in test_acceptance.RESULTS:
            terminalreporter.write_line(line)
