"""Shared fixtures and independent dense oracles for the test suite."""
from __future__ import annotations

import functools
import itertools

import numpy as np
import pytest

from daqc import spectral
from daqc.hamiltonian import TwoBodyHamiltonian

PAULI = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)


@pytest.fixture
def report():
    """Record one PASS/FAIL line per acceptance criterion."""

    def _report(number: int, ok: bool, detail: str) -> None:
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"
        print(line)
        ACCEPTANCE_LINES.append(line)

    return _report


@pytest.fixture(params=spectral.available_backends())
def backend(request):
    return request.param


def kron_all(ops):
    return functools.reduce(np.kron, ops)


def pauli_string(n, factors: dict) -> np.ndarray:
    """Kronecker product with ``factors[q]`` (a Pauli index) on qubit ``q``, identity elsewhere."""
    eye = np.eye(2, dtype=complex)
    return kron_all([PAULI[factors[q]] if q in factors else eye for q in range(n)])


def dense_oracle(h: TwoBodyHamiltonian) -> np.ndarray:
    """Dense matrix of ``h`` built term by term from Kronecker products."""
    dim = 2 ** h.n_qubits
    out = np.zeros((dim, dim), dtype=complex)
    for (i, j, mu, nu), c in h.couplings.items():
        out += c * pauli_string(h.n_qubits, {i: int(mu), j: int(nu)})
    return out


def random_problem(rng: np.random.Generator, n: int, scale: float = 1.0) -> TwoBodyHamiltonian:
    """Dense problem: every pair, every Pauli combination, uniform on ``[-scale, scale]``."""
    couplings = {}
    for i, j in itertools.combinations(range(n), 2):
        for mu in range(3):
            for nu in range(3):
                couplings[(i, j, mu, nu)] = rng.uniform(-scale, scale)
    return TwoBodyHamiltonian(n, couplings)


def random_zz_source(rng: np.random.Generator, n: int) -> TwoBodyHamiltonian:
    """All-to-all zz source with magnitudes in ``[0.5, 1.5]`` and random signs."""
    couplings = {}
    for i, j in itertools.combinations(range(n), 2):
        couplings[(i, j, 2, 2)] = rng.choice([-1.0, 1.0]) * rng.uniform(0.5, 1.5)
    return TwoBodyHamiltonian(n, couplings)


def random_zz_problem(rng: np.random.Generator, n: int) -> TwoBodyHamiltonian:
    couplings = {}
    for i, j in itertools.combinations(range(n), 2):
        couplings[(i, j, 2, 2)] = rng.uniform(-1.0, 1.0)
    return TwoBodyHamiltonian(n, couplings)


def random_unit_vectors(rng: np.random.Generator, count: int) -> np.ndarray:
    v = rng.normal(size=(count, 3))
    return v / np.linalg.norm(v, axis=1)[:, None]


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)
