"""Two-body Hamiltonians and the coupling-ratio matrix.

A two-body Hamiltonian on ``N`` qubits is stored sparsely as a map
``(i, j, mu, nu) -> h`` with ``i < j`` and Pauli axes indexed
``x=0, y=1, z=2``.  The coupling-ratio matrix is the dense ``3N x 3N``
real symmetric matrix ``B`` with

    B[3i+mu, 3j+nu] = T * h_P[i, j, mu, nu] / h_S[i, j, z, z]      (i != j)

whose 3x3 diagonal blocks are free (they correspond to no two-body term)
and are fixed afterwards so that ``B`` is positive-semidefinite.

Per-qubit 3-vectors are plain ``ndarray`` of shape ``(3,)``; block vectors
of length ``3N`` are handled as ``(N, 3)`` arrays.
"""
from __future__ import annotations

import enum
import itertools
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping

import numpy as np

from . import spectral
from .errors import (
    DegenerateSample,
    HamiltonianFormatError,
    IncompatibleTopology,
    NonZZSource,
    SizeMismatch,
)

__all__ = [
    "PauliAxis",
    "TwoBodyHamiltonian",
    "CouplingRatioMatrix",
    "validate_compatibility",
    "build_coupling_ratio_matrix",
    "gauge_fix_psd",
    "random_coupling_ratio_matrix",
    "load_hamiltonian",
    "save_hamiltonian",
]

SYMMETRY_ATOL = 1e-12
MAX_RESAMPLES = 16


class PauliAxis(enum.IntEnum):
    X = 0
    Y = 1
    Z = 2

    @property
    def label(self) -> str:
        return "xyz"[self]

    @classmethod
    def parse(cls, value) -> "PauliAxis":
        if isinstance(value, str):
            try:
                return cls("xyz".index(value.lower()))
            except ValueError:
                raise HamiltonianFormatError(f"unknown Pauli axis {value!r}") from None
        return cls(int(value))


Key = tuple[int, int, PauliAxis, PauliAxis]


@dataclass(frozen=True)
class TwoBodyHamiltonian:
    """Sparse two-body Hamiltonian ``sum h_ij^{mu nu} sigma_i^mu sigma_j^nu``.

    Zero coefficients are dropped at construction, keys are normalized to
    ``PauliAxis`` and stored in sorted order so equal Hamiltonians compare
    and serialize identically.
    """

    n_qubits: int
    couplings: Mapping[Key, float] = field(default_factory=dict)

    def __post_init__(self):
        if int(self.n_qubits) != self.n_qubits or self.n_qubits < 1:
            raise HamiltonianFormatError(f"n_qubits must be a positive integer, got {self.n_qubits!r}")
        clean: dict[Key, float] = {}
        for key, coeff in self.couplings.items():
            if len(key) != 4:
                raise HamiltonianFormatError(f"coupling key must be (i, j, mu, nu), got {key!r}")
            i, j, mu, nu = key
            i, j = int(i), int(j)
            if not 0 <= i < j < self.n_qubits:
                raise HamiltonianFormatError(
                    f"coupling ({i}, {j}) violates 0 <= i < j < {self.n_qubits}"
                )
            k = (i, j, PauliAxis.parse(mu), PauliAxis.parse(nu))
            if k in clean:
                raise HamiltonianFormatError(f"duplicate coupling {k}")
            c = float(coeff)
            if not math.isfinite(c):
                raise HamiltonianFormatError(f"non-finite coefficient for {k}")
            if c != 0.0:
                clean[k] = c
        object.__setattr__(self, "n_qubits", int(self.n_qubits))
        object.__setattr__(self, "couplings", dict(sorted(clean.items())))

    def __iter__(self):
        return iter(self.couplings.items())

    def __len__(self) -> int:
        return len(self.couplings)

    def pairs(self) -> list[tuple[int, int]]:
        """Qubit pairs carrying at least one coupling, in sorted order."""
        return sorted({(i, j) for i, j, _, _ in self.couplings})

    def is_zz_only(self) -> bool:
        return all(mu == PauliAxis.Z and nu == PauliAxis.Z for _, _, mu, nu in self.couplings)

    def zz(self, i: int, j: int) -> float:
        return self.couplings.get((i, j, PauliAxis.Z, PauliAxis.Z), 0.0)

    def to_matrix(self) -> np.ndarray:
        """The ``3N x 3N`` coupling matrix with ``H[3i+mu, 3j+nu] = h``, upper blocks only."""
        out = np.zeros((3 * self.n_qubits, 3 * self.n_qubits))
        for (i, j, mu, nu), c in self.couplings.items():
            out[3 * i + mu, 3 * j + nu] = c
        return out

    @classmethod
    def from_matrix(cls, n_qubits: int, matrix: np.ndarray, floor: float = 0.0) -> "TwoBodyHamiltonian":
        """Inverse of :meth:`to_matrix`, reading the ``i < j`` blocks."""
        couplings = {}
        for i, j in itertools.combinations(range(n_qubits), 2):
            block = matrix[3 * i:3 * i + 3, 3 * j:3 * j + 3]
            for mu in range(3):
                for nu in range(3):
                    c = float(block[mu, nu])
                    if abs(c) > floor:
                        couplings[(i, j, mu, nu)] = c
        return cls(n_qubits, couplings)

    def to_json_dict(self) -> dict:
        return {
            "n_qubits": self.n_qubits,
            "terms": [
                {"i": i, "j": j, "pauli": mu.label + nu.label, "coeff": c}
                for (i, j, mu, nu), c in self.couplings.items()
            ],
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "TwoBodyHamiltonian":
        try:
            n = data["n_qubits"]
            terms = data["terms"]
        except (KeyError, TypeError) as exc:
            raise HamiltonianFormatError(f"Hamiltonian JSON missing field: {exc}") from None
        if not isinstance(n, int) or isinstance(n, bool):
            raise HamiltonianFormatError("n_qubits must be an integer")
        couplings: dict = {}
        for term in terms:
            try:
                i, j, pauli, coeff = term["i"], term["j"], term["pauli"], term["coeff"]
            except (KeyError, TypeError) as exc:
                raise HamiltonianFormatError(f"term missing field: {exc}") from None
            if not isinstance(pauli, str) or len(pauli) != 2:
                raise HamiltonianFormatError(f"pauli must be a two-letter string, got {pauli!r}")
            if not (isinstance(i, int) and isinstance(j, int)) or i >= j:
                raise HamiltonianFormatError(f"term indices must be integers with i < j, got ({i}, {j})")
            key = (i, j, PauliAxis.parse(pauli[0]), PauliAxis.parse(pauli[1]))
            if key in couplings:
                raise HamiltonianFormatError(f"duplicate term ({i}, {j}, {pauli!r})")
            couplings[key] = coeff
        return cls(n, couplings)


def load_hamiltonian(path) -> TwoBodyHamiltonian:
    text = Path(path).read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise HamiltonianFormatError(f"{path}: invalid JSON ({exc})") from None
    return TwoBodyHamiltonian.from_json_dict(data)


def save_hamiltonian(h: TwoBodyHamiltonian, path) -> None:
    Path(path).write_text(json.dumps(h.to_json_dict(), indent=2) + "\n", encoding="utf-8")


@dataclass(frozen=True, eq=False)
class CouplingRatioMatrix:
    """Dense ``3N x 3N`` coupling-ratio matrix.

    ``lambda_tilde_min`` is ``None`` until :func:`gauge_fix_psd` has run.
    The entries array is read-only.
    """

    n_qubits: int
    entries: np.ndarray
    sim_time: float = 1.0
    lambda_tilde_min: float | None = None

    def __post_init__(self):
        a = np.array(self.entries, dtype=float)
        dim = 3 * self.n_qubits
        if a.shape != (dim, dim):
            raise SizeMismatch(f"expected a {dim}x{dim} matrix, got {a.shape}")
        if not np.all(np.isfinite(a)):
            raise ValueError("coupling-ratio matrix has non-finite entries")
        if np.max(np.abs(a - a.T), initial=0.0) > SYMMETRY_ATOL:
            raise ValueError("coupling-ratio matrix is not symmetric")
        if not self.sim_time > 0:
            raise ValueError("sim_time must be positive")
        a.setflags(write=False)
        object.__setattr__(self, "entries", a)

    @property
    def dim(self) -> int:
        return 3 * self.n_qubits

    @property
    def gauge_fixed(self) -> bool:
        return self.lambda_tilde_min is not None

    def block(self, i: int, j: int) -> np.ndarray:
        return self.entries[3 * i:3 * i + 3, 3 * j:3 * j + 3]

    def off_diagonal(self) -> np.ndarray:
        """Copy of the entries with every 3x3 diagonal block zeroed."""
        return zero_diagonal_blocks(self.entries)


def zero_diagonal_blocks(matrix: np.ndarray) -> np.ndarray:
    out = np.array(matrix, dtype=float, copy=True)
    n = out.shape[0] // 3
    for i in range(n):
        out[3 * i:3 * i + 3, 3 * i:3 * i + 3] = 0.0
    return out


def validate_compatibility(problem: TwoBodyHamiltonian, source: TwoBodyHamiltonian) -> None:
    """Check ``source`` is ZZ-only and covers every pair ``problem`` couples."""
    if problem.n_qubits != source.n_qubits:
        raise SizeMismatch(
            f"problem has {problem.n_qubits} qubits but source has {source.n_qubits}"
        )
    for i, j, mu, nu in source.couplings:
        if (mu, nu) != (PauliAxis.Z, PauliAxis.Z):
            raise NonZZSource(
                f"source coupling ({i}, {j}, {mu.label}{nu.label}) is not zz"
            )
    for i, j in problem.pairs():
        if source.zz(i, j) == 0.0:
            raise IncompatibleTopology(i, j)


def build_coupling_ratio_matrix(
    problem: TwoBodyHamiltonian, source: TwoBodyHamiltonian, sim_time: float
) -> CouplingRatioMatrix:
    if not sim_time > 0:
        raise ValueError(f"sim_time must be positive, got {sim_time}")
    validate_compatibility(problem, source)
    n = problem.n_qubits
    b = np.zeros((3 * n, 3 * n))
    for (i, j, mu, nu), c in problem.couplings.items():
        value = sim_time * c / source.zz(i, j)
        b[3 * i + mu, 3 * j + nu] = value
        b[3 * j + nu, 3 * i + mu] = value
    return CouplingRatioMatrix(n, b, sim_time=float(sim_time))


def gauge_fix_psd(matrix: CouplingRatioMatrix) -> CouplingRatioMatrix:
    """Fill the free diagonal blocks so the matrix becomes positive-semidefinite.

    The diagonal is set to ``-lambda_min`` of the zero-diagonal matrix and
    the off-diagonal entries of the diagonal blocks to zero.  A positive
    ``lambda_min`` (only possible through rounding) is clamped to zero.
    """
    off = matrix.off_diagonal()
    if not np.array_equal(off, matrix.entries):
        raise ValueError("gauge fixing expects zero diagonal blocks")
    lam = min(spectral.min_eigenvalue(off), 0.0)
    fixed = off + np.eye(matrix.dim) * (-lam)
    return CouplingRatioMatrix(matrix.n_qubits, fixed, sim_time=matrix.sim_time, lambda_tilde_min=lam)


def _rng(seed) -> np.random.Generator:
    # PCG64 is numpy's documented, platform-independent default bit generator.
    return np.random.Generator(np.random.PCG64(seed))


def random_coupling_ratio_matrix(n_qubits: int, seed) -> CouplingRatioMatrix:
    """Random zero-diagonal coupling-ratio matrix normalized to ``max|B| = 1``.

    The ``i < j`` blocks are drawn i.i.d. uniform on ``[-1, 1]`` in row-major
    pair order and mirrored.  ``seed`` may be an integer or a
    :class:`numpy.random.SeedSequence`.
    """
    if n_qubits < 2:
        raise ValueError("random problems need at least two qubits")
    rng = _rng(seed)
    pairs = list(itertools.combinations(range(n_qubits), 2))
    for _ in range(MAX_RESAMPLES):
        draws = rng.uniform(-1.0, 1.0, size=(len(pairs), 3, 3))
        scale = np.max(np.abs(draws))
        if scale > 0:
            break
    else:
        raise DegenerateSample(f"all {MAX_RESAMPLES} draws were identically zero")
    draws /= scale
    b = np.zeros((3 * n_qubits, 3 * n_qubits))
    for (i, j), block in zip(pairs, draws):
        b[3 * i:3 * i + 3, 3 * j:3 * j + 3] = block
        b[3 * j:3 * j + 3, 3 * i:3 * i + 3] = block.T
    return CouplingRatioMatrix(n_qubits, b, sim_time=1.0)


def coupling_ratio_from_terms(n_qubits: int, terms: Iterable[tuple[int, int, int, int, float]]) -> np.ndarray:
    """Dense symmetric matrix from ``(i, j, mu, nu, value)`` entries; test helper."""
    b = np.zeros((3 * n_qubits, 3 * n_qubits))
    for i, j, mu, nu, value in terms:
        b[3 * i + mu, 3 * j + nu] = value
        b[3 * j + nu, 3 * i + mu] = value
    return b
