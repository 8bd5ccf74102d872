"""Dense-matrix checks of compiled schedules on small systems.

Qubit 0 is the most significant tensor factor.  Schedules are applied in
stored order: the first block acts on the state first, so it is the
rightmost factor of the operator product.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from . import spectral
from .circuit import Schedule, compile_schedule, effective_couplings
from .errors import DimensionMismatch, TooLarge
from .hamiltonian import TwoBodyHamiltonian

__all__ = [
    "TrotterReport",
    "hamiltonian_matrix",
    "exact_unitary",
    "schedule_unitary",
    "phase_invariant_distance",
    "aligned_frobenius_distance",
    "effective_hamiltonians_commute",
    "schedule_convergence",
    "trotter_convergence",
]

MAX_QUBITS = 12
MAX_TROTTER_QUBITS = 8
COMMUTATOR_TOL = 1e-10
EXACT_TOL = 1e-8

def _guard(n_qubits: int, limit: int = MAX_QUBITS) -> None:
    if n_qubits > limit:
        raise TooLarge(f"dense verification is limited to {limit} qubits, got {n_qubits}")


def _bits(n_qubits: int, qubit: int) -> np.ndarray:
    idx = np.arange(2 ** n_qubits)
    return (idx >> (n_qubits - 1 - qubit)) & 1


def hamiltonian_matrix(h: TwoBodyHamiltonian) -> np.ndarray:
    """Dense ``2^N x 2^N`` matrix of ``h``.

    Each Pauli string is a signed permutation, so terms are scattered
    directly instead of formed by Kronecker products.
    """
    n = h.n_qubits
    _guard(n)
    dim = 2 ** n
    out = np.zeros((dim, dim), dtype=complex)
    rows = np.arange(dim)
    for (i, j, mu, nu), c in h.couplings.items():
        cols = rows.copy()
        amp = np.full(dim, c, dtype=complex)
        for q, axis in ((i, mu), (j, nu)):
            b = _bits(n, q)
            if axis != 2:  # x or y flips the bit
                cols = cols ^ (1 << (n - 1 - q))
            if axis == 1:
                # <r|Y|c>: Y|0> = i|1>, Y|1> = -i|0>; r is the flipped bit
                amp *= np.where(b == 1, 1j, -1j)
            elif axis == 2:
                amp *= np.where(b == 1, -1.0, 1.0)
        out[rows, cols] += amp
    return out


def _unitary_from_eig(w: np.ndarray, v: np.ndarray, time: float) -> np.ndarray:
    return (v * np.exp(-1j * time * w)) @ v.conj().T


def exact_unitary(h: TwoBodyHamiltonian, time: float) -> np.ndarray:
    """``exp(-i time H)`` via the Hermitian Jacobi eigensolver."""
    _guard(h.n_qubits)
    eig = spectral.eigh_hermitian(hamiltonian_matrix(h))
    return _unitary_from_eig(eig.eigenvalues, eig.eigenvectors, time)


def _zz_diagonal(source: TwoBodyHamiltonian) -> np.ndarray:
    n = source.n_qubits
    z = [1.0 - 2.0 * _bits(n, q) for q in range(n)]
    diag = np.zeros(2 ** n)
    for (i, j, _, _), c in source.couplings.items():
        diag += c * z[i] * z[j]
    return diag


def _apply_local(ops: list[np.ndarray], mat: np.ndarray) -> np.ndarray:
    """``(ops[0] x ... x ops[N-1]) @ mat`` without forming the Kronecker product."""
    n = len(ops)
    dim = mat.shape[0]
    t = mat.reshape((2,) * n + (mat.shape[1],))
    for q, op in enumerate(ops):
        t = np.moveaxis(np.tensordot(op, t, axes=([1], [q])), 0, q)
    return t.reshape(dim, -1)


def _trotter_step(schedule: Schedule, trotter_steps: int) -> np.ndarray:
    n = schedule.n_qubits
    dim = 2 ** n
    diag = _zz_diagonal(schedule.source)
    op = np.eye(dim, dtype=complex)
    for block in schedule.blocks:
        local = [r.matrix() for r in block.rotations]
        op = _apply_local([u.conj().T for u in local], op)
        op = np.exp(-1j * (block.analog_time / trotter_steps) * diag)[:, None] * op
        op = _apply_local(local, op)
    return op


def schedule_unitary(schedule: Schedule, trotter_steps: int = 1) -> np.ndarray:
    """``(prod_q U_q exp(-i t_q/n_T H_S) U_q^dagger)^n_T`` with the first block rightmost."""
    if trotter_steps < 1:
        raise ValueError("trotter_steps must be a positive integer")
    _guard(schedule.n_qubits)
    return np.linalg.matrix_power(_trotter_step(schedule, trotter_steps), trotter_steps)


def _check_dims(u: np.ndarray, v: np.ndarray) -> None:
    if u.shape != v.shape or u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise DimensionMismatch(f"operator shapes {u.shape} and {v.shape} differ")


def phase_invariant_distance(u: np.ndarray, v: np.ndarray) -> float:
    """``sqrt(1 - |tr(u^dagger v)| / d)``, blind to global phase.

    For unitaries this equals ``min_phi ||u - e^{i phi} v||_F / sqrt(2d)``,
    which is evaluated instead: the trace form loses everything below
    ~1e-8 to cancellation.
    """
    _check_dims(u, v)
    return min(1.0, aligned_frobenius_distance(u, v) / math.sqrt(2 * u.shape[0]))


def aligned_frobenius_distance(u: np.ndarray, v: np.ndarray) -> float:
    """``min_phi ||u - e^{i phi} v||_F``, attained at ``phi = -arg tr(u^dagger v)``."""
    _check_dims(u, v)
    overlap = np.vdot(u, v)
    phase = overlap / abs(overlap) if overlap != 0 else 1.0
    return float(np.linalg.norm(u - v / phase))


def effective_hamiltonians_commute(schedule: Schedule, tol: float = COMMUTATOR_TOL) -> bool:
    """Whether all blocks' effective Hamiltonians pairwise commute (dense check)."""
    _guard(schedule.n_qubits)
    mats = []
    seen = set()
    for block in schedule.blocks:
        h = effective_couplings(schedule.source, block.gammas())
        key = tuple((k, round(c, 14)) for k, c in h.couplings.items())
        if key in seen:
            continue
        seen.add(key)
        mats.append(hamiltonian_matrix(h))
    for a, b in itertools.combinations(mats, 2):
        if np.max(np.abs(a @ b - b @ a), initial=0.0) > tol:
            return False
    return True


@dataclass(frozen=True)
class TrotterReport:
    steps: tuple[int, ...]
    distances: tuple[float, ...]
    decay_exponent: float | None
    commuting: bool
    frobenius: tuple[float, ...] = ()

    def __post_init__(self):
        if any(b <= a for a, b in zip(self.steps, self.steps[1:])):
            raise ValueError("Trotter step counts must be strictly increasing")

    def to_json_dict(self, verbose: bool = False) -> dict:
        out = {
            "distances": [
                {"n_t": n, "distance": d} for n, d in zip(self.steps, self.distances)
            ],
            "decay_exponent": self.decay_exponent,
            "commuting": self.commuting,
        }
        if verbose:
            out["frobenius_aligned"] = [
                {"n_t": n, "distance": d} for n, d in zip(self.steps, self.frobenius)
            ]
        return out


def fit_decay_exponent(steps, distances) -> float | None:
    """Slope ``p`` of ``distance ~ n_T^-p`` over the largest decade of ``steps``.

    Returns ``None`` when fewer than two usable points remain (distances at
    the numerical floor carry no scaling information).
    """
    steps = np.asarray(steps, dtype=float)
    d = np.asarray(distances, dtype=float)
    keep = (steps >= steps.max() / 10) & (d > EXACT_TOL)
    if keep.sum() < 2:
        return None
    slope = np.polyfit(np.log(steps[keep]), np.log(d[keep]), 1)[0]
    return float(-slope)


def schedule_convergence(
    schedule: Schedule, problem: TwoBodyHamiltonian, steps_list, verbose: bool = False
) -> TrotterReport:
    """Distances between ``exp(-i T H_P)`` and the schedule at each Trotter count."""
    steps = tuple(int(s) for s in steps_list)
    if not steps or steps[0] < 1:
        raise ValueError("steps_list must hold positive integers")
    if problem.n_qubits != schedule.n_qubits:
        raise DimensionMismatch("schedule and problem disagree on qubit count")
    _guard(schedule.n_qubits, MAX_TROTTER_QUBITS)
    target = exact_unitary(problem, schedule.sim_time)
    dist, frob = [], []
    for n_t in steps:
        u = schedule_unitary(schedule, n_t)
        dist.append(phase_invariant_distance(target, u))
        if verbose:
            frob.append(aligned_frobenius_distance(target, u))
    commuting = effective_hamiltonians_commute(schedule)
    exponent = None if commuting else fit_decay_exponent(steps, dist)
    return TrotterReport(steps, tuple(dist), exponent, commuting, tuple(frob))


def trotter_convergence(
    problem: TwoBodyHamiltonian,
    source: TwoBodyHamiltonian,
    sim_time: float,
    steps_list,
    discard_threshold: float = 0.0,
) -> TrotterReport:
    _guard(problem.n_qubits, MAX_TROTTER_QUBITS)
    schedule, _, _ = compile_schedule(problem, source, sim_time, discard_threshold)
    return schedule_convergence(schedule, problem, steps_list)
