"""Split a PSD coupling-ratio matrix into block-normalized rank-one terms.

Each eigenpair ``(lam, v)`` of the gauge-fixed matrix is written as

    lam * v v^T  ==  sum_{l=1..2N} t * (g+_l g+_l^T + g-_l g-_l^T)   (off-diagonal blocks)

with ``t = lam * m / (4N)``, ``m = max_i |v_i|^2`` and per-qubit blocks

    g+-_{l,i} = (v_i +- e_{l,i}) / sqrt(|v_i|^2 + |e_{l,i}|^2)
    e_{l,i}   = cos(th_{l,i}) eta_i + sin(th_{l,i}) xi_i,   th_{l,i} = pi * i * (l-1) / N

where ``eta_i``, ``xi_i`` are orthogonal to ``v_i`` and to each other with
squared norm ``m - |v_i|^2``.  Every block of every ``g`` then has unit
norm, the ``+``/``-`` pair cancels the ``v e^T`` cross terms, and the
angle grid makes ``sum_l e_{l,i} e_{l,j}^T`` vanish for ``i != j``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import spectral
from .errors import ZeroEigenvector
from .hamiltonian import CouplingRatioMatrix, zero_diagonal_blocks

__all__ = [
    "GammaTerm",
    "Decomposition",
    "orthonormal_pair",
    "perturbation_vectors",
    "decompose_eigenvector",
    "decompose",
    "reconstruct_off_diagonal",
    "total_analog_time",
]

UNIT_TOL = 1e-12
# eigenvalues in [-NEG_CLAMP, 0) are rounding noise of a PSD matrix
NEG_CLAMP = 1e-10
# block norms this close to the maximum count as maximal (no perturbation)
EQUAL_NORM_RTOL = 1e-13


class Provenance(NamedTuple):
    eigen_index: int
    step: int  # 1-based, 1..2N
    sign: int  # +1 or -1


@dataclass(frozen=True, eq=False)
class GammaTerm:
    time: float
    gamma: np.ndarray  # (N, 3), unit rows
    provenance: Provenance


@dataclass(frozen=True, eq=False)
class Decomposition:
    """Ordered rank-one terms stored column-wise.

    ``times[q]`` and ``gammas[q]`` (shape ``(N, 3)``) describe term ``q``;
    ``provenance[q]`` holds ``(eigen index, step, sign)``.
    """

    n_qubits: int
    times: np.ndarray
    gammas: np.ndarray
    provenance: np.ndarray
    discarded_weight: float = 0.0
    lambda_tilde_min: float | None = None

    def __len__(self) -> int:
        return len(self.times)

    @property
    def terms(self) -> list[GammaTerm]:
        return [
            GammaTerm(float(t), g, Provenance(*map(int, p)))
            for t, g, p in zip(self.times, self.gammas, self.provenance)
        ]

    @classmethod
    def empty(cls, n_qubits: int, **kw) -> "Decomposition":
        return cls(
            n_qubits,
            np.zeros(0),
            np.zeros((0, n_qubits, 3)),
            np.zeros((0, 3), dtype=np.int64),
            **kw,
        )


def orthonormal_pair(v, target_norm: float) -> tuple[np.ndarray, np.ndarray]:
    """Two vectors orthogonal to ``v`` and to each other, both of norm ``target_norm``.

    ``eta`` is the standard basis vector least aligned with ``v`` (lowest
    index on ties) with its ``v`` component projected out; ``xi`` is the
    normalized ``v x eta``.  A zero ``v`` gives the x and y axes.
    """
    if target_norm < 0:
        raise ValueError("target_norm must be non-negative")
    v = np.asarray(v, dtype=float)
    norm = math.sqrt(float(v @ v))
    if norm == 0.0:
        return np.array([target_norm, 0.0, 0.0]), np.array([0.0, target_norm, 0.0])
    u = v / norm
    axis = int(np.argmin(np.abs(u)))
    eta = -u[axis] * u
    eta[axis] += 1.0
    eta /= np.linalg.norm(eta)
    xi = np.cross(u, eta)
    xi /= np.linalg.norm(xi)
    return eta * target_norm, xi * target_norm


def step_angles(n_qubits: int) -> np.ndarray:
    """``(2N, N)`` grid of angles ``pi * i * (l-1) / N`` for zero-based qubit ``i``."""
    steps = np.arange(2 * n_qubits)[:, None]
    qubits = np.arange(n_qubits)[None, :]
    return np.pi * (qubits * steps) / n_qubits


def _check_unit(v: np.ndarray) -> None:
    norm = float(np.linalg.norm(v))
    if abs(norm - 1.0) > UNIT_TOL:
        raise ZeroEigenvector(f"eigenvector norm {norm!r} is not 1")


def _orthonormal_pairs(blocks: np.ndarray, norms: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Row-wise :func:`orthonormal_pair` for an ``(N, 3)`` array of blocks."""
    n = len(blocks)
    length = np.sqrt(np.einsum("ij,ij->i", blocks, blocks))
    zero = length == 0.0
    u = blocks / np.where(zero, 1.0, length)[:, None]
    axis = np.argmin(np.abs(u), axis=1)
    rows = np.arange(n)
    eta = -u[rows, axis][:, None] * u
    eta[rows, axis] += 1.0
    eta /= np.linalg.norm(eta, axis=1)[:, None]
    xi = np.cross(u, eta)
    xi_norm = np.linalg.norm(xi, axis=1)
    xi /= np.where(zero, 1.0, xi_norm)[:, None]
    eta[zero] = (1.0, 0.0, 0.0)
    xi[zero] = (0.0, 1.0, 0.0)
    return eta * norms[:, None], xi * norms[:, None]


def perturbation_vectors(v, n_qubits: int) -> np.ndarray:
    """The ``(2N, N, 3)`` array of perturbations ``e_{l,i}`` for block vector ``v``."""
    blocks = np.asarray(v, dtype=float).reshape(n_qubits, 3)
    sq = np.einsum("ij,ij->i", blocks, blocks)
    m = sq.max()
    # blocks already at the maximal norm get e_i = 0 exactly
    gap = np.where(m - sq <= EQUAL_NORM_RTOL * m, 0.0, m - sq)
    eta, xi = _orthonormal_pairs(blocks, np.sqrt(gap))
    theta = step_angles(n_qubits)
    return np.cos(theta)[..., None] * eta + np.sin(theta)[..., None] * xi


def _eigen_terms(lam: float, v: np.ndarray, n_qubits: int) -> tuple[float, np.ndarray]:
    """Per-term time and the ``(4N, N, 3)`` gamma stack for one eigenpair."""
    blocks = v.reshape(n_qubits, 3)
    m = float(np.max(np.einsum("ij,ij->i", blocks, blocks)))
    eps = perturbation_vectors(v, n_qubits)
    sq = np.einsum("ij,ij->i", blocks, blocks)[None, :] + np.einsum("lij,lij->li", eps, eps)
    denom = np.sqrt(sq)[..., None]
    plus = (blocks + eps) / denom
    minus = (blocks - eps) / denom
    gammas = np.stack([plus, minus], axis=1).reshape(4 * n_qubits, n_qubits, 3)
    return lam * m / (4 * n_qubits), gammas


def decompose_eigenvector(lam: float, v, n_qubits: int, eigen_index: int = 0) -> list[GammaTerm]:
    if not lam > 0:
        raise ValueError(f"eigenvalue must be positive, got {lam}")
    v = np.asarray(v, dtype=float)
    if v.shape != (3 * n_qubits,):
        raise ValueError(f"expected a vector of length {3 * n_qubits}, got shape {v.shape}")
    _check_unit(v)
    t, gammas = _eigen_terms(lam, v, n_qubits)
    return [
        GammaTerm(t, gammas[q], Provenance(eigen_index, q // 2 + 1, 1 - 2 * (q % 2)))
        for q in range(len(gammas))
    ]


def decompose(matrix: CouplingRatioMatrix, discard_threshold: float = 0.0) -> Decomposition:
    """Decompose a gauge-fixed matrix, dropping eigenpairs whose per-term time is ``<= discard_threshold``."""
    if discard_threshold < 0:
        raise ValueError("discard_threshold must be non-negative")
    n = matrix.n_qubits
    eig = spectral.eigendecompose_symmetric(matrix.entries)
    floor = -NEG_CLAMP * max(1.0, float(np.max(np.abs(matrix.entries), initial=0.0)))
    if eig.eigenvalues[-1] < floor:
        raise ValueError(
            f"matrix is not positive-semidefinite (min eigenvalue {eig.eigenvalues[-1]:.3e}); gauge-fix it first"
        )
    times, gammas, prov = [], [], []
    discarded = 0.0
    for k, lam in enumerate(eig.eigenvalues):
        lam = max(float(lam), 0.0)
        v = eig.vector(k)
        blocks = v.reshape(n, 3)
        t = lam * float(np.max(np.einsum("ij,ij->i", blocks, blocks))) / (4 * n)
        if not (t > discard_threshold and lam > 0):
            discarded += lam
            continue
        _check_unit(v)
        t, g = _eigen_terms(lam, v, n)
        times.append(np.full(len(g), t))
        gammas.append(g)
        q = np.arange(len(g))
        prov.append(np.stack([np.full(len(g), k), q // 2 + 1, 1 - 2 * (q % 2)], axis=1))
    if not times:
        return Decomposition.empty(n, discarded_weight=discarded, lambda_tilde_min=matrix.lambda_tilde_min)
    return Decomposition(
        n,
        np.concatenate(times),
        np.concatenate(gammas),
        np.concatenate(prov).astype(np.int64),
        discarded_weight=discarded,
        lambda_tilde_min=matrix.lambda_tilde_min,
    )


def reconstruct_off_diagonal(decomposition: Decomposition) -> np.ndarray:
    """``sum_q t_q g_q g_q^T`` with the 3x3 diagonal blocks zeroed."""
    n = decomposition.n_qubits
    g = decomposition.gammas.reshape(len(decomposition), 3 * n)
    return zero_diagonal_blocks((g.T * decomposition.times) @ g)


def total_analog_time(decomposition: Decomposition) -> float:
    return math.fsum(decomposition.times)
