"""Deterministic dense eigensolvers (cyclic Jacobi).

The rotation sweeps run in the compiled ``_jacobi_ext`` module when it was
built, otherwise in the pure-Python ``_jacobi_py`` module.  Set
``DAQC_PURE_PYTHON=1`` to force the fallback, or pass ``backend=`` to any
function here.  Both backends sweep in the same order and agree to rounding
error, but only results from the same backend are bit-identical.
"""
from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from . import _jacobi_py
from .errors import NoConvergence, NotSymmetric

__all__ = [
    "EigenDecomposition",
    "eigendecompose_symmetric",
    "eigh_hermitian",
    "min_eigenvalue",
    "available_backends",
    "default_backend",
]

CONVERGENCE_RTOL = 1e-14
MAX_SWEEPS = 100
SYMMETRY_RTOL = 1e-10

_BACKENDS = {"python": _jacobi_py}
try:
    from . import _jacobi_ext

    _BACKENDS["compiled"] = _jacobi_ext
except ImportError:  # extension not built
    pass

if os.environ.get("DAQC_PURE_PYTHON") or "compiled" not in _BACKENDS:
    BACKEND = "python"
else:
    BACKEND = "compiled"


def available_backends() -> tuple[str, ...]:
    return tuple(_BACKENDS)


def default_backend() -> str:
    return BACKEND


def _kernels(backend: str | None):
    name = backend or BACKEND
    try:
        return _BACKENDS[name]
    except KeyError:
        raise ValueError(f"backend {name!r} unavailable; have {available_backends()}") from None


@dataclass(frozen=True, eq=False)
class EigenDecomposition:
    """Eigenpairs sorted by descending eigenvalue.

    ``eigenvectors[:, k]`` pairs with ``eigenvalues[k]``.  Each vector is
    normalized so its largest-magnitude entry (lowest index on ties) is real
    and positive.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def __len__(self) -> int:
        return len(self.eigenvalues)

    def vector(self, k: int) -> np.ndarray:
        return self.eigenvectors[:, k]

    def blocks(self, k: int) -> np.ndarray:
        """Eigenvector ``k`` viewed as ``(N, 3)`` per-qubit blocks."""
        return self.eigenvectors[:, k].reshape(-1, 3)

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def _check_square(a: np.ndarray) -> None:
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise ValueError(f"expected a non-empty square matrix, got shape {a.shape}")


def _finish(w: np.ndarray, v: np.ndarray) -> EigenDecomposition:
    order = np.argsort(-w, kind="stable")
    w = w[order]
    v = v[:, order]
    lead = np.argmax(np.abs(v), axis=0)
    pivots = v[lead, np.arange(v.shape[1])]
    v = v * (np.abs(pivots) / pivots)
    if np.iscomplexobj(v):
        v[lead, np.arange(v.shape[1])] = np.abs(pivots)
    w.setflags(write=False)
    v.setflags(write=False)
    return EigenDecomposition(w, v)


def _run(kernel, a: np.ndarray, v: np.ndarray) -> None:
    scale = float(np.linalg.norm(a))
    sweeps = kernel(a, v, CONVERGENCE_RTOL * scale, MAX_SWEEPS)
    if sweeps < 0:
        raise NoConvergence(f"Jacobi iteration did not converge within {MAX_SWEEPS} sweeps")


def eigendecompose_symmetric(matrix, *, backend: str | None = None) -> EigenDecomposition:
    a = np.array(matrix, dtype=np.float64, order="C", copy=True)
    _check_square(a)
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    asym = np.max(np.abs(a - a.T))
    if asym > SYMMETRY_RTOL * max(1.0, np.max(np.abs(a))):
        raise NotSymmetric(f"matrix asymmetry {asym:.3e} exceeds tolerance")
    a = 0.5 * (a + a.T)
    v = np.eye(a.shape[0])
    _run(_kernels(backend).jacobi_symmetric, a, v)
    return _finish(a.diagonal().copy(), v)


def eigh_hermitian(matrix, *, backend: str | None = None) -> EigenDecomposition:
    """Complex Hermitian counterpart of :func:`eigendecompose_symmetric`."""
    a = np.array(matrix, dtype=np.complex128, order="C", copy=True)
    _check_square(a)
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    asym = np.max(np.abs(a - a.conj().T))
    if asym > SYMMETRY_RTOL * max(1.0, np.max(np.abs(a))):
        raise NotSymmetric(f"matrix non-Hermiticity {asym:.3e} exceeds tolerance")
    a = 0.5 * (a + a.conj().T)
    v = np.eye(a.shape[0], dtype=np.complex128)
    _run(_kernels(backend).jacobi_hermitian, a, v)
    return _finish(a.diagonal().real.copy(), v)


def min_eigenvalue(matrix, *, backend: str | None = None) -> float:
    return float(eigendecompose_symmetric(matrix, backend=backend).eigenvalues[-1])
