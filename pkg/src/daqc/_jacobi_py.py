"""Pure-Python cyclic Jacobi kernels (fallback for ``_jacobi_ext``).

Both kernels diagonalize ``a`` in place and accumulate the rotations into
``v`` (which must start as the identity).  Pairs are swept in row-major
order ``(0,1), (0,2), ..., (n-2,n-1)``.  The return value is the number of
sweeps performed, or ``-1`` when ``max_sweeps`` is exhausted before the
off-diagonal Frobenius norm falls to ``tol``.
"""
import math

import numpy as np


def _off_norm(a: np.ndarray) -> float:
    off = a.copy()
    np.fill_diagonal(off, 0.0)
    return float(np.sqrt(np.sum(np.abs(off) ** 2)))


def _rotation(app: float, aqq: float, apq: float) -> tuple[float, float, float, float]:
    """Rutishauser's stable rotation zeroing a real ``apq``: returns (t, c, s, tau)."""
    theta = (aqq - app) / (2.0 * apq)
    if abs(theta) > 1e150:
        t = 0.5 / theta
    else:
        t = 1.0 / (abs(theta) + math.sqrt(theta * theta + 1.0))
        if theta < 0.0:
            t = -t
    c = 1.0 / math.sqrt(t * t + 1.0)
    s = t * c
    return t, c, s, s / (1.0 + c)


def jacobi_symmetric(a: np.ndarray, v: np.ndarray, tol: float, max_sweeps: int) -> int:
    n = a.shape[0]
    for sweep in range(max_sweeps + 1):
        if _off_norm(a) <= tol:
            return sweep
        if sweep == max_sweeps:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                t, c, s, tau = _rotation(a[p, p], a[q, q], apq)
                app = a[p, p] - t * apq
                aqq = a[q, q] + t * apq
                cp = a[:, p].copy()
                cq = a[:, q].copy()
                new_p = cp - s * (cq + tau * cp)
                new_q = cq + s * (cp - tau * cq)
                a[:, p] = new_p
                a[:, q] = new_q
                a[p, :] = new_p
                a[q, :] = new_q
                a[p, p] = app
                a[q, q] = aqq
                a[p, q] = a[q, p] = 0.0
                vp = v[:, p].copy()
                vq = v[:, q].copy()
                v[:, p] = vp - s * (vq + tau * vp)
                v[:, q] = vq + s * (vp - tau * vq)
    return -1


def jacobi_hermitian(a: np.ndarray, v: np.ndarray, tol: float, max_sweeps: int) -> int:
    """Complex Hermitian variant.

    Each step first rephases column/row ``q`` so that ``a[p, q]`` becomes
    real and non-negative, then applies the real rotation.
    """
    n = a.shape[0]
    a[np.diag_indices(n)] = a.diagonal().real
    for sweep in range(max_sweeps + 1):
        if _off_norm(a) <= tol:
            return sweep
        if sweep == max_sweeps:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                z = a[p, q]
                r = abs(z)
                if r == 0.0:
                    continue
                phase = z.conjugate() / r
                app = a[p, p].real
                aqq = a[q, q].real
                t, c, s, tau = _rotation(app, aqq, r)
                cp = a[:, p].copy()
                cq = a[:, q] * phase
                new_p = cp - s * (cq + tau * cp)
                new_q = cq + s * (cp - tau * cq)
                a[:, p] = new_p
                a[:, q] = new_q
                a[p, :] = new_p.conj()
                a[q, :] = new_q.conj()
                a[p, p] = app - t * r
                a[q, q] = aqq + t * r
                a[p, q] = a[q, p] = 0.0
                vp = v[:, p].copy()
                vq = v[:, q] * phase
                v[:, p] = vp - s * (vq + tau * vp)
                v[:, q] = vq + s * (vp - tau * vq)
    return -1
