# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled cyclic Jacobi kernels.

Same contract as :mod:`daqc._jacobi_py`: diagonalize ``a`` in place,
accumulate rotations into ``v`` (identity on entry), sweep pairs in
row-major order, return the sweep count or -1 on hitting ``max_sweeps``.
"""
from libc.math cimport fabs, sqrt


cdef inline double _off_norm_real(double[:, ::1] a) nogil:
    cdef Py_ssize_t n = a.shape[0], i, j
    cdef double acc = 0.0
    for i in range(n):
        for j in range(n):
            if i != j:
                acc += a[i, j] * a[i, j]
    return sqrt(acc)


cdef inline double _off_norm_complex(double complex[:, ::1] a) nogil:
    cdef Py_ssize_t n = a.shape[0], i, j
    cdef double acc = 0.0
    for i in range(n):
        for j in range(n):
            if i != j:
                acc += a[i, j].real * a[i, j].real + a[i, j].imag * a[i, j].imag
    return sqrt(acc)


cdef inline double _rotation_t(double app, double aqq, double apq) nogil:
    cdef double theta = (aqq - app) / (2.0 * apq)
    cdef double t
    if fabs(theta) > 1e150:
        return 0.5 / theta
    t = 1.0 / (fabs(theta) + sqrt(theta * theta + 1.0))
    if theta < 0.0:
        t = -t
    return t


def jacobi_symmetric(double[:, ::1] a, double[:, ::1] v, double tol, int max_sweeps):
    return _sweep_symmetric(a, v, tol, max_sweeps)


cdef int _sweep_symmetric(double[:, ::1] a, double[:, ::1] v, double tol, int max_sweeps) noexcept nogil:
    cdef Py_ssize_t n = a.shape[0], p, q, r
    cdef int sweep
    cdef double apq, t, c, s, tau, arp, arq
    for sweep in range(max_sweeps + 1):
        if _off_norm_real(a) <= tol:
            return sweep
        if sweep == max_sweeps:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                t = _rotation_t(a[p, p], a[q, q], apq)
                c = 1.0 / sqrt(t * t + 1.0)
                s = t * c
                tau = s / (1.0 + c)
                a[p, p] = a[p, p] - t * apq
                a[q, q] = a[q, q] + t * apq
                a[p, q] = 0.0
                a[q, p] = 0.0
                for r in range(n):
                    if r == p or r == q:
                        continue
                    arp = a[r, p]
                    arq = a[r, q]
                    arp, arq = arp - s * (arq + tau * arp), arq + s * (arp - tau * arq)
                    a[r, p] = arp
                    a[p, r] = arp
                    a[r, q] = arq
                    a[q, r] = arq
                for r in range(n):
                    arp = v[r, p]
                    arq = v[r, q]
                    v[r, p] = arp - s * (arq + tau * arp)
                    v[r, q] = arq + s * (arp - tau * arq)
    return -1


def jacobi_hermitian(double complex[:, ::1] a, double complex[:, ::1] v, double tol, int max_sweeps):
    return _sweep_hermitian(a, v, tol, max_sweeps)


cdef int _sweep_hermitian(double complex[:, ::1] a, double complex[:, ::1] v, double tol, int max_sweeps) noexcept nogil:
    cdef Py_ssize_t n = a.shape[0], p, q, r
    cdef int sweep
    cdef double rr, t, c, s, tau, app, aqq
    cdef double complex z, phase, arp, arq
    for p in range(n):
        a[p, p] = a[p, p].real
    for sweep in range(max_sweeps + 1):
        if _off_norm_complex(a) <= tol:
            return sweep
        if sweep == max_sweeps:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                z = a[p, q]
                rr = sqrt(z.real * z.real + z.imag * z.imag)
                if rr == 0.0:
                    continue
                phase = z.conjugate() / rr
                app = a[p, p].real
                aqq = a[q, q].real
                t = _rotation_t(app, aqq, rr)
                c = 1.0 / sqrt(t * t + 1.0)
                s = t * c
                tau = s / (1.0 + c)
                a[p, p] = app - t * rr
                a[q, q] = aqq + t * rr
                a[p, q] = 0.0
                a[q, p] = 0.0
                for r in range(n):
                    if r == p or r == q:
                        continue
                    arp = a[r, p]
                    arq = a[r, q] * phase
                    arp, arq = arp - s * (arq + tau * arp), arq + s * (arp - tau * arq)
                    a[r, p] = arp
                    a[p, r] = arp.conjugate()
                    a[r, q] = arq
                    a[q, r] = arq.conjugate()
                for r in range(n):
                    arp = v[r, p]
                    arq = v[r, q] * phase
                    v[r, p] = arp - s * (arq + tau * arp)
                    v[r, q] = arq + s * (arp - tau * arq)
    return -1
