# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot loops: batched complex Hermitian Jacobi and BFS two-coloring."""

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, fabs, hypot

from metacyclic.errors import ConvergenceError

cnp.import_array()


cdef inline double cabs2(double complex z) noexcept nogil:
    return z.real * z.real + z.imag * z.imag


cdef int _jacobi_one(double complex* a, Py_ssize_t m, double tol, int max_sweeps) noexcept nogil:
    cdef Py_ssize_t p, q, r
    cdef double norm2 = 0.0, off2, g, app, aqq, theta, t, c, s
    cdef double complex e, ec, arp, arq, nrp, nrq
    cdef int sweep

    for p in range(m * m):
        norm2 += cabs2(a[p])
    if norm2 == 0.0:
        return 0

    for sweep in range(max_sweeps + 1):
        off2 = 0.0
        for p in range(m):
            for q in range(p + 1, m):
                off2 += cabs2(a[p * m + q])
        if 2.0 * off2 <= tol * tol * norm2:
            return sweep
        if sweep == max_sweeps:
            break
        for p in range(m - 1):
            for q in range(p + 1, m):
                g = hypot(a[p * m + q].real, a[p * m + q].imag)
                if g == 0.0:
                    continue
                app = a[p * m + p].real
                aqq = a[q * m + q].real
                theta = (aqq - app) / (2.0 * g)
                if fabs(theta) > 1e150:
                    t = 0.5 / theta
                else:
                    t = 1.0 / (fabs(theta) + sqrt(theta * theta + 1.0))
                    if theta < 0.0:
                        t = -t
                c = 1.0 / sqrt(t * t + 1.0)
                s = t * c
                e = a[p * m + q] / g
                ec = e.conjugate()
                for r in range(m):
                    if r == p or r == q:
                        continue
                    arp = a[r * m + p]
                    arq = a[r * m + q] * ec
                    nrp = c * arp - s * arq
                    nrq = s * arp + c * arq
                    a[r * m + p] = nrp
                    a[p * m + r] = nrp.conjugate()
                    a[r * m + q] = nrq
                    a[q * m + r] = nrq.conjugate()
                a[p * m + p] = app - t * g
                a[q * m + q] = aqq + t * g
                a[p * m + q] = 0.0
                a[q * m + p] = 0.0
    return -1


def jacobi_eigvalsh_batch(blocks, double tol=1e-12, int max_sweeps=60):
    """Eigenvalues (ascending) of a stack of complex Hermitian matrices, shape (B, m, m)."""
    work = np.array(blocks, dtype=np.complex128, order="C", copy=True)
    if work.ndim != 3 or work.shape[1] != work.shape[2]:
        raise ValueError(f"expected shape (B, m, m), got {work.shape}")
    cdef double complex[:, :, ::1] A = work
    cdef Py_ssize_t nb = A.shape[0], m = A.shape[1], b, i
    out = np.empty((nb, m), dtype=np.float64)
    cdef double[:, ::1] w = out
    cdef Py_ssize_t failed = -1
    if nb == 0 or m == 0:
        return out
    with nogil:
        for b in range(nb):
            if _jacobi_one(&A[b, 0, 0], m, tol, max_sweeps) < 0:
                failed = b
                break
            for i in range(m):
                w[b, i] = A[b, i, i].real
    if failed >= 0:
        raise ConvergenceError(f"Jacobi did not converge for block {failed} in {max_sweeps} sweeps")
    out.sort(axis=1)
    return out


def bfs_two_coloring(neighbors):
    """BFS from vertex 0 over an (N, d) neighbor table; negative entries are padding.

    Returns ``(reached, bipartite)``.
    """
    nb = np.ascontiguousarray(neighbors, dtype=np.int64)
    cdef cnp.int64_t[:, ::1] nbr = nb
    cdef Py_ssize_t N = nbr.shape[0], deg = nbr.shape[1]
    if N == 0:
        return 0, True
    color_arr = np.full(N, -1, dtype=np.int8)
    queue_arr = np.empty(N, dtype=np.int64)
    cdef signed char[::1] color = color_arr
    cdef cnp.int64_t[::1] queue = queue_arr
    cdef Py_ssize_t head = 0, tail = 1, d
    cdef cnp.int64_t v, u
    cdef bint bipartite = True
    color[0] = 0
    queue[0] = 0
    with nogil:
        while head < tail:
            v = queue[head]
            head += 1
            for d in range(deg):
                u = nbr[v, d]
                if u < 0:
                    continue
                if color[u] == -1:
                    color[u] = 1 - color[v]
                    queue[tail] = u
                    tail += 1
                elif color[u] == color[v]:
                    bipartite = False
    return int(tail), bool(bipartite)
