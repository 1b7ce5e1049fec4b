# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels.

Two loops dominate the library's runtime: the O(n^4) four-point-condition
scan over a distance table and the exhaustive walk over matrix products up
to a given length.  Both are implemented here with the GIL released; the
pure-Python twin in ``_kernels_py`` follows the same operation order.
"""

from libc.math cimport fabs, log, sqrt

import numpy as np


def fpc_max_defect(dist):
    """Max four-point-condition defect over all point quadruples."""
    cdef double[:, ::1] d = np.ascontiguousarray(dist, dtype=np.float64)
    cdef Py_ssize_t n = d.shape[0]
    if d.shape[1] != n:
        raise ValueError("distance table must be square")
    if n < 4:
        return 0.0
    cdef double best = 0.0
    cdef double dab, s1, s2, s3, top, bot, m
    cdef Py_ssize_t a, b, c, e
    with nogil:
        for a in range(n - 3):
            for b in range(a + 1, n - 2):
                dab = d[a, b]
                for c in range(b + 1, n - 1):
                    for e in range(c + 1, n):
                        s1 = dab + d[c, e]
                        s2 = d[a, c] + d[b, e]
                        s3 = d[a, e] + d[b, c]
                        top = s1
                        bot = s1
                        if s2 > top:
                            top = s2
                        if s3 > top:
                            top = s3
                        if s2 < bot:
                            bot = s2
                        if s3 < bot:
                            bot = s3
                        m = 2.0 * top + bot - (s1 + s2 + s3)
                        if m > best:
                            best = m
    return 0.5 * best


def product_scan(gens, int depth):
    """Per-length extremes of log||P||_2 and log rho(P) over all products."""
    cdef double[:, ::1] g = np.ascontiguousarray(gens, dtype=np.float64)
    cdef Py_ssize_t k = g.shape[0]
    if g.shape[1] != 4:
        raise ValueError("generators must be rows of 4 entries")
    if depth < 1:
        raise ValueError("depth must be >= 1")
    out_norm = np.full(depth, -np.inf)
    out_rho = np.full(depth, -np.inf)
    cdef double[::1] mn = out_norm
    cdef double[::1] mr = out_rho
    mats_arr = np.empty((depth + 1, 5), dtype=np.float64)
    child_arr = np.zeros(depth + 1, dtype=np.intp)
    cdef double[:, ::1] mats = mats_arr
    cdef Py_ssize_t[::1] child = child_arr
    cdef Py_ssize_t pos = 0, j
    cdef double pa, pb, pc, pd, ls, ga, gb, gc, gd
    cdef double a, b, c, dd, t, de, dt, disc, norm, ln, tr, di, rho, lr, inv
    mats[0, 0] = 1.0
    mats[0, 1] = 0.0
    mats[0, 2] = 0.0
    mats[0, 3] = 1.0
    mats[0, 4] = 0.0
    child[0] = 0
    with nogil:
        while pos >= 0:
            j = child[pos]
            if j == k:
                pos -= 1
                continue
            child[pos] = j + 1
            pa = mats[pos, 0]
            pb = mats[pos, 1]
            pc = mats[pos, 2]
            pd = mats[pos, 3]
            ls = mats[pos, 4]
            ga = g[j, 0]
            gb = g[j, 1]
            gc = g[j, 2]
            gd = g[j, 3]
            a = pa * ga + pb * gc
            b = pa * gb + pb * gd
            c = pc * ga + pd * gc
            dd = pc * gb + pd * gd
            t = a * a + b * b + c * c + dd * dd
            de = a * dd - b * c
            dt = fabs(de)
            disc = (t - 2.0 * dt) * (t + 2.0 * dt)
            if disc < 0.0:
                disc = 0.0
            norm = sqrt(0.5 * (t + sqrt(disc)))
            if norm == 0.0:
                continue  # zero product: every extension stays zero
            ln = ls + log(norm)
            if ln > mn[pos]:
                mn[pos] = ln
            tr = a + dd
            di = tr * tr - 4.0 * de
            if di >= 0.0:
                rho = 0.5 * (fabs(tr) + sqrt(di))
            else:
                rho = sqrt(de)
            if rho > 0.0:
                lr = ls + log(rho)
                if lr > mr[pos]:
                    mr[pos] = lr
            if pos + 1 < depth:
                if norm < 0.5 or norm > 2.0:
                    inv = 1.0 / norm
                    a *= inv
                    b *= inv
                    c *= inv
                    dd *= inv
                    ls += log(norm)
                mats[pos + 1, 0] = a
                mats[pos + 1, 1] = b
                mats[pos + 1, 2] = c
                mats[pos + 1, 3] = dd
                mats[pos + 1, 4] = ls
                child[pos + 1] = 0
                pos += 1
    return out_norm, out_rho
