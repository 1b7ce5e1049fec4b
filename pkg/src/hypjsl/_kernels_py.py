"""Pure-Python fallback for the compiled kernels.

Same contract as ``_kernels.pyx``; selected by ``_backend`` when the
extension is unavailable (or when HYPJSL_PURE_PYTHON is set).  The
four-point scan is vectorized with numpy; the product scan is a plain
depth-first walk, fast enough at the depths the budget allows.
"""

from __future__ import annotations

import math

import numpy as np


def fpc_max_defect(dist) -> float:
    """Max four-point-condition defect over all point quadruples.

    For a quadruple the three pair-pairing sums s1 >= s2 >= s3 give a
    defect of (s1 - s2)/2; the scan returns the worst defect, i.e. the
    minimal delta for which the table satisfies the four point condition.
    """
    d = np.ascontiguousarray(dist, dtype=np.float64)
    n = d.shape[0]
    if d.shape[1] != n:
        raise ValueError("distance table must be square")
    if n < 4:
        return 0.0
    best = 0.0
    # quadruples a < b < c < e: loop (a, b), vectorize over pairs (c, e)
    for b in range(1, n - 2):
        c_idx, e_idx = np.triu_indices(n - b - 1, k=1)
        c_idx = c_idx + b + 1
        e_idx = e_idx + b + 1
        d_ce = d[c_idx, e_idx]
        d_bc = d[b, c_idx]
        d_be = d[b, e_idx]
        for a in range(b):
            s1 = d[a, b] + d_ce
            s2 = d[a, c_idx] + d_be
            s3 = d[a, e_idx] + d_bc
            top = np.maximum(s1, np.maximum(s2, s3))
            bot = np.minimum(s1, np.minimum(s2, s3))
            # top - median == 2*top + bot - (s1+s2+s3)
            m = float(np.max(2.0 * top + bot - (s1 + s2 + s3)))
            if m > best:
                best = m
    return 0.5 * best


def product_scan(gens, depth: int):
    """Per-length extremes of log||P||_2 and log rho(P) over all products.

    ``gens`` is a (k, 4) array of row-major 2x2 matrices.  Entry m-1 of
    each returned array is the max over all k^m products of exactly m
    factors; -inf where every product of that length was zero/nilpotent.
    Products are kept scaled (unit-band norm plus accumulated log) so
    depth is limited by the caller's budget, not by overflow.
    """
    g = [tuple(float(x) for x in row) for row in np.asarray(gens, dtype=np.float64)]
    k = len(g)
    if depth < 1:
        raise ValueError("depth must be >= 1")
    if any(len(row) != 4 for row in g):
        raise ValueError("generators must be rows of 4 entries")
    max_norm = np.full(depth, -math.inf)
    max_rho = np.full(depth, -math.inf)
    # DFS stack: level i holds the scaled product of the first i letters
    mats = [(1.0, 0.0, 0.0, 1.0, 0.0)] * (depth + 1)
    child = [0] * (depth + 1)
    pos = 0
    while pos >= 0:
        j = child[pos]
        if j == k:
            pos -= 1
            continue
        child[pos] = j + 1
        pa, pb, pc, pd, ls = mats[pos]
        ga, gb, gc, gd = g[j]
        a = pa * ga + pb * gc
        b = pa * gb + pb * gd
        c = pc * ga + pd * gc
        dd = pc * gb + pd * gd
        t = a * a + b * b + c * c + dd * dd
        de = a * dd - b * c
        dt = abs(de)
        disc = (t - 2.0 * dt) * (t + 2.0 * dt)
        if disc < 0.0:
            disc = 0.0
        norm = math.sqrt(0.5 * (t + math.sqrt(disc)))
        if norm == 0.0:
            continue  # zero product: every extension stays zero
        ln = ls + math.log(norm)
        if ln > max_norm[pos]:
            max_norm[pos] = ln
        tr = a + dd
        di = tr * tr - 4.0 * de
        if di >= 0.0:
            rho = 0.5 * (abs(tr) + math.sqrt(di))
        else:
            rho = math.sqrt(de)
        if rho > 0.0:
            lr = ls + math.log(rho)
            if lr > max_rho[pos]:
                max_rho[pos] = lr
        if pos + 1 < depth:
            if norm < 0.5 or norm > 2.0:
                inv = 1.0 / norm
                a *= inv
                b *= inv
                c *= inv
                dd *= inv
                ls += math.log(norm)
            mats[pos + 1] = (a, b, c, dd, ls)
            child[pos + 1] = 0
            pos += 1
    return max_norm, max_rho
