"""Jit-compiled kernels. Same contracts as numpy_backend."""

from __future__ import annotations

import numpy as np
from numba import njit

NAME = "numba"


@njit(cache=True, inline="always")
def _add(p, a, b):
    if p == 2:
        return a ^ b
    r = np.int64(0)
    mult = np.int64(1)
    while a or b:
        r += ((a + b) % p) * mult
        a //= p
        b //= p
        mult *= p
    return r


@njit(cache=True, inline="always")
def _sub(p, a, b):
    if p == 2:
        return a ^ b
    r = np.int64(0)
    mult = np.int64(1)
    while a or b:
        r += ((a - b) % p) * mult
        a //= p
        b //= p
        mult *= p
    return r


@njit(cache=True, inline="always")
def _mul(order, exp, log, a, b):
    if a == 0 or b == 0:
        return np.int64(0)
    return exp[(log[a] + log[b]) % order]


@njit(cache=True)
def mat_mul(p, order, exp, log, A, B):
    m, k = A.shape
    n = B.shape[1]
    out = np.zeros((m, n), np.int64)
    for i in range(m):
        for j in range(n):
            acc = np.int64(0)
            for t in range(k):
                acc = _add(p, acc, _mul(order, exp, log, A[i, t], B[t, j]))
            out[i, j] = acc
    return out


@njit(cache=True)
def rref(p, order, exp, log, A, pivots):
    """In-place reduced row echelon form; returns rank.

    pivots must be an int64 scratch array of length >= ncols; entry k
    receives the column of the k-th pivot.
    """
    nr, nc = A.shape
    r = 0
    for col in range(nc):
        if r == nr:
            break
        piv = -1
        for i in range(r, nr):
            if A[i, col] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for j in range(nc):
                tmp = A[r, j]
                A[r, j] = A[piv, j]
                A[piv, j] = tmp
        a = A[r, col]
        if a != 1:
            ia = exp[(order - log[a]) % order]
            for j in range(col, nc):
                A[r, j] = _mul(order, exp, log, ia, A[r, j])
        for i in range(nr):
            if i != r and A[i, col] != 0:
                f = A[i, col]
                for j in range(col, nc):
                    A[i, j] = _sub(p, A[i, j], _mul(order, exp, log, f, A[r, j]))
        pivots[r] = col
        r += 1
    return r


@njit(cache=True)
def orbit_fill(
    p,
    order,
    exp,
    log,
    total,
    rows,
    cols,
    radices,
    code_of_idx,
    idx_of_code,
    strides,
    gen_left,
    gen_right,
    orbit_id,
    queue,
):
    """Breadth-first orbit closure over all point codes.

    orbit_id (int64[total], initialized to -1) receives an orbit number
    per code; numbers are assigned in ascending order of each orbit's
    least code.  Returns the number of orbits.
    """
    n_slots = rows.shape[0]
    n_gens = gen_left.shape[0]
    maxr = strides.shape[1]
    maxc = strides.shape[2]
    mats = np.zeros((n_slots, maxr, maxc), np.int64)
    tmp = np.zeros((maxr, maxc), np.int64)
    n_orbits = 0
    for start in range(total):
        if orbit_id[start] >= 0:
            continue
        oid = n_orbits
        n_orbits += 1
        orbit_id[start] = oid
        queue[0] = start
        head, tail = 0, 1
        while head < tail:
            code = queue[head]
            head += 1
            c = code
            for s in range(n_slots - 1, -1, -1):
                rad = radices[s]
                for i in range(rows[s] - 1, -1, -1):
                    for j in range(cols[s] - 1, -1, -1):
                        mats[s, i, j] = code_of_idx[s, c % rad]
                        c //= rad
            for g in range(n_gens):
                newcode = np.int64(0)
                for s in range(n_slots):
                    nr = rows[s]
                    nc = cols[s]
                    for i in range(nr):
                        for j in range(nc):
                            acc = np.int64(0)
                            for t in range(nr):
                                acc = _add(
                                    p,
                                    acc,
                                    _mul(order, exp, log, gen_left[g, s, i, t], mats[s, t, j]),
                                )
                            tmp[i, j] = acc
                    for i in range(nr):
                        for j in range(nc):
                            acc = np.int64(0)
                            for t in range(nc):
                                acc = _add(
                                    p,
                                    acc,
                                    _mul(order, exp, log, tmp[i, t], gen_right[g, s, t, j]),
                                )
                            newcode += strides[s, i, j] * idx_of_code[s, acc]
                if orbit_id[newcode] < 0:
                    orbit_id[newcode] = oid
                    queue[tail] = newcode
                    tail += 1
    return n_orbits


@njit(cache=True)
def fiber_fill(base, divs, radices, strides, total, orbit_of_code, counts):
    """Count middle-term orbits over all fiber configurations.

    Configuration t in [0, total) sets free entry e to index
    (t // divs[e]) % radices[e]; the resulting point code is base plus
    the stride-weighted indices.  counts[orbit] is incremented per hit.
    """
    n_ent = divs.shape[0]
    for t in range(total):
        code = base
        for e in range(n_ent):
            code += strides[e] * ((t // divs[e]) % radices[e])
        counts[orbit_of_code[code]] += 1
