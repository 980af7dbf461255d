"""Pure-numpy fallback kernels. Same contracts as numba_backend."""

from __future__ import annotations

import numpy as np

NAME = "numpy"

_CHUNK = 1 << 20


def _add_arr(p, a, b):
    if p == 2:
        return a ^ b
    out = np.zeros(np.broadcast(a, b).shape, np.int64)
    a = a.copy() if isinstance(a, np.ndarray) else np.full_like(out, a)
    b = b.copy() if isinstance(b, np.ndarray) else np.full_like(out, b)
    mult = 1
    while a.any() or b.any():
        out += ((a + b) % p) * mult
        a //= p
        b //= p
        mult *= p
    return out


def _sub_scalar(p, a, b):
    if p == 2:
        return a ^ b
    r, mult = 0, 1
    while a or b:
        r += ((a - b) % p) * mult
        a //= p
        b //= p
        mult *= p
    return r


def _mul_scalar_arr(order, exp, log, a, B):
    out = np.zeros_like(B)
    if a == 0:
        return out
    nz = B != 0
    out[nz] = exp[(log[a] + log[B[nz]]) % order]
    return out


def mat_mul(p, order, exp, log, A, B):
    m, k = A.shape
    n = B.shape[1]
    out = np.zeros((m, n), np.int64)
    for i in range(m):
        acc = np.zeros(n, np.int64)
        for t in range(k):
            acc = _add_arr(p, acc, _mul_scalar_arr(order, exp, log, A[i, t], B[t, :]))
        out[i] = acc
    return out


def rref(p, order, exp, log, A, pivots):
    nr, nc = A.shape
    r = 0
    for col in range(nc):
        if r == nr:
            break
        nz = np.nonzero(A[r:, col])[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            A[[r, piv]] = A[[piv, r]]
        a = int(A[r, col])
        if a != 1:
            ia = int(exp[(order - log[a]) % order])
            A[r] = _mul_scalar_arr(order, exp, log, ia, A[r])
        for i in range(nr):
            f = int(A[i, col])
            if i != r and f != 0:
                prod = _mul_scalar_arr(order, exp, log, f, A[r])
                if p == 2:
                    A[i] ^= prod
                else:
                    A[i] = np.array(
                        [_sub_scalar(p, int(x), int(y)) for x, y in zip(A[i], prod)],
                        np.int64,
                    )
        pivots[r] = col
        r += 1
    return r


def _bmm_left(p, order, exp, log, A, X):
    # A (m,k) constant by X (F,k,n) batched
    F, k, n = X.shape
    m = A.shape[0]
    out = np.zeros((F, m, n), np.int64)
    for i in range(m):
        acc = np.zeros((F, n), np.int64)
        for t in range(k):
            acc = _add_arr(p, acc, _mul_scalar_arr(order, exp, log, int(A[i, t]), X[:, t, :]))
        out[:, i, :] = acc
    return out


def _bmm_right(p, order, exp, log, X, A):
    # X (F,m,k) batched by A (k,n) constant
    F, m, k = X.shape
    n = A.shape[1]
    out = np.zeros((F, m, n), np.int64)
    for j in range(n):
        acc = np.zeros((F, m), np.int64)
        for t in range(k):
            acc = _add_arr(p, acc, _mul_scalar_arr(order, exp, log, int(A[t, j]), X[:, :, t]))
        out[:, :, j] = acc
    return out


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
    n_slots = rows.shape[0]
    n_gens = gen_left.shape[0]
    n_orbits = 0
    for start in range(total):
        if orbit_id[start] >= 0:
            continue
        oid = n_orbits
        n_orbits += 1
        orbit_id[start] = oid
        frontier = np.array([start], np.int64)
        while frontier.size:
            # decode the whole frontier per slot
            Xs = []
            for s in range(n_slots):
                nr, nc = int(rows[s]), int(cols[s])
                st = strides[s, :nr, :nc]
                idx = (frontier[:, None, None] // st) % radices[s]
                Xs.append(code_of_idx[s][idx])
            produced = []
            for g in range(n_gens):
                newcodes = np.zeros(frontier.shape, np.int64)
                for s in range(n_slots):
                    nr, nc = int(rows[s]), int(cols[s])
                    Y = _bmm_left(p, order, exp, log, gen_left[g, s, :nr, :nr], Xs[s])
                    Y = _bmm_right(p, order, exp, log, Y, gen_right[g, s, :nc, :nc])
                    newcodes += (idx_of_code[s][Y] * strides[s, :nr, :nc]).sum(axis=(1, 2))
                produced.append(newcodes)
            cand = np.unique(np.concatenate(produced))
            fresh = cand[orbit_id[cand] < 0]
            orbit_id[fresh] = oid
            frontier = fresh
    return n_orbits


def fiber_fill(base, divs, radices, strides, total, orbit_of_code, counts):
    for lo in range(0, total, _CHUNK):
        t = np.arange(lo, min(lo + _CHUNK, total), dtype=np.int64)
        codes = np.full(t.shape, base, np.int64)
        for e in range(divs.shape[0]):
            codes += strides[e] * ((t // divs[e]) % radices[e])
        counts += np.bincount(orbit_of_code[codes], minlength=counts.shape[0])
