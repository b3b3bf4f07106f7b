"""Hot integer kernels: group-ring convolution and Smith reduction mod p**k.

Each kernel has a numba-compiled implementation and a pure-numpy one with the
same signature.  The numba path is used when numba imports and the environment
variable ``GRLAB_NUMBA`` is not set to ``0``.
"""
import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover
    numba = None

USE_NUMBA = numba is not None and os.environ.get("GRLAB_NUMBA", "1") != "0"


# -- convolution -------------------------------------------------------------

def convolve_np(table, a, b, m):
    n = table.shape[0]
    out = np.zeros(n, dtype=np.int64)
    prod = np.outer(a, b) % m
    np.add.at(out, table.ravel(), prod.ravel())
    return out % m


def _convolve_loop(table, a, b, m):
    n = table.shape[0]
    out = np.zeros(n, dtype=np.int64)
    for i in range(n):
        ai = a[i]
        if ai == 0:
            continue
        row = table[i]
        for j in range(n):
            bj = b[j]
            if bj != 0:
                w = row[j]
                out[w] = (out[w] + ai * bj) % m
    return out


# -- Smith reduction ---------------------------------------------------------

def _inv_mod(a, m):
    # a is a unit mod m
    r0, r1 = m, a % m
    s0, s1 = 0, 1
    while r1 != 0:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    return s0 % m


def _valuation(a, p, k):
    if a == 0:
        return k
    v = 0
    while a % p == 0:
        a //= p
        v += 1
    return v


def _snf_loop(A, p, k, m):
    """In-place Smith reduction of A (r x c) over Z/p^k.

    Returns (U, V, Vinv, vals, rank) with U @ A0 @ V == diag(p**vals) mod m.
    """
    r, c = A.shape
    U = np.eye(r, dtype=np.int64)
    V = np.eye(c, dtype=np.int64)
    Vinv = np.eye(c, dtype=np.int64)
    vals = np.zeros(min(r, c), dtype=np.int64)
    t = 0
    while t < min(r, c):
        best = k
        bi = -1
        bj = -1
        for i in range(t, r):
            for j in range(t, c):
                a = A[i, j]
                if a != 0:
                    v = _valuation(a, p, k)
                    if v < best:
                        best = v
                        bi = i
                        bj = j
                        if v == 0:
                            break
            if best == 0:
                break
        if bi < 0:
            break
        if bi != t:
            for j in range(c):
                tmp = A[t, j]
                A[t, j] = A[bi, j]
                A[bi, j] = tmp
            for j in range(r):
                tmp = U[t, j]
                U[t, j] = U[bi, j]
                U[bi, j] = tmp
        if bj != t:
            for i in range(r):
                tmp = A[i, t]
                A[i, t] = A[i, bj]
                A[i, bj] = tmp
            for i in range(c):
                tmp = V[i, t]
                V[i, t] = V[i, bj]
                V[i, bj] = tmp
            for j in range(c):
                tmp = Vinv[t, j]
                Vinv[t, j] = Vinv[bj, j]
                Vinv[bj, j] = tmp
        pv = 1
        for _ in range(best):
            pv *= p
        unit = (A[t, t] // pv) % m
        inv = _inv_mod(unit, m)
        for j in range(c):
            A[t, j] = (A[t, j] * inv) % m
        for j in range(r):
            U[t, j] = (U[t, j] * inv) % m
        for i in range(t + 1, r):
            f = A[i, t] // pv
            if f != 0:
                for j in range(c):
                    A[i, j] = (A[i, j] - f * A[t, j]) % m
                for j in range(r):
                    U[i, j] = (U[i, j] - f * U[t, j]) % m
        for j in range(t + 1, c):
            f = A[t, j] // pv
            if f != 0:
                for i in range(r):
                    A[i, j] = (A[i, j] - f * A[i, t]) % m
                for i in range(c):
                    V[i, j] = (V[i, j] - f * V[i, t]) % m
                for jj in range(c):
                    Vinv[t, jj] = (Vinv[t, jj] + f * Vinv[j, jj]) % m
        vals[t] = best
        t += 1
    return U, V, Vinv, vals[:t], t


def snf_np(A, p, k, m):
    A = A.copy()
    r, c = A.shape
    U = np.eye(r, dtype=np.int64)
    V = np.eye(c, dtype=np.int64)
    Vinv = np.eye(c, dtype=np.int64)
    vals = []
    powers = [p ** j for j in range(1, k + 1)]
    t = 0
    while t < min(r, c):
        sub = A[t:, t:]
        val = np.zeros(sub.shape, dtype=np.int64)
        for q in powers:
            val += (sub % q == 0)
        i, j = np.unravel_index(np.argmin(val), val.shape)
        best = int(val[i, j])
        if best >= k:
            break
        bi, bj = t + i, t + j
        A[[t, bi]] = A[[bi, t]]
        U[[t, bi]] = U[[bi, t]]
        A[:, [t, bj]] = A[:, [bj, t]]
        V[:, [t, bj]] = V[:, [bj, t]]
        Vinv[[t, bj]] = Vinv[[bj, t]]
        pv = p ** best
        inv = pow(int(A[t, t] // pv) % m, -1, m)
        A[t] = A[t] * inv % m
        U[t] = U[t] * inv % m
        f = A[t + 1:, t] // pv
        A[t + 1:] = (A[t + 1:] - np.outer(f, A[t])) % m
        U[t + 1:] = (U[t + 1:] - np.outer(f, U[t])) % m
        g = A[t, t + 1:] // pv
        A[:, t + 1:] = (A[:, t + 1:] - np.outer(A[:, t], g)) % m
        V[:, t + 1:] = (V[:, t + 1:] - np.outer(V[:, t], g)) % m
        Vinv[t] = (Vinv[t] + g @ Vinv[t + 1:]) % m
        vals.append(best)
        t += 1
    return U, V, Vinv, np.array(vals, dtype=np.int64), t


if numba is not None:
    _jit = numba.njit(cache=True)
    convolve_nb = _jit(_convolve_loop)
    _inv_mod = _jit(_inv_mod)
    _valuation = _jit(_valuation)
    _snf_nb_raw = _jit(_snf_loop)

    def snf_nb(A, p, k, m):
        return _snf_nb_raw(A.copy(), p, k, m)
else:  # pragma: no cover
    convolve_nb = None
    snf_nb = None

if USE_NUMBA:
    convolve = convolve_nb
    snf = snf_nb
else:
    convolve = convolve_np
    snf = snf_np

