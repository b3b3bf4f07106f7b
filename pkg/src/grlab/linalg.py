"""Exact linear algebra over Q and over Z/p^k.

Over Z/p^k everything goes through a Smith reduction ``U @ M @ V = D`` with
``D`` diagonal, entries ``p**v``.  Pivots always have minimal valuation, so
solvability and kernels are decided correctly even though Z/p^k is not a field.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _kernels
from .rings import ScalarRing


@dataclass
class Smith:
    ring: ScalarRing
    shape: tuple[int, int]
    U: np.ndarray
    V: np.ndarray
    Vinv: np.ndarray
    vals: np.ndarray
    rank: int

    @property
    def rank_mod_p(self) -> int:
        return int((self.vals == 0).sum())

    @property
    def max_pivot_valuation(self) -> int:
        return int(self.vals.max()) if self.rank else 0

    def solve(self, b: np.ndarray):
        """One solution x of M x = b, or None."""
        p, m = self.ring.p, self.ring.modulus
        c = (self.U @ (np.asarray(b, dtype=np.int64) % m)) % m
        y = np.zeros(self.shape[1], dtype=np.int64)
        for t in range(self.rank):
            pv = p ** int(self.vals[t])
            if c[t] % pv:
                return None
            y[t] = (c[t] // pv) % (m // pv)
        if np.any(c[self.rank:]):
            return None
        return (self.V @ y) % m

    def free_kernel(self) -> np.ndarray:
        """Rows spanning the free part of the kernel (zero diagonal entries)."""
        return self.V[:, self.rank:].T.copy()

    def torsion_kernel(self) -> np.ndarray:
        p, k, m = self.ring.p, self.ring.k, self.ring.modulus
        rows = [(self.V[:, t] * p ** (k - int(self.vals[t]))) % m
                for t in range(self.rank) if self.vals[t] > 0]
        return np.array(rows, dtype=np.int64).reshape(len(rows), self.shape[1])

    def row_module(self, M: np.ndarray) -> np.ndarray:
        """Independent generators p**v * w_t of the row module of M."""
        p, m = self.ring.p, self.ring.modulus
        rows = [(self.Vinv[t] * p ** int(self.vals[t])) % m for t in range(self.rank)]
        return np.array(rows, dtype=np.int64).reshape(self.rank, self.shape[1])


def smith(M: np.ndarray, ring: ScalarRing) -> Smith:
    M = np.ascontiguousarray(np.asarray(M, dtype=np.int64) % ring.modulus)
    if M.shape[0] == 0 or M.shape[1] == 0:
        r, c = M.shape
        return Smith(ring, M.shape, np.eye(r, dtype=np.int64), np.eye(c, dtype=np.int64),
                     np.eye(c, dtype=np.int64), np.zeros(0, dtype=np.int64), 0)
    U, V, Vinv, vals, rank = _kernels.snf(M, ring.p, ring.k, ring.modulus)
    return Smith(ring, M.shape, U, V, Vinv, np.asarray(vals), int(rank))


# -- rationals ----------------------------------------------------------------

def rref_q(M) -> tuple[list[list[Fraction]], list[int]]:
    R = [[Fraction(x) for x in row] for row in M]
    nrows = len(R)
    ncols = len(R[0]) if R else 0
    piv, r = [], 0
    for c in range(ncols):
        i = next((i for i in range(r, nrows) if R[i][c] != 0), None)
        if i is None:
            continue
        R[r], R[i] = R[i], R[r]
        inv = 1 / R[r][c]
        R[r] = [x * inv for x in R[r]]
        for i in range(nrows):
            if i != r and R[i][c] != 0:
                f = R[i][c]
                R[i] = [a - f * b for a, b in zip(R[i], R[r])]
        piv.append(c)
        r += 1
        if r == nrows:
            break
    return R[:r], piv


def kernel_q(M) -> np.ndarray:
    M = [list(row) for row in M]
    ncols = len(M[0])
    R, piv = rref_q(M)
    free = [c for c in range(ncols) if c not in piv]
    out = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, pc in zip(R, piv):
            v[pc] = -row[f]
        out.append(v)
    return np.array(out, dtype=object).reshape(len(out), ncols)


def solve_q(M, b):
    M = [list(row) for row in M]
    ncols = len(M[0])
    aug = [row + [bi] for row, bi in zip(M, b)]
    R, piv = rref_q(aug)
    if ncols in piv:
        return None
    x = [Fraction(0)] * ncols
    for row, pc in zip(R, piv):
        x[pc] = row[-1]
    return np.array(x, dtype=object)


# -- ring-generic entry points ---------------------------------------------------

def solve(M, b, ring: ScalarRing):
    """A solution of M x = b over the ring, or None."""
    if ring.is_modular:
        return smith(M, ring).solve(b)
    return solve_q(M, b)


def kernel(M, ring: ScalarRing) -> np.ndarray:
    """Rows forming a basis of the (free part of the) kernel of M."""
    if ring.is_modular:
        return smith(M, ring).free_kernel()
    return kernel_q(M)


def rank_mod_p(M, ring: ScalarRing) -> int:
    return smith(np.asarray(M, dtype=np.int64) % ring.p, ring.residue_field()).rank


def echelon(rows: np.ndarray, ring: ScalarRing) -> tuple[np.ndarray, list[int], bool]:
    """Reduced echelon form with unit pivots.

    Returns (rows, pivot columns, pure).  ``pure`` is False when rows remain
    that have no unit entry, i.e. the row module is not a direct summand.
    """
    if not ring.is_modular:
        R, piv = rref_q(rows)
        return np.array(R, dtype=object).reshape(len(R), len(rows[0]) if len(rows) else 0), piv, True
    p, m = ring.p, ring.modulus
    R = np.array(rows, dtype=np.int64) % m
    nrows, ncols = R.shape
    piv, r = [], 0
    for c in range(ncols):
        cand = np.nonzero(R[r:, c] % p)[0]
        if len(cand) == 0:
            continue
        i = r + int(cand[0])
        R[[r, i]] = R[[i, r]]
        R[r] = R[r] * pow(int(R[r, c]), -1, m) % m
        f = R[:, c].copy()
        f[r] = 0
        R = (R - np.outer(f, R[r])) % m
        piv.append(c)
        r += 1
        if r == nrows:
            break
    pure = not np.any(R[r:])
    return R[:r], piv, pure
