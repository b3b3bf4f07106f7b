"""Associative algebras over Z/p^k given by structure constants.

The F_p routines here (radical, centre, splitting of the semisimple quotient,
lifting through the radical) only run on algebras with ``k == 1``.
"""
from __future__ import annotations

from functools import cached_property

import numpy as np

from . import linalg
from .rings import ScalarRing


class AlgebraError(RuntimeError):
    """An internal invariant of a decomposition was violated."""


class StructAlgebra:
    """Algebra with basis b_0..b_{d-1} and b_i b_j = sum_l consts[i, j, l] b_l."""

    def __init__(self, consts: np.ndarray, one: np.ndarray, p: int, k: int):
        self.p, self.k = p, k
        self.m = p ** k
        self.consts = np.asarray(consts, dtype=np.int64) % self.m
        self.dim = self.consts.shape[0]
        self.one = np.asarray(one, dtype=np.int64) % self.m
        self._flat = self.consts.reshape(self.dim, self.dim * self.dim)

    @property
    def ring(self) -> ScalarRing:
        return ScalarRing.prime_field(self.p) if self.k == 1 else ScalarRing.padic(self.p, self.k)

    def vec(self, x) -> np.ndarray:
        return np.asarray(x, dtype=np.int64) % self.m

    def mul(self, x, y) -> np.ndarray:
        d, m = self.dim, self.m
        t = (np.asarray(x, dtype=np.int64) @ self._flat) % m
        return (np.asarray(y, dtype=np.int64) @ t.reshape(d, d)) % m

    def left_matrix(self, x) -> np.ndarray:
        """L with L @ y == x*y."""
        t = (np.asarray(x, dtype=np.int64) @ self._flat) % self.m
        return t.reshape(self.dim, self.dim).T.copy()

    def right_matrix(self, y) -> np.ndarray:
        """R with R @ x == x*y."""
        t = np.tensordot(self.consts, np.asarray(y, dtype=np.int64) % self.m, axes=([1], [0]))
        return (t % self.m).T.copy()

    def power(self, x, n: int, unit=None) -> np.ndarray:
        out = self.one if unit is None else self.vec(unit)
        base = self.vec(x)
        while n:
            if n & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            n >>= 1
        return out

    def is_idempotent(self, e) -> bool:
        return np.array_equal(self.mul(e, e), self.vec(e))

    def is_unit(self, x) -> bool:
        """Units are detected mod p through the rank of left multiplication."""
        L = self.left_matrix(x) % self.p
        return linalg.smith(L, ScalarRing.prime_field(self.p)).rank == self.dim

    def reduce(self, k: int = 1) -> "StructAlgebra":
        return StructAlgebra(self.consts, self.one, self.p, k)

    def is_commutative(self) -> bool:
        return np.array_equal(self.consts, self.consts.transpose(1, 0, 2))

    # -- F_p subspaces ------------------------------------------------------------

    def _field(self) -> ScalarRing:
        if self.k != 1:
            raise AlgebraError("operation needs an algebra over a prime field")
        return ScalarRing.prime_field(self.p)

    def span(self, rows) -> tuple[np.ndarray, list[int]]:
        F = self._field()
        rows = np.asarray(rows, dtype=np.int64).reshape(-1, self.dim) % self.p
        if not len(rows):
            return rows, []
        R, piv, _ = linalg.echelon(rows, F)
        return R, piv

    def kernel_rows(self, M) -> np.ndarray:
        return linalg.kernel(np.asarray(M, dtype=np.int64) % self.p, self._field())

    def subalgebra(self, rows, one) -> tuple["StructAlgebra", np.ndarray]:
        """Subalgebra spanned by rows, returning it and its basis in self coords."""
        B, piv = self.span(rows)
        d = len(B)
        consts = np.zeros((d, d, d), dtype=np.int64)
        for i in range(d):
            for j in range(d):
                prod = self.mul(B[i], B[j])
                c = prod[piv]
                if not np.array_equal(c @ B % self.p, prod):
                    raise AlgebraError("span is not closed under multiplication")
                consts[i, j] = c
        one = self.vec(one)
        return StructAlgebra(consts, one[piv], self.p, 1), B

    def corner(self, e) -> tuple["StructAlgebra", np.ndarray]:
        """The algebra eAe with identity e."""
        rows = [self.mul(self.mul(e, b), e) for b in np.eye(self.dim, dtype=np.int64)]
        return self.subalgebra(rows, e)

    def generated(self, a, unit) -> tuple["StructAlgebra", np.ndarray]:
        """Commutative subalgebra F_p[a] with identity ``unit``."""
        powers = [self.vec(unit)]
        rank = 1
        cur = self.vec(unit)
        while True:
            cur = self.mul(cur, a)
            cand = powers + [cur]
            r = len(self.span(cand)[0])
            if r == rank:
                break
            powers.append(cur)
            rank = r
        return self.subalgebra(powers, unit)

    def quotient(self, ideal_rows) -> "Quotient":
        return Quotient(self, ideal_rows)

    @cached_property
    def radical(self) -> np.ndarray:
        return radical(self)


class Quotient:
    """A/I for an ideal I, with complement coordinates at non-pivot columns."""

    def __init__(self, parent: StructAlgebra, ideal_rows):
        self.parent = parent
        self.ideal, self.ideal_piv = parent.span(ideal_rows)
        self.cols = [c for c in range(parent.dim) if c not in set(self.ideal_piv)]
        d = len(self.cols)
        consts = np.zeros((d, d, d), dtype=np.int64)
        eye = np.eye(parent.dim, dtype=np.int64)
        for i, ci in enumerate(self.cols):
            for j, cj in enumerate(self.cols):
                consts[i, j] = self.project(parent.mul(eye[ci], eye[cj]))
        self.algebra = StructAlgebra(consts, self.project(parent.one), parent.p, 1)

    def reduce(self, x) -> np.ndarray:
        x = self.parent.vec(x) % self.parent.p
        for row, c in zip(self.ideal, self.ideal_piv):
            x = (x - x[c] * row) % self.parent.p
        return x

    def project(self, x) -> np.ndarray:
        return self.reduce(x)[self.cols]

    def lift(self, y) -> np.ndarray:
        x = np.zeros(self.parent.dim, dtype=np.int64)
        x[self.cols] = y
        return x


# -- radical ------------------------------------------------------------------------

def _matpow_mod(M: np.ndarray, n: int, mod: int) -> np.ndarray:
    out = np.eye(M.shape[0], dtype=np.int64)
    base = M % mod
    while n:
        if n & 1:
            out = out @ base % mod
        base = base @ base % mod
        n >>= 1
    return out


def radical(A: StructAlgebra) -> np.ndarray:
    """Basis (rows, echelon form) of the Jacobson radical of A over F_p.

    Iterated kernels of the generalised trace forms: with a~ the integer lift
    of the left-regular matrix of a, g_i(a) = (tr(a~^(p^i)) mod p^(i+1)) / p^i,
    and I_i = {a in I_(i-1) : g_i(ab) = 0 for all b}; the radical is I_l with
    l = floor(log_p dim A).
    """
    p, d = A.p, A.dim
    A._field()
    if d == 0:
        return np.zeros((0, 0), dtype=np.int64)
    l = 0
    while p ** (l + 1) <= d:
        l += 1
    eye = np.eye(d, dtype=np.int64)
    current = eye.copy()
    for i in range(l + 1):
        q, mod = p ** i, p ** (i + 1)
        form = np.zeros((len(current), d), dtype=np.int64)
        for j, a in enumerate(current):
            for kk in range(d):
                L = A.left_matrix(A.mul(a, eye[kk]))
                tr = int(np.trace(_matpow_mod(L, q, mod))) % mod
                if tr % q:
                    raise AlgebraError("generalised trace is not divisible by p^i")
                form[j, kk] = (tr // q) % p
        lam = A.kernel_rows(form.T)
        if len(lam) == 0:
            return np.zeros((0, d), dtype=np.int64)
        current, _ = A.span(lam @ current % p)
    return current


def nilpotency_index(A: StructAlgebra, J: np.ndarray) -> int | None:
    """Least m with J^m = 0, or None if J is not nilpotent."""
    if len(J) == 0:
        return 1
    power = J
    for m in range(1, A.dim + 2):
        if len(power) == 0:
            return m
        prods = [A.mul(a, b) for a in power for b in J]
        power, _ = A.span(prods)
        power = power[np.any(power, axis=1)] if len(power) else power
    return None


def is_ideal(A: StructAlgebra, J: np.ndarray) -> bool:
    if len(J) == 0:
        return True
    _, piv = A.span(J)
    B, _ = A.span(J)
    eye = np.eye(A.dim, dtype=np.int64)
    for a in B:
        for b in eye:
            for prod in (A.mul(a, b), A.mul(b, a)):
                if not np.array_equal(prod[piv] @ B % A.p, prod):
                    return False
    return True


def certify_radical(A: StructAlgebra, J: np.ndarray) -> bool:
    """J is an ideal, nilpotent, and A/J has zero radical."""
    if not is_ideal(A, J) or nilpotency_index(A, J) is None:
        return False
    Q = A.quotient(J).algebra
    return len(radical(Q)) == 0


# -- commutative and semisimple splitting -------------------------------------------------

def centre(A: StructAlgebra) -> np.ndarray:
    eye = np.eye(A.dim, dtype=np.int64)
    blocks = [A.left_matrix(b) - A.right_matrix(b) for b in eye]
    # x in centre iff b x - x b = 0 for all b; left_matrix(b) @ x = b x, right_matrix(b) @ x = x b
    M = np.vstack(blocks) if blocks else np.zeros((0, A.dim), dtype=np.int64)
    return A.span(A.kernel_rows(M))[0]


def split_commutative(A: StructAlgebra, rows, unit) -> list[np.ndarray]:
    """Primitive idempotents of a commutative subalgebra (spanned by rows, unit ``unit``).

    In a finite commutative F_p-algebra z -> z^p - z is linear, and its kernel
    is spanned by the primitive idempotents; they are separated using
    e * (1 - (z - lam)^(p-1)), the Lagrange idempotent of z at eigenvalue lam.
    """
    p = A.p
    B, piv = A.span(rows)
    frob = np.array([(A.power(b, p, unit) - b)[piv] for b in B], dtype=np.int64) % p
    K = A.kernel_rows(frob.T)
    kvecs = [kv @ B % p for kv in K]
    unit = A.vec(unit)
    idems = [unit]
    for z in kvecs:
        refined = []
        for e in idems:
            for lam in range(p):
                w = (z - lam * unit) % p
                f = (e - A.mul(e, A.power(w, p - 1, unit))) % p
                if np.any(f):
                    refined.append(f)
        idems = refined
    if len(idems) != len(K):
        raise AlgebraError("commutative splitting produced the wrong number of idempotents")
    return idems


def _dim(A: StructAlgebra, rows) -> int:
    return len(A.span(rows)[0])


def corner_dim(A: StructAlgebra, e) -> int:
    eye = np.eye(A.dim, dtype=np.int64)
    return _dim(A, [A.mul(A.mul(e, b), e) for b in eye])


def semisimple_blocks(B: StructAlgebra) -> list[np.ndarray]:
    """Central primitive idempotents of a semisimple F_p-algebra."""
    Z = centre(B)
    return split_commutative(B, Z, B.one)


def split_simple_block(B: StructAlgebra, c, rng: np.random.Generator, max_tries: int = 2000):
    """Orthogonal primitive idempotents summing to the central idempotent c."""
    Z = centre(B)
    f = _dim(B, [B.mul(z, c) for z in Z])
    done, todo = [], [B.vec(c)]
    tries = 0
    eye = np.eye(B.dim, dtype=np.int64)
    while todo:
        e = todo.pop()
        if corner_dim(B, e) == f:
            done.append(e)
            continue
        while True:
            tries += 1
            if tries > max_tries:
                raise AlgebraError("failed to split a simple block")
            r = eye.T @ rng.integers(0, B.p, B.dim) % B.p
            a = B.mul(B.mul(e, r), e)
            C, Cb = B.generated(a, e)
            prims = split_commutative(B, Cb, e)
            if len(prims) > 1:
                todo.extend(prims)
                break
    return done


def lift_through_radical(A: StructAlgebra, Q: Quotient, idems, unit) -> list[np.ndarray]:
    """Lift orthogonal idempotents of A/J (summing to the image of unit) into A."""
    p = A.p
    unit = A.vec(unit) % p
    S = np.zeros(A.dim, dtype=np.int64)
    out = []
    for ebar in idems[:-1]:
        comp = (unit - S) % p
        a = A.mul(A.mul(comp, Q.lift(ebar)), comp)
        for _ in range(A.dim + 2):
            a2 = A.mul(a, a)
            if np.array_equal(a2, a):
                break
            a = (3 * a2 - 2 * A.mul(a2, a)) % p
        else:
            raise AlgebraError("idempotent lifting through the radical did not converge")
        out.append(a)
        S = (S + a) % p
    out.append((unit - S) % p)
    return out


def decompose_fp(A: StructAlgebra, unit, rng: np.random.Generator) -> list[np.ndarray]:
    """Orthogonal primitive idempotents of A (over F_p) summing to the idempotent unit."""
    unit = A.vec(unit)
    full = np.array_equal(unit, A.one)
    if full:
        C, Cb = A, np.eye(A.dim, dtype=np.int64)
    else:
        C, Cb = A.corner(unit)
    J = radical(C)
    Q = C.quotient(J)
    B = Q.algebra
    prims = []
    for c in semisimple_blocks(B):
        prims.extend(split_simple_block(B, c, rng))
    lifted = lift_through_radical(C, Q, prims, C.one)
    return [x @ Cb % A.p for x in lifted]


def is_local(A: StructAlgebra, e) -> bool:
    """eAe is local: its semisimple quotient is a field."""
    C, _ = A.corner(e)
    if C.dim == 0:
        return False
    Q = C.quotient(radical(C)).algebra
    if Q.dim == 0 or not Q.is_commutative():
        return False
    return len(split_commutative(Q, np.eye(Q.dim, dtype=np.int64), Q.one)) == 1
