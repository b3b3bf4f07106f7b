"""Dense group-ring elements over an exact scalar ring."""
from __future__ import annotations

import re
from fractions import Fraction

import numpy as np

from . import _kernels, linalg
from .groups import FiniteGroup, GroupError, Subgroup
from .rings import ScalarRing


class GroupRingError(ValueError):
    pass


_TERM = re.compile(r"([+-]?)(?:(\d+(?:/\d+)?)\*?)?\((\d+)\)")


class GroupRingElement:
    """An element sum_g r_g g of RG, stored as a coefficient vector.

    Values are immutable; all arithmetic returns new elements.
    """

    __slots__ = ("group", "ring", "coeffs")

    def __init__(self, group: FiniteGroup, ring: ScalarRing, coeffs):
        coeffs = ring.reduce(np.asarray(coeffs))
        if coeffs.shape != (group.order,):
            raise GroupRingError(f"expected {group.order} coefficients, got {coeffs.shape}")
        coeffs.setflags(write=False)
        self.group = group
        self.ring = ring
        self.coeffs = coeffs

    # -- constructors -----------------------------------------------------------

    @classmethod
    def zero(cls, group, ring):
        return cls(group, ring, ring.zeros(group.order))

    @classmethod
    def basis(cls, group, ring, g: int, scalar=1):
        c = ring.zeros(group.order)
        c[g] = ring.scalar(scalar)
        return cls(group, ring, c)

    @classmethod
    def one(cls, group, ring):
        return cls.basis(group, ring, group.identity)

    @classmethod
    def from_dict(cls, group, ring, terms: dict):
        c = ring.zeros(group.order)
        for g, r in terms.items():
            c[g] = c[g] + ring.scalar(r)
        return cls(group, ring, c)

    @classmethod
    def subgroup_sum(cls, group, ring, elements):
        return cls.from_dict(group, ring, {g: 1 for g in elements})

    @classmethod
    def parse(cls, text: str, group, ring):
        """Parse a literal such as ``"3*(0) + 1*(4) - 2/3*(5)"``."""
        s = re.sub(r"\s+", "", text)
        if s in ("", "0"):
            return cls.zero(group, ring)
        terms: dict[int, Fraction] = {}
        pos = 0
        for mt in _TERM.finditer(s):
            if mt.start() != pos or (pos > 0 and not mt.group(1)):
                raise GroupRingError(f"cannot parse group-ring literal {text!r}")
            sign = -1 if mt.group(1) == "-" else 1
            coef = Fraction(mt.group(2)) if mt.group(2) else Fraction(1)
            g = int(mt.group(3))
            if g >= group.order:
                raise GroupRingError(f"element index {g} out of range for {group.name}")
            terms[g] = terms.get(g, 0) + sign * coef
            pos = mt.end()
        if pos != len(s):
            raise GroupRingError(f"cannot parse group-ring literal {text!r}")
        return cls.from_dict(group, ring, terms)

    def literal(self) -> str:
        parts = []
        for g in self.support():
            parts.append(f"{self.ring.show(self.coeffs[g])}*({g})")
        return " + ".join(parts).replace("+ -", "- ") if parts else "0"

    def __repr__(self):
        return f"<{self.ring} {self.group.name}: {self.literal()}>"

    def to_list(self) -> list:
        if self.ring.is_modular:
            return [int(x) for x in self.coeffs]
        return [str(x) for x in self.coeffs]

    # -- arithmetic -----------------------------------------------------------

    def _check(self, other):
        if not isinstance(other, GroupRingElement):
            raise GroupRingError("expected a group-ring element")
        if other.group is not self.group or other.ring != self.ring:
            raise GroupRingError("group or ring mismatch")

    def __add__(self, other):
        self._check(other)
        return GroupRingElement(self.group, self.ring, self.coeffs + other.coeffs)

    def __sub__(self, other):
        self._check(other)
        return GroupRingElement(self.group, self.ring, self.coeffs - other.coeffs)

    def __neg__(self):
        return GroupRingElement(self.group, self.ring, -self.coeffs)

    def __mul__(self, other):
        if isinstance(other, GroupRingElement):
            return self.multiply(other)
        return GroupRingElement(self.group, self.ring, self.coeffs * self.ring.scalar(other))

    def __rmul__(self, other):
        return GroupRingElement(self.group, self.ring, self.coeffs * self.ring.scalar(other))

    def multiply(self, other) -> "GroupRingElement":
        """Convolution product: coefficient of w is sum over gh = w of a_g b_h."""
        self._check(other)
        if self.ring.is_modular:
            out = _kernels.convolve(self.group.table, self.coeffs, other.coeffs, self.ring.modulus)
        else:
            out = self.ring.zeros(self.group.order)
            t = self.group.table
            for g in np.nonzero(self.coeffs)[0]:
                a = self.coeffs[g]
                for h in np.nonzero(other.coeffs)[0]:
                    out[t[g, h]] += a * other.coeffs[h]
        return GroupRingElement(self.group, self.ring, out)

    def __pow__(self, n: int):
        if n < 0:
            inv = self.try_invert()
            if inv is None:
                raise GroupRingError("element is not a unit")
            return inv ** (-n)
        out = GroupRingElement.one(self.group, self.ring)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        if not isinstance(other, GroupRingElement):
            return NotImplemented
        return (other.group is self.group and other.ring == self.ring
                and bool(np.all(self.coeffs == other.coeffs)))

    def __hash__(self):
        return hash((id(self.group), self.ring, tuple(self.to_list())))

    def is_zero(self) -> bool:
        return not np.any(self.coeffs != 0)

    def conj(self, v: "GroupRingElement", v_inv: "GroupRingElement | None" = None):
        """Return v^-1 a v."""
        if v_inv is None:
            v_inv = v.try_invert()
            if v_inv is None:
                raise GroupRingError("conjugating element is not a unit")
        return v_inv * self * v

    def conj_by_group(self, x: int) -> "GroupRingElement":
        """Return x^-1 a x for a group element x (a coefficient permutation)."""
        G = self.group
        # coefficient of x^-1 g x in result equals coefficient of g in a
        target = G.table[G.inverses[x], G.table[:, x]]
        out = self.ring.zeros(G.order)
        out[target] = self.coeffs
        return GroupRingElement(G, self.ring, out)

    # -- structure maps ---------------------------------------------------------

    def star(self) -> "GroupRingElement":
        """Anti-involution sum r_g g -> sum r_g g^-1."""
        out = self.ring.zeros(self.group.order)
        out[self.group.inverses] = self.coeffs
        return GroupRingElement(self.group, self.ring, out)

    def augmentation(self):
        return self.ring.reduce(np.array([self.coeffs.sum()]))[0]

    def partial_augmentations(self) -> np.ndarray:
        """Class-indexed coefficient sums, in canonical class order."""
        G = self.group
        out = self.ring.zeros(len(G.conjugacy_classes))
        for c, cls in enumerate(G.conjugacy_classes):
            out[c] = self.coeffs[list(cls)].sum()
        return self.ring.reduce(out)

    def partial_augmentation(self, g: int):
        return self.partial_augmentations()[self.group.class_of(g)]

    def in_commutator_space(self) -> bool:
        return not np.any(self.partial_augmentations() != 0)

    def support(self) -> list[int]:
        return [int(g) for g in np.nonzero(self.coeffs != 0)[0]]

    def change_ring(self, ring: ScalarRing) -> "GroupRingElement":
        if ring == self.ring:
            return self
        if self.ring.is_modular and ring.is_modular:
            if ring.p != self.ring.p or ring.k > self.ring.k:
                raise GroupRingError(f"cannot map {self.ring} onto {ring}")
            return GroupRingElement(self.group, ring, self.coeffs % ring.modulus)
        if not self.ring.is_modular:
            return GroupRingElement(self.group, ring, ring.array(self.coeffs))
        raise GroupRingError(f"cannot map {self.ring} into {ring}")

    def lift(self, ring: ScalarRing) -> "GroupRingElement":
        """Reinterpret least residues in a finer Z/p^k (or Q)."""
        if ring.is_modular:
            return GroupRingElement(self.group, ring, np.asarray(self.coeffs, dtype=np.int64))
        return GroupRingElement(self.group, ring, [Fraction(int(x)) for x in self.coeffs])

    def left_matrix(self) -> np.ndarray:
        """Matrix of y -> a*y in the group basis."""
        G = self.group
        n = G.order
        M = np.zeros((n, n), dtype=self.ring.dtype) if self.ring.is_modular else \
            np.array([[Fraction(0)] * n for _ in range(n)], dtype=object)
        cols = np.arange(n)
        for g in self.support():
            M[G.table[g, :], cols] += self.coeffs[g]
        return self.ring.reduce(M) if self.ring.is_modular else M

    def right_matrix(self) -> np.ndarray:
        """Matrix of y -> y*a in the group basis."""
        G = self.group
        n = G.order
        M = np.zeros((n, n), dtype=self.ring.dtype) if self.ring.is_modular else \
            np.array([[Fraction(0)] * n for _ in range(n)], dtype=object)
        cols = np.arange(n)
        for g in self.support():
            M[G.table[:, g], cols] += self.coeffs[g]
        return self.ring.reduce(M) if self.ring.is_modular else M

    def try_invert(self) -> "GroupRingElement | None":
        """Inverse via the regular representation, or None if not a unit."""
        one = GroupRingElement.one(self.group, self.ring)
        L = self.left_matrix()
        if self.ring.is_modular:
            sm = linalg.smith(L, self.ring)
            if sm.rank_mod_p < self.group.order:
                return None
            x = sm.solve(one.coeffs)
        else:
            x = linalg.solve_q(L.tolist(), list(one.coeffs))
        if x is None:
            return None
        inv = GroupRingElement(self.group, self.ring, x)
        if not (self * inv == one and inv * self == one):
            return None
        return inv

    def is_unit(self) -> bool:
        return self.try_invert() is not None

    def unit_order(self, bound: int | None = None) -> int | None:
        """Least n <= bound with a^n = 1, if any."""
        if bound is None:
            bound = self.group.order ** 2
        one = GroupRingElement.one(self.group, self.ring)
        cur = self
        for n in range(1, bound + 1):
            if cur == one:
                return n
            cur = cur * self
        return None

    def quotient_image(self, N: Subgroup, quotient=None) -> "GroupRingElement":
        """Image under RG -> R[G/N]: coefficients summed over cosets."""
        if N.group is not self.group:
            raise GroupError("subgroup belongs to another group")
        Q, proj = quotient if quotient is not None else self.group.quotient(N)
        out = self.ring.zeros(Q.order)
        for g in self.support():
            out[proj[g]] = out[proj[g]] + self.coeffs[g]
        return GroupRingElement(Q, self.ring, out)


def random_element(group: FiniteGroup, ring: ScalarRing, rng: np.random.Generator,
                   support=None, bound: int = 5) -> GroupRingElement:
    support = range(group.order) if support is None else list(support)
    c = ring.zeros(group.order)
    for g in support:
        if ring.is_modular:
            c[g] = int(rng.integers(0, ring.modulus))
        else:
            c[g] = Fraction(int(rng.integers(-bound, bound + 1)))
    return GroupRingElement(group, ring, c)


def commutator_span_rank(group: FiniteGroup, ring: ScalarRing) -> int:
    """Rank of span{gh - hg}; used as an independent check of the class criterion."""
    n = group.order
    rows = []
    for g in range(n):
        for h in range(n):
            v = np.zeros(n, dtype=np.int64)
            v[group.mul(g, h)] += 1
            v[group.mul(h, g)] -= 1
            rows.append(v)
    M = np.array(rows)
    if ring.is_modular:
        return linalg.smith(M, ring).rank
    return len(linalg.rref_q(M.tolist())[1])
