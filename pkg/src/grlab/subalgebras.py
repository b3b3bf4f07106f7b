"""Subalgebras of RG given by bases: fixed-point rings, RH and trace ideals."""
from __future__ import annotations

from functools import cached_property

import numpy as np

from . import linalg
from .groups import FiniteGroup, GroupError
from .grouprings import GroupRingElement, GroupRingError
from .rings import ScalarRing


class SubalgebraError(ValueError):
    pass


class Subalgebra:
    """An R-submodule of RG with a fixed basis, closed under multiplication.

    ``rows`` holds the basis coefficient vectors.  Pure submodules (direct
    summands, e.g. fixed-point rings) are stored in reduced echelon form with
    unit pivots; others (the trace ideal) keep Smith generators ``p**v * w``.
    """

    def __init__(self, group: FiniteGroup, ring: ScalarRing, rows, tag: str = "",
                 check_closed: bool = True):
        rows = np.asarray(rows, dtype=ring.dtype).reshape(-1, group.order)
        self.group = group
        self.ring = ring
        self.tag = tag
        if len(rows):
            ech, piv, pure = linalg.echelon(rows, ring)
        else:
            ech, piv, pure = rows, [], True
        if pure:
            self.rows = ech
            self.pivots = piv
        else:
            sm = linalg.smith(rows, ring)
            self.rows = sm.row_module(rows)
            self.pivots = None
        self.pure = pure
        self.rows.setflags(write=False)
        if check_closed and not self.is_closed():
            raise SubalgebraError(f"span of {tag or 'basis'} is not closed under multiplication")

    def __repr__(self):
        return f"Subalgebra({self.tag!r}, dim={self.dim}, ring={self.ring})"

    @property
    def dim(self) -> int:
        return self.rows.shape[0]

    @cached_property
    def basis(self) -> list[GroupRingElement]:
        return [GroupRingElement(self.group, self.ring, r) for r in self.rows]

    def element(self, coords) -> GroupRingElement:
        coords = np.asarray(coords, dtype=self.ring.dtype)
        if self.ring.is_modular:
            return GroupRingElement(self.group, self.ring, coords @ self.rows % self.ring.modulus)
        return GroupRingElement(self.group, self.ring, coords @ self.rows)

    @cached_property
    def _smith(self):
        return linalg.smith(self.rows.T, self.ring)

    def coordinates(self, a: GroupRingElement):
        """Coordinates of a in the basis, or None if a is not in the span."""
        if a.group is not self.group or a.ring != self.ring:
            raise GroupRingError("ambient mismatch")
        if self.dim == 0:
            return np.zeros(0, dtype=self.ring.dtype) if a.is_zero() else None
        if self.pivots is not None:
            c = a.coeffs[self.pivots]
        elif self.ring.is_modular:
            c = self._smith.solve(a.coeffs)
            if c is None:
                return None
        else:  # pragma: no cover - rational bases are always pure
            c = linalg.solve_q(self.rows.T.tolist(), list(a.coeffs))
            if c is None:
                return None
        if self.element(c) != a:
            return None
        return c

    def contains(self, a: GroupRingElement) -> bool:
        return self.coordinates(a) is not None

    def is_closed(self) -> bool:
        B = self.basis
        return all(self.contains(x * y) for x in B for y in B)

    @cached_property
    def unital(self) -> bool:
        return self.contains(GroupRingElement.one(self.group, self.ring))

    def is_ideal_of(self, other: "Subalgebra") -> bool:
        return all(self.contains(a * t) and self.contains(t * a)
                   for a in other.basis for t in self.basis)

    def change_ring(self, ring: ScalarRing) -> "Subalgebra":
        rows = [b.change_ring(ring).coeffs for b in self.basis]
        return Subalgebra(self.group, ring, rows, tag=self.tag, check_closed=False)

    def to_json(self) -> dict:
        return {"tag": self.tag, "ring": str(self.ring),
                "basis": [b.to_list() for b in self.basis]}


def _require_p_element(G: FiniteGroup, x: int, p: int, nontrivial: bool = True):
    if not G.is_p_element(x, p):
        raise GroupError(f"element {x} is not a {p}-element")
    if nontrivial and x == G.identity:
        raise GroupError("element must be nontrivial")


def fixed_point_subring(u: GroupRingElement, n: int | None = None, tag: str = "") -> Subalgebra:
    """Elements m of RG with u m = m u, i.e. the fixed points of <u>."""
    if u.try_invert() is None:
        raise SubalgebraError("u is not a unit")
    if n is not None and not (u ** n == GroupRingElement.one(u.group, u.ring)):
        raise SubalgebraError(f"u^{n} != 1")
    M = u.left_matrix() - u.right_matrix()
    rows = linalg.kernel(M, u.ring)
    return Subalgebra(u.group, u.ring, rows, tag=tag or "fixed")


def group_fixed_subring(G: FiniteGroup, ring: ScalarRing, x: int) -> Subalgebra:
    """(RG)^<x> for a group element x."""
    u = GroupRingElement.basis(G, ring, x)
    return fixed_point_subring(u, G.element_order(x), tag=f"fix<{x}>")


def subgroup_algebra(G: FiniteGroup, ring: ScalarRing, elements, tag: str = "RH") -> Subalgebra:
    """RH embedded in RG by zero extension."""
    rows = np.zeros((len(elements), G.order), dtype=np.int64)
    for i, h in enumerate(sorted(elements)):
        rows[i, h] = 1
    if not ring.is_modular:
        rows = rows.astype(object)
    return Subalgebra(G, ring, rows, tag=tag)


def conjugation_orbits(G: FiniteGroup, x: int) -> list[list[int]]:
    seen, orbits = set(), []
    for g in range(G.order):
        if g in seen:
            continue
        orb, h = [], g
        while h not in orb:
            orb.append(h)
            h = G.conj(h, x)
        seen.update(orb)
        orbits.append(orb)
    return orbits


def relative_trace(a: GroupRingElement, x: int, p: int) -> GroupRingElement:
    """Sum of a^(x^i), i = 0..p-1, for a fixed by x^p."""
    G = a.group
    _require_p_element(G, x, p, nontrivial=False)
    xp = G.power(x, p)
    if a.conj_by_group(xp) != a:
        raise SubalgebraError("argument is not fixed by x^p")
    out, cur = a, a
    for _ in range(p - 1):
        cur = cur.conj_by_group(x)
        out = out + cur
    return out


def trace_ideal(G: FiniteGroup, ring: ScalarRing, x: int, p: int,
                A: Subalgebra | None = None, Ap: Subalgebra | None = None) -> Subalgebra:
    """T = image of the relative trace from (RG)^<x^p> to (RG)^<x>."""
    _require_p_element(G, x, p)
    if Ap is None:
        Ap = group_fixed_subring(G, ring, G.power(x, p))
    gens = [relative_trace(b, x, p).coeffs for b in Ap.basis]
    T = Subalgebra(G, ring, gens, tag=f"T<{x}>", check_closed=False)
    if A is None:
        A = group_fixed_subring(G, ring, x)
    if not T.is_ideal_of(A):
        raise SubalgebraError("trace image is not an ideal of the fixed-point ring")
    return T
