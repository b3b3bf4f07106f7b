"""Primitive idempotents of subalgebras of a group ring over F_p and Z/p^k.

Decompositions are computed mod p on structure constants, lifted to Z/p^k
by Hensel iteration with sequential re-orthogonalisation, and sorted into
conjugacy classes.  Primitive idempotents are grouped by the simple block of
A/J(A) they map into; two primitives in the same block are conjugate, and a
unit realising this is always produced explicitly.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import algebra, linalg
from .algebra import AlgebraError, StructAlgebra
from .groups import FiniteGroup, GroupError
from .grouprings import GroupRingElement, GroupRingError
from .rings import DEFAULT_PRECISION, ScalarRing
from .subalgebras import Subalgebra, group_fixed_subring, subgroup_algebra, trace_ideal

CONJUGACY_BUDGET = 10_000
EXHAUSTIVE_LIMIT = 3 ** 6


class PrecisionError(RuntimeError):
    """The requested precision is too low to certify a result."""

    def __init__(self, msg: str, suggested_k: int):
        super().__init__(f"{msg} (try precision {suggested_k})")
        self.suggested_k = suggested_k


class AlgebraPresentation:
    """A unital subalgebra of RG together with its structure constants."""

    def __init__(self, basis: Subalgebra):
        ring = basis.ring
        if not ring.is_modular:
            raise AlgebraError("presentations need a modular scalar ring")
        if not basis.pure:
            raise AlgebraError("basis must span a direct summand")
        self.basis = basis
        self.group = basis.group
        self.ring = ring
        self.p, self.k = ring.p, ring.k
        d, m = basis.dim, ring.modulus
        B = basis.basis
        prods = np.array([(x * y).coeffs for x in B for y in B], dtype=np.int64).reshape(d * d, -1)
        consts = prods[:, basis.pivots] % m
        if not np.array_equal(consts @ basis.rows % m, prods):
            raise AlgebraError("basis products leave the span")
        one = basis.coordinates(GroupRingElement.one(self.group, ring))
        if one is None:
            raise AlgebraError("subalgebra is not unital")
        self.struct = StructAlgebra(consts.reshape(d, d, d), one, self.p, self.k)

    def __repr__(self):
        return f"AlgebraPresentation({self.basis.tag!r}, dim={self.dim}, ring={self.ring})"

    @property
    def dim(self) -> int:
        return self.basis.dim

    @property
    def tag(self) -> str:
        return self.basis.tag

    def element(self, coords) -> GroupRingElement:
        return self.basis.element(np.asarray(coords, dtype=np.int64) % self.ring.modulus)

    def coordinates(self, a: GroupRingElement) -> np.ndarray:
        c = self.basis.coordinates(a)
        if c is None:
            raise AlgebraError("element is not in the subalgebra")
        return np.asarray(c, dtype=np.int64)

    @cached_property
    def residue(self) -> StructAlgebra:
        return self.struct.reduce(1)

    @cached_property
    def _blocks(self):
        R = self.residue
        Q = R.quotient(algebra.radical(R))
        return Q, algebra.semisimple_blocks(Q.algebra)

    @property
    def block_count(self) -> int:
        return len(self._blocks[1])

    def block_of(self, coords) -> int:
        """Index of the simple block of A/J(A) met by a primitive idempotent."""
        Q, cs = self._blocks
        y = Q.project(np.asarray(coords) % self.p)
        hits = [t for t, c in enumerate(cs) if np.any(Q.algebra.mul(y, c))]
        if len(hits) != 1:
            raise AlgebraError("idempotent is not primitive")
        return hits[0]

    def corner_dim(self, coords) -> int:
        return algebra.corner_dim(self.residue, np.asarray(coords) % self.p)

    def is_primitive(self, coords) -> bool:
        """eAe is local (checked mod p, which decides it over Z/p^k too)."""
        return algebra.is_local(self.residue, np.asarray(coords) % self.p)


def presentation(sub: Subalgebra) -> AlgebraPresentation:
    return AlgebraPresentation(sub)


def group_algebra(G: FiniteGroup, ring: ScalarRing) -> AlgebraPresentation:
    return AlgebraPresentation(subgroup_algebra(G, ring, range(G.order), tag="RG"))


# -- radical -------------------------------------------------------------------------

def radical(A: AlgebraPresentation) -> list[GroupRingElement]:
    """Basis of the Jacobson radical of an algebra over F_p.

    The quotient by the result is checked to be semisimple.
    """
    if A.ring.kind != "Fp":
        raise AlgebraError("radical needs a prime field")
    J = algebra.radical(A.struct)
    if not algebra.certify_radical(A.struct, J):
        raise AlgebraError("radical certificate failed")
    return [A.element(row) for row in J]


# -- lifting -------------------------------------------------------------------------

def _iterations(k: int) -> int:
    return max(1, math.ceil(math.log2(k))) + 1


def hensel_lift(e: GroupRingElement, k: int) -> GroupRingElement:
    """Lift an idempotent mod p to an idempotent of Z/p^k G."""
    if not e.ring.is_modular:
        raise GroupRingError("expected a modular ring")
    red = e.change_ring(e.ring.residue_field())
    if red * red != red:
        raise GroupRingError("element is not idempotent mod p")
    a = e.lift(ScalarRing.padic(e.ring.p, k))
    for _ in range(_iterations(k)):
        a2 = a * a
        if a2 == a:
            return a
        a = 3 * a2 - 2 * (a2 * a)
    if a * a != a:  # pragma: no cover - quadratic convergence
        raise GroupRingError("Hensel iteration did not converge")
    return a


def _hensel_coords(S: StructAlgebra, a: np.ndarray) -> np.ndarray:
    for _ in range(_iterations(S.k) + 1):
        a2 = S.mul(a, a)
        if np.array_equal(a2, a):
            return a
        a = (3 * a2 - 2 * S.mul(a2, a)) % S.m
    raise AlgebraError("Hensel iteration did not converge")


def lift_orthogonal(S: StructAlgebra, idems, unit) -> list[np.ndarray]:
    """Lift orthogonal idempotents mod p (summing to unit mod p) to S.

    Each new idempotent is cut down by the complement of those already lifted
    and re-Henselised; the last one is ``unit`` minus the rest.
    """
    unit = S.vec(unit)
    total = np.zeros(S.dim, dtype=np.int64)
    out = []
    for e in idems[:-1]:
        comp = (unit - total) % S.m
        a = S.mul(S.mul(comp, S.vec(e)), comp)
        a = _hensel_coords(S, a)
        out.append(a)
        total = (total + a) % S.m
    out.append((unit - total) % S.m)
    return out


# -- conjugacy -------------------------------------------------------------------------

@dataclass
class ConjugacyResult:
    status: str  # "conjugate", "not-conjugate" or "inconclusive"
    unit: GroupRingElement | None = None
    method: str = ""

    def __bool__(self):
        return self.status == "conjugate"


def _scan_units(S: StructAlgebra, K: np.ndarray, rng: np.random.Generator,
                budget: int, exhaustive_limit: int):
    """First unit among mod-p combinations of the rows of K.

    Returns (coords or None, exhaustive flag).
    """
    p, r = S.p, len(K)
    if r == 0:
        return None, True
    if p ** r <= exhaustive_limit:
        for c in itertools.product(range(p), repeat=r):
            if not any(c):
                continue
            mu = np.asarray(c, dtype=np.int64) @ K % S.m
            if S.is_unit(mu):
                return mu, True
        return None, True
    for _ in range(budget):
        c = rng.integers(0, p, r)
        mu = c @ K % S.m
        if S.is_unit(mu):
            return mu, False
    return None, False


def solve_conjugator(S: StructAlgebra, a, b, rng, budget=CONJUGACY_BUDGET,
                     exhaustive_limit=EXHAUSTIVE_LIMIT):
    """Unit mu of S with a mu = mu b, scanning the free solution module."""
    M = (S.left_matrix(a) - S.right_matrix(b)) % S.m
    K = linalg.smith(M, S.ring).free_kernel()
    return _scan_units(S, K, rng, budget, exhaustive_limit)


def are_conjugate(e: GroupRingElement, f: GroupRingElement, A: AlgebraPresentation,
                  seed: int = 0, budget: int = CONJUGACY_BUDGET) -> ConjugacyResult:
    """Decide whether mu^-1 e mu = f for a unit mu of A."""
    ce, cf = A.coordinates(e), A.coordinates(f)
    S = A.struct
    if not (S.is_idempotent(ce) and S.is_idempotent(cf)):
        raise AlgebraError("arguments must be idempotents of the algebra")
    if np.array_equal(ce, cf):
        return ConjugacyResult("conjugate", GroupRingElement.one(A.group, A.ring), "equal")
    if A.corner_dim(ce) != A.corner_dim(cf):
        return ConjugacyResult("not-conjugate", None, "corner dimension")
    if A.is_primitive(ce) and A.is_primitive(cf) and A.block_of(ce) != A.block_of(cf):
        return ConjugacyResult("not-conjugate", None, "simple quotient")
    mu, exhaustive = solve_conjugator(S, ce, cf, np.random.default_rng(seed), budget)
    if mu is not None:
        unit = A.element(mu)
        if unit.try_invert() is None or e * unit != unit * f:  # pragma: no cover - solver contract
            raise AlgebraError("conjugator failed re-verification")
        return ConjugacyResult("conjugate", unit, "exhaustive" if exhaustive else "sampled")
    if exhaustive:
        return ConjugacyResult("not-conjugate", None, "exhaustive")
    return ConjugacyResult("inconclusive", None, "sampling budget exhausted")


# -- decompositions ----------------------------------------------------------------------

@dataclass
class IdempotentDecomposition:
    """Orthogonal primitive idempotents summing to ``unit``, sorted into classes.

    ``labels[i]`` is the class of ``idempotents[i]``; classes are numbered in
    canonical order and the first member of each class is its representative.
    ``witnesses[i]`` is a unit mu with rep^mu = idempotents[i].
    """

    idempotents: list[GroupRingElement]
    labels: list[int]
    ring: ScalarRing
    unit: GroupRingElement
    tag: str = ""
    witnesses: dict[int, GroupRingElement] = field(default_factory=dict)
    primitive: list[bool] = field(default_factory=list)
    blocks: list[int] = field(default_factory=list)

    def __len__(self):
        return len(self.idempotents)

    @property
    def classes(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(max(self.labels, default=-1) + 1)]
        for i, c in enumerate(self.labels):
            out[c].append(i)
        return out

    @property
    def multiplicities(self) -> list[int]:
        return [len(c) for c in self.classes]

    @property
    def representatives(self) -> list[GroupRingElement]:
        return [self.idempotents[c[0]] for c in self.classes]

    def verify(self) -> bool:
        E = self.idempotents
        zero = GroupRingElement.zero(self.unit.group, self.ring)
        if any(e * e != e for e in E):
            return False
        if any(E[i] * E[j] != zero for i in range(len(E)) for j in range(len(E)) if i != j):
            return False
        total = zero
        for e in E:
            total = total + e
        if total != self.unit:
            return False
        for i, mu in self.witnesses.items():
            rep = self.idempotents[self.classes[self.labels[i]][0]]
            if mu.try_invert() is None or rep * mu != mu * E[i]:
                return False
        return True

    def to_json(self) -> dict:
        return {
            "tag": self.tag,
            "ring": str(self.ring),
            "p": self.ring.p,
            "k": self.ring.k,
            "unit": self.unit.to_list(),
            "idempotents": [e.to_list() for e in self.idempotents],
            "labels": list(self.labels),
            "multiplicities": self.multiplicities,
            "primitive": list(self.primitive),
            "blocks": list(self.blocks),
            "witnesses": {str(i): mu.to_list() for i, mu in sorted(self.witnesses.items())},
        }

    @classmethod
    def from_json(cls, data: dict, group: FiniteGroup) -> "IdempotentDecomposition":
        ring = ScalarRing.prime_field(data["p"]) if data["k"] == 1 and data["ring"].startswith("F") \
            else ScalarRing.padic(data["p"], data["k"])
        el = lambda v: GroupRingElement(group, ring, v)  # noqa: E731
        return cls(
            idempotents=[el(v) for v in data["idempotents"]],
            labels=list(data["labels"]),
            ring=ring,
            unit=el(data["unit"]),
            tag=data.get("tag", ""),
            witnesses={int(i): el(v) for i, v in data.get("witnesses", {}).items()},
            primitive=list(data.get("primitive", [])),
            blocks=list(data.get("blocks", [])),
        )


def primitive_decomposition(A: AlgebraPresentation, unit: GroupRingElement | None = None,
                            seed: int = 0, witnesses: bool = True,
                            budget: int = CONJUGACY_BUDGET) -> IdempotentDecomposition:
    """Orthogonal primitive decomposition of ``unit`` (default 1) in A.

    Over Z/p^k the decomposition is found mod p and Hensel-lifted.
    """
    S = A.struct
    u = S.one if unit is None else A.coordinates(unit)
    if not S.is_idempotent(u):
        raise AlgebraError("unit must be an idempotent")
    unit = A.element(u)
    rng = np.random.default_rng(seed)
    if not np.any(u % A.p):
        return IdempotentDecomposition([], [], A.ring, unit, A.tag)
    fp = algebra.decompose_fp(A.residue, u % A.p, rng)
    lifted = lift_orthogonal(S, fp, u) if A.k > 1 else [x % A.p for x in fp]
    elems = [A.element(c) for c in lifted]
    blocks = [A.block_of(c) for c in lifted]
    keys = [(A.corner_dim(c), tuple(e.to_list())) for c, e in zip(lifted, elems)]
    order = sorted(range(len(elems)), key=lambda i: keys[i])
    elems = [elems[i] for i in order]
    lifted = [lifted[i] for i in order]
    blocks = [blocks[i] for i in order]
    class_of_block: dict[int, int] = {}
    labels = [class_of_block.setdefault(b, len(class_of_block)) for b in blocks]
    primitive = [A.is_primitive(c) for c in lifted]
    if not all(primitive):
        raise AlgebraError("decomposition produced a non-primitive idempotent")
    dec = IdempotentDecomposition(elems, labels, A.ring, unit, A.tag, primitive=primitive,
                                  blocks=blocks)
    if witnesses:
        for members in dec.classes:
            rep = lifted[members[0]]
            for i in members[1:]:
                mu, _ = solve_conjugator(S, rep, lifted[i], rng, budget)
                if mu is None:
                    raise AlgebraError("no conjugating unit found inside a block")
                dec.witnesses[i] = A.element(mu)
    return dec


# -- the A/T correspondence ----------------------------------------------------------------

@dataclass
class Correspondence:
    """Primitive classes of RH (H = C_G(x)) matched with those of A = (RG)^<x>.

    ``f[:r]`` pair with ``e`` via e_i = f_i + eps_i; ``f[r:]`` lie in T.
    ``t_coords`` maps a label (``"eps<i>"`` or ``"f<i>"``) to T-coordinates.
    """

    x: int
    p: int
    k: int
    e: list[GroupRingElement]
    f: list[GroupRingElement]
    eps: list[GroupRingElement]
    t_coords: dict[str, list[int]]
    rh: IdempotentDecomposition
    a: IdempotentDecomposition
    T: Subalgebra

    @property
    def r(self) -> int:
        return len(self.e)

    @property
    def s(self) -> int:
        return len(self.f)

    def verify(self) -> list[str]:
        """Re-check every identity exactly; returns a list of problems."""
        bad = []
        zero = GroupRingElement.zero(self.T.group, self.T.ring)
        for i in range(self.r):
            f, eps, e = self.f[i], self.eps[i], self.e[i]
            if e != f + eps:
                bad.append(f"e{i} != f{i} + eps{i}")
            if eps * eps != eps or eps * f != zero or f * eps != zero:
                bad.append(f"eps{i} not an idempotent orthogonal to f{i}")
            if self.T.contains(f):
                bad.append(f"f{i} lies in T")
        for label, c in self.t_coords.items():
            target = self.eps[int(label[3:])] if label.startswith("eps") else self.f[int(label[1:])]
            if self.T.element(c) != target:
                bad.append(f"T-coordinates of {label} do not reproduce it")
        for i in range(self.r, self.s):
            if f"f{i}" not in self.t_coords:
                bad.append(f"f{i} has no T witness")
        if not self.a.verify() or not self.rh.verify():
            bad.append("decomposition invariants")
        return bad

    def to_json(self) -> dict:
        return {
            "x": self.x, "p": self.p, "k": self.k, "r": self.r, "s": self.s,
            "e": [v.to_list() for v in self.e],
            "f": [v.to_list() for v in self.f],
            "eps": [v.to_list() for v in self.eps],
            "t_coords": {k: list(v) for k, v in sorted(self.t_coords.items())},
            "rh_multiplicities": self.rh.multiplicities,
            "a_multiplicities": self.a.multiplicities,
        }


def _t_coords(T: Subalgebra, a: GroupRingElement):
    c = T.coordinates(a)
    return None if c is None else [int(v) for v in c]


def correspondence_AT(G: FiniteGroup, x: int, p: int, k: int = DEFAULT_PRECISION,
                      seed: int = 0, rh: IdempotentDecomposition | None = None,
                      adec: IdempotentDecomposition | None = None) -> Correspondence:
    if x == G.identity or not G.is_p_element(x, p):
        raise GroupError(f"{x} is not a nontrivial {p}-element")
    ring = ScalarRing.padic(p, k)
    H = G.centralizer(x)
    A_sub = group_fixed_subring(G, ring, x)
    T = trace_ideal(G, ring, x, p, A=A_sub)
    if T.pivots is None and T._smith.max_pivot_valuation >= k:
        raise PrecisionError("trace ideal not resolved at this precision", 2 * k)
    A = AlgebraPresentation(A_sub)
    RH = AlgebraPresentation(subgroup_algebra(G, ring, H.elements, tag="RH"))
    if rh is None:
        rh = primitive_decomposition(RH, seed=seed)
    if adec is None:
        adec = primitive_decomposition(A, seed=seed)
    e_reps = rh.representatives
    fs, eps_list, coords = [], [], {}
    used_blocks = []
    for i, e in enumerate(e_reps):
        pieces = primitive_decomposition(A, unit=e, seed=seed, witnesses=False).idempotents
        outside = [f for f in pieces if not T.contains(f)]
        if len(outside) != 1:
            raise AlgebraError(f"expected one summand of e{i} outside T, found {len(outside)}")
        f = outside[0]
        eps = e - f
        c = _t_coords(T, eps)
        if c is None:
            raise AlgebraError(f"eps{i} is not in T")
        fs.append(f)
        eps_list.append(eps)
        coords[f"eps{i}"] = c
        used_blocks.append(A.block_of(A.coordinates(f)))
    if len(set(used_blocks)) != len(used_blocks):
        raise AlgebraError("two classes of RH map to the same class of A")
    rest = [cls for cls in adec.classes if adec.blocks[cls[0]] not in used_blocks]
    if len(rest) + len(e_reps) != len(adec.classes):
        raise AlgebraError("class count mismatch between RH and A")
    for cls in rest:
        f = adec.idempotents[cls[0]]
        c = _t_coords(T, f)
        if c is None:
            raise AlgebraError("a class of A outside the image of RH is not in T")
        coords[f"f{len(fs)}"] = c
        fs.append(f)
    return Correspondence(x, p, k, e_reps, fs, eps_list, coords, rh, adec, T)
