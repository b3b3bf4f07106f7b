"""RG as a G x C module via a.(g, c^i) = g^-1 a u^i, and relative projectivity.

The character of a summand RGe is read off from partial augmentations of
e u^i; ``theta`` recomputes it as the trace of the explicit action matrix.
``check_relproj_conditions`` decides three equivalent conditions on a
primitive idempotent e of (RG)^<x> independently of one another:

* b) e = nu + nu^x + ... + nu^(x^(p-1)) orthogonally, nu primitive in (RG)^<x^p>;
* c) e lies in the image T of the relative trace;
* d) every partial augmentation of e x vanishes.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from . import algebra, linalg
from .algebra import AlgebraError
from .groups import FiniteGroup, GroupError
from .grouprings import GroupRingElement, GroupRingError
from .idempotents import (CONJUGACY_BUDGET, EXHAUSTIVE_LIMIT, AlgebraPresentation,
                          IdempotentDecomposition, PrecisionError, primitive_decomposition)
from .rings import DEFAULT_PRECISION, ScalarRing
from .subalgebras import Subalgebra, fixed_point_subring, group_fixed_subring, trace_ideal


class ThetaMismatch(AssertionError):
    """The class-function formula disagreed with the action-matrix trace."""


@dataclass(frozen=True)
class DoubleActionModule:
    u: GroupRingElement
    n: int

    def __post_init__(self):
        one = GroupRingElement.one(self.u.group, self.u.ring)
        if self.n < 1 or self.u ** self.n != one:
            raise GroupRingError(f"u^{self.n} != 1")

    @property
    def group(self) -> FiniteGroup:
        return self.u.group

    @property
    def ring(self) -> ScalarRing:
        return self.u.ring

    def act(self, a: GroupRingElement, g: int, i: int) -> GroupRingElement:
        G = self.group
        ginv = GroupRingElement.basis(G, self.ring, G.inverses[g])
        return ginv * a * self.u ** (i % self.n)

    def check_action(self, rng: np.random.Generator, samples: int = 10) -> bool:
        """(a.s).t == a.(st) on random a, s, t."""
        from .grouprings import random_element
        G = self.group
        for _ in range(samples):
            a = random_element(G, self.ring, rng)
            g1, g2 = (int(v) for v in rng.integers(0, G.order, 2))
            i1, i2 = (int(v) for v in rng.integers(0, self.n, 2))
            if self.act(self.act(a, g1, i1), g2, i2) != self.act(a, G.mul(g1, g2), i1 + i2):
                return False
        return True

    def action_matrix(self, g: int, i: int, e: GroupRingElement | None = None) -> np.ndarray:
        """Matrix of a -> g^-1 a e u^i on RG (the action on RGe, extended by 0)."""
        G = self.group
        w = self.u ** (i % self.n)
        if e is not None:
            w = e * w
        L = GroupRingElement.basis(G, self.ring, G.inverses[g]).left_matrix()
        R = w.right_matrix()
        if self.ring.is_modular:
            return L @ R % self.ring.modulus
        return L.dot(R)


def theta_formula(M: DoubleActionModule, e: GroupRingElement | None, g: int, i: int):
    G = M.group
    w = M.u ** (i % M.n)
    if e is not None:
        w = e * w
    val = G.centralizer_order(g) * w.partial_augmentation(g)
    return M.ring.reduce(np.array([val]))[0]


def theta_trace(M: DoubleActionModule, e: GroupRingElement | None, g: int, i: int):
    T = M.action_matrix(g, i, e)
    return M.ring.reduce(np.array([np.trace(T)]))[0]


def theta(M: DoubleActionModule, e: GroupRingElement | None, g: int, i: int):
    """|C_G(g)| * eps_{g^G}(e u^i), asserted equal to the trace of the action on RGe."""
    if e is not None and e * M.u != M.u * e:
        raise GroupRingError("idempotent is not fixed by u")
    val = theta_formula(M, e, g, i)
    if theta_trace(M, e, g, i) != val:
        raise ThetaMismatch(f"theta({g}, {i}) formula and trace disagree")
    return val


def _is_p_power(n: int, p: int) -> bool:
    while n % p == 0:
        n //= p
    return n == 1


def summand_decomposition(M: DoubleActionModule, seed: int = 0) -> IdempotentDecomposition:
    """Primitive decomposition of 1 in (RG)^<u>, one idempotent per summand."""
    ring = M.ring
    if ring.kind != "Zpk" and ring.kind != "Fp":
        raise GroupRingError("summand decomposition needs Z/p^k coefficients")
    order = M.u.unit_order(M.n)
    if order is None or not _is_p_power(order, ring.p):
        raise GroupRingError("u must have p-power order")
    fixed = fixed_point_subring(M.u, M.n, tag="fix<u>")
    return primitive_decomposition(AlgebraPresentation(fixed), seed=seed)


# -- relative projectivity conditions ---------------------------------------------------

@dataclass
class ConditionReport:
    """Flags b), c), d) for one primitive idempotent e of (RG)^<x>, with witnesses."""

    x: int
    p: int
    k: int
    e: GroupRingElement
    b: bool | None
    c: bool
    d: bool
    b_witness: dict = field(default_factory=dict)
    c_witness: list[int] | None = None
    d_witness: list[int] = field(default_factory=list)
    b_method: str = ""

    @property
    def agree(self) -> bool:
        return self.b is not None and self.b == self.c == self.d

    @property
    def status(self) -> str:
        if self.b is None:
            return "inconclusive"
        return "pass" if self.agree else "fail"

    def to_json(self) -> dict:
        return {
            "x": self.x, "p": self.p, "k": self.k, "e": self.e.to_list(),
            "b": self.b, "c": self.c, "d": self.d, "b_method": self.b_method,
            "b_witness": self.b_witness, "c_witness": self.c_witness,
            "d_witness": self.d_witness,
        }


class RelProjContext:
    """Shared data for all idempotents of (RG)^<x>: A, T, (RG)^<x^p> and sigma."""

    def __init__(self, G: FiniteGroup, x: int, p: int, k: int = DEFAULT_PRECISION):
        if x == G.identity or not G.is_p_element(x, p):
            raise GroupError(f"{x} is not a nontrivial {p}-element")
        self.G, self.x, self.p, self.k = G, x, p, k
        self.ring = ScalarRing.padic(p, k)
        self.A_sub = group_fixed_subring(G, self.ring, x)
        xp = G.power(x, p)
        self.Ap_sub = group_fixed_subring(G, self.ring, xp) if xp != G.identity else \
            Subalgebra(G, self.ring, np.eye(G.order, dtype=np.int64), tag="RG")
        self.T = trace_ideal(G, self.ring, x, p, A=self.A_sub, Ap=self.Ap_sub)
        if self.T.pivots is None and self.T._smith.max_pivot_valuation >= k:
            raise PrecisionError("trace ideal not resolved at this precision", 2 * k)
        self.A = AlgebraPresentation(self.A_sub)
        self.Ap = AlgebraPresentation(self.Ap_sub)
        self.sigma = np.array([self.Ap.coordinates(b.conj_by_group(x)) for b in self.Ap_sub.basis],
                              dtype=np.int64).T % self.ring.modulus

    def sigma_power(self, i: int) -> np.ndarray:
        m = self.ring.modulus
        out = np.eye(self.Ap.dim, dtype=np.int64)
        for _ in range(i):
            out = self.sigma @ out % m
        return out


def _condition_d(e: GroupRingElement, x: int):
    ex = e * GroupRingElement.basis(e.group, e.ring, x)
    eps = [int(v) for v in ex.partial_augmentations()]
    return not any(eps), eps


def _lift_orbit(ctx: RelProjContext, nu: np.ndarray, e: np.ndarray):
    """Newton-lift nu (mod p) so that its sigma-orbit is an orthogonal decomposition of e."""
    S, p, k, m = ctx.Ap.struct, ctx.p, ctx.k, ctx.ring.modulus
    Ps = [ctx.sigma_power(i) for i in range(p)]
    F = ScalarRing.prime_field(p)
    eye = np.eye(S.dim, dtype=np.int64)
    nu = nu % m
    for j in range(1, k):
        q = p ** j
        F1 = (S.mul(nu, nu) - nu) % m
        F2 = [S.mul(nu, Ps[i] @ nu % m) for i in range(1, p)]
        F3 = (sum(P @ nu for P in Ps) - e) % m
        rhs = np.concatenate([F1, *F2, F3]) % m
        if np.any(rhs % q):
            raise AlgebraError("orbit lift lost precision")
        rhs = (-(rhs // q)) % p
        L, R = S.left_matrix(nu), S.right_matrix(nu)
        blocks = [L + R - eye]
        blocks += [S.right_matrix(Ps[i] @ nu % m) + L @ Ps[i] for i in range(1, p)]
        blocks.append(sum(Ps))
        Mx = np.vstack(blocks) % p
        delta = linalg.solve(Mx, rhs, F)
        if delta is None:
            return None
        nu = (nu + q * delta) % m
    return nu


def _condition_b(ctx: RelProjContext, e: GroupRingElement, rng: np.random.Generator,
                 budget: int, exhaustive_limit: int):
    """Search for nu; returns (flag or None, witness dict, method)."""
    p = ctx.p
    Ap = ctx.Ap
    R = Ap.residue
    ce = Ap.coordinates(e)
    pieces = algebra.decompose_fp(R, ce % p, rng)
    if len(pieces) != p:
        return False, {"primitives_in_fixed_ring": len(pieces)}, "count"
    C, Cb = R.corner(ce % p)
    _, piv = R.span(Cb)
    sig = np.array([(ctx.sigma @ b % p)[piv] for b in Cb], dtype=np.int64).T % p
    F = ScalarRing.prime_field(p)
    Msys = (sig - np.eye(C.dim, dtype=np.int64)) % p
    z0 = linalg.solve(Msys, (-C.one) % p, F)
    if z0 is None:
        return False, {"primitives_in_fixed_ring": p}, "artin-schreier"
    K = linalg.kernel(Msys, F)
    r = len(K)
    if p ** r <= exhaustive_limit:
        combos = itertools.product(range(p), repeat=r)
        exhaustive = True
    else:
        combos = (rng.integers(0, p, r) for _ in range(budget))
        exhaustive = False
    for c in combos:
        z = (z0 + np.asarray(c, dtype=np.int64) @ K) % p if r else z0
        _, gen = C.generated(z, C.one)
        prims = algebra.split_commutative(C, gen, C.one)
        if len(prims) != p:
            continue
        first = prims[0]
        if np.array_equal(sig @ first % p, first):
            continue
        nu_bar = first @ Cb % p
        nu = _lift_orbit(ctx, nu_bar, ce)
        if nu is None:
            continue
        nu_el = Ap.element(nu)
        orbit = [nu_el]
        for _ in range(p - 1):
            orbit.append(orbit[-1].conj_by_group(ctx.x))
        return True, {"nu": nu_el.to_list(), "orbit": [o.to_list() for o in orbit]}, \
            "exhaustive" if exhaustive else "sampled"
    if exhaustive:
        return False, {"primitives_in_fixed_ring": p}, "exhaustive"
    return None, {}, "sampling budget exhausted"


def verify_b_witness(ctx: RelProjContext, e: GroupRingElement, witness: dict) -> bool:
    G, ring = ctx.G, ctx.ring
    orbit = [GroupRingElement(G, ring, v) for v in witness["orbit"]]
    nu = orbit[0]
    if not ctx.Ap_sub.contains(nu) or nu * nu != nu:
        return False
    for a, b in zip(orbit, orbit[1:] + orbit[:1]):
        if a.conj_by_group(ctx.x) != b:
            return False
    zero = GroupRingElement.zero(G, ring)
    if any(orbit[i] * orbit[j] != zero for i in range(len(orbit)) for j in range(len(orbit)) if i != j):
        return False
    total = zero
    for o in orbit:
        total = total + o
    return total == e and ctx.Ap.is_primitive(ctx.Ap.coordinates(nu))


def check_relproj_conditions(e: GroupRingElement, x: int, p: int, k: int = DEFAULT_PRECISION,
                             seed: int = 0, ctx: RelProjContext | None = None,
                             budget: int = CONJUGACY_BUDGET,
                             exhaustive_limit: int = EXHAUSTIVE_LIMIT) -> ConditionReport:
    G = e.group
    if ctx is None:
        ctx = RelProjContext(G, x, p, k)
    ce = ctx.A.coordinates(e)
    if not ctx.A.struct.is_idempotent(ce) or not ctx.A.is_primitive(ce):
        raise AlgebraError("e must be a primitive idempotent of the fixed-point ring")
    c_coords = ctx.T.coordinates(e)
    d_flag, d_wit = _condition_d(e, x)
    rng = np.random.default_rng(seed)
    b_flag, b_wit, method = _condition_b(ctx, e, rng, budget, exhaustive_limit)
    if b_flag and not verify_b_witness(ctx, e, b_wit):
        raise AlgebraError("orbit witness failed re-verification")
    return ConditionReport(
        x=x, p=p, k=ctx.k, e=e, b=b_flag,
        c=c_coords is not None, d=d_flag,
        b_witness=b_wit,
        c_witness=None if c_coords is None else [int(v) for v in c_coords],
        d_witness=d_wit, b_method=method,
    )


def relproj_reports(G: FiniteGroup, x: int, p: int, k: int = DEFAULT_PRECISION, seed: int = 0,
                    decomposition: IdempotentDecomposition | None = None) -> list[ConditionReport]:
    """Condition reports for every idempotent of a primitive decomposition of (RG)^<x>."""
    ctx = RelProjContext(G, x, p, k)
    if decomposition is None:
        decomposition = primitive_decomposition(ctx.A, seed=seed, witnesses=False)
    return [check_relproj_conditions(e, x, p, k, seed=seed, ctx=ctx)
            for e in decomposition.idempotents]
