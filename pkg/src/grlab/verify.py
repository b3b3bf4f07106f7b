"""Torsion units, p-adic conjugators, and the checks run by the verification suite."""
from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .algebra import StructAlgebra
from .double_action import DoubleActionModule, relproj_reports, theta_formula, theta_trace
from .groups import FiniteGroup, GroupError, Subgroup
from .grouprings import GroupRingElement, random_element
from .idempotents import (CONJUGACY_BUDGET, EXHAUSTIVE_LIMIT, IdempotentDecomposition,
                          PrecisionError, _scan_units, correspondence_AT, group_algebra,
                          primitive_decomposition)
from .rings import DEFAULT_PRECISION, ScalarRing
from .subalgebras import group_fixed_subring

STATUSES = ("pass", "fail", "inconclusive")


@dataclass
class CheckResult:
    name: str
    status: str
    witness: dict = field(default_factory=dict)
    precision: int = DEFAULT_PRECISION
    seed: int = 0
    millis: int = 0

    def to_json(self) -> dict:
        return {"name": self.name, "status": self.status, "witness": self.witness,
                "precision": self.precision, "seed": self.seed, "millis": self.millis}


@dataclass
class VerificationReport:
    instance: str
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def status(self) -> str:
        st = {c.status for c in self.checks}
        if "fail" in st:
            return "fail"
        return "inconclusive" if "inconclusive" in st else "pass"

    def to_json(self) -> dict:
        return {"instance": self.instance, "checks": [c.to_json() for c in self.checks]}


def _check(name, status, witness, k, seed, t0) -> CheckResult:
    return CheckResult(name, status, witness, k, seed,
                       int(round((time.perf_counter() - t0) * 1000)))


# -- units -----------------------------------------------------------------------------

def integral_ring() -> ScalarRing:
    """Integral elements are carried with rational coefficients."""
    return ScalarRing.rational()


def bicyclic_unit(G: FiniteGroup, g: int, h: int, ring: ScalarRing | None = None) -> GroupRingElement:
    """1 + (1 - h) g h^, with h^ the sum of the powers of h."""
    ring = ring or integral_ring()
    one = GroupRingElement.one(G, ring)
    hh = GroupRingElement.subgroup_sum(G, ring, G.cyclic_subgroup(h).elements)
    return one + (one - GroupRingElement.basis(G, ring, h)) * GroupRingElement.basis(G, ring, g) * hh


def bicyclic_inverse(G: FiniteGroup, g: int, h: int, ring: ScalarRing | None = None) -> GroupRingElement:
    one = GroupRingElement.one(G, bicyclic_unit(G, g, h, ring).ring)
    return one + one - bicyclic_unit(G, g, h, ring)


def nontrivial_bicyclic_pairs(G: FiniteGroup) -> list[tuple[int, int]]:
    """Pairs (g, h) giving pairwise distinct bicyclic units other than 1."""
    seen, out = set(), []
    ring = integral_ring()
    one = GroupRingElement.one(G, ring)
    for h in range(G.order):
        if h == G.identity:
            continue
        for g in range(G.order):
            b = bicyclic_unit(G, g, h, ring)
            if b == one:
                continue
            key = tuple(b.to_list())
            if key not in seen:
                seen.add(key)
                out.append((g, h))
    return out


def conjugate_unit(x: int, v: GroupRingElement, v_inv: GroupRingElement | None = None) -> GroupRingElement:
    """u = v^-1 x v."""
    G = v.group
    return GroupRingElement.basis(G, v.ring, x).conj(v, v_inv)


def rational_class(u: GroupRingElement) -> int | None:
    """Class index with partial augmentation 1 when all others vanish."""
    eps = u.partial_augmentations()
    nz = [i for i, v in enumerate(eps) if v != 0]
    if len(nz) == 1 and eps[nz[0]] == 1:
        return nz[0]
    return None


def _group_struct(G: FiniteGroup, ring: ScalarRing) -> StructAlgebra:
    n = G.order
    C = np.zeros((n, n, n), dtype=np.int64)
    for i in range(n):
        C[i, np.arange(n), G.table[i]] = 1
    one = np.zeros(n, dtype=np.int64)
    one[G.identity] = 1
    return StructAlgebra(C, one, ring.p, ring.k)


def find_conjugator(u: GroupRingElement, y: int, p: int, k: int = DEFAULT_PRECISION,
                    seed: int = 0, budget: int = CONJUGACY_BUDGET) -> GroupRingElement | None:
    """A unit mu of Z/p^k G with u mu = mu y, or None if the scan finds none."""
    G = u.group
    ring = ScalarRing.padic(p, k)
    uk = u.change_ring(ring)
    yk = GroupRingElement.basis(G, ring, y)
    M = (uk.left_matrix() - yk.right_matrix()) % ring.modulus
    K = linalg.smith(M, ring).free_kernel()
    S = _group_struct(G, ring)
    mu, _ = _scan_units(S, K, np.random.default_rng(seed), budget, EXHAUSTIVE_LIMIT)
    if mu is None:
        return None
    mu = GroupRingElement(G, ring, mu)
    if uk * mu != mu * yk:  # pragma: no cover - solver contract
        raise AssertionError("conjugator does not solve u mu = mu y")
    return mu


@dataclass
class TheoremInstance:
    group: FiniteGroup
    N: Subgroup
    p: int
    k: int
    u: GroupRingElement
    recipe: dict = field(default_factory=dict)

    @property
    def name(self) -> str:
        tag = ",".join(f"{a}={b}" for a, b in sorted(self.recipe.items()))
        return f"{self.group.name}/p={self.p}/theorem[{tag}]"

    def problems(self) -> list[str]:
        G, u = self.group, self.u
        out = []
        if u.augmentation() != 1:
            out.append("augmentation is not 1")
        if u.try_invert() is None:
            out.append("u is not a unit")
        img = u.quotient_image(self.N)
        if img != GroupRingElement.one(img.group, img.ring):
            out.append("u does not map to 1 modulo N")
        n = u.unit_order(G.order)
        if n is None or any(n % q == 0 for q in range(2, n + 1) if q != self.p and _prime(q)):
            out.append("u is not of p-power order")
        if not all(G.is_p_element(g, self.p) for g in self.N.elements):
            out.append("N is not a p-group")
        if not self.N.normal:
            out.append("N is not normal")
        return out


def _prime(q: int) -> bool:
    return q > 1 and all(q % d for d in range(2, int(q ** 0.5) + 1))


def theorem_instances(G: FiniteGroup, N: Subgroup, p: int, k: int = DEFAULT_PRECISION,
                      seed: int = 0, per_class: int = 2) -> list[TheoremInstance]:
    """Units b^-1 x b for x in N (one per G-class) and seeded bicyclic b."""
    ring = integral_ring()
    pairs = nontrivial_bicyclic_pairs(G)
    rng = np.random.default_rng(seed)
    out = []
    reps = []
    for cls in G.conjugacy_classes:
        hit = [g for g in cls if g in N and g != G.identity]
        if hit:
            reps.append(hit[0])
    for x in reps:
        xe = GroupRingElement.basis(G, ring, x)
        chosen, fixing = [], []
        for i in rng.permutation(len(pairs)):
            g, h = pairs[int(i)]
            u = conjugate_unit(x, bicyclic_unit(G, g, h, ring), bicyclic_inverse(G, g, h, ring))
            if u != xe:
                chosen.append(((g, h), u))
                if len(chosen) == per_class:
                    break
            elif not fixing:
                fixing.append(((g, h), u))
        if not chosen:
            # every bicyclic unit centralises x, so u = x; with none at all b = 1
            chosen = fixing or [(None, xe)]
        for pair, u in chosen:
            b = "1" if pair is None else f"bicyclic({pair[0]},{pair[1]})"
            out.append(TheoremInstance(G, N, p, k, u, {"x": x, "b": b}))
    return out


def verify_theorem_instance(inst: TheoremInstance, seed: int = 0,
                            budget: int = CONJUGACY_BUDGET) -> CheckResult:
    t0 = time.perf_counter()
    G = inst.group
    bad = inst.problems()
    if bad:
        return _check("theorem", "inconclusive", {"instance": inst.name, "problems": bad},
                      inst.k, seed, t0)
    cls = rational_class(inst.u)
    candidates = [] if cls is None else sorted(y for y in G.conjugacy_classes[cls] if y in inst.N)
    base = {"instance": inst.name, "u": inst.u.to_list()}
    if not candidates:
        return _check("theorem", "inconclusive", {**base, "reason": "no rational class in N"},
                      inst.k, seed, t0)
    for k in (inst.k, 2 * inst.k):
        for y in candidates:
            mu = find_conjugator(inst.u, y, inst.p, k, seed, budget)
            if mu is None:
                continue
            ring = mu.ring
            uk = inst.u.change_ring(ring)
            mu_inv = mu.try_invert()
            if mu_inv is None or mu_inv * uk * mu != GroupRingElement.basis(G, ring, y):
                return _check("theorem", "fail", {**base, "y": y, "mu": mu.to_list(),
                                                  "reason": "witness failed re-verification"},
                              k, seed, t0)
            return _check("theorem", "pass", {**base, "y": y, "mu": mu.to_list()}, k, seed, t0)
    return _check("theorem", "inconclusive", {**base, "reason": "no conjugator found",
                                              "candidates": candidates}, 2 * inst.k, seed, t0)


# -- structural checks -----------------------------------------------------------------------

def group_decomposition(G: FiniteGroup, p: int, k: int = DEFAULT_PRECISION,
                        seed: int = 0) -> IdempotentDecomposition:
    return primitive_decomposition(group_algebra(G, ScalarRing.padic(p, k)), seed=seed)


def eps_matrix(reps: list[GroupRingElement]) -> np.ndarray:
    """M[class, i] = partial augmentation of reps[i] on the class."""
    return np.array([r.partial_augmentations() for r in reps], dtype=np.int64).T


def check_lemma_LinInd(G: FiniteGroup, p: int, k: int = DEFAULT_PRECISION, seed: int = 0,
                       decomposition: IdempotentDecomposition | None = None) -> CheckResult:
    """Partial-augmentation columns of primitive class representatives are independent."""
    t0 = time.perf_counter()
    dec = decomposition or group_decomposition(G, p, k, seed)
    M = eps_matrix(dec.representatives)
    sm = linalg.smith(M, ScalarRing.padic(p, k))
    n = M.shape[1]
    wit = {"matrix": M.tolist(), "columns": n, "rank_mod_p": sm.rank_mod_p,
           "rank": sm.rank, "multiplicities": dec.multiplicities}
    return _check("lin-ind", "pass" if sm.rank_mod_p == n else "fail", wit, k, seed, t0)


def check_prop_SuppIdem(G: FiniteGroup, p: int, k: int = DEFAULT_PRECISION, seed: int = 0,
                        decomposition: IdempotentDecomposition | None = None) -> CheckResult:
    """Idempotents have vanishing partial augmentations on p-singular classes."""
    t0 = time.perf_counter()
    dec = decomposition or group_decomposition(G, p, k, seed)
    singular = G.p_singular_classes(p)
    bad = []
    for i, e in enumerate(dec.idempotents):
        eps = e.partial_augmentations()
        bad += [[i, c] for c in singular if eps[c] != 0]
    wit = {"singular_classes": list(singular), "idempotents": len(dec), "violations": bad}
    return _check("supp-idem", "fail" if bad else "pass", wit, k, seed, t0)


def _h_partial_augmentation(a: GroupRingElement, h: int, H: Subgroup) -> int:
    G = a.group
    cls = {G.conj(h, t) for t in H.elements}
    return a.ring.reduce(np.array([a.coeffs[sorted(cls)].sum()]))[0]


def check_lemma_PartAugGOrH(G: FiniteGroup, x: int, p: int, samples: int = 20, seed: int = 0,
                            k: int = DEFAULT_PRECISION) -> CheckResult:
    """eps_{h^G}(a x) = eps_{h^H}(a x) for a in R[H_p'], H = C_G(x) and h in H_p' x.

    Only h with p-part x are compared: for other h the two sides can differ
    (h = x^-1 with x^-1 ~ x in G but not in H).  Such mismatches are recorded
    in the witness for information and do not fail the check.
    """
    t0 = time.perf_counter()
    if x == G.identity or not G.is_p_element(x, p):
        raise GroupError(f"{x} is not a nontrivial {p}-element")
    ring = ScalarRing.padic(p, k)
    H = G.centralizer(x)
    regular = [h for h in H.elements if G.element_order(h) % p]
    targets = sorted(G.mul(h, x) for h in regular)
    rng = np.random.default_rng(seed)
    xe = GroupRingElement.basis(G, ring, x)
    bad, elsewhere = [], []
    for s in range(samples):
        a = GroupRingElement.one(G, ring) if s == 0 else random_element(G, ring, rng, regular)
        ax = a * xe
        epsG = ax.partial_augmentations()
        for h in H.elements:
            if epsG[G.class_of(h)] != _h_partial_augmentation(ax, h, H):
                (bad if h in targets else elsewhere).append([s, h])
    wit = {"x": x, "H": list(H.elements), "compared": targets, "samples": samples,
           "violations": bad, "mismatches_off_px": len(elsewhere)}
    return _check("part-aug", "fail" if bad else "pass", wit, k, seed, t0)


def check_cor_MultIdem(G: FiniteGroup, x: int, p: int, k: int = DEFAULT_PRECISION, seed: int = 0,
                       rh: IdempotentDecomposition | None = None) -> CheckResult:
    """The RH multiplicities give the class indicator of x and are the only solution mod p."""
    t0 = time.perf_counter()
    if x == G.identity or not G.is_p_element(x, p):
        raise GroupError(f"{x} is not a nontrivial {p}-element")
    ring = ScalarRing.padic(p, k)
    if rh is None:
        from .idempotents import AlgebraPresentation
        from .subalgebras import subgroup_algebra
        H = G.centralizer(x)
        rh = primitive_decomposition(AlgebraPresentation(subgroup_algebra(G, ring, H.elements)),
                                     seed=seed)
    xe = GroupRingElement.basis(G, ring, x)
    cols = [e * xe for e in rh.representatives]
    M = eps_matrix(cols) % ring.modulus
    m = np.array(rh.multiplicities, dtype=np.int64)
    target = np.zeros(len(G.conjugacy_classes), dtype=np.int64)
    target[G.class_of(x)] = 1
    forward = bool(np.array_equal(M @ m % ring.modulus, target))
    rank = linalg.rank_mod_p(M, ring)
    unique = rank == len(m)
    wit = {"x": x, "multiplicities": m.tolist(), "matrix_mod_p": (M % p).tolist(),
           "forward": forward, "rank_mod_p": rank}
    return _check("mult-idem", "pass" if forward and unique else "fail", wit, k, seed, t0)


# -- aggregated checks ---------------------------------------------------------------------

def check_decomposition(G: FiniteGroup, p: int, k: int = DEFAULT_PRECISION, seed: int = 0,
                        decomposition: IdempotentDecomposition | None = None) -> CheckResult:
    t0 = time.perf_counter()
    dec = decomposition or group_decomposition(G, p, k, seed)
    ok = dec.verify() and all(dec.primitive) and len(dec.primitive) == len(dec)
    wit = {"multiplicities": dec.multiplicities, "idempotents": [e.to_list() for e in dec.idempotents]}
    return _check("decomp", "pass" if ok else "fail", wit, k, seed, t0)


def check_relproj(G: FiniteGroup, x: int, p: int, k: int = DEFAULT_PRECISION, seed: int = 0,
                  decomposition: IdempotentDecomposition | None = None) -> CheckResult:
    t0 = time.perf_counter()
    try:
        reps = relproj_reports(G, x, p, k, seed, decomposition)
    except PrecisionError as exc:
        k = exc.suggested_k
        try:
            reps = relproj_reports(G, x, p, k, seed)
        except PrecisionError as again:
            return _check("relproj", "inconclusive", {"x": x, "reason": str(again)}, k, seed, t0)
    statuses = [r.status for r in reps]
    status = "fail" if "fail" in statuses else ("inconclusive" if "inconclusive" in statuses else "pass")
    for r in reps:
        if r.b:
            M = DoubleActionModule(GroupRingElement.basis(G, r.e.ring, x), G.element_order(x))
            if any(theta_formula(M, r.e, g, 1) != 0 for g in range(G.order)):
                status = "fail"
    wit = {"x": x, "flags": [[r.b, r.c, r.d] for r in reps], "methods": [r.b_method for r in reps],
           "reports": [r.to_json() for r in reps]}
    return _check("relproj", status, wit, k, seed, t0)


def check_correspondence(G: FiniteGroup, x: int, p: int, k: int = DEFAULT_PRECISION,
                         seed: int = 0, rh: IdempotentDecomposition | None = None,
                         adec: IdempotentDecomposition | None = None) -> CheckResult:
    t0 = time.perf_counter()
    try:
        corr = correspondence_AT(G, x, p, k, seed, rh=rh, adec=adec)
    except PrecisionError as exc:
        k = exc.suggested_k
        try:
            corr = correspondence_AT(G, x, p, k, seed)
        except PrecisionError as again:
            return _check("correspondence", "inconclusive", {"x": x, "reason": str(again)},
                          k, seed, t0)
    bad = corr.verify()
    wit = corr.to_json()
    wit["problems"] = bad
    return _check("correspondence", "fail" if bad else "pass", wit, k, seed, t0)


def theta_samples(G: FiniteGroup, p: int, k: int = DEFAULT_PRECISION, seed: int = 0,
                  count: int = 100):
    """Seeded (u, e, g, i) with e a primitive idempotent fixed by u.

    u runs over conjugates v^-1 x v of p-elements x by random units v, e over
    the matching conjugates of the primitive idempotents of (RG)^<x>.
    """
    ring = ScalarRing.padic(p, k)
    rng = np.random.default_rng(seed)
    xs = [cls[0] for cls in G.conjugacy_classes if G.is_p_element(cls[0], p)]
    data = []
    for x in xs:
        if x == G.identity:
            dec = group_decomposition(G, p, k, seed)
        else:
            from .idempotents import AlgebraPresentation
            dec = primitive_decomposition(AlgebraPresentation(group_fixed_subring(G, ring, x)),
                                          seed=seed, witnesses=False)
        data.append((x, dec.idempotents))
    out = []
    one = GroupRingElement.one(G, ring)
    while len(out) < count:
        x, idems = data[int(rng.integers(len(data)))]
        e = idems[int(rng.integers(len(idems)))]
        while True:
            v = one + p * random_element(G, ring, rng) if rng.integers(2) else \
                GroupRingElement.basis(G, ring, int(rng.integers(G.order))) + \
                p * random_element(G, ring, rng)
            vinv = v.try_invert()
            if vinv is not None:
                break
        u = GroupRingElement.basis(G, ring, x).conj(v, vinv)
        ev = vinv * e * v
        out.append((u, G.element_order(x), ev, int(rng.integers(G.order)),
                    int(rng.integers(G.element_order(x)))))
    return out


def check_theta(G: FiniteGroup, p: int, k: int = DEFAULT_PRECISION, seed: int = 0,
                count: int = 100) -> CheckResult:
    """Class-function formula equals action-matrix trace on seeded samples."""
    t0 = time.perf_counter()
    bad = []
    for s, (u, n, e, g, i) in enumerate(theta_samples(G, p, k, seed, count)):
        M = DoubleActionModule(u, n)
        if e * u != u * e or theta_formula(M, e, g, i) != theta_trace(M, e, g, i):
            bad.append(s)
    wit = {"samples": count, "mismatches": bad}
    return _check("theta", "fail" if bad else "pass", wit, k, seed, t0)
