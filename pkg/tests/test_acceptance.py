"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Tolerances are exact (integer arithmetic mod p^k); the only pinned numbers are
wall-clock limits: 5 s per decomposition, 30 s per relative-projectivity pair,
60 s per conjugacy instance.
"""
import json
import os
import time
from collections import Counter

import pytest

from grlab import (GroupRingElement, ScalarRing, correspondence_AT, designated_normal_subgroups,
                   group_fixed_subring, preset, primitive_decomposition)
from grlab import algebra, cli
from grlab import verify as V
from grlab.idempotents import AlgebraPresentation, group_algebra

from corpus import CORPUS_GROUPS, CORPUS_PAIRS, p_element_triples
from oracles import SmallFixedRing

K = 6
DECOMP_LIMIT_S = 5.0
RELPROJ_LIMIT_S = 30.0
THEOREM_LIMIT_S = 60.0


def report(capsys, number, title, ok, detail):
    with capsys.disabled():
        print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {number}: {title}: {detail}")
    assert ok, detail


def _timed(fn, *args, **kw):
    t0 = time.perf_counter()
    out = fn(*args, **kw)
    return out, time.perf_counter() - t0


def test_c01_decompositions_are_exact_and_primitive(capsys):
    bad, slowest = [], 0.0
    for name, p in CORPUS_PAIRS:
        G = preset(name)
        t0 = time.perf_counter()
        A = group_algebra(G, ScalarRing.padic(p, K))
        dec = primitive_decomposition(A, seed=0)
        t = time.perf_counter() - t0
        slowest = max(slowest, t)
        E = dec.idempotents
        zero = GroupRingElement.zero(G, A.ring)
        ok = all(e * e == e for e in E)
        ok &= all(E[i] * E[j] == zero for i in range(len(E)) for j in range(len(E)) if i != j)
        ok &= sum(E[1:], E[0]) == GroupRingElement.one(G, A.ring)
        ok &= all(algebra.is_local(A.residue, A.coordinates(e) % p) for e in E)
        ok &= t < DECOMP_LIMIT_S
        if not ok:
            bad.append(f"{name}/p={p}")
    report(capsys, 1, "idempotent decompositions mod p^6", not bad,
           f"{len(CORPUS_PAIRS)} pairs, failures {bad}, slowest {slowest:.2f}s (limit {DECOMP_LIMIT_S}s)")


def _small_fixed_rings():
    out = []
    for name, p in CORPUS_PAIRS:
        G = preset(name)
        for cls in G.conjugacy_classes:
            ring = group_fixed_subring(G, ScalarRing.prime_field(p), cls[0])
            if ring.dim <= 4:
                out.append((name, cls[0], p))
    return out


def test_c02_decomposition_matches_exhaustive_enumeration(capsys):
    cases = _small_fixed_rings()
    bad = []
    for name, x, p in cases:
        G = preset(name)
        oracle = SmallFixedRing(G, p, x)
        prims = oracle.primitive_idempotents()
        orbit_of, orbits = oracle.conjugacy_orbits(prims)
        ref = Counter(orbit_of[e] for e in oracle.primitive_decomposition())
        A = AlgebraPresentation(group_fixed_subring(G, ScalarRing.prime_field(p), x))
        dec = primitive_decomposition(A, seed=0)
        got = [orbit_of.get(tuple(int(v) for v in e.coeffs)) for e in dec.idempotents]
        same_labels = all((dec.labels[i] == dec.labels[j]) == (got[i] == got[j])
                          for i in range(len(got)) for j in range(len(got)))
        if None in got or Counter(got) != ref or not same_labels or len(ref) != len(orbits):
            bad.append(f"{name}/x={x}/p={p}")
    report(capsys, 2, "agreement with brute-force idempotent enumeration", not bad and cases,
           f"{len(cases)} algebras of dimension <= 4, mismatches {bad}")


def test_c03_character_formula_equals_trace(capsys):
    bad, total = [], 0
    for name, p in CORPUS_PAIRS:
        res = V.check_theta(preset(name), p, K, seed=0, count=100)
        total += res.witness["samples"]
        if res.status != "pass":
            bad.append(f"{name}/p={p}: {res.witness['mismatches']}")
    report(capsys, 3, "class-function formula equals action trace", not bad,
           f"{total} samples over {len(CORPUS_GROUPS)} groups ({len(CORPUS_PAIRS)} primes), "
           f"mismatches {bad}")


def test_c04_partial_augmentation_matrix_has_full_rank(capsys):
    bad = []
    for name, p in CORPUS_PAIRS:
        res = V.check_lemma_LinInd(preset(name), p, K)
        if res.status != "pass" or res.witness["rank_mod_p"] != res.witness["columns"]:
            bad.append(f"{name}/p={p}")
    report(capsys, 4, "partial-augmentation columns independent mod p", not bad,
           f"{len(CORPUS_PAIRS)} pairs, rank deficient {bad}")


def test_c05_idempotents_vanish_on_p_singular_classes(capsys):
    bad, count = [], 0
    for name, p in CORPUS_PAIRS:
        G = preset(name)
        res = V.check_prop_SuppIdem(G, p, K)
        count += res.witness["idempotents"]
        if res.status != "pass":
            bad.append(f"{name}/p={p}: {res.witness['violations']}")
    report(capsys, 5, "idempotents vanish on p-singular classes", not bad,
           f"{count} lifted idempotents, violations {bad}")


def test_c06_relative_projectivity_conditions_agree(capsys):
    bad, slowest, n = [], 0.0, 0
    methods = Counter()
    for name, x, p in p_element_triples():
        reps, t = _timed(V.relproj_reports, preset(name), x, p, K, 0)
        slowest = max(slowest, t)
        n += len(reps)
        methods.update(r.b_method for r in reps)
        if t >= RELPROJ_LIMIT_S or not all(r.b is not None and r.b == r.c == r.d for r in reps):
            bad.append(f"{name}/x={x}/p={p}")
    report(capsys, 6, "orbit / trace-image / partial-augmentation flags agree", not bad,
           f"{len(p_element_triples())} (G,x,p), {n} idempotents, b) decided by {dict(methods)}, "
           f"slowest {slowest:.2f}s (limit {RELPROJ_LIMIT_S}s), disagreements {bad}")


def test_c07_correspondence_reconstructs_idempotents(capsys):
    bad = []
    for name, x, p in p_element_triples():
        corr = correspondence_AT(preset(name), x, p, K, seed=0)
        problems = corr.verify()
        ok = not problems and all(e == f + eps for e, f, eps in zip(corr.e, corr.f, corr.eps))
        ok &= all(corr.T.element(corr.t_coords[f"eps{i}"]) == corr.eps[i] for i in range(corr.r))
        ok &= all(corr.T.contains(f) for f in corr.f[corr.r:])
        if not ok:
            bad.append(f"{name}/x={x}/p={p}: {problems}")
    report(capsys, 7, "e_i = f_i + eps_i with trace-ideal witnesses mod p^6", not bad,
           f"{len(p_element_triples())} (G,x,p), failures {bad}")


def test_c08_multiplicities_solve_indicator_system(capsys):
    bad = []
    for name, x, p in p_element_triples():
        res = V.check_cor_MultIdem(preset(name), x, p, K)
        w = res.witness
        if res.status != "pass" or not w["forward"] or w["rank_mod_p"] != len(w["multiplicities"]):
            bad.append(f"{name}/x={x}/p={p}")
    report(capsys, 8, "multiplicities satisfy and uniquely solve the class indicator", not bad,
           f"{len(p_element_triples())} (G,x,p), failures {bad}")


@pytest.fixture(scope="module")
def suite_runs(tmp_path_factory):
    cache = tmp_path_factory.mktemp("suite-cache")
    cfg = cli.parse_config(seed=0, cache=False)
    runs = {"no-cache": cli.report_json(cli.run_suite(cfg))}
    old = os.environ.get("GRLAB_CACHE_DIR")
    os.environ["GRLAB_CACHE_DIR"] = str(cache)
    try:
        cfg = cli.parse_config(seed=0, cache=True)
        runs["cold-cache"] = cli.report_json(cli.run_suite(cfg))
        runs["warm-cache"] = cli.report_json(cli.run_suite(cfg))
    finally:
        if old is None:
            del os.environ["GRLAB_CACHE_DIR"]
        else:
            os.environ["GRLAB_CACHE_DIR"] = old
    return runs


THEOREM_CASES = [("S3", 3), ("D4", 2), ("Q8", 2), ("A4", 2)]


def test_c09_conjugators_into_the_normal_subgroup(capsys, suite_runs):
    lines, ok = [], True
    for name, p in THEOREM_CASES:
        G = preset(name)
        N = designated_normal_subgroups(G)[p]
        pairs = V.nontrivial_bicyclic_pairs(G)
        for inst in V.theorem_instances(G, N, p, K, seed=0):
            res, t = _timed(V.verify_theorem_instance, inst, 0)
            x = inst.recipe["x"]
            good = res.status == "pass" and t < THEOREM_LIMIT_S and x in N
            if res.status == "pass":
                ring = ScalarRing.padic(p, K)
                mu = GroupRingElement(G, ScalarRing.padic(p, res.precision), res.witness["mu"])
                mu = mu.change_ring(ring)
                y = res.witness["y"]
                good &= y in N and mu.try_invert() is not None
                good &= mu.try_invert() * inst.u.change_ring(ring) * mu == GroupRingElement.basis(G, ring, y)
            if inst.recipe["b"] == "1":
                # no nontrivial bicyclic unit exists, so u = x is the only available instance
                good &= not pairs
            else:
                g, h = (int(v) for v in inst.recipe["b"][len("bicyclic("):-1].split(","))
                b = V.bicyclic_unit(G, g, h)
                good &= b != GroupRingElement.one(G, b.ring)
                good &= V.conjugate_unit(x, b) == inst.u
            ok &= good
            lines.append(f"{inst.name} {res.status} {t:.2f}s")
    fails = [c for r in json.loads(suite_runs["no-cache"]) for c in r["checks"] if c["status"] == "fail"]
    ok &= not fails
    report(capsys, 9, "explicit p-adic conjugators into N", ok,
           "; ".join(lines) + f"; suite-wide fail statuses: {len(fails)}")


def _strip_timing(text):
    data = json.loads(text)
    for r in data:
        for c in r["checks"]:
            c["millis"] = 0
    return json.dumps(data, sort_keys=True, indent=1)


def test_c10_reports_are_deterministic(capsys, suite_runs):
    stripped = {k: _strip_timing(v) for k, v in suite_runs.items()}
    ok = len(set(stripped.values())) == 1
    checks = sum(len(r["checks"]) for r in json.loads(suite_runs["no-cache"]))
    report(capsys, 10, "byte-identical reports modulo timing", ok,
           f"{len(stripped)} runs (no cache, cold cache, warm cache), {checks} checks each, "
           f"{len(stripped['no-cache'])} bytes")
