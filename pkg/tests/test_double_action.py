import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from grlab import GroupRingElement, ScalarRing, preset, relative_trace
from grlab.double_action import (DoubleActionModule, RelProjContext, ThetaMismatch,
                                 check_relproj_conditions, relproj_reports, summand_decomposition,
                                 theta, theta_formula, theta_trace, verify_b_witness)
from grlab.grouprings import GroupRingError

from corpus import p_element_triples


def module(name, x, p, k=4):
    G = preset(name)
    R = ScalarRing.padic(p, k)
    return DoubleActionModule(GroupRingElement.basis(G, R, x), G.element_order(x))


def test_theta_on_s3_three_cycle():
    # u = x = (0 1 2); the action a -> g^-1 a x^i permutes G, so the trace counts fixed points
    M = module("S3", 2, 3)
    vals = {(g, i): int(theta(M, None, g, i)) for g in (0, 1, 2) for i in range(3)}
    assert vals[(0, 0)] == 6
    assert vals[(2, 1)] == 3 == vals[(2, 2)]  # |C_G(x)| fixed points of g -> x^-1 g x
    assert vals[(2, 0)] == 0 and vals[(0, 1)] == 0 and vals[(1, 1)] == 0


def test_action_axioms():
    M = module("S4", 7, 2)
    assert M.check_action(np.random.default_rng(0), samples=10)


def test_module_rejects_wrong_order():
    G = preset("S3")
    R = ScalarRing.padic(3, 2)
    with pytest.raises(GroupRingError):
        DoubleActionModule(GroupRingElement.basis(G, R, 2), 2)


@given(seed=st.integers(0, 10 ** 6))
@settings(max_examples=20, deadline=None)
def test_theta_formula_equals_trace_for_conjugated_units(seed):
    G = preset("A4")
    R = ScalarRing.padic(2, 4)
    rng = np.random.default_rng(seed)
    one = GroupRingElement.one(G, R)
    while True:
        v = one + 2 * GroupRingElement(G, R, rng.integers(0, R.modulus, G.order))
        vinv = v.try_invert()
        if vinv is not None:
            break
    u = GroupRingElement.basis(G, R, 2).conj(v, vinv)
    M = DoubleActionModule(u, 2)
    dec = summand_decomposition(M, seed=0)
    e = dec.idempotents[int(rng.integers(len(dec)))]
    g, i = int(rng.integers(G.order)), int(rng.integers(2))
    assert theta_formula(M, e, g, i) == theta_trace(M, e, g, i)
    assert theta(M, e, g, i) == theta_formula(M, e, g, i)


def test_theta_rejects_unfixed_idempotent():
    G = preset("S3")
    R = ScalarRing.padic(2, 3)
    M = DoubleActionModule(GroupRingElement.basis(G, R, 1), 2)
    e = GroupRingElement.basis(G, R, 2)  # a 3-cycle does not commute with the transposition
    with pytest.raises(GroupRingError):
        theta(M, e, 0, 0)
    assert issubclass(ThetaMismatch, AssertionError)


def test_summand_decomposition_needs_p_power_order():
    G = preset("S3")
    M = DoubleActionModule(GroupRingElement.basis(G, ScalarRing.padic(2, 3), 2), 3)
    with pytest.raises(GroupRingError):
        summand_decomposition(M)


@pytest.mark.parametrize("name,x,p", p_element_triples([("S3", 2), ("S3", 3), ("A4", 3),
                                                        ("D6", 2), ("D4", 2)]))
def test_conditions_agree(name, x, p):
    for r in relproj_reports(preset(name), x, p, 4):
        assert r.status == "pass", r.to_json()
        assert r.b == r.c == r.d


def test_orbit_witness_when_relatively_projective():
    # S3, p = 2, x a transposition: one primitive of (RG)^<x> is a trace of a primitive nu of RG
    G = preset("S3")
    ctx = RelProjContext(G, 1, 2, 6)
    reports = relproj_reports(G, 1, 2, 6)
    yes = [r for r in reports if r.b]
    no = [r for r in reports if not r.b]
    assert len(yes) == 1 and len(no) == 1
    r = yes[0]
    nu = GroupRingElement(G, ctx.ring, r.b_witness["nu"])
    assert nu * nu == nu
    assert nu * nu.conj_by_group(1) == GroupRingElement.zero(G, ctx.ring)
    assert relative_trace(nu, 1, 2) == r.e
    assert verify_b_witness(ctx, r.e, r.b_witness)
    assert r.c_witness is not None and ctx.T.element(r.c_witness) == r.e
    assert not any(r.d_witness)
    # the other idempotent has a nonzero partial augmentation of e x
    assert any(no[0].d_witness) and no[0].c_witness is None


def test_tampered_witness_is_rejected():
    G = preset("S3")
    ctx = RelProjContext(G, 1, 2, 6)
    r = [r for r in relproj_reports(G, 1, 2, 6) if r.b][0]
    bad = dict(r.b_witness)
    bad["orbit"] = [bad["orbit"][0], bad["orbit"][0]]
    assert not verify_b_witness(ctx, r.e, bad)


def test_conditions_reject_non_primitive():
    G = preset("S4")
    e = GroupRingElement.one(G, ScalarRing.padic(3, 3))
    with pytest.raises(Exception):
        check_relproj_conditions(e, 3, 3, 3)
