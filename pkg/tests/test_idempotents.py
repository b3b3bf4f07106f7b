import pytest
from hypothesis import given, settings, strategies as st

from grlab import (GroupRingElement, IdempotentDecomposition, ScalarRing, are_conjugate,
                   correspondence_AT, group_fixed_subring, hensel_lift, preset,
                   primitive_decomposition, radical)
from grlab.algebra import AlgebraError
from grlab.idempotents import AlgebraPresentation, group_algebra
from grlab.subalgebras import subgroup_algebra

from corpus import p_element_triples


def el(G, R, terms):
    return GroupRingElement.from_dict(G, R, terms)


def test_f3c2_primitives():
    G = preset("C2")
    R = ScalarRing.prime_field(3)
    dec = primitive_decomposition(group_algebra(G, R))
    # (1 + g)/2 and (1 - g)/2 with 1/2 = 2 mod 3
    assert sorted(e.to_list() for e in dec.idempotents) == [[2, 1], [2, 2]]
    assert dec.multiplicities == [1, 1]


def test_hensel_lift_known_value():
    G = preset("C2")
    e = el(G, ScalarRing.prime_field(3), {0: 2, 1: 2})
    # 1/2 = 5 mod 9
    assert hensel_lift(e, 2).to_list() == [5, 5]
    assert hensel_lift(e, 6).to_list() == [365, 365]  # 1/2 mod 3^6


@given(st.integers(1, 8))
@settings(max_examples=8, deadline=None)
def test_hensel_lift_is_idempotent_and_reduces(k):
    G = preset("S3")
    dec = primitive_decomposition(group_algebra(G, ScalarRing.prime_field(2)))
    for e in dec.idempotents:
        a = hensel_lift(e, k)
        assert a * a == a
        assert a.change_ring(ScalarRing.padic(2, 1)).to_list() == e.to_list()


def test_hensel_rejects_non_idempotent():
    G = preset("C2")
    with pytest.raises(Exception):
        hensel_lift(el(G, ScalarRing.padic(3, 2), {1: 1}), 3)


def test_radical_of_p_group_is_augmentation_ideal():
    for name, p in [("C4", 2), ("D4", 2), ("Q8", 2), ("C3", 3), ("C2xC2", 2)]:
        G = preset(name)
        J = radical(group_algebra(G, ScalarRing.prime_field(p)))
        assert len(J) == G.order - 1
        assert all(j.augmentation() == 0 for j in J)


def test_radical_f2s3_is_spanned_by_group_sum():
    G = preset("S3")
    J = radical(group_algebra(G, ScalarRing.prime_field(2)))
    assert [j.to_list() for j in J] == [[1] * 6]


def test_radical_needs_prime_field():
    with pytest.raises(AlgebraError):
        radical(group_algebra(preset("S3"), ScalarRing.padic(2, 3)))


@pytest.mark.parametrize("name,p,mult", [("S3", 2, [2, 1]), ("S3", 3, [1, 1]), ("C3", 2, [1, 1]),
                                         ("A4", 3, [1, 3]), ("D4", 2, [1]), ("C2xC2", 2, [1])])
def test_multiplicities(name, p, mult):
    # multiplicity of a projective indecomposable = dimension of its simple head
    dec = primitive_decomposition(group_algebra(preset(name), ScalarRing.padic(p, 4)))
    assert sorted(dec.multiplicities) == sorted(mult)
    assert dec.verify()


def test_f2s3_conjugacy_witnesses():
    G = preset("S3")
    R = ScalarRing.padic(2, 6)
    A = group_algebra(G, R)
    dec = primitive_decomposition(A)
    assert dec.multiplicities == [2, 1]
    (i, j), = [c for c in dec.classes if len(c) == 2]
    mu = dec.witnesses[j]
    e, f = dec.idempotents[i], dec.idempotents[j]
    assert mu.try_invert() is not None and e * mu == mu * f
    res = are_conjugate(e, f, A)
    assert res.status == "conjugate"
    g = dec.idempotents[dec.classes[1][0]]
    assert are_conjugate(e, g, A).status == "not-conjugate"


def test_are_conjugate_equal_and_bad_input():
    G = preset("S3")
    A = group_algebra(G, ScalarRing.padic(3, 2))
    one = GroupRingElement.one(G, A.ring)
    assert are_conjugate(one, one, A).method == "equal"
    with pytest.raises(AlgebraError):
        are_conjugate(one, el(G, A.ring, {1: 1}), A)


def test_decomposition_of_a_non_unit_idempotent():
    G = preset("S3")
    A = group_algebra(G, ScalarRing.padic(2, 3))
    full = primitive_decomposition(A)
    e = full.idempotents[0] + full.idempotents[1]
    part = primitive_decomposition(A, unit=e)
    assert len(part) == 2 and part.verify()


def test_json_roundtrip():
    G = preset("A4")
    dec = primitive_decomposition(group_algebra(G, ScalarRing.padic(3, 3)))
    back = IdempotentDecomposition.from_json(dec.to_json(), G)
    assert back.idempotents == dec.idempotents and back.labels == dec.labels
    assert back.witnesses == dec.witnesses and back.verify()


@pytest.mark.parametrize("seed", [0, 1, 7])
def test_seed_only_changes_representatives(seed):
    G = preset("S4")
    A = group_algebra(G, ScalarRing.padic(2, 3))
    dec = primitive_decomposition(A, seed=seed)
    assert dec.multiplicities == primitive_decomposition(A, seed=0).multiplicities
    assert dec.verify()


def test_primitivity_over_rh_and_fixed_ring():
    G = preset("D6")
    R = ScalarRing.padic(2, 4)
    x = [g for g in range(G.order) if G.element_order(g) == 2 and len(G.centralizer(g)) == 4][0]
    for sub in (subgroup_algebra(G, R, G.centralizer(x).elements), group_fixed_subring(G, R, x)):
        dec = primitive_decomposition(AlgebraPresentation(sub))
        assert dec.verify() and all(dec.primitive)
        assert all(sub.contains(e) for e in dec.idempotents)


@pytest.mark.parametrize("name,x,p", p_element_triples([("S3", 2), ("S3", 3), ("A4", 2),
                                                        ("D4", 2), ("S4", 3)]))
def test_correspondence(name, x, p):
    corr = correspondence_AT(preset(name), x, p, k=4)
    assert corr.verify() == []
    for i, (e, f, eps) in enumerate(zip(corr.e, corr.f, corr.eps)):
        assert e == f + eps
        assert corr.T.contains(eps)
        assert not corr.T.contains(f)
    for f in corr.f[corr.r:]:
        assert corr.T.contains(f)
