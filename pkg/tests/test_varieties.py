import pytest
from hypothesis import given, strategies as st

from galoisext import search
from galoisext import varieties as V
from galoisext.algebra import Homomorphism, quotient_by_congruence


def test_builders_are_groups():
    for G in (V.cyclic(5), V.dihedral(4), V.dicyclic(2), V.quaternion(), V.symmetric(3), V.symmetric(4)):
        assert V.is_group(G), G.name
    assert V.symmetric(4).size == 24
    assert search.is_isomorphic(V.dicyclic(2), V.quaternion())


def test_group_table_validation():
    with pytest.raises(V.NotAGroup):
        V.group_from_table("bad", [[0, 1], [0, 1]])


@pytest.mark.parametrize("name,center,derived", [
    ("Z1", 1, 1), ("Z4", 4, 1), ("S3", 1, 3), ("D4", 2, 2), ("Q8", 2, 2), ("Z2xZ2xZ2", 8, 1),
])
def test_center_and_derived_orders(named, name, center, derived):
    G = named[name]
    assert len(V.center(G)) == center
    assert len(V.derived_subgroup(G)) == derived


def test_fast_derived_subgroup_agrees(small_groups):
    for G in small_groups + [V.symmetric(4)]:
        assert sorted(V._fast_derived_subgroup(G).tolist()) == sorted(V.derived_subgroup(G))


def test_relative_commutator_in_d4(named):
    D4 = named["D4"]
    r = V.subgroup_generated(D4, [1])
    assert len(r) == 4
    # [<r>, D4] = <r^2>
    assert sorted(V.relative_commutator_subgroup(D4, r)) == sorted(V.subgroup_generated(D4, [2]))
    assert V.relative_commutator_subgroup(D4, V.center(D4)) == [0]


def test_central_and_trivial_oracles(named):
    Q8 = named["Q8"]
    Q, q = quotient_by_congruence(Q8, V.coset_congruence(Q8, V.center(Q8)))
    assert V.group_central_oracle(q)
    assert not V.group_trivial_oracle(q)
    Z4, Z2 = named["Z4"], named["Z2"]
    f = Homomorphism(Z4, Z2, [0, 1, 0, 1])
    assert V.group_central_oracle(f) and V.group_trivial_oracle(f)


def test_centralization_oracle_on_s3(named):
    S3 = named["S3"]
    f = Homomorphism(S3, named["Z1"], [0] * 6)
    Q, fbar, q = V.group_centralization_oracle(f)
    assert Q.size == 2 and fbar.target == named["Z1"]


def test_normal_subgroups():
    S3 = V.symmetric(3)
    assert not V.is_normal_subgroup(S3, V.subgroup_generated(S3, [next(g for g in range(6)
                                                                        if len(V.subgroup_generated(S3, [g])) == 2)]))
    assert len(V.normal_closure(S3, [1])) in (3, 6)


@pytest.mark.parametrize("k,ideal_size", [(2, 1), (3, 3), (4, 2), (6, 3), (12, 6)])
def test_boolean_reflection_sizes(k, ideal_size):
    R = V.integers_mod(k)
    B, u = V.boolean_reflection(R)
    assert B.size == k // ideal_size
    assert V.is_boolean(B) and u.is_surjective()


def test_boolean_reflection_values():
    assert V.boolean_reflection(V.integers_mod(6))[1].map.tolist() == [0, 1, 0, 1, 0, 1]
    assert V.boolean_reflection(V.integers_mod(4))[1].map.tolist() == [0, 1, 0, 1]
    assert V.boolean_reflection(V.field4())[0].size == 1
    assert V.boolean_reflection(V.ring_product(V.integers_mod(2), V.integers_mod(2)))[0].size == 4


@given(st.integers(1, 12))
def test_boolean_reflection_is_idempotent(k):
    B, _ = V.boolean_reflection(V.integers_mod(k))
    B2, u2 = V.boolean_reflection(B)
    assert u2.is_bijective()


def test_ring_validation():
    assert V.is_ring(V.field4()) and V.is_ring(V.integers_mod(12))
    with pytest.raises(V.NotARing):
        V.boolean_reflection(V.cyclic(2))
