import numpy as np
import pytest
from hypothesis import given, strategies as st

from galoisext import varieties as V
from galoisext.algebra import (
    AlgebraError,
    Cone,
    Congruence,
    FactorizationError,
    FiniteAlgebra,
    Homomorphism,
    SignatureMismatch,
    SizeGuardError,
    are_permutable,
    check_homomorphism,
    coequalizer,
    compose,
    congruence_generated,
    equivalence_generated,
    factor_through,
    homomorphism_violation,
    identity,
    kernel_pair,
    kernel_pair_span,
    product,
    pullback,
    pullback_pair,
    quotient_by_congruence,
    relation_compose,
    terminal,
    validate_algebra,
)

from conftest import naive_congruence, relation_of


def test_validate_reports_bad_tables():
    bad = FiniteAlgebra("bad", 2, (("f", 1),), (np.array([0, 5], dtype=np.int32),))
    assert any("entry out of range" in m for m in validate_algebra(bad))
    short = FiniteAlgebra("short", 2, (("g", 2),), (np.array([0, 1, 1], dtype=np.int32),))
    assert any("table length mismatch" in m for m in validate_algebra(short))


def test_identity_of_algebra_is_structural():
    a = V.cyclic(4)
    b = V.cyclic(4)
    assert a == b and hash(a) == hash(b)
    assert a != V.direct_product(V.cyclic(2), V.cyclic(2))


def test_homomorphism_checks():
    Z4, Z2 = V.cyclic(4), V.cyclic(2)
    assert check_homomorphism(Homomorphism(Z4, Z2, [0, 1, 0, 1]))
    bad = Homomorphism(Z4, Z2, [0, 1, 1, 0])
    assert homomorphism_violation(bad) is not None
    assert not check_homomorphism(bad)


def test_homomorphism_rejects_signature_mismatch():
    with pytest.raises(SignatureMismatch):
        check_homomorphism(Homomorphism(V.cyclic(2), V.integers_mod(2), [0, 1]))


def test_composition_and_identity():
    Z8, Z4, Z2 = V.cyclic(8), V.cyclic(4), V.cyclic(2)
    f = Homomorphism(Z8, Z4, [i % 4 for i in range(8)])
    g = Homomorphism(Z4, Z2, [i % 2 for i in range(4)])
    assert compose(g, f).map.tolist() == [i % 2 for i in range(8)]
    assert compose(f, identity(Z8)).key == f.key


@given(st.lists(st.tuples(st.integers(0, 5), st.integers(0, 5)), max_size=3))
def test_generated_congruence_matches_naive_closure(pairs):
    A = V.symmetric(3)
    assert relation_of(congruence_generated(A, pairs)) == naive_congruence(A, pairs)


def test_congruence_lattice_operations():
    A = V.cyclic(6)
    two = congruence_generated(A, [(0, 3)])
    three = congruence_generated(A, [(0, 2)])
    assert two.n_blocks == 3 and three.n_blocks == 2
    assert two.meet(three) == Congruence.bottom(A)
    assert two.join(three) == Congruence.top(A)
    assert Congruence.bottom(A) <= two <= Congruence.top(A)


def test_equivalence_is_not_closed_under_operations():
    A = V.cyclic(4)
    eq = equivalence_generated(A, [(0, 2)])
    assert eq.classes() == [[0, 2], [1], [3]]
    assert not eq.is_compatible()
    assert congruence_generated(A, [(0, 2)]).classes() == [[0, 2], [1, 3]]


def test_quotient_and_kernel_pair_round_trip():
    D4 = V.dihedral(4)
    theta = congruence_generated(D4, [(0, 2)])
    Q, q = quotient_by_congruence(D4, theta)
    assert Q.size == 4 and q.is_surjective()
    assert kernel_pair(q) == theta
    assert V.is_group(Q)


def test_quotient_by_incompatible_relation_fails():
    A = V.cyclic(4)
    with pytest.raises(AlgebraError):
        quotient_by_congruence(A, equivalence_generated(A, [(0, 2)]))


def test_pullback_universal_pair():
    Z2 = V.cyclic(2)
    one = terminal(Z2.signature, "Z1", "group")
    t = Homomorphism(Z2, one, [0, 0])
    cone = pullback(t, t)
    assert isinstance(cone, Cone) and cone.obj.size == 4
    K = V.direct_product(Z2, Z2)
    p1 = Homomorphism(K, Z2, [0, 0, 1, 1])
    p2 = Homomorphism(K, Z2, [0, 1, 0, 1])
    u = pullback_pair(cone, p1, p2)
    assert u.is_bijective()
    assert compose(cone.p1, u).key == p1.key


def test_product_has_lexicographic_coordinates():
    c = product(V.cyclic(2), V.cyclic(3))
    assert c.obj.size == 6
    assert c.p1.map.tolist() == [0, 0, 0, 1, 1, 1]
    assert c.p2.map.tolist() == [0, 1, 2, 0, 1, 2]


def test_coequalizer_of_kernel_pair_is_the_image():
    Z4, Z2 = V.cyclic(4), V.cyclic(2)
    f = Homomorphism(Z4, Z2, [0, 1, 0, 1])
    span = kernel_pair_span(f)
    assert span.is_equivalence()
    Q, q = coequalizer(span.proj1, span.proj2)
    assert Q.size == 2 and kernel_pair(q) == kernel_pair(f)


def test_factor_through_and_its_failure():
    Z4, Z2 = V.cyclic(4), V.cyclic(2)
    e = Homomorphism(Z4, Z2, [0, 1, 0, 1])
    g = Homomorphism(Z4, Z2, [0, 1, 0, 1])
    assert factor_through(e, g).is_bijective()
    with pytest.raises(FactorizationError):
        factor_through(Homomorphism(Z4, V.cyclic(1), [0] * 4), g)


def test_permutability_in_groups_and_on_a_chain():
    S3 = V.symmetric(3)
    thetas = [Congruence.bottom(S3), congruence_generated(S3, [(0, 1)]), Congruence.top(S3)]
    assert all(are_permutable(R, S) for R in thetas for S in thetas)
    chain = FiniteAlgebra.from_tables("chain3", 3, [("meet", 2, [[min(i, j) for j in range(3)] for i in range(3)])])
    R = congruence_generated(chain, [(0, 1)])
    S = congruence_generated(chain, [(1, 2)])
    assert relation_compose(R, S) != relation_compose(S, R)


def test_size_guard(monkeypatch):
    monkeypatch.setenv("GALOISEXT_MAX_ELEMENTS", "10")
    with pytest.raises(SizeGuardError):
        product(V.cyclic(4), V.cyclic(4))
