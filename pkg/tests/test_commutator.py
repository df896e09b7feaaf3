import pytest
from hypothesis import given, strategies as st

from galoisext import commutator as C
from galoisext import corpus, search
from galoisext import varieties as V
from galoisext.algebra import AlgebraError, Congruence, FiniteAlgebra, SizeGuardError, congruence_generated, kernel_pair


def identity_block(theta):
    return sorted(theta.block_of(0))


def test_full_commutator_on_small_groups(named):
    # [1, 1] is the coset congruence of the derived subgroup
    for name in ("Z4", "S3", "D4", "Q8", "Z2xZ4"):
        G = named[name]
        top = Congruence.top(G)
        assert identity_block(C.commutator(top, top)) == sorted(V.derived_subgroup(G)), name


def test_commutator_matches_relative_oracle_on_every_quotient(small_groups):
    for G in small_groups:
        top = Congruence.top(G)
        for q in corpus.quotient_maps(G):
            K = V.kernel(q)
            assert identity_block(C.commutator(kernel_pair(q), top)) == sorted(V.relative_commutator_subgroup(G, K))


def test_commutator_is_symmetric_and_below_meet(named):
    G = named["D4"]
    congs = search.all_congruences(G)
    for R in congs:
        for S in congs:
            b = C.commutator(R, S)
            assert b == C.commutator(S, R)
            assert b <= R.meet(S)


def test_abelian_objects(named):
    assert C.is_abelian_object(named["Z2xZ4"])
    assert not C.is_abelian_object(named["Q8"])
    Z = FiniteAlgebra.from_tables("zero-mult", 2, [("add", 2, [[0, 1], [1, 0]]), ("mul", 2, [[0, 0], [0, 0]])])
    assert C.is_abelian_object(Z)


def test_abelianization_reflector(named):
    Q, q = C.abelianization(named["S3"])
    assert Q.size == 2 and q.is_surjective()
    R, r = C.abelianization(V.integers_mod(4))
    assert R.size == 1


def test_reflectors_agree_on_groups(small_groups):
    for G in small_groups:
        _, slow = C.abelianization(G)
        _, fast = V.group_abelianization(G)
        assert kernel_pair(slow) == kernel_pair(fast)


def _chain():
    return FiniteAlgebra.from_tables("chain3", 3, [("meet", 2, [[min(i, j) for j in range(3)] for i in range(3)])])


def test_non_permutable_pair_warns():
    A = _chain()
    R = congruence_generated(A, [(0, 1)])
    S = congruence_generated(A, [(1, 2)])
    with pytest.warns(C.NonPermutableWarning):
        C.commutator(R, S)


def test_maltsev_audit():
    assert not C.maltsev_audit(_chain())
    assert C.maltsev_audit(V.dihedral(4))
    with pytest.raises(SizeGuardError):
        C.maltsev_audit(V.cyclic(16))


def test_query_rejects_foreign_congruences(named):
    with pytest.raises(AlgebraError):
        C.CommutatorQuery(named["Z4"], Congruence.top(named["Z2"]), Congruence.top(named["Z4"]))


@given(st.sampled_from(["S3", "D4", "Q8", "Z2xZ2"]), st.data())
def test_commutator_is_monotone(named, name, data):
    G = named[name]
    congs = search.all_congruences(G)
    R, R2, S = (data.draw(st.sampled_from(congs)) for _ in range(3))
    if R <= R2:
        assert C.commutator(R, S) <= C.commutator(R2, S)
