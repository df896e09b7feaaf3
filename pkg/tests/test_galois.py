import pytest
from hypothesis import given, strategies as st

from galoisext import corpus, suite
from galoisext import galois as gal
from galoisext import varieties as V
from galoisext.algebra import (
    Homomorphism,
    NotCommuting,
    compose,
    identity,
    kernel_pair_span,
    quotient_by_congruence,
)
from galoisext.category import ExtSquare, is_in_E1, level_of, tower_depth

AB = gal.abelianization_structure()
AB_SLOW = gal.commutator_abelianization_structure()


def quotient(G, gens):
    return quotient_by_congruence(G, V.coset_congruence(G, V.normal_closure(G, gens)), check=False)[1]


@pytest.fixture(scope="module")
def surjections():
    gs = [G for G in corpus.groups("small") if G.size <= 6]
    return corpus.surjections(gs)


def test_known_coverings(named):
    Q8, S3, Z4 = named["Q8"], named["S3"], named["Z4"]
    q = quotient(Q8, V.center(Q8))
    assert gal.is_covering(AB, q) and not gal.is_trivial_covering(AB, q)
    sign = quotient(S3, V.derived_subgroup(S3))
    assert not gal.is_covering(AB, sign) and not gal.is_trivial_covering(AB, sign)
    mod2 = Homomorphism(Z4, named["Z2"], [0, 1, 0, 1])
    assert gal.is_trivial_covering(AB, mod2)


def test_engine_matches_group_oracles(surjections):
    for f in surjections:
        assert gal.is_covering(AB, f) == V.group_central_oracle(f), f.source.name
        assert gal.is_trivial_covering(AB, f) == V.group_trivial_oracle(f), f.source.name


def test_centralization_sizes(named):
    S3, D4 = named["S3"], named["D4"]
    fbar, unit = gal.centralize(AB, Homomorphism(S3, named["Z1"], [0] * 6))
    assert fbar.source.size == 2 and unit.is_surjective()
    d = quotient(D4, [2, 4])
    assert d.target.size == 2
    fbar, _ = gal.centralize(AB, d)
    assert fbar.source.size == 4


def test_centralization_agrees_with_oracles(surjections):
    for f in surjections:
        fbar, unit = gal.centralize(AB, f)
        Q, obar, _ = V.group_centralization_oracle(f)
        assert gal.isomorphic_over_base(fbar, obar) is not None
        cbar, _ = gal.centralize_via_commutator(AB, f)
        assert gal.isomorphic_over_base(fbar, cbar) is not None
        assert gal.is_covering(AB, fbar)
        assert compose(fbar, unit).key == f.key


def test_slow_reflector_gives_same_centralization(named):
    f = quotient(named["D4"], [1])
    a, _ = gal.centralize(AB, f)
    b, _ = gal.centralize(AB_SLOW, f)
    assert gal.isomorphic_over_base(a, b) is not None


def test_stages_are_exposed(named):
    f = Homomorphism(named["S3"], named["Z1"], [0] * 6)
    st_ = gal.centralization_stages(AB, f)
    assert st_.kernel_pair.obj.size == 36
    assert st_.p0.obj.size == 36 // 3  # pullback over the abelianization of S3
    assert st_.quotient.target.size == 2


def test_identity_structure_makes_everything_trivial(surjections):
    G = gal.identity_structure()
    for f in surjections[:40]:
        assert gal.is_trivial_covering(G, f)
        fbar, unit = gal.centralize(G, f)
        assert unit.is_bijective()


def test_boolean_structure(small_rings):
    B = gal.boolean_structure()
    Z6, Z3 = V.integers_mod(6), V.integers_mod(3)
    f = Homomorphism(Z6, Z3, [i % 3 for i in range(6)])
    assert gal.apply_reflector(B, f).bottom.target.size == 1
    assert is_in_E1(gal.apply_reflector(B, f))


def test_discrete_fibration():
    Z4, Z2 = V.cyclic(4), V.cyclic(2)
    f = Homomorphism(Z4, Z2, [0, 1, 0, 1])
    span = kernel_pair_span(f)
    same = gal.DiscreteFibrationDatum(span, span, identity(span.total), identity(Z4))
    assert gal.is_discrete_fibration(same)
    bad = gal.DiscreteFibrationDatum(span, span, identity(span.total), Homomorphism(Z4, Z4, [0, 3, 2, 1]))
    with pytest.raises(Exception):
        gal.is_discrete_fibration(bad)


def test_extension_squares():
    k = suite.klein_square()
    d = suite.dihedral_square()
    assert level_of(k) == 1 and tower_depth(k) == 2
    assert is_in_E1(k) and is_in_E1(d)
    Z2 = V.cyclic(2)
    K = V.direct_product(Z2, Z2)
    p1 = Homomorphism(K, Z2, [0, 0, 1, 1])
    one = corpus.groups("trivial")[0]
    t = Homomorphism(Z2, one, [0, 0])
    assert not is_in_E1(ExtSquare(p1, t, p1, t))
    with pytest.raises(NotCommuting):
        is_in_E1(ExtSquare(p1, Homomorphism(Z2, Z2, [0, 1]), Homomorphism(K, Z2, [0, 1, 0, 1]), identity(Z2)))


def test_double_central_witnesses():
    assert gal.is_n_fold_central(AB, suite.klein_square(), 2)
    assert not gal.is_n_fold_central(AB, suite.dihedral_square(), 2)
    assert gal.is_double_central(AB, suite.klein_square())


def test_one_fold_central_is_covering(named):
    q = quotient(named["Q8"], V.center(named["Q8"]))
    assert gal.is_n_fold_central(AB, q, 1) == gal.is_covering(AB, q)


def test_depth_guard():
    with pytest.raises(Exception):
        gal.lift_to(AB, 5, max_depth=3)


def test_non_surjection_rejected(named):
    inc = Homomorphism(named["Z2"], named["Z4"], [0, 2])
    with pytest.raises(gal.NotInClass):
        gal.is_covering(AB, inc)


@given(st.sampled_from(["Z4", "Z2xZ2", "S3", "D4", "Q8"]), st.data())
def test_units_are_surjective_and_idempotent(named, name, data):
    G = named[name]
    f = data.draw(st.sampled_from(corpus.quotient_maps(G)))
    fbar, unit = gal.centralize(AB, f)
    assert unit.is_surjective()
    again, unit2 = gal.centralize(AB, fbar)
    assert unit2.is_bijective()
