import pytest

from galoisext import commutator, galois
from galoisext.algebra import Congruence, Homomorphism
from galoisext.mutations import inject


def test_faults_are_scoped_to_the_block(named):
    original = commutator._delta_congruence
    with inject("commutator-no-closure"):
        assert commutator._delta_congruence is not original
    assert commutator._delta_congruence is original


def test_commutator_fault_changes_a_bracket(named):
    D4 = named["D4"]
    top = Congruence.top(D4)
    good = commutator.commutator(top, top)
    with inject("commutator-no-closure"):
        bad = commutator.commutator(top, top)
    assert good != bad


@pytest.mark.parametrize("fault", ["trivial-wrong-projection", "centralize-no-coequalizer"])
def test_galois_faults_change_an_s3_verdict(named, fault):
    f = Homomorphism(named["S3"], named["Z1"], [0] * 6)
    G = galois.abelianization_structure()
    honest = (galois.is_trivial_covering(G, f), galois.centralize(G, f)[0].source.size)
    with inject(fault):
        try:
            faulty = (galois.is_trivial_covering(G, f), galois.centralize(G, f)[0].source.size)
        except Exception:
            faulty = None
    assert honest != faulty
