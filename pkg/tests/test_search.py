import itertools

import numpy as np
import pytest

from galoisext import search
from galoisext import varieties as V
from galoisext.algebra import check_homomorphism, Homomorphism

# endomorphism counts of the small groups; known values for Z2xZ2 (|M_2(F_2)|), S3, D4, Q8 and Z2^3
ENDOMORPHISMS = {"Z1": 1, "Z2": 2, "Z4": 4, "Z2xZ2": 16, "S3": 10, "Z8": 8, "Z2xZ4": 32,
                 "Z2xZ2xZ2": 512, "D4": 36, "Q8": 28}
NORMAL_SUBGROUPS = {"Z1": 1, "Z2": 2, "Z3": 2, "Z4": 3, "Z2xZ2": 5, "Z6": 4, "S3": 3, "Z8": 4,
                    "Z2xZ4": 8, "Z2xZ2xZ2": 16, "D4": 6, "Q8": 6}


def brute_force_homs(A, B):
    out = []
    for m in itertools.product(range(B.size), repeat=A.size):
        if check_homomorphism(Homomorphism(A, B, list(m))):
            out.append(m)
    return out


@pytest.mark.parametrize("name", sorted(ENDOMORPHISMS))
def test_endomorphism_counts(named, name):
    G = named[name]
    assert sum(1 for _ in search.homomorphisms(G, G)) == ENDOMORPHISMS[name]


@pytest.mark.parametrize("pair", [("Z4", "Z2xZ2"), ("S3", "Z2"), ("Z2xZ2", "S3"), ("Z3", "S3")])
def test_homomorphisms_match_brute_force(named, pair):
    A, B = named[pair[0]], named[pair[1]]
    got = sorted(tuple(f.map.tolist()) for f in search.homomorphisms(A, B))
    assert got == sorted(brute_force_homs(A, B))


def test_bell_numbers():
    assert [sum(1 for _ in search.set_partitions(n)) for n in range(7)] == [1, 1, 2, 5, 15, 52, 203]


@pytest.mark.parametrize("name", sorted(NORMAL_SUBGROUPS))
def test_congruences_are_normal_subgroups(named, name):
    G = named[name]
    congs = search.all_congruences(G)
    assert len(congs) == NORMAL_SUBGROUPS[name]
    assert {c.key for c in congs} == {c.key for c in search.congruence_lattice(G)}


def test_isomorphism_search(named):
    assert search.is_isomorphic(V.dihedral(4), V.dihedral(4).renamed("other"))
    assert not search.is_isomorphic(named["D4"], named["Q8"])
    assert not search.is_isomorphic(named["Z4"], named["Z2xZ2"])
    assert search.is_isomorphic(V.cyclic(6), V.direct_product(V.cyclic(2), V.cyclic(3)))
    iso = search.find_isomorphism(V.cyclic(6), V.direct_product(V.cyclic(2), V.cyclic(3)))
    assert iso is not None


def test_generating_set_generates(named):
    for G in named.values():
        gens = search.generating_set(G)
        assert len(search.subalgebra_generated(G, gens)) == G.size


def test_subalgebra_generated():
    S3 = V.symmetric(3)
    sub = search.subalgebra_generated(S3, [1])
    assert len(sub) in (2, 3)
    assert sorted(np.asarray(sub).tolist()) == sorted(V.subgroup_generated(S3, [1]))
