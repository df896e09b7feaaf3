import itertools
import os

import pytest
from hypothesis import HealthCheck, settings

from galoisext import corpus
from galoisext import varieties as V

settings.register_profile("ci", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow, HealthCheck.function_scoped_fixture])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "ci"))


def naive_congruence(A, pairs):
    """Pure-Python closure: reflexive, symmetric, transitive and closed under every operation."""
    n = A.size
    rel = {(x, x) for x in range(n)} | set(pairs) | {(y, x) for x, y in pairs}
    tables = [(k, A.table(i)) for i, (_, k) in enumerate(A.signature) if k > 0]
    while True:
        new = set(rel)
        for (a, b), (c, d) in itertools.product(rel, repeat=2):
            if b == c:
                new.add((a, d))
        for k, t in tables:
            for combo in itertools.product(sorted(rel), repeat=k):
                xs = tuple(p[0] for p in combo)
                ys = tuple(p[1] for p in combo)
                new.add((int(t[xs]), int(t[ys])))
        if new == rel:
            return rel
        rel = new


def relation_of(theta):
    return set(theta.pairs())


@pytest.fixture(scope="session")
def small_groups():
    return corpus.groups("small")


@pytest.fixture(scope="session")
def small_rings():
    return corpus.rings("small")


@pytest.fixture(scope="session")
def named(small_groups):
    out = {G.name: G for G in small_groups}
    out["Z16"] = V.cyclic(16)
    return out
