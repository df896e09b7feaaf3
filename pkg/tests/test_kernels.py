import numpy as np
import pytest
from hypothesis import given, strategies as st

from galoisext import _kernels
from galoisext import varieties as V
from galoisext.algebra import _closure_inputs, congruence_generated

from conftest import naive_congruence, relation_of

GROUPS = [V.cyclic(6), V.symmetric(3), V.dihedral(4), V.quaternion(), V.integers_mod(6)]


def _labels(A, pairs, use_numba):
    flat, offsets, arities, coords, index = _closure_inputs(A)
    return _kernels.close(flat, offsets, arities, A.size, coords, index, np.array(pairs, dtype=np.int64),
                          use_numba=use_numba)


@pytest.mark.skipif(_kernels.numba is None, reason="numba not installed")
@given(st.sampled_from(GROUPS), st.data())
def test_numba_and_numpy_routes_agree(A, data):
    pairs = data.draw(st.lists(st.tuples(st.integers(0, A.size - 1), st.integers(0, A.size - 1)), max_size=3))
    assert np.array_equal(_labels(A, pairs, True), _labels(A, pairs, False))


@pytest.mark.parametrize("use_numba", [False, True] if _kernels.numba is not None else [False])
@given(A=st.sampled_from(GROUPS[:3]), data=st.data())
def test_closure_matches_naive_oracle(use_numba, A, data):
    pairs = data.draw(st.lists(st.tuples(st.integers(0, A.size - 1), st.integers(0, A.size - 1)), max_size=2))
    labels = _labels(A, pairs, use_numba)
    got = {(x, y) for x in range(A.size) for y in range(A.size) if labels[x] == labels[y]}
    assert got == naive_congruence(A, pairs)


def test_labels_are_least_members():
    A = V.cyclic(6)
    labels = _labels(A, [(0, 3)], False)
    assert labels.tolist() == [0, 1, 2, 0, 1, 2]


def test_empty_generators_give_the_diagonal():
    A = V.symmetric(3)
    assert _labels(A, np.zeros((0, 2)), False).tolist() == list(range(6))


def test_backend_follows_environment(monkeypatch):
    monkeypatch.setenv("GALOISEXT_NUMBA", "0")
    assert not _kernels._env_wants_numba()
    monkeypatch.setenv("GALOISEXT_NUMBA", "1")
    assert _kernels._env_wants_numba()


def test_module_flag_selects_route(monkeypatch):
    monkeypatch.setattr(_kernels, "USE_NUMBA", False)
    assert _kernels.backend() == "numpy"
    A = V.dihedral(4)
    assert congruence_generated(A, [(0, 2)]).n_blocks == 4
    assert relation_of(congruence_generated(A, [(0, 1)])) == naive_congruence(A, [(0, 1)])
