"""Deliberate engine faults, used to show the property suite can catch them."""

from __future__ import annotations

from contextlib import contextmanager
from typing import Iterator
from unittest import mock

from . import _kernels, commutator, galois


def _delta_without_closure(A, coords, index, pairs):
    # equivalence closure only: the generated relation is never closed under the operations
    return _kernels._components(len(coords), pairs[:, 0], pairs[:, 1])


def _wrong_projection(C, cone, f, eta_a):
    return cone.p2


def _no_coequalizer(C, tau1, tau2):
    P0 = C.cod(tau1)
    return C.identity(P0), C.identity(P0)


FAULTS = {
    "commutator-no-closure": (commutator, "_delta_congruence", _delta_without_closure,
                              "commutator generates only an equivalence relation, skipping congruence closure"),
    "trivial-wrong-projection": (galois, "_trivial_comparison", _wrong_projection,
                                 "trivial-covering test inspects a pullback projection instead of the comparison"),
    "centralize-no-coequalizer": (galois, "_descend", _no_coequalizer,
                                  "centralization skips the quotient of the induced relation"),
}


@contextmanager
def inject(name: str) -> Iterator[None]:
    """Patch one named fault into the engine for the duration of the block."""
    try:
        module, attr, replacement, _ = FAULTS[name]
    except KeyError:
        raise ValueError(f"unknown fault {name!r}; known: {', '.join(sorted(FAULTS))}") from None
    with mock.patch.object(module, attr, replacement):
        yield
