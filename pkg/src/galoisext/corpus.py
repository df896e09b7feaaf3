"""The predeclared test corpus.

Corpus members are described as data (``data/corpus.json``); a directory
holding a replacement ``corpus.json`` can be supplied through the
``GALOISEXT_CORPUS_DIR`` environment variable.
"""

from __future__ import annotations

import json
import os
import warnings
from functools import lru_cache
from importlib import resources
from pathlib import Path

from . import varieties as V
from .algebra import FiniteAlgebra, Homomorphism, quotient_by_congruence
from .search import congruence_lattice

CORPUS_ENV = "GALOISEXT_CORPUS_DIR"
SELECTORS = ("trivial", "small", "full")

_BUILDERS = {
    "cyclic": V.cyclic,
    "dihedral": V.dihedral,
    "dicyclic": V.dicyclic,
    "symmetric": V.symmetric,
    "integers_mod": V.integers_mod,
    "field4": V.field4,
}


class CorpusWarning(UserWarning):
    pass


def _build(spec) -> FiniteAlgebra:
    head, *args = spec
    if head == "product":
        return V.direct_product(_build(args[0]), _build(args[1]))
    try:
        return _BUILDERS[head](*args)
    except KeyError:
        raise ValueError(f"unknown corpus builder {head!r}") from None


def _load() -> dict:
    override = os.environ.get(CORPUS_ENV)
    if override:
        return json.loads((Path(override) / "corpus.json").read_text())
    return json.loads(resources.files("galoisext").joinpath("data/corpus.json").read_text())


@lru_cache(maxsize=None)
def _cached(kind: str, selector: str, override: str | None) -> tuple[FiniteAlgebra, ...]:
    data = _load()[kind]
    if selector == "trivial":
        entries = data["small"][:1]
    elif selector == "small":
        entries = data["small"]
    elif selector == "full":
        entries = data["small"] + data["full"]
    else:
        raise ValueError(f"unknown corpus {selector!r}; expected one of {SELECTORS}")
    return tuple(_build(e["build"]).renamed(e["name"]) for e in entries)


def groups(selector: str = "small") -> list[FiniteAlgebra]:
    if selector == "full":
        warnings.warn("full corpus includes S4 and order-16 groups; runs are much slower", CorpusWarning,
                      stacklevel=2)
    return list(_cached("groups", selector, os.environ.get(CORPUS_ENV)))


def rings(selector: str = "small") -> list[FiniteAlgebra]:
    return list(_cached("rings", selector, os.environ.get(CORPUS_ENV)))


def build_corpus(selector: str = "small") -> list[FiniteAlgebra]:
    return groups(selector) + rings(selector)


@lru_cache(maxsize=None)
def _quotients(A: FiniteAlgebra) -> tuple[Homomorphism, ...]:
    out = []
    for theta in congruence_lattice(A):
        _, q = quotient_by_congruence(A, theta, name=f"{A.name}/{theta.n_blocks}", check=False)
        out.append(q)
    return tuple(out)


def quotient_maps(A: FiniteAlgebra) -> list[Homomorphism]:
    """One surjection out of ``A`` for every congruence; every surjection is one of these up to isomorphism."""
    return list(_quotients(A))


def surjections(algebras: list[FiniteAlgebra]) -> list[Homomorphism]:
    return [q for A in algebras for q in quotient_maps(A)]
