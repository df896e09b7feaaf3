"""The commutator of two congruences and the reflectors built from it.

``[R, S]`` is computed on the pair algebra ``A(R)`` (the subalgebra of
``A x A`` on the ``R``-related pairs): generate the congruence ``D`` of
``A(R)`` from the doubled ``S``-pairs ``((a, a), (b, b))`` and keep the pairs
``(x, y)`` of ``R`` with ``((x, y), (y, y))`` in ``D``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .algebra import (
    AlgebraError,
    Congruence,
    FiniteAlgebra,
    Homomorphism,
    SizeGuardError,
    are_permutable,
    congruence_generated,
    quotient_by_congruence,
    relation_compose,
)
from .search import all_congruences

DEFAULT_AUDIT_BOUND = 10


class NonPermutableWarning(UserWarning):
    """The two congruences do not permute, so the bracket is outside the theory's scope."""


@dataclass(frozen=True)
class CommutatorQuery:
    algebra: FiniteAlgebra
    left: Congruence
    right: Congruence

    def __post_init__(self) -> None:
        if self.left.algebra != self.algebra or self.right.algebra != self.algebra:
            raise AlgebraError("both congruences must live on the query's algebra")


def pair_algebra_coords(R: Congruence) -> tuple[np.ndarray, np.ndarray]:
    """Rows ``(x, y)`` of ``A(R)`` and the lookup ``x*n + y -> row`` (``-1`` off ``R``)."""
    n = R.algebra.size
    coords = np.argwhere(R.matrix()).astype(np.int64)
    index = np.full(n * n, -1, dtype=np.int64)
    index[coords[:, 0] * n + coords[:, 1]] = np.arange(len(coords))
    return coords, index


def _delta_congruence(A: FiniteAlgebra, coords: np.ndarray, index: np.ndarray, pairs: np.ndarray) -> np.ndarray:
    """Labels of the congruence of ``A(R)`` generated by ``pairs``."""
    flat, offsets, arities = A._flat
    return _kernels.close(flat, offsets, arities, A.size, coords, index, pairs)


def smith_commutator(query: CommutatorQuery) -> Congruence:
    A, R, S = query.algebra, query.left, query.right
    n = A.size
    if not are_permutable(R, S):
        warnings.warn(f"congruences on {A.name} do not permute; the bracket is flagged", NonPermutableWarning,
                      stacklevel=2)
    coords, index = pair_algebra_coords(R)
    s_pairs = np.argwhere(S.matrix()).astype(np.int64)
    gen = np.stack([index[s_pairs[:, 0] * (n + 1)], index[s_pairs[:, 1] * (n + 1)]], axis=1)
    labels = _delta_congruence(A, coords, index, gen)
    diag_of_y = index[coords[:, 1] * (n + 1)]
    keep = labels == labels[diag_of_y]
    return congruence_generated(A, coords[keep])


def commutator(R: Congruence, S: Congruence) -> Congruence:
    return smith_commutator(CommutatorQuery(R.algebra, R, S))


def abelianization(A: FiniteAlgebra, name: str | None = None) -> tuple[FiniteAlgebra, Homomorphism]:
    """``A / [1_A, 1_A]`` with its quotient map."""
    top = Congruence.top(A)
    theta = commutator(top, top)
    return quotient_by_congruence(A, theta, name=name or f"{A.name}^ab", check=False)


abelianization_reflector = abelianization


def is_abelian_object(A: FiniteAlgebra) -> bool:
    top = Congruence.top(A)
    return commutator(top, top) == Congruence.bottom(A)


def non_permuting_pair(A: FiniteAlgebra, bound: int = DEFAULT_AUDIT_BOUND) -> tuple[Congruence, Congruence] | None:
    """Two congruences of ``A`` that do not permute, or ``None``."""
    if A.size > bound:
        raise SizeGuardError(f"{A.name} has {A.size} elements; congruence enumeration is capped at {bound}")
    congs = all_congruences(A)
    for i, R in enumerate(congs):
        for S in congs[i + 1:]:
            if relation_compose(R, S) != relation_compose(S, R):
                return R, S
    return None


def maltsev_audit(A: FiniteAlgebra, bound: int = DEFAULT_AUDIT_BOUND) -> bool:
    """Whether every pair of congruences of ``A`` permutes."""
    return non_permuting_pair(A, bound) is None
