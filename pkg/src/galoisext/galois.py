"""Galois structures, trivial coverings, coverings and centralization.

A :class:`GaloisStructure` is a reflector on one of the categories of
:mod:`galoisext.category`, given by its unit.  :func:`centralize` builds the
reflection of an extension into coverings out of that unit alone, and
:func:`lift_structure` packages it as a structure one level up, so the
tower of structures is obtained by iterating it.
"""

from __future__ import annotations

import threading
import warnings
from dataclasses import dataclass, field
from typing import Callable, Iterable

from . import commutator as comm
from . import varieties as V
from .algebra import (
    AlgebraError,
    Cone,
    Congruence,
    FiniteAlgebra,
    Homomorphism,
    RelationSpan,
    kernel_pair,
    quotient_by_congruence,
)
from .category import (
    ALGEBRAS,
    Arrow,
    Category,
    ExtCategory,
    ExtSquare,
    ExtTower,
    category_at,
    category_of,
    level_of,
    tower_depth,
    validate_tower,
)
from .search import find_isomorphism

DEFAULT_MAX_DEPTH = 3


class NotInClass(AlgebraError):
    pass


class StructureError(AlgebraError):
    pass


class UntrustedStructureWarning(UserWarning):
    pass


Unit = Callable[[object], Arrow]


@dataclass(eq=False)
class GaloisStructure:
    """A reflector on ``category`` determined by its unit ``A -> HI(A)``.

    Units are memoized by object content.  The cache is the only mutable
    state and only ever gains entries that are pure functions of their key.
    """

    name: str
    category: Category
    unit_fn: Unit
    level: int = 0
    membership: Callable[[object], bool] | None = None
    trusted: bool = True
    _cache: dict = field(default_factory=dict, repr=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    def unit(self, obj) -> Arrow:
        key = obj.key
        with self._lock:
            hit = self._cache.get(key)
        if hit is None:
            hit = self.unit_fn(obj)
            with self._lock:
                self._cache.setdefault(key, hit)
        return hit

    def reflect_object(self, obj):
        eta = self.unit(obj)
        return self.category.cod(eta), eta

    def reflect_arrow(self, f: Arrow) -> Arrow:
        """``HI(f)``: the unique arrow with ``HI(f) . eta_A = eta_B . f``."""
        C = self.category
        return C.factor(self.unit(C.dom(f)), C.compose(self.unit(C.cod(f)), f))

    def in_subcategory(self, obj) -> bool:
        if self.membership is not None:
            return self.membership(obj)
        return self.category.is_iso(self.unit(obj))


# ---------------------------------------------------------------------------
# ground structures


def abelianization_structure(fast_groups: bool = True) -> GaloisStructure:
    """Abelian objects in the ambient variety; groups use the table-based reflector."""

    def unit(A: FiniteAlgebra) -> Homomorphism:
        if fast_groups and A.kind == "group":
            return V.group_abelianization(A)[1]
        return comm.abelianization(A)[1]

    return GaloisStructure("ab", ALGEBRAS, unit)


def commutator_abelianization_structure() -> GaloisStructure:
    """Abelianization through the congruence commutator for every algebra."""
    return GaloisStructure("ab-commutator", ALGEBRAS, lambda A: comm.abelianization(A)[1])


def boolean_structure() -> GaloisStructure:
    return GaloisStructure("boolean", ALGEBRAS, lambda R: V.boolean_reflection(R, check=False)[1])


def identity_structure(level: int = 0) -> GaloisStructure:
    C = category_at(level)
    return GaloisStructure("identity", C, lambda X: C.identity(X), level=level)


# ---------------------------------------------------------------------------
# trivial coverings and coverings


def _require_class(C: Category, f) -> None:
    w = C.class_witness(f)
    if w is not None:
        raise NotInClass(f"not an extension: {w}")


def apply_reflector(G: GaloisStructure, f: Arrow) -> ExtSquare:
    """The naturality square ``f => HI(f)`` with the two units as horizontal edges."""
    C = G.category
    _require_class(C, f)
    return ExtSquare(f, G.reflect_arrow(f), G.unit(C.dom(f)), G.unit(C.cod(f)))


def _trivial_comparison(C: Category, cone: Cone, f: Arrow, eta_a: Arrow) -> Arrow:
    """The induced arrow ``A -> B x_{HI(B)} HI(A)``."""
    return C.pullback_pair(cone, f, eta_a)


def trivial_covering_comparison(G: GaloisStructure, f: Arrow) -> Arrow:
    C = G.category
    _require_class(C, f)
    eta_b = G.unit(C.cod(f))
    cone = C.pullback(eta_b, G.reflect_arrow(f))
    return _trivial_comparison(C, cone, f, G.unit(C.dom(f)))


def is_trivial_covering(G: GaloisStructure, f: Arrow) -> bool:
    return G.category.is_iso(trivial_covering_comparison(G, f))


def is_covering(G: GaloisStructure, f: Arrow) -> bool:
    """Whether the first kernel-pair projection of ``f`` is a trivial covering."""
    C = G.category
    _require_class(C, f)
    eq = C.pullback(f, f)
    return is_trivial_covering(G, eq.p1)


def is_normal_extension(G: GaloisStructure, f: Arrow) -> bool:
    return is_covering(G, f)


# ---------------------------------------------------------------------------
# discrete fibrations


@dataclass(frozen=True, eq=False)
class DiscreteFibrationDatum:
    """Spans ``S => C`` (upstairs) and ``R => E`` (downstairs) with ``h: S -> R``, ``g: C -> E``."""

    upstairs: RelationSpan
    downstairs: RelationSpan
    h: Arrow
    g: Arrow


def is_discrete_fibration(d: DiscreteFibrationDatum) -> bool:
    """Whether the square of second projections is a pullback."""
    C = category_of(d.g)
    up, down = d.upstairs, d.downstairs
    for i, (pu, pd) in enumerate(((up.proj1, down.proj1), (up.proj2, down.proj2)), start=1):
        if not C.equal(C.compose(d.g, pu), C.compose(pd, d.h)):
            raise AlgebraError(f"projection {i} square does not commute")
    cone = C.pullback(d.g, down.proj2)
    return C.is_iso(C.pullback_pair(cone, up.proj2, d.h))


# ---------------------------------------------------------------------------
# centralization


@dataclass(frozen=True, eq=False)
class Centralization:
    """Every stage of the centralization of ``f: A -> B``.

    ``fbar: Abar -> B`` is the reflection, ``unit: A -> Abar`` its unit.
    """

    f: Arrow
    fbar: Arrow
    unit: Arrow
    kernel_pair: Cone
    triple: Cone
    h: Arrow
    p0: Cone
    p1: Cone
    span: tuple[Arrow, Arrow]
    quotient: Arrow
    comparison: Arrow
    diagonal: Arrow


def _descend(C: Category, tau1: Arrow, tau2: Arrow):
    """Quotient of ``P0`` by the relation presented by the span."""
    return C.coequalizer(tau1, tau2)


def centralization_stages(G: GaloisStructure, f: Arrow, check_fibration: bool = True) -> Centralization:
    C = G.category
    _require_class(C, f)
    A = C.dom(f)
    eq = C.pullback(f, f)
    E, pi1, pi2 = eq
    tri = C.pullback(pi2, pi2)
    S, s1, s2 = tri
    h = C.pullback_pair(eq, C.compose(pi1, s1), C.compose(pi1, s2))

    eta_a = G.unit(A)
    eta_e = G.unit(E)
    p0 = C.pullback(eta_a, G.reflect_arrow(pi1))
    p1 = C.pullback(eta_e, G.reflect_arrow(h))
    tau = tuple(
        C.pullback_pair(p0, C.compose(pi, p1.p1), C.compose(G.reflect_arrow(s), p1.p2))
        for pi, s in ((pi1, s1), (pi2, s2))
    )
    if check_fibration:
        datum = DiscreteFibrationDatum(RelationSpan(p1.obj, p0.obj, tau[0], tau[1]),
                                       RelationSpan(E, A, pi1, pi2), p1.p1, p0.p1)
        if not is_discrete_fibration(datum):
            raise StructureError(
                f"the span built for {G.name} is not a discrete fibration over the kernel pair; "
                f"the reflector does not satisfy the required conditions")
    fbar_obj, p = _descend(C, tau[0], tau[1])
    fbar = C.factor(p, C.compose(f, p0.p1))
    q = C.pullback_pair(p0, pi1, eta_e)
    delta = C.pullback_pair(eq, C.identity(A), C.identity(A))
    unit = C.compose(p, C.compose(q, delta))
    return Centralization(f, fbar, unit, eq, tri, h, p0, p1, tau, p, q, delta)


def centralize(G: GaloisStructure, f: Arrow) -> tuple[Arrow, Arrow]:
    """``(fbar, unit)`` with ``fbar . unit = f``."""
    st = centralization_stages(G, f)
    return st.fbar, st.unit


def centralize_via_commutator(G: GaloisStructure | None, f: Homomorphism) -> tuple[Homomorphism, Homomorphism]:
    """``A / [Eq(f), 1_A] -> B`` with its quotient map, for algebras in a permutable variety."""
    if not f.is_surjective():
        raise NotInClass(f"{f.source.name} -> {f.target.name} is not surjective")
    A = f.source
    theta = comm.commutator(kernel_pair(f), Congruence.top(A))
    Q, q = quotient_by_congruence(A, theta, name=f"{A.name}/[Eq,1]", check=False)
    return ALGEBRAS.factor(q, f), q


def isomorphic_over_base(f: Homomorphism, g: Homomorphism) -> Homomorphism | None:
    """An isomorphism ``dom f -> dom g`` commuting with the maps to the shared base."""
    if f.target != g.target:
        return None
    return find_isomorphism(f.source, g.source, f.map, g.map)


# ---------------------------------------------------------------------------
# the tower of structures


def spot_check(G: GaloisStructure, samples: Iterable[Arrow]) -> list[str]:
    """Problems found with a reflector on a sample of extensions."""
    C = G.category
    problems = []
    for f in samples:
        for obj in (C.dom(f), C.cod(f)):
            eta = G.unit(obj)
            w = C.class_witness(eta)
            if w is not None:
                problems.append(f"unit is not an extension: {w}")
                continue
            if not C.is_iso(G.unit(C.cod(eta))):
                problems.append("reflecting a reflection does not give an isomorphism")
        try:
            sq = apply_reflector(G, f)
        except AlgebraError as exc:
            problems.append(f"unit is not natural: {exc}")
            continue
        w = ExtCategory(C).class_witness(sq)
        if w is not None:
            problems.append(f"naturality square fails the square class: {w}")
    return problems


def lift_structure(G: GaloisStructure, centralizer: Callable[[Arrow], tuple[Arrow, Arrow]] | None = None,
                   samples: Iterable[Arrow] = ()) -> GaloisStructure:
    """The structure one level up: extensions reflected into coverings.

    ``centralizer`` replaces the default reflection (:func:`centralize`);
    untrusted structures are spot-checked on ``samples`` first.
    """
    if not G.trusted:
        warnings.warn(f"structure {G.name!r} is user supplied; spot-checking before lifting",
                      UntrustedStructureWarning, stacklevel=2)
        problems = spot_check(G, samples)
        if problems:
            raise StructureError(f"structure {G.name!r} failed spot checks: {problems[0]}")
    C1 = ExtCategory(G.category)
    reflect = centralizer or (lambda f: centralize(G, f))

    def unit(f):
        fbar, eta = reflect(f)
        return ExtSquare(f, fbar, eta, G.category.identity(G.category.cod(f)))

    suffix = "" if centralizer is None else "*"
    return GaloisStructure(f"{G.name}^{G.level + 1}{suffix}", C1, unit, level=G.level + 1,
                           membership=lambda f: is_covering(G, f), trusted=G.trusted)


def lift_to(G: GaloisStructure, level: int, max_depth: int = DEFAULT_MAX_DEPTH) -> GaloisStructure:
    if level > max_depth:
        raise StructureError(f"tower depth {level} exceeds the configured cap {max_depth}")
    while G.level < level:
        G = lift_structure(G)
    return G


def is_n_fold_central(G: GaloisStructure, t: ExtTower, n: int, max_depth: int = DEFAULT_MAX_DEPTH) -> bool:
    """Whether a depth-``n`` tower is a covering for the structure ``n - 1`` levels up."""
    if tower_depth(t) != n:
        raise NotInClass(f"tower has depth {tower_depth(t)}, expected {n}")
    problems = validate_tower(t)
    if problems:
        raise NotInClass(problems[0])
    return is_covering(lift_to(G, n - 1 + G.level, max_depth + G.level), t)


def is_double_central(G: GaloisStructure, sq: ExtSquare) -> bool:
    return is_n_fold_central(G, sq, 2)


__all__ = [
    "GaloisStructure",
    "DiscreteFibrationDatum",
    "Centralization",
    "abelianization_structure",
    "commutator_abelianization_structure",
    "boolean_structure",
    "identity_structure",
    "apply_reflector",
    "is_trivial_covering",
    "is_covering",
    "is_normal_extension",
    "is_discrete_fibration",
    "centralize",
    "centralization_stages",
    "centralize_via_commutator",
    "isomorphic_over_base",
    "lift_structure",
    "lift_to",
    "is_n_fold_central",
    "is_double_central",
    "spot_check",
    "trivial_covering_comparison",
    "level_of",
    "NotInClass",
    "StructureError",
]
