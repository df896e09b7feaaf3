"""The categories the engine works in.

Level 0 is the category of finite algebras of one signature.  Level ``k+1``
is the category whose objects are the level-``k`` arrows and whose arrows
are commutative squares between them (:class:`ExtSquare`).  Limits and
colimits at level ``k+1`` are computed pointwise from level ``k``, so every
construction written against the :class:`Category` interface runs unchanged
at every level.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Union

import numpy as np

from . import algebra as alg
from .algebra import Cone, FiniteAlgebra, Homomorphism, NotCommuting


@dataclass(frozen=True, eq=False)
class ExtSquare:
    """A commutative square ``bottom . source = target . top``, read as an arrow ``source -> target``.

    With ``source = f': A' -> B'`` and ``target = f: A -> B`` the top edge is
    ``a: A' -> A`` and the bottom edge ``b: B' -> B``.
    """

    source: "Arrow"
    target: "Arrow"
    top: "Arrow"
    bottom: "Arrow"

    @property
    def f_prime(self):
        return self.source

    @property
    def f(self):
        return self.target

    @property
    def a(self):
        return self.top

    @property
    def b(self):
        return self.bottom

    @cached_property
    def key(self) -> tuple:
        return ("sq", self.source.key, self.target.key, self.top.key, self.bottom.key)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, ExtSquare) and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __repr__(self) -> str:
        return f"ExtSquare(level={level_of(self)}, {_label(self.source)} -> {_label(self.target)})"


Arrow = Union[Homomorphism, ExtSquare]
ExtTower = Arrow


def _label(x) -> str:
    if isinstance(x, FiniteAlgebra):
        return x.name
    if isinstance(x, Homomorphism):
        return f"{x.source.name}->{x.target.name}"
    return f"[{_label(x.source)} => {_label(x.target)}]"


def level_of(arrow: Arrow) -> int:
    """Level of the category an arrow lives in (homomorphisms are level 0)."""
    n = 0
    while isinstance(arrow, ExtSquare):
        arrow = arrow.top
        n += 1
    return n


def tower_depth(t: ExtTower) -> int:
    """A homomorphism is a tower of depth 1; a square of depth-k towers has depth k+1."""
    return 1 + level_of(t)


class Category:
    level: int

    def dom(self, f):
        raise NotImplementedError

    def cod(self, f):
        raise NotImplementedError


class AlgebraCategory(Category):
    level = 0

    def __repr__(self) -> str:
        return "AlgebraCategory()"

    def dom(self, f: Homomorphism) -> FiniteAlgebra:
        return f.source

    def cod(self, f: Homomorphism) -> FiniteAlgebra:
        return f.target

    def identity(self, A: FiniteAlgebra) -> Homomorphism:
        return alg.identity(A)

    def compose(self, g: Homomorphism, f: Homomorphism) -> Homomorphism:
        return alg.compose(g, f)

    def equal(self, f: Homomorphism, g: Homomorphism) -> bool:
        return f == g

    def pullback(self, f: Homomorphism, g: Homomorphism) -> Cone:
        return alg.pullback(f, g)

    def pullback_pair(self, cone: Cone, u: Homomorphism, v: Homomorphism) -> Homomorphism:
        return alg.pullback_pair(cone, u, v)

    def coequalizer(self, u: Homomorphism, v: Homomorphism) -> tuple[FiniteAlgebra, Homomorphism]:
        return alg.coequalizer(u, v)

    def factor(self, e: Homomorphism, g: Homomorphism) -> Homomorphism:
        return alg.factor_through(e, g)

    def is_iso(self, f: Homomorphism) -> bool:
        return f.is_bijective()

    def in_class(self, f: Homomorphism) -> bool:
        return f.is_surjective()

    def class_witness(self, f: Homomorphism) -> str | None:
        """Why ``f`` is not surjective, or ``None`` when it is."""
        missing = np.setdiff1d(np.arange(f.target.size), f.map)
        if len(missing):
            return f"element {int(missing[0])} of {f.target.name} is not in the image"
        return None

    def size(self, A: FiniteAlgebra) -> int:
        return A.size


class ExtCategory(Category):
    """Arrows of ``base`` as objects, commutative squares as arrows."""

    def __init__(self, base: Category):
        self.base = base
        self.level = base.level + 1

    def __repr__(self) -> str:
        return f"ExtCategory(level={self.level})"

    def dom(self, sq: ExtSquare):
        return sq.source

    def cod(self, sq: ExtSquare):
        return sq.target

    def identity(self, f) -> ExtSquare:
        B = self.base
        return ExtSquare(f, f, B.identity(B.dom(f)), B.identity(B.cod(f)))

    def compose(self, t: ExtSquare, s: ExtSquare) -> ExtSquare:
        B = self.base
        return ExtSquare(s.source, t.target, B.compose(t.top, s.top), B.compose(t.bottom, s.bottom))

    def equal(self, s: ExtSquare, t: ExtSquare) -> bool:
        return self.base.equal(s.top, t.top) and self.base.equal(s.bottom, t.bottom)

    def commutes(self, sq: ExtSquare) -> bool:
        B = self.base
        return B.equal(B.compose(sq.bottom, sq.source), B.compose(sq.target, sq.top))

    def square(self, source, target, top, bottom) -> ExtSquare:
        """Build a square, refusing one that does not commute."""
        sq = ExtSquare(source, target, top, bottom)
        if not self.commutes(sq):
            raise NotCommuting(f"square {_label(source)} => {_label(target)} does not commute")
        return sq

    def pullback(self, s: ExtSquare, t: ExtSquare) -> Cone:
        B = self.base
        top = B.pullback(s.top, t.top)
        bottom = B.pullback(s.bottom, t.bottom)
        obj = B.pullback_pair(bottom, B.compose(s.source, top.p1), B.compose(t.source, top.p2))
        p1 = ExtSquare(obj, s.source, top.p1, bottom.p1)
        p2 = ExtSquare(obj, t.source, top.p2, bottom.p2)
        return Cone(obj, p1, p2, (top, bottom))

    def pullback_pair(self, cone: Cone, u: ExtSquare, v: ExtSquare) -> ExtSquare:
        B = self.base
        top, bottom = cone.parts
        return ExtSquare(u.source, cone.obj, B.pullback_pair(top, u.top, v.top),
                         B.pullback_pair(bottom, u.bottom, v.bottom))

    def coequalizer(self, u: ExtSquare, v: ExtSquare):
        B = self.base
        _, qa = B.coequalizer(u.top, v.top)
        _, qb = B.coequalizer(u.bottom, v.bottom)
        f = u.target
        fq = B.factor(qa, B.compose(qb, f))
        return fq, ExtSquare(f, fq, qa, qb)

    def factor(self, e: ExtSquare, g: ExtSquare) -> ExtSquare:
        B = self.base
        return ExtSquare(e.target, g.target, B.factor(e.top, g.top), B.factor(e.bottom, g.bottom))

    def is_iso(self, sq: ExtSquare) -> bool:
        return self.base.is_iso(sq.top) and self.base.is_iso(sq.bottom)

    def comparison(self, sq: ExtSquare):
        """The induced arrow ``A' -> A x_B B'`` of a square ``f' => f``."""
        B = self.base
        cone = B.pullback(sq.target, sq.bottom)
        return B.pullback_pair(cone, sq.top, sq.source)

    def in_class(self, sq: ExtSquare) -> bool:
        return self.class_witness(sq) is None

    def class_witness(self, sq: ExtSquare) -> str | None:
        """Why ``sq`` fails the class predicate of this level, or ``None``."""
        B = self.base
        for label, side in (("source", sq.source), ("target", sq.target), ("top", sq.top), ("bottom", sq.bottom)):
            w = B.class_witness(side)
            if w is not None:
                return f"{label} edge: {w}"
        w = B.class_witness(self.comparison(sq))
        if w is not None:
            return f"comparison to the pullback: {w}"
        return None

    def size(self, f) -> int:
        B = self.base
        return B.size(B.dom(f)) + B.size(B.cod(f))


ALGEBRAS = AlgebraCategory()


def category_at(level: int) -> Category:
    C: Category = ALGEBRAS
    for _ in range(level):
        C = ExtCategory(C)
    return C


def category_of(arrow: Arrow) -> Category:
    return category_at(level_of(arrow))


def is_in_E1(sq: ExtSquare) -> bool:
    """Membership of a square of surjections in the class of the next level."""
    C = category_of(sq)
    if not C.commutes(sq):
        raise NotCommuting(f"square {_label(sq.source)} => {_label(sq.target)} does not commute")
    return C.in_class(sq)


def in_extension_class(t: ExtTower) -> bool:
    """Whether a tower lies in the class of its depth (surjective at depth 1)."""
    if isinstance(t, Homomorphism):
        return t.is_surjective()
    return category_of(t).in_class(t) and in_extension_class(t.source) and in_extension_class(t.target)


def validate_tower(t: ExtTower) -> list[str]:
    """Every commutativity or class failure in a tower, outermost first."""
    problems = []
    if isinstance(t, Homomorphism):
        if not alg.check_homomorphism(t):
            problems.append(f"{_label(t)} is not a homomorphism")
        elif not t.is_surjective():
            problems.append(f"{_label(t)} is not surjective")
        return problems
    for name in ("source", "target", "top", "bottom"):
        problems += [f"{name}: {p}" for p in validate_tower(getattr(t, name))]
    if problems:
        return problems
    C = category_of(t)
    if not C.commutes(t):
        problems.append(f"{_label(t)} does not commute")
    else:
        w = C.class_witness(t)
        if w is not None:
            problems.append(w)
    return problems
