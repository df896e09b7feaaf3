"""Finite algebras, homomorphisms and congruences, with the finite limits and
colimits the engine is built from (pullbacks, kernel pairs, quotients,
coequalizers).

Elements are the integers ``0..n-1``.  An operation of arity ``k`` is stored
as a flat row-major array of length ``n**k``; nullary operations hold one
entry.  Values are never validated on construction, so that malformed input
can be reported by :func:`validate_algebra` instead of raising.
"""

from __future__ import annotations

import hashlib
import os
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Sequence

import numpy as np

from . import _kernels

INDEX = np.int32

Signature = tuple[tuple[str, int], ...]


class AlgebraError(ValueError):
    pass


class SignatureMismatch(AlgebraError):
    pass


class CompatibilityError(AlgebraError):
    pass


class NotCommuting(AlgebraError):
    pass


class FactorizationError(AlgebraError):
    pass


class SizeGuardError(AlgebraError):
    """A construction would exceed the configured element budget."""


def max_elements() -> int:
    """Largest carrier a product or pullback may materialize (``GALOISEXT_MAX_ELEMENTS``)."""
    return int(os.environ.get("GALOISEXT_MAX_ELEMENTS", "4096"))


@dataclass(frozen=True, eq=False)
class FiniteAlgebra:
    name: str
    size: int
    signature: Signature
    tables: tuple[np.ndarray, ...]
    kind: str = "generic"

    def __post_init__(self) -> None:
        sig = tuple((str(sym), int(k)) for sym, k in self.signature)
        tabs = tuple(np.ascontiguousarray(np.asarray(t).ravel(), dtype=INDEX) for t in self.tables)
        object.__setattr__(self, "signature", sig)
        object.__setattr__(self, "tables", tabs)
        object.__setattr__(self, "size", int(self.size))

    @classmethod
    def from_tables(cls, name: str, size: int, ops: Sequence[tuple[str, int, object]], kind: str = "generic"):
        """Build from ``(symbol, arity, table)`` triples; tables may be nested."""
        return cls(name, size, tuple((s, k) for s, k, _ in ops), tuple(np.asarray(t) for _, _, t in ops), kind)

    def __len__(self) -> int:
        return self.size

    def __repr__(self) -> str:
        return f"FiniteAlgebra({self.name!r}, size={self.size})"

    @cached_property
    def key(self) -> str:
        h = hashlib.sha1()
        h.update(repr((self.size, self.signature)).encode())
        for t in self.tables:
            h.update(t.tobytes())
        return h.hexdigest()

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FiniteAlgebra) and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def op_index(self, symbol: str) -> int:
        for i, (s, _) in enumerate(self.signature):
            if s == symbol:
                return i
        raise KeyError(symbol)

    def table(self, op: int | str) -> np.ndarray:
        i = self.op_index(op) if isinstance(op, str) else op
        k = self.signature[i][1]
        return self.tables[i].reshape((self.size,) * k)

    def renamed(self, name: str, kind: str | None = None) -> "FiniteAlgebra":
        return FiniteAlgebra(name, self.size, self.signature, self.tables, self.kind if kind is None else kind)

    @cached_property
    def _flat(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        arities = np.array([k for _, k in self.signature], dtype=np.int64)
        lengths = [len(t) for t in self.tables]
        offsets = np.concatenate([[0], np.cumsum(lengths)[:-1]]).astype(np.int64) if lengths else np.zeros(0, np.int64)
        flat = np.concatenate(self.tables).astype(np.int64) if lengths else np.zeros(0, np.int64)
        return flat, offsets, arities


def validate_algebra(alg: FiniteAlgebra) -> list[str]:
    """Every violated well-formedness condition; empty iff valid."""
    problems = []
    n = alg.size
    if n < 1:
        problems.append(f"size must be at least 1, got {n}")
    if len(alg.tables) != len(alg.signature):
        problems.append(f"{len(alg.signature)} operations declared but {len(alg.tables)} tables given")
    symbols = [s for s, _ in alg.signature]
    if len(set(symbols)) != len(symbols):
        problems.append("duplicate operation symbols")
    for (sym, k), t in zip(alg.signature, alg.tables):
        if k < 0:
            problems.append(f"operation {sym!r}: negative arity {k}")
            continue
        expected = n ** k
        if len(t) != expected:
            problems.append(f"operation {sym!r}: table length mismatch, expected {expected} entries, got {len(t)}")
        bad = np.nonzero((t < 0) | (t >= n))[0]
        if len(bad):
            problems.append(f"operation {sym!r}: entry out of range at position {int(bad[0])} (value {int(t[bad[0]])})")
    return problems


def terminal(signature: Signature, name: str = "1", kind: str = "generic") -> FiniteAlgebra:
    """The one-element algebra of a signature."""
    return FiniteAlgebra(name, 1, signature, tuple(np.zeros(1, INDEX) for _ in signature), kind)


@dataclass(frozen=True, eq=False)
class Homomorphism:
    source: FiniteAlgebra
    target: FiniteAlgebra
    map: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "map", np.ascontiguousarray(np.asarray(self.map).ravel(), dtype=INDEX))

    def __call__(self, x: int) -> int:
        return int(self.map[x])

    def __repr__(self) -> str:
        return f"Homomorphism({self.source.name} -> {self.target.name}, {self.map.tolist()})"

    @cached_property
    def key(self) -> tuple[str, str, str]:
        return (self.source.key, self.target.key, hashlib.sha1(self.map.tobytes()).hexdigest())

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Homomorphism) and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    @property
    def image(self) -> np.ndarray:
        return np.unique(self.map)

    def is_surjective(self) -> bool:
        return len(self.image) == self.target.size

    def is_injective(self) -> bool:
        return len(self.image) == self.source.size

    def is_bijective(self) -> bool:
        return self.source.size == self.target.size and self.is_surjective()


def identity(A: FiniteAlgebra) -> Homomorphism:
    return Homomorphism(A, A, np.arange(A.size))


def compose(g: Homomorphism, f: Homomorphism) -> Homomorphism:
    """``g after f``."""
    if f.target != g.source:
        raise NotCommuting(f"cannot compose {f.source.name}->{f.target.name} with {g.source.name}->{g.target.name}")
    return Homomorphism(f.source, g.target, g.map[f.map])


def _same_signature(A: FiniteAlgebra, B: FiniteAlgebra) -> None:
    if A.signature != B.signature:
        raise SignatureMismatch(f"{A.name} has signature {A.signature}, {B.name} has {B.signature}")


def homomorphism_violation(f: Homomorphism) -> tuple[str, tuple[int, ...]] | None:
    """First ``(symbol, argument tuple)`` at which ``f`` fails to commute with an operation."""
    A, B = f.source, f.target
    _same_signature(A, B)
    m = f.map.astype(np.int64)
    for i, (sym, k) in enumerate(A.signature):
        ta, tb = A.table(i), B.table(i)
        if k == 0:
            if m[int(ta)] != int(tb):
                return sym, ()
            continue
        lhs = m[ta]
        rhs = tb[np.ix_(*([m] * k))]
        bad = np.argwhere(lhs != rhs)
        if len(bad):
            return sym, tuple(int(x) for x in bad[0])
    return None


def check_homomorphism(f: Homomorphism) -> bool:
    if len(f.map) != f.source.size or (len(f.map) and (f.map.min() < 0 or f.map.max() >= f.target.size)):
        return False
    return homomorphism_violation(f) is None


# ---------------------------------------------------------------------------
# congruences


def _canonical(labels: np.ndarray) -> np.ndarray:
    """Relabel a partition by order of first appearance."""
    labels = np.asarray(labels)
    _, first, inverse = np.unique(labels, return_index=True, return_inverse=True)
    order = np.argsort(np.argsort(first))
    return order[inverse].astype(INDEX)


@dataclass(frozen=True, eq=False)
class Congruence:
    """A partition of the carrier, stored as block ids in first-appearance order."""

    algebra: FiniteAlgebra
    blocks: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "blocks", _canonical(np.asarray(self.blocks).ravel()))

    @classmethod
    def bottom(cls, A: FiniteAlgebra) -> "Congruence":
        return cls(A, np.arange(A.size))

    @classmethod
    def top(cls, A: FiniteAlgebra) -> "Congruence":
        return cls(A, np.zeros(A.size, dtype=INDEX))

    @cached_property
    def key(self) -> tuple[str, bytes]:
        return (self.algebra.key, self.blocks.tobytes())

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Congruence) and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __repr__(self) -> str:
        return f"Congruence({self.algebra.name}, {self.classes()})"

    @property
    def n_blocks(self) -> int:
        return int(self.blocks.max()) + 1 if len(self.blocks) else 0

    def related(self, x: int, y: int) -> bool:
        return bool(self.blocks[x] == self.blocks[y])

    def block_of(self, x: int) -> list[int]:
        return np.nonzero(self.blocks == self.blocks[x])[0].tolist()

    def classes(self) -> list[list[int]]:
        return [np.nonzero(self.blocks == b)[0].tolist() for b in range(self.n_blocks)]

    def matrix(self) -> np.ndarray:
        return self.blocks[:, None] == self.blocks[None, :]

    def pairs(self) -> Iterator[tuple[int, int]]:
        for x, y in np.argwhere(self.matrix()):
            yield int(x), int(y)

    def __le__(self, other: "Congruence") -> bool:
        """Refinement: every pair of ``self`` is a pair of ``other``."""
        _check_same(self, other)
        return bool(np.all(other.matrix()[self.matrix()]))

    def meet(self, other: "Congruence") -> "Congruence":
        _check_same(self, other)
        joint = self.blocks.astype(np.int64) * (other.n_blocks + 1) + other.blocks
        return Congruence(self.algebra, joint)

    def join(self, other: "Congruence") -> "Congruence":
        _check_same(self, other)
        return congruence_generated(self.algebra, list(_star(self)) + list(_star(other)))

    def is_compatible(self) -> bool:
        return compatibility_violation(self) is None


def _check_same(R: Congruence, S: Congruence) -> None:
    if R.algebra != S.algebra:
        raise AlgebraError(f"congruences live on different algebras ({R.algebra.name}, {S.algebra.name})")


def _star(theta: Congruence) -> Iterator[tuple[int, int]]:
    """Edges joining each element to the first member of its block; they generate the partition."""
    first = np.zeros(theta.n_blocks, dtype=np.int64)
    seen = np.zeros(theta.n_blocks, dtype=bool)
    for x, b in enumerate(theta.blocks):
        if not seen[b]:
            seen[b] = True
            first[b] = x
        elif first[b] != x:
            yield int(first[b]), x


def compatibility_violation(theta: Congruence) -> tuple[str, tuple[int, ...]] | None:
    """A witness that ``theta`` is not preserved by some operation, or ``None``."""
    A = theta.algebra
    blocks = theta.blocks.astype(np.int64)
    reps = np.zeros(theta.n_blocks, dtype=np.int64)
    reps[blocks[::-1]] = np.arange(A.size)[::-1]
    for i, (sym, k) in enumerate(A.signature):
        if k == 0:
            continue
        t = A.table(i)
        induced = blocks[t[np.ix_(*([reps] * k))]]
        actual = blocks[t]
        expected = induced[np.ix_(*([blocks] * k))]
        bad = np.argwhere(actual != expected)
        if len(bad):
            return sym, tuple(int(x) for x in bad[0])
    return None


def _closure_inputs(A: FiniteAlgebra):
    flat, offsets, arities = A._flat
    coords = np.arange(A.size, dtype=np.int64)[:, None]
    index = np.arange(A.size, dtype=np.int64)
    return flat, offsets, arities, coords, index


def congruence_generated(A: FiniteAlgebra, pairs: Iterable[tuple[int, int]]) -> Congruence:
    """Least congruence of ``A`` containing ``pairs``."""
    arr = np.array(list(pairs), dtype=np.int64).reshape(-1, 2)
    if len(arr) and (arr.min() < 0 or arr.max() >= A.size):
        raise AlgebraError(f"pair entry out of range for {A.name} (size {A.size})")
    flat, offsets, arities, coords, index = _closure_inputs(A)
    labels = _kernels.close(flat, offsets, arities, A.size, coords, index, arr)
    return Congruence(A, labels)


def equivalence_generated(A: FiniteAlgebra, pairs: Iterable[tuple[int, int]]) -> Congruence:
    """Least equivalence relation (not necessarily compatible) containing ``pairs``."""
    arr = np.array(list(pairs), dtype=np.int64).reshape(-1, 2)
    return Congruence(A, _kernels._components(A.size, arr[:, 0], arr[:, 1]))


def kernel_pair(f: Homomorphism) -> Congruence:
    return Congruence(f.source, f.map)


def quotient_by_congruence(A: FiniteAlgebra, theta: Congruence, name: str | None = None,
                           check: bool = True) -> tuple[FiniteAlgebra, Homomorphism]:
    if theta.algebra != A:
        raise AlgebraError("congruence does not live on this algebra")
    if check:
        bad = compatibility_violation(theta)
        if bad is not None:
            sym, args = bad
            raise CompatibilityError(f"partition is not compatible with {sym!r} at arguments {args}")
    blocks = theta.blocks.astype(np.int64)
    m = theta.n_blocks
    reps = np.zeros(m, dtype=np.int64)
    reps[blocks[::-1]] = np.arange(A.size)[::-1]
    tables = []
    for i, (_, k) in enumerate(A.signature):
        t = A.table(i)
        tables.append(blocks[t] if k == 0 else blocks[t[np.ix_(*([reps] * k))]])
    Q = FiniteAlgebra(name or f"{A.name}/~", m, A.signature, tuple(tables), A.kind)
    return Q, Homomorphism(A, Q, blocks)


# ---------------------------------------------------------------------------
# pullbacks and coequalizers


@dataclass(frozen=True, eq=False)
class Cone:
    """A pullback object with its two projections; iterates as ``(obj, p1, p2)``."""

    obj: object
    p1: object
    p2: object
    parts: tuple = ()

    def __iter__(self):
        return iter((self.obj, self.p1, self.p2))


def subalgebra_of_product(A: FiniteAlgebra, C: FiniteAlgebra, coords: np.ndarray, name: str) -> FiniteAlgebra:
    """Materialize the subuniverse of ``A x C`` listed in ``coords`` (rows ``(a, c)``)."""
    _same_signature(A, C)
    coords = np.asarray(coords, dtype=np.int64).reshape(-1, 2)
    N = len(coords)
    if N > max_elements():
        raise SizeGuardError(f"{name}: {N} elements exceeds the budget of {max_elements()}")
    lookup = np.full((A.size, C.size), -1, dtype=np.int64)
    lookup[coords[:, 0], coords[:, 1]] = np.arange(N)
    a, c = coords[:, 0], coords[:, 1]
    tables = []
    for i, (sym, k) in enumerate(A.signature):
        ta, tc = A.table(i), C.table(i)
        if k == 0:
            t = lookup[int(ta), int(tc)]
        else:
            t = lookup[ta[np.ix_(*([a] * k))], tc[np.ix_(*([c] * k))]]
        if np.any(np.asarray(t) < 0):
            raise AlgebraError(f"{name}: the given pairs are not closed under {sym!r}")
        tables.append(t)
    kind = A.kind if A.kind == C.kind else "generic"
    return FiniteAlgebra(name, N, A.signature, tuple(tables), kind)


def _short(name: str, size: int) -> str:
    return name if len(name) <= 32 else f"P{size}"


def product(A: FiniteAlgebra, C: FiniteAlgebra, name: str | None = None) -> Cone:
    aa, cc = np.meshgrid(np.arange(A.size), np.arange(C.size), indexing="ij")
    coords = np.stack([aa.ravel(), cc.ravel()], axis=1)
    P = subalgebra_of_product(A, C, coords, name or _short(f"{A.name}x{C.name}", len(coords)))
    return Cone(P, Homomorphism(P, A, coords[:, 0]), Homomorphism(P, C, coords[:, 1]))


def pullback(f: Homomorphism, g: Homomorphism, name: str | None = None) -> Cone:
    """``A x_B C`` for ``f: A -> B`` and ``g: C -> B``; elements ordered lexicographically."""
    if f.target != g.target:
        raise AlgebraError(f"pullback needs a common target, got {f.target.name} and {g.target.name}")
    A, C = f.source, g.source
    match = f.map[:, None] == g.map[None, :]
    coords = np.argwhere(match)
    P = subalgebra_of_product(A, C, coords, name or _short(f"{A.name}x_{f.target.name}{C.name}", len(coords)))
    return Cone(P, Homomorphism(P, A, coords[:, 0]), Homomorphism(P, C, coords[:, 1]))


def pullback_pair(cone: Cone, u: Homomorphism, v: Homomorphism) -> Homomorphism:
    """The map ``X -> P`` induced by ``u: X -> A`` and ``v: X -> C``."""
    P, p1, p2 = cone
    if u.source != v.source:
        raise NotCommuting("legs of a cone must share their source")
    lookup = np.full((p1.target.size, p2.target.size), -1, dtype=np.int64)
    lookup[p1.map, p2.map] = np.arange(P.size)
    m = lookup[u.map, v.map]
    if np.any(m < 0):
        x = int(np.nonzero(m < 0)[0][0])
        raise NotCommuting(f"element {x} of {u.source.name} does not land in the pullback")
    return Homomorphism(u.source, P, m)


def coequalizer(u: Homomorphism, v: Homomorphism, name: str | None = None) -> tuple[FiniteAlgebra, Homomorphism]:
    if u.source != v.source or u.target != v.target:
        raise AlgebraError("coequalizer needs a parallel pair")
    C = u.target
    theta = congruence_generated(C, zip(u.map.tolist(), v.map.tolist()))
    return quotient_by_congruence(C, theta, name=name, check=False)


def factor_through(e: Homomorphism, g: Homomorphism) -> Homomorphism:
    """The unique ``h`` with ``h . e = g``, for surjective ``e``."""
    if e.source != g.source:
        raise FactorizationError("maps must share their source")
    if not e.is_surjective():
        raise FactorizationError(f"{e.source.name} -> {e.target.name} is not surjective")
    h = np.zeros(e.target.size, dtype=np.int64)
    h[e.map] = g.map
    bad = np.nonzero(h[e.map] != g.map)[0]
    if len(bad):
        x = int(bad[0])
        raise FactorizationError(
            f"not well defined: element {x} of {e.source.name} is identified by the quotient "
            f"with an element that has a different image")
    return Homomorphism(e.target, g.target, h)


# ---------------------------------------------------------------------------
# relations on one carrier


def relation_compose(R: Congruence, S: Congruence) -> frozenset[tuple[int, int]]:
    """``{(x, z) : x R y and y S z for some y}``."""
    _check_same(R, S)
    prod = (R.matrix().astype(np.int64) @ S.matrix().astype(np.int64)) > 0
    return frozenset((int(x), int(z)) for x, z in np.argwhere(prod))


def are_permutable(R: Congruence, S: Congruence) -> bool:
    return relation_compose(R, S) == relation_compose(S, R)


@dataclass(frozen=True, eq=False)
class RelationSpan:
    """A parallel pair ``total => base``; at level 0 it presents a relation on ``base``."""

    total: object
    base: object
    proj1: object
    proj2: object

    def relation(self) -> frozenset[tuple[int, int]]:
        return frozenset(zip(self.proj1.map.tolist(), self.proj2.map.tolist()))

    def is_equivalence(self) -> bool:
        rel = self.relation()
        n = self.base.size
        if any((x, x) not in rel for x in range(n)):
            return False
        if any((y, x) not in rel for x, y in rel):
            return False
        m = np.zeros((n, n), dtype=np.int64)
        for x, y in rel:
            m[x, y] = 1
        return bool(np.all(((m @ m) > 0) <= (m > 0)))


def kernel_pair_span(f: Homomorphism) -> RelationSpan:
    P, p1, p2 = pullback(f, f, name=f"Eq({f.source.name})")
    return RelationSpan(P, f.source, p1, p2)
