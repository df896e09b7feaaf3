"""Exhaustive searches over small algebras: generated subalgebras,
homomorphism enumeration, isomorphism search and congruence enumeration."""

from __future__ import annotations

import itertools
from typing import Iterator, Sequence

import numpy as np

from .algebra import (
    Congruence,
    FiniteAlgebra,
    Homomorphism,
    compatibility_violation,
    congruence_generated,
)


def _constants(A: FiniteAlgebra) -> list[int]:
    return [int(A.tables[i][0]) for i, (_, k) in enumerate(A.signature) if k == 0]


def _close_partial(A: FiniteAlgebra, B: FiniteAlgebra | None, known: dict[int, int]) -> dict[int, int] | None:
    """Close a partial map ``A -> B`` under the operations.

    With ``B is None`` only the domain is closed (images are ignored).  Returns
    ``None`` when two derivations of one element disagree on its image.
    """
    known = dict(known)
    for i, (_, k) in enumerate(A.signature):
        if k == 0:
            a = int(A.tables[i][0])
            b = int(B.tables[i][0]) if B is not None else 0
            if known.setdefault(a, b) != b:
                return None
    while True:
        dom = np.fromiter(known.keys(), dtype=np.int64)
        img = np.fromiter(known.values(), dtype=np.int64)
        fresh: dict[int, int] = {}
        for i, (_, k) in enumerate(A.signature):
            if k == 0:
                continue
            ra = A.table(i)[np.ix_(*([dom] * k))].ravel()
            rb = B.table(i)[np.ix_(*([img] * k))].ravel() if B is not None else np.zeros_like(ra)
            for a, b in zip(ra.tolist(), rb.tolist()):
                prev = known.get(a, fresh.get(a))
                if prev is None:
                    fresh[a] = b
                elif B is not None and prev != b:
                    return None
        if not fresh:
            return known
        known.update(fresh)


def subalgebra_generated(A: FiniteAlgebra, gens: Sequence[int]) -> np.ndarray:
    closed = _close_partial(A, None, {int(g): 0 for g in gens})
    return np.array(sorted(closed), dtype=np.int64)


def generating_set(A: FiniteAlgebra) -> list[int]:
    """A small generating set, chosen greedily by size of the generated subalgebra."""
    weight = [len(subalgebra_generated(A, [x])) for x in range(A.size)]
    order = sorted(range(A.size), key=lambda x: (-weight[x], x))
    gens: list[int] = []
    covered = set(subalgebra_generated(A, []).tolist())
    for x in order:
        if len(covered) == A.size:
            break
        if x not in covered:
            gens.append(x)
            covered = set(subalgebra_generated(A, gens).tolist())
    return gens


def _plan(A: FiniteAlgebra, gens: Sequence[int]) -> list[tuple[int, int, tuple[int, ...]]]:
    """Steps ``(element, op, args)`` deriving every element from the generators."""
    known = list(dict.fromkeys(int(g) for g in gens))
    seen = set(known)
    steps = []
    for i, (_, k) in enumerate(A.signature):
        if k == 0:
            c = int(A.tables[i][0])
            if c not in seen:
                seen.add(c)
                known.append(c)
                steps.append((c, i, ()))
    grew = True
    while grew and len(seen) < A.size:
        grew = False
        for i, (_, k) in enumerate(A.signature):
            if k == 0:
                continue
            t = A.table(i)
            for args in itertools.product(list(known), repeat=k):
                r = int(t[args])
                if r not in seen:
                    seen.add(r)
                    known.append(r)
                    steps.append((r, i, args))
                    grew = True
    return steps


def _check_many(A: FiniteAlgebra, B: FiniteAlgebra, M: np.ndarray) -> np.ndarray:
    """Which rows of the candidate map matrix ``M`` are homomorphisms."""
    ok = np.ones(len(M), dtype=bool)
    for i, (_, k) in enumerate(A.signature):
        ta, tb = A.table(i), B.table(i)
        if k == 0:
            ok &= M[:, int(ta)] == int(tb)
            continue
        lhs = M[:, ta.ravel()]
        idx = tuple(M[(slice(None),) + (None,) * j + (slice(None),) + (None,) * (k - 1 - j)]
                    for j in range(k))
        rhs = tb[idx].reshape(len(M), -1)
        ok &= np.all(lhs == rhs, axis=1)
    return ok


def homomorphisms(A: FiniteAlgebra, B: FiniteAlgebra, allowed: np.ndarray | None = None,
                  chunk: int = 4096) -> Iterator[Homomorphism]:
    """Every homomorphism ``A -> B``; ``allowed[a, b]`` optionally restricts images."""
    if A.signature != B.signature:
        return
    gens = generating_set(A)
    steps = _plan(A, gens)
    if allowed is None:
        allowed = np.ones((A.size, B.size), dtype=bool)
    choices = [np.nonzero(allowed[g])[0] for g in gens]
    if any(len(c) == 0 for c in choices):
        return
    combos = itertools.product(*choices)
    while True:
        block = list(itertools.islice(combos, chunk))
        if not block:
            return
        cand = np.array(block, dtype=np.int64).reshape(len(block), len(gens))
        M = np.zeros((len(block), A.size), dtype=np.int64)
        M[:, gens] = cand
        for elem, op, args in steps:
            tb = B.table(op)
            M[:, elem] = int(tb) if not args else tb[tuple(M[:, a] for a in args)]
        ok = _check_many(A, B, M) & np.all(allowed[np.arange(A.size), M], axis=1)
        for row in M[ok]:
            yield Homomorphism(A, B, row)


def _signature_vector(A: FiniteAlgebra) -> np.ndarray:
    """An isomorphism invariant per element: size of the subalgebra it generates."""
    return np.array([len(subalgebra_generated(A, [x])) for x in range(A.size)], dtype=np.int64)


def find_isomorphism(A: FiniteAlgebra, B: FiniteAlgebra, colors_a: Sequence[int] | None = None,
                     colors_b: Sequence[int] | None = None) -> Homomorphism | None:
    """An isomorphism ``A -> B`` preserving the optional element colors, or ``None``.

    Backtracks over generator images, closing each partial assignment and
    rejecting it as soon as it stops being injective.
    """
    if A.size != B.size or A.signature != B.signature:
        return None
    inv_a, inv_b = _signature_vector(A), _signature_vector(B)
    if sorted(inv_a.tolist()) != sorted(inv_b.tolist()):
        return None
    ca = np.zeros(A.size, np.int64) if colors_a is None else np.asarray(colors_a, np.int64)
    cb = np.zeros(B.size, np.int64) if colors_b is None else np.asarray(colors_b, np.int64)
    if sorted(zip(inv_a.tolist(), ca.tolist())) != sorted(zip(inv_b.tolist(), cb.tolist())):
        return None
    gens = generating_set(A)

    def injective(m: dict[int, int]) -> bool:
        return len(set(m.values())) == len(m)

    def ok_colors(m: dict[int, int]) -> bool:
        return all(ca[a] == cb[b] and inv_a[a] == inv_b[b] for a, b in m.items())

    def search(depth: int, partial: dict[int, int]) -> dict[int, int] | None:
        if depth == len(gens):
            return partial if len(partial) == A.size else None
        g = gens[depth]
        for b in np.nonzero((inv_b == inv_a[g]) & (cb == ca[g]))[0].tolist():
            trial = dict(partial)
            if trial.setdefault(g, b) != b:
                continue
            closed = _close_partial(A, B, trial)
            if closed is None or not injective(closed) or not ok_colors(closed):
                continue
            found = search(depth + 1, closed)
            if found is not None:
                return found
        return None

    start = _close_partial(A, B, {})
    if start is None or not injective(start) or not ok_colors(start):
        return None
    found = search(0, start)
    if found is None:
        return None
    m = np.zeros(A.size, dtype=np.int64)
    for a, b in found.items():
        m[a] = b
    return Homomorphism(A, B, m)


def is_isomorphic(A: FiniteAlgebra, B: FiniteAlgebra) -> bool:
    return find_isomorphism(A, B) is not None


# ---------------------------------------------------------------------------
# congruences


def set_partitions(n: int) -> Iterator[np.ndarray]:
    """Every partition of ``range(n)`` as a restricted growth string."""
    a = np.zeros(n, dtype=np.int64)

    def rec(i: int, top: int) -> Iterator[np.ndarray]:
        if i >= n:
            yield a.copy()
            return
        for v in range(top + 2):
            a[i] = v
            yield from rec(i + 1, max(top, v))

    if n == 0:
        yield a.copy()
    else:
        yield from rec(1, 0)


def all_congruences(A: FiniteAlgebra) -> list[Congruence]:
    """Every congruence of ``A``, by filtering all partitions (Bell-number cost)."""
    out = []
    for blocks in set_partitions(A.size):
        theta = Congruence(A, blocks)
        if compatibility_violation(theta) is None:
            out.append(theta)
    return out


def principal_congruences(A: FiniteAlgebra) -> list[Congruence]:
    seen: dict[bytes, Congruence] = {}
    for x in range(A.size):
        for y in range(x + 1, A.size):
            theta = congruence_generated(A, [(x, y)])
            seen.setdefault(theta.blocks.tobytes(), theta)
    return list(seen.values())


def congruence_lattice(A: FiniteAlgebra) -> list[Congruence]:
    """Every congruence of ``A``, as joins of principal congruences."""
    bottom = Congruence.bottom(A)
    lattice = {bottom.blocks.tobytes(): bottom}
    principal = principal_congruences(A)
    frontier = list(lattice.values())
    while frontier:
        nxt = []
        for theta in frontier:
            for p in principal:
                j = theta.join(p)
                key = j.blocks.tobytes()
                if key not in lattice:
                    lattice[key] = j
                    nxt.append(j)
        frontier = nxt
    return sorted(lattice.values(), key=lambda t: (t.n_blocks * -1, t.blocks.tolist()))
