"""Concrete varieties: finite groups and finite commutative rings.

Groups use the signature ``mul/2, inv/1, e/0`` and rings
``add/2, neg/1, zero/0, mul/2, one/0``.  Besides builders this module holds
the classical group-theoretic computations (center, commutator subgroups)
that serve as independent oracles for the categorical engine; they are
written directly against the multiplication table and share no code with
the congruence machinery.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Sequence

import numpy as np

from .algebra import (
    AlgebraError,
    Congruence,
    FiniteAlgebra,
    Homomorphism,
    congruence_generated,
    product,
    quotient_by_congruence,
)

GROUP_SIGNATURE = (("mul", 2), ("inv", 1), ("e", 0))
RING_SIGNATURE = (("add", 2), ("neg", 1), ("zero", 0), ("mul", 2), ("one", 0))


class NotAGroup(AlgebraError):
    pass


class NotARing(AlgebraError):
    pass


# ---------------------------------------------------------------------------
# groups


def group_from_table(name: str, mul: Sequence[Sequence[int]]) -> FiniteAlgebra:
    """A group from its multiplication table; identity and inverses are derived."""
    mul = np.asarray(mul, dtype=np.int64)
    n = len(mul)
    ids = [e for e in range(n) if np.array_equal(mul[e], np.arange(n)) and np.array_equal(mul[:, e], np.arange(n))]
    if not ids:
        raise NotAGroup(f"{name}: no identity element")
    e = ids[0]
    inv = np.full(n, -1, dtype=np.int64)
    for x in range(n):
        hits = np.nonzero(mul[x] == e)[0]
        if len(hits) == 0:
            raise NotAGroup(f"{name}: element {x} has no inverse")
        inv[x] = hits[0]
    G = FiniteAlgebra(name, n, GROUP_SIGNATURE, (mul, inv, np.array([e])), "group")
    problems = group_axiom_violations(G)
    if problems:
        raise NotAGroup(f"{name}: {problems[0]}")
    return G


def cyclic(k: int, name: str | None = None) -> FiniteAlgebra:
    x = np.arange(k)
    return FiniteAlgebra(name or f"Z{k}", k, GROUP_SIGNATURE,
                         (np.add.outer(x, x) % k, (-x) % k, np.array([0])), "group")


def dihedral(k: int, name: str | None = None) -> FiniteAlgebra:
    """Symmetries of a k-gon, order ``2k``; element ``i + k*j`` is ``r^i s^j``."""
    n = 2 * k
    mul = np.zeros((n, n), dtype=np.int64)
    for x in range(n):
        i, j = x % k, x // k
        for y in range(n):
            a, b = y % k, y // k
            mul[x, y] = (i + (a if j == 0 else -a)) % k + k * ((j + b) % 2)
    return group_from_table(name or f"D{k}", mul)


def dicyclic(m: int, name: str | None = None) -> FiniteAlgebra:
    """Dicyclic group of order ``4m``; element ``i + 2m*j`` is ``a^i x^j``."""
    k = 2 * m
    n = 2 * k
    mul = np.zeros((n, n), dtype=np.int64)
    for x in range(n):
        i, j = x % k, x // k
        for y in range(n):
            p, q = y % k, y // k
            if j == 0:
                mul[x, y] = (i + p) % k + k * q
            elif q == 0:
                mul[x, y] = (i - p) % k + k
            else:
                mul[x, y] = (i - p + m) % k
    return group_from_table(name or f"Dic{m}", mul)


def quaternion(name: str = "Q8") -> FiniteAlgebra:
    return dicyclic(2, name)


def symmetric(k: int, name: str | None = None) -> FiniteAlgebra:
    perms = list(itertools.permutations(range(k)))
    index = {p: i for i, p in enumerate(perms)}
    n = len(perms)
    mul = np.zeros((n, n), dtype=np.int64)
    for x, p in enumerate(perms):
        for y, q in enumerate(perms):
            mul[x, y] = index[tuple(p[q[t]] for t in range(k))]
    return group_from_table(name or f"S{k}", mul)


def direct_product(G: FiniteAlgebra, H: FiniteAlgebra, name: str | None = None) -> FiniteAlgebra:
    """Product with element ``g*|H| + h`` standing for ``(g, h)``."""
    P = product(G, H, name or f"{G.name}x{H.name}").obj
    return P.renamed(P.name, G.kind if G.kind == H.kind else "generic")


def is_group(G: FiniteAlgebra) -> bool:
    return G.signature == GROUP_SIGNATURE and not group_axiom_violations(G)


def group_axiom_violations(G: FiniteAlgebra) -> list[str]:
    if G.signature != GROUP_SIGNATURE:
        return [f"signature {G.signature} is not the group signature"]
    mul = G.table("mul").astype(np.int64)
    inv = G.table("inv").astype(np.int64)
    e = int(G.table("e"))
    x = np.arange(G.size)
    out = []
    bad = np.argwhere(mul[mul[:, :, None], x[None, None, :]] != mul[x[:, None, None], mul[None, :, :]])
    if len(bad):
        out.append(f"associativity fails at {tuple(int(v) for v in bad[0])}")
    if not (np.array_equal(mul[e], x) and np.array_equal(mul[:, e], x)):
        out.append("e is not a two-sided identity")
    if not (np.all(mul[x, inv] == e) and np.all(mul[inv, x] == e)):
        out.append("inv does not give two-sided inverses")
    return out


def _require_group(G: FiniteAlgebra) -> None:
    problems = group_axiom_violations(G)
    if problems:
        raise NotAGroup(f"{G.name}: {problems[0]}")


def center(G: FiniteAlgebra) -> list[int]:
    _require_group(G)
    mul = G.table("mul")
    return [z for z in range(G.size) if np.array_equal(mul[z, :], mul[:, z])]


def kernel(f: Homomorphism) -> list[int]:
    """Preimage of the identity of a group homomorphism's target."""
    e = int(f.target.table("e"))
    return np.nonzero(f.map == e)[0].tolist()


def subgroup_generated(G: FiniteAlgebra, elems: Iterable[int]) -> list[int]:
    mul = G.table("mul")
    inv = G.table("inv")
    sub = {int(G.table("e"))} | {int(x) for x in elems}
    frontier = set(sub)
    while frontier:
        new = set()
        for x in frontier:
            new.add(int(inv[x]))
            for y in list(sub):
                new.add(int(mul[x, y]))
                new.add(int(mul[y, x]))
        frontier = new - sub
        sub |= frontier
    return sorted(sub)


def is_normal_subgroup(G: FiniteAlgebra, K: Iterable[int]) -> bool:
    K = set(int(k) for k in K)
    if sorted(K) != subgroup_generated(G, K):
        return False
    mul, inv = G.table("mul"), G.table("inv")
    return all(int(mul[mul[g, k], inv[g]]) in K for g in range(G.size) for k in K)


def normal_closure(G: FiniteAlgebra, elems: Iterable[int]) -> list[int]:
    mul, inv = G.table("mul"), G.table("inv")
    sub = set(subgroup_generated(G, elems))
    while True:
        conj = {int(mul[mul[g, k], inv[g]]) for g in range(G.size) for k in sub}
        if conj <= sub:
            return sorted(sub)
        sub = set(subgroup_generated(G, sub | conj))


def relative_commutator_subgroup(G: FiniteAlgebra, K: Iterable[int]) -> list[int]:
    """``[K, G]``: normal closure of all ``k^-1 g^-1 k g``, by exhaustive generation."""
    _require_group(G)
    K = sorted(set(int(k) for k in K))
    if not is_normal_subgroup(G, K):
        raise NotAGroup(f"{K} is not a normal subgroup of {G.name}")
    mul, inv = G.table("mul"), G.table("inv")
    comms = {int(mul[mul[inv[k], inv[g]], mul[k, g]]) for k in K for g in range(G.size)}
    return normal_closure(G, comms)


def derived_subgroup(G: FiniteAlgebra) -> list[int]:
    return relative_commutator_subgroup(G, range(G.size))


def coset_congruence(G: FiniteAlgebra, N: Iterable[int]) -> Congruence:
    """The congruence ``x ~ y iff x^-1 y in N`` of a normal subgroup."""
    N = np.array(sorted(set(int(x) for x in N)), dtype=np.int64)
    mul = G.table("mul")
    labels = mul[:, N].min(axis=1)
    return Congruence(G, labels)


def group_central_oracle(f: Homomorphism) -> bool:
    """Kernel contained in the center of the source."""
    _require_group(f.source)
    if not f.is_surjective():
        raise AlgebraError("group_central_oracle expects a surjective homomorphism")
    return set(kernel(f)) <= set(center(f.source))


def group_trivial_oracle(f: Homomorphism) -> bool:
    """The restriction ``[A, A] -> [B, B]`` is a bijection."""
    dA = derived_subgroup(f.source)
    dB = derived_subgroup(f.target)
    image = {int(f.map[x]) for x in dA}
    return image == set(dB) and len(dA) == len(dB)


def group_centralization_oracle(f: Homomorphism) -> tuple[FiniteAlgebra, Homomorphism, Homomorphism]:
    """``A / [Ker f, A] -> B`` with its quotient map, from the classical formula."""
    A = f.source
    N = relative_commutator_subgroup(A, kernel(f))
    Q, q = quotient_by_congruence(A, coset_congruence(A, N), name=f"{A.name}/[K,A]", check=False)
    fbar = np.zeros(Q.size, dtype=np.int64)
    fbar[q.map] = f.map
    return Q, Homomorphism(Q, f.target, fbar), q


def _fast_derived_subgroup(G: FiniteAlgebra) -> np.ndarray:
    """Derived subgroup by array operations; used by the group reflector fast path."""
    mul = G.table("mul").astype(np.int64)
    inv = G.table("inv").astype(np.int64)
    x = np.arange(G.size)
    comms = mul[mul[inv[:, None], inv[None, :]], mul[x[:, None], x[None, :]]]
    member = np.zeros(G.size, dtype=bool)
    member[np.unique(comms)] = True
    while True:
        sub = np.nonzero(member)[0]
        grown = member.copy()
        grown[np.unique(mul[np.ix_(sub, sub)])] = True
        if np.array_equal(grown, member):
            return sub
        member = grown


def group_abelianization(G: FiniteAlgebra, name: str | None = None) -> tuple[FiniteAlgebra, Homomorphism]:
    """``G -> G/[G, G]`` computed from the multiplication table."""
    D = _fast_derived_subgroup(G)
    return quotient_by_congruence(G, coset_congruence(G, D), name=name or f"{G.name}^ab", check=False)


# ---------------------------------------------------------------------------
# commutative rings


def ring(name: str, add, mul, zero: int = 0, one: int = 1) -> FiniteAlgebra:
    add = np.asarray(add, dtype=np.int64)
    mul = np.asarray(mul, dtype=np.int64)
    n = len(add)
    neg = np.array([int(np.nonzero(add[x] == zero)[0][0]) for x in range(n)])
    R = FiniteAlgebra(name, n, RING_SIGNATURE, (add, neg, np.array([zero]), mul, np.array([one])), "ring")
    problems = ring_axiom_violations(R)
    if problems:
        raise NotARing(f"{name}: {problems[0]}")
    return R


def integers_mod(k: int, name: str | None = None) -> FiniteAlgebra:
    x = np.arange(k)
    return ring(name or f"Z/{k}", np.add.outer(x, x) % k, np.multiply.outer(x, x) % k, 0, 1 % k)


def field4(name: str = "F4") -> FiniteAlgebra:
    """Elements are bit patterns of ``c0 + c1*t`` with ``t^2 = t + 1``."""
    add = np.bitwise_xor.outer(np.arange(4), np.arange(4))
    mul = np.zeros((4, 4), dtype=np.int64)
    for x in range(4):
        for y in range(4):
            a0, a1, b0, b1 = x & 1, x >> 1, y & 1, y >> 1
            c0 = (a0 * b0 + a1 * b1) % 2
            c1 = (a0 * b1 + a1 * b0 + a1 * b1) % 2
            mul[x, y] = c0 + 2 * c1
    return ring(name, add, mul, 0, 1)


def ring_product(R: FiniteAlgebra, S: FiniteAlgebra, name: str | None = None) -> FiniteAlgebra:
    return direct_product(R, S, name or f"{R.name}x{S.name}")


def is_ring(R: FiniteAlgebra) -> bool:
    return R.signature == RING_SIGNATURE and not ring_axiom_violations(R)


def ring_axiom_violations(R: FiniteAlgebra) -> list[str]:
    """Axioms of commutative rings with unit, checked exhaustively."""
    if R.signature != RING_SIGNATURE:
        return [f"signature {R.signature} is not the ring signature"]
    add = R.table("add").astype(np.int64)
    neg = R.table("neg").astype(np.int64)
    mul = R.table("mul").astype(np.int64)
    zero, one = int(R.table("zero")), int(R.table("one"))
    x = np.arange(R.size)
    out = []
    for sym, t in (("add", add), ("mul", mul)):
        if np.any(t[t[:, :, None], x[None, None, :]] != t[x[:, None, None], t[None, :, :]]):
            out.append(f"{sym} is not associative")
        if not np.array_equal(t, t.T):
            out.append(f"{sym} is not commutative")
    if not np.array_equal(add[zero], x):
        out.append("zero is not additive identity")
    if not np.array_equal(mul[one], x):
        out.append("one is not multiplicative identity")
    if not np.all(add[x, neg] == zero):
        out.append("neg does not give additive inverses")
    lhs = mul[x[:, None, None], add[None, :, :]]
    rhs = add[mul[:, :, None], mul[:, None, :]]
    if np.any(lhs != rhs):
        out.append("multiplication does not distribute over addition")
    return out


def boolean_reflection(R: FiniteAlgebra, check: bool = True) -> tuple[FiniteAlgebra, Homomorphism]:
    """Quotient by the congruence generated by all ``(a^2, a)``."""
    if check and ring_axiom_violations(R):
        raise NotARing(f"{R.name}: {ring_axiom_violations(R)[0]}")
    mul = R.table("mul")
    x = np.arange(R.size)
    theta = congruence_generated(R, zip(mul[x, x].tolist(), x.tolist()))
    return quotient_by_congruence(R, theta, name=f"{R.name}_bool", check=False)


def is_boolean(R: FiniteAlgebra) -> bool:
    mul = R.table("mul")
    x = np.arange(R.size)
    return bool(np.all(mul[x, x] == x))
