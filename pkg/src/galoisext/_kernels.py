"""Congruence closure kernels.

The closure works on a subuniverse of a power ``A^c`` of a base algebra
(``c == 1`` is an ordinary materialized algebra, ``c == 2`` is the pair
algebra ``A(R)`` used by the commutator).  Elements are rows of ``coords``;
``index`` maps the linearized coordinate tuple back to the element number.

Two implementations are kept side by side: a numba ``@njit`` union-find and a
numpy fallback that iterates connected components to a fixpoint.  The numba
path is used when numba imports and ``GALOISEXT_NUMBA`` is not set to a false
value.
"""

from __future__ import annotations

import os

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

try:  # pragma: no cover - exercised implicitly
    import numba
except ImportError:  # pragma: no cover
    numba = None


def _env_wants_numba() -> bool:
    value = os.environ.get("GALOISEXT_NUMBA", "1").strip().lower()
    return value not in ("0", "false", "no", "off")


USE_NUMBA = numba is not None and _env_wants_numba()


def backend() -> str:
    return "numba" if USE_NUMBA else "numpy"


# ---------------------------------------------------------------------------
# numba path

if numba is not None:

    @numba.njit(cache=True)
    def _find(parent, x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    @numba.njit(cache=True)
    def _union(parent, a, b):
        ra = _find(parent, a)
        rb = _find(parent, b)
        if ra == rb:
            return False
        # the root of every class stays its least element
        if ra < rb:
            parent[rb] = ra
        else:
            parent[ra] = rb
        return True

    @numba.njit(cache=True)
    def _close_nb(flat, offsets, arities, n_base, coords, index, pairs):
        N = coords.shape[0]
        c = coords.shape[1]
        parent = np.arange(N)
        qx = np.empty(N, np.int64)
        qy = np.empty(N, np.int64)
        qlen = 0
        for i in range(pairs.shape[0]):
            if _union(parent, pairs[i, 0], pairs[i, 1]):
                qx[qlen] = pairs[i, 0]
                qy[qlen] = pairs[i, 1]
                qlen += 1
        max_k = 0
        for op in range(arities.shape[0]):
            if arities[op] > max_k:
                max_k = arities[op]
        pw = np.ones(max_k + 1, np.int64)
        for j in range(1, max_k + 1):
            pw[j] = pw[j - 1] * n_base
        cw = np.ones(c, np.int64)
        for j in range(c - 2, -1, -1):
            cw[j] = cw[j + 1] * n_base
        base = np.zeros(c, np.int64)
        head = 0
        while head < qlen:
            x = qx[head]
            y = qy[head]
            head += 1
            for op in range(arities.shape[0]):
                k = arities[op]
                if k == 0:
                    continue
                off = offsets[op]
                m = 1
                for _ in range(k - 1):
                    m *= N
                for pos in range(k):
                    stride = pw[k - 1 - pos]
                    for other in range(m):
                        for cc in range(c):
                            base[cc] = 0
                        rem = other
                        for j in range(k - 1, -1, -1):
                            if j == pos:
                                continue
                            e = rem % N
                            rem //= N
                            for cc in range(c):
                                base[cc] += coords[e, cc] * pw[k - 1 - j]
                        lu = 0
                        lv = 0
                        for cc in range(c):
                            lu += flat[off + base[cc] + coords[x, cc] * stride] * cw[cc]
                            lv += flat[off + base[cc] + coords[y, cc] * stride] * cw[cc]
                        u = index[lu]
                        v = index[lv]
                        if _union(parent, u, v):
                            qx[qlen] = u
                            qy[qlen] = v
                            qlen += 1
        labels = np.empty(N, np.int64)
        for i in range(N):
            labels[i] = _find(parent, i)
        return labels


# ---------------------------------------------------------------------------
# numpy fallback


def _components(N: int, us: np.ndarray, vs: np.ndarray) -> np.ndarray:
    """Labels of the equivalence generated by the edges, as least members."""
    if len(us) == 0:
        return np.arange(N, dtype=np.int64)
    graph = coo_matrix((np.ones(len(us), dtype=np.int8), (us, vs)), shape=(N, N))
    _, comp = connected_components(graph, directed=False)
    least = np.full(comp.max() + 1, N, dtype=np.int64)
    np.minimum.at(least, comp, np.arange(N, dtype=np.int64))
    return least[comp]


def _translation_images(table, arity, pos, coords, members, n_base, cw, index):
    """Images of ``members`` under every translation fixing slot ``pos``.

    Result has shape ``(len(members), N ** (arity - 1))``.
    """
    N, c = coords.shape
    others = arity - 1
    grids = np.indices((N,) * others).reshape(others, -1) if others else np.zeros((0, 1), np.int64)
    lin = np.zeros((len(members), grids.shape[1]), dtype=np.int64)
    for cc in range(c):
        args = []
        slot = 0
        for j in range(arity):
            if j == pos:
                args.append(coords[members, cc][:, None])
            else:
                args.append(coords[grids[slot], cc][None, :])
                slot += 1
        lin += table[tuple(args)].astype(np.int64) * cw[cc]
    return index[lin]


def _close_np(flat, offsets, arities, n_base, coords, index, pairs):
    N, c = coords.shape
    cw = np.array([n_base ** (c - 1 - j) for j in range(c)], dtype=np.int64)
    tables = []
    for op, k in enumerate(arities):
        if k == 0:
            continue
        chunk = flat[offsets[op]: offsets[op] + n_base ** int(k)]
        tables.append((chunk.reshape((n_base,) * int(k)), int(k)))
    labels = _components(N, pairs[:, 0], pairs[:, 1]) if len(pairs) else np.arange(N, dtype=np.int64)
    while True:
        xs = np.nonzero(labels != np.arange(N))[0]
        if len(xs) == 0:
            return labels
        ys = labels[xs]
        us = [xs]
        vs = [ys]
        for table, k in tables:
            for pos in range(k):
                us.append(_translation_images(table, k, pos, coords, xs, n_base, cw, index).ravel())
                vs.append(_translation_images(table, k, pos, coords, ys, n_base, cw, index).ravel())
        fresh = _components(N, np.concatenate(us), np.concatenate(vs))
        if np.array_equal(fresh, labels):
            return labels
        labels = fresh


# ---------------------------------------------------------------------------
# dispatch


def close(flat, offsets, arities, n_base, coords, index, pairs, *, use_numba: bool | None = None) -> np.ndarray:
    """Least congruence containing ``pairs``; returns least-member labels."""
    flat = np.ascontiguousarray(flat, dtype=np.int64)
    offsets = np.ascontiguousarray(offsets, dtype=np.int64)
    arities = np.ascontiguousarray(arities, dtype=np.int64)
    coords = np.ascontiguousarray(coords, dtype=np.int64)
    index = np.ascontiguousarray(index, dtype=np.int64)
    pairs = np.ascontiguousarray(np.asarray(pairs, dtype=np.int64).reshape(-1, 2))
    if use_numba is None:
        use_numba = USE_NUMBA
    if use_numba:
        if numba is None:
            raise RuntimeError("numba is not installed")
        return _close_nb(flat, offsets, arities, int(n_base), coords, index, pairs)
    return _close_np(flat, offsets, arities, int(n_base), coords, index, pairs)
