"""Time the congruence-closure kernel on both routes.

Usage: python3 benchmarks/bench_kernels.py [--repeat N]

Workloads are Smith-commutator closures on pair algebras (the hot loop
behind commutators) and plain congruence generation on groups.
"""

import argparse
import time

import numpy as np

from galoisext import _kernels
from galoisext import varieties as V
from galoisext.algebra import Congruence, _closure_inputs
from galoisext.commutator import pair_algebra_coords


def pair_workload(G):
    top = Congruence.top(G)
    coords, index = pair_algebra_coords(top)
    n = G.size
    diag = index[np.arange(n) * (n + 1)]
    pairs = np.stack([np.full(n, diag[0]), diag], axis=1)
    flat, offsets, arities = G._flat
    return flat, offsets, arities, n, coords, index, pairs


def group_workload(G):
    flat, offsets, arities, coords, index = _closure_inputs(G)
    return flat, offsets, arities, G.size, coords, index, np.array([[0, 1]])


def timed(args, use_numba, repeat):
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        labels = _kernels.close(*args, use_numba=use_numba)
        best = min(best, time.perf_counter() - t)
    return best, labels


def main() -> None:
    p = argparse.ArgumentParser()
    p.add_argument("--repeat", type=int, default=3)
    opts = p.parse_args()
    cases = [
        ("pair algebra of S3", pair_workload(V.symmetric(3))),
        ("pair algebra of D4", pair_workload(V.dihedral(4))),
        ("pair algebra of Z2xD4", pair_workload(V.direct_product(V.cyclic(2), V.dihedral(4)))),
        ("congruence of S4", group_workload(V.symmetric(4))),
    ]
    if _kernels.numba is not None:
        timed(cases[0][1], True, 1)  # compile outside the timing
    print(f"{'workload':28s} {'elements':>9s} {'numpy s':>10s} {'numba s':>10s} {'speedup':>8s}")
    for label, args in cases:
        t_np, l_np = timed(args, False, opts.repeat)
        if _kernels.numba is None:
            print(f"{label:28s} {len(args[4]):9d} {t_np:10.4f} {'n/a':>10s} {'n/a':>8s}")
            continue
        t_nb, l_nb = timed(args, True, opts.repeat)
        assert np.array_equal(l_np, l_nb), label
        print(f"{label:28s} {len(args[4]):9d} {t_np:10.4f} {t_nb:10.4f} {t_np / t_nb:8.1f}")


if __name__ == "__main__":
    main()
