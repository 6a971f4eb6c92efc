"""Compare the numba and numpy backends of the modular kernels.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Workloads come from a real orbit (Jacobian of the restricted generators of
the zero orbit in sp8) plus a random dense matrix for the rank kernel.
"""

import argparse
import time

import numpy as np

from goodslice import kernels
from goodslice.criterion import PRIMES, _pack, jacobian
from goodslice.invariants import fundamental_invariants
from goodslice.lie import ClassicalType, build_classical
from goodslice.nilpotent import Partition, standard_triple
from goodslice.slodowy import restrict_all, slice_chart


def best_of(fn, repeat):
    fn()  # warm up (and JIT compile)
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--size", type=int, default=200, help="dense rank matrix size")
    args = ap.parse_args()
    p = PRIMES[0]

    L = build_classical(ClassicalType("C", 4))
    T = standard_triple(L, Partition.parse("1,1,1,1,1,1,1,1"))
    chart = slice_chart(L, T)
    rs = restrict_all(fundamental_invariants(L), chart)
    entries = [d for row in jacobian([r.initial for r in rs]) for d in row]
    exps, coeffs, offsets = _pack(entries, p)
    rng = np.random.default_rng(0)
    point = rng.integers(1, p, size=chart.r, dtype=np.int64)
    dense = rng.integers(0, p, size=(args.size, args.size), dtype=np.int64)

    rows = []
    for name, call in (
        ("eval_mod_p", lambda b: kernels.eval_mod_p(exps, coeffs, offsets, point, p, backend=b)),
        ("rank_mod_p", lambda b: kernels.rank_mod_p(dense, p, backend=b)),
    ):
        ref = call("numpy")
        if kernels.BACKEND == "numba":
            assert np.array_equal(np.asarray(call("numba")), np.asarray(ref)), name
            t_nb = best_of(lambda: call("numba"), args.repeat)
        else:
            t_nb = float("nan")
        t_np = best_of(lambda: call("numpy"), args.repeat)
        rows.append((name, t_np, t_nb))

    print(f"backend available: {kernels.BACKEND}; {len(coeffs)} terms, {len(entries)} polynomials, "
          f"{args.size}x{args.size} rank matrix")
    print(f"{'kernel':<12} {'numpy (s)':>11} {'numba (s)':>11} {'speedup':>8}")
    for name, t_np, t_nb in rows:
        print(f"{name:<12} {t_np:11.5f} {t_nb:11.5f} {t_np / t_nb:8.1f}x")


if __name__ == "__main__":
    main()
