"""Timing comparison of the two kernel backends.

Run as `python -m carlitz.bench [--sizes 64,128,256] [--reps 5] [--q 3]`.
Imports both backend modules directly (bypassing the CARLITZ_BACKEND
dispatch) so one process can time them side by side.  The jitted
backend is warmed up on tiny inputs first so compilation time is not
billed to the measurement.
"""

import argparse
import sys
import time

import numpy as np

from .field import field
from .kernels import numpy_backend

try:
    from .kernels import numba_backend
except ImportError:
    numba_backend = None


def _time(fn, reps: int) -> float:
    best = float("inf")
    for _ in range(reps):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def _tasks(spec, size: int, rng):
    add, mul = spec.add_table, spec.mul_table
    neg, inv = spec.neg_table, spec.inv_table
    M = rng.integers(0, spec.q, size=(size, size)).astype(np.int16)
    A = rng.integers(0, spec.q, size=(size, size)).astype(np.int16)
    v = rng.integers(0, spec.q, size=4 * size).astype(np.int16)
    w = rng.integers(0, spec.q, size=4 * size).astype(np.int16)
    den = np.concatenate([w[:size], np.ones(1, dtype=np.int16)])
    return [
        ("rref", lambda impl: impl.rref(M, add, mul, neg, inv)),
        ("matmul", lambda impl: impl.matmul(M, A, add, mul)),
        ("conv", lambda impl: impl.conv(v, w, add, mul)),
        ("poly_divmod", lambda impl: impl.poly_divmod(v, den, add, mul,
                                                      neg, inv)),
    ]


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="carlitz.bench")
    ap.add_argument("--sizes", default="64,128,256")
    ap.add_argument("--reps", type=int, default=5)
    ap.add_argument("--q", type=int, default=3)
    args = ap.parse_args(argv)
    sizes = [int(s) for s in args.sizes.split(",")]

    spec = field(args.q)
    rng = np.random.default_rng(7)

    impls = [("numpy", numpy_backend)]
    if numba_backend is not None:
        numba_backend_warm(spec)
        impls.append(("numba", numba_backend))
    else:
        print("numba not importable; timing the numpy backend only")

    header = f"{'task':<14}{'size':>6}" + "".join(
        f"{name + ' (ms)':>14}" for name, _ in impls
    )
    if len(impls) == 2:
        header += f"{'speedup':>10}"
    print(header)
    print("-" * len(header))
    for size in sizes:
        for label, fn in _tasks(spec, size, rng):
            times = [_time(lambda impl=impl: fn(impl), args.reps)
                     for _, impl in impls]
            row = f"{label:<14}{size:>6}" + "".join(
                f"{1e3 * tt:>14.3f}" for tt in times
            )
            if len(times) == 2 and times[1] > 0:
                row += f"{times[0] / times[1]:>9.1f}x"
            print(row)
    return 0


def numba_backend_warm(spec):
    """Compile every jitted kernel once before the stopwatch starts."""
    add, mul = spec.add_table, spec.mul_table
    neg, inv = spec.neg_table, spec.inv_table
    m = np.array([[1, 0], [1, 1]], dtype=np.int16)
    v = np.array([1, 1], dtype=np.int16)
    numba_backend.rref(m, add, mul, neg, inv)
    numba_backend.matmul(m, m, add, mul)
    numba_backend.conv(v, v, add, mul)
    numba_backend.poly_divmod(np.array([1, 0, 1], dtype=np.int16), v,
                              add, mul, neg, inv)


if __name__ == "__main__":
    sys.exit(main())
