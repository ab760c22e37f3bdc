"""Compare the compiled gather/scatter kernels against the NumPy fallback.

Runs the raw kernels on synthetic arrays, then a full decomposition with
each backend, and checks that both produce bit-identical iterates.

    python benchmarks/bench_kernels.py [--size 250000] [--repeats 200]
"""

import argparse
import time

import numpy as np

from rtd import kernels
from rtd.experiments import make_instance
from rtd.rng import gaussians, random_permutation
from rtd.solver import Problem, decompose


def bench_kernel(fn, args, repeats):
    fn(*args)  # warm up
    t0 = time.perf_counter()
    for _ in range(repeats):
        fn(*args)
    return (time.perf_counter() - t0) / repeats


def run_micro(size, repeats):
    x = gaussians(size, 1)
    s = gaussians(size, 2)
    y = gaussians(size, 3)
    a = gaussians(size, 4)
    a_new = gaussians(size, 5)
    perm = random_permutation(size, 6)
    out = np.empty(size)

    print(f"kernel micro-benchmark, {size} elements, {repeats} repeats")
    rows = []
    for name in kernels.available_backends():
        kernels.set_backend(name)
        t_pull = bench_kernel(
            kernels.pullback_residual, (x, s, y, 0.25, perm, a, out), repeats
        )
        t_scat = bench_kernel(
            kernels.scatter_add_delta, (s, perm, a_new, a), repeats
        )
        rows.append((name, t_pull, t_scat))
        print(f"  {name:7s} pullback {t_pull * 1e6:9.1f} us   scatter {t_scat * 1e6:9.1f} us")
    timing = dict((name, (tp, ts)) for name, tp, ts in rows)
    if "cython" in timing and "python" in timing:
        print(f"  cython speedup: pullback x{timing['python'][0] / timing['cython'][0]:.2f}   "
              f"scatter x{timing['python'][1] / timing['cython'][1]:.2f}")


def run_end_to_end(n, r, N):
    comps, ops, X = make_instance(n, r, N, 9)
    print(f"end-to-end decompose, n={n} r={r} N={N}")
    histories = {}
    for name in kernels.available_backends():
        kernels.set_backend(name)
        t0 = time.perf_counter()
        result = decompose(Problem(X, ops))
        dt = time.perf_counter() - t0
        histories[name] = result.residual_history
        print(f"  {name:7s} {dt:6.2f} s   {result.iterations} iterations")
    values = list(histories.values())
    if len(values) == 2:
        identical = values[0] == values[1]
        print(f"  residual histories bit-identical: {identical}")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--size", type=int, default=250000)
    ap.add_argument("--repeats", type=int, default=200)
    ap.add_argument("--n", type=int, default=100)
    ap.add_argument("--r", type=int, default=4)
    ap.add_argument("--N", type=int, default=3)
    args = ap.parse_args()

    default = kernels.BACKEND
    try:
        run_micro(args.size, args.repeats)
        run_end_to_end(args.n, args.r, args.N)
    finally:
        kernels.set_backend(default)


if __name__ == "__main__":
    main()
