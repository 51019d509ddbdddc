"""Time the numba kernels against the numpy fallback.

    python benchmarks/bench_kernels.py [--attrs 500] [--pairs 5000] [--repeat 5]
"""
import argparse
import time

import numpy as np

from closurelab import _accel
from closurelab.closure import closure_index, materialize_mu
from closurelab.core import FdFunction
from closurelab.covers import nonredundant_cover
from closurelab.fixtures import e1
from closurelab.oracle import large_instance, subset_cover_flags


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def fresh(f):
    # drop cached indexes so every backend pays the same setup cost
    return FdFunction.from_map(f.universe, f.as_map())


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--attrs", type=int, default=500)
    ap.add_argument("--pairs", type=int, default=5000)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    f = large_instance(args.attrs, args.pairs)
    rng = np.random.default_rng(0)
    queries = [sum(1 << int(p) for p in rng.choice(args.attrs, 3, replace=False)) for _ in range(200)]
    mu = materialize_mu(e1())

    backends = ["numba", "numpy"] if _accel.HAVE_NUMBA else ["numpy"]
    rows = []
    for name in backends:
        with _accel.use_backend(name):
            idx = closure_index(f)
            idx.closure(queries[0])  # warm up / compile
            subset_cover_flags(mu)
            rows.append((
                name,
                best_of(lambda: idx.closure(queries[1]), args.repeat),
                best_of(lambda: idx.closure_many(queries), args.repeat),
                best_of(lambda: nonredundant_cover(fresh(f)), args.repeat),
                best_of(lambda: subset_cover_flags(mu), args.repeat),
            ))

    print(f"|U| = {args.attrs}, {len(f)} canonical pairs, best of {args.repeat}")
    print(f"{'backend':<8} {'1 closure':>12} {'200 closures':>14} {'mincover':>12} {'2^9 subsets':>13}")
    for name, one, many, cover, subsets in rows:
        print(f"{name:<8} {one * 1e3:>9.3f} ms {many * 1e3:>11.2f} ms {cover:>10.3f} s {subsets * 1e3:>10.2f} ms")


if __name__ == "__main__":
    main()
