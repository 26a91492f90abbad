"""Compare the numba kernels against the pure-numpy fallback.

Run: python3 benchmarks/bench_backends.py [--n 2000] [--oracle-n 18] [--repeats 3]
"""
import argparse
import time

import numpy as np

from lcluster import _backend, kernels
from lcluster.harness import PlantedHypergraphSpec, generate_planted
from lcluster.hyper_core import build_hyper_transition, build_incidence, hyper_transition_csr
from lcluster.markov import make_psi
from lcluster.oracle import flow_matrix
from lcluster.sweep import sweep_order


def best_of(fn, repeats):
    fn()  # warm-up (and JIT compile)
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def cases(n, oracle_n):
    spec = PlantedHypergraphSpec(clusters=max(2, n // 100), cluster_size=100, edges_within=95, edges_across=n // 20,
                                 arity=5, omega_range=(1, 3), gamma_range=(0.5, 2), rng_seed=0)
    h = generate_planted(spec)
    inc = build_incidence(h)
    ts = build_hyper_transition(h)
    s = make_psi(ts, range(5)).s
    p, _, _ = kernels.fixed_point(*ts.csr, s, 0.01, 0.5, s, 1e-12, 200_000)
    order = sweep_order(ts, p)

    small = build_hyper_transition(generate_planted(PlantedHypergraphSpec(
        clusters=3, cluster_size=oracle_n // 3, edges_within=oracle_n, edges_across=3, arity=3, rng_seed=1)))
    F = flow_matrix(small)
    free = np.arange(small.n)

    return {
        f"hyper_transition (m={h.m})": lambda: hyper_transition_csr(h, inc),
        f"lazy PPR alpha=0.01 (n={ts.n})": lambda: kernels.fixed_point(*ts.csr, s, 0.01, 0.5, s, 1e-12, 200_000),
        f"full sweep ({order.size} prefixes)": lambda: kernels.sweep(order, ts.phi, *ts.csr, *ts.csc),
        f"oracle (n={small.n}, 2^{small.n} sets)": lambda: kernels.optimal_subset(F, small.phi, free, 0, small.n),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=2000)
    ap.add_argument("--oracle-n", type=int, default=18)
    ap.add_argument("--repeats", type=int, default=3)
    args = ap.parse_args()

    if not _backend.HAVE_NUMBA:
        raise SystemExit("numba is not installed; nothing to compare")
    work = cases(args.n, args.oracle_n)
    print(f"{'kernel':40s} {'numba ms':>10s} {'numpy ms':>10s} {'speedup':>8s}")
    for name, fn in work.items():
        row = {}
        for b in ("numba", "numpy"):
            with _backend.use_backend(b):
                row[b] = best_of(fn, args.repeats) * 1e3
        print(f"{name:40s} {row['numba']:10.2f} {row['numpy']:10.2f} {row['numpy'] / row['numba']:7.1f}x")


if __name__ == "__main__":
    main()
