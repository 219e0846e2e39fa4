"""Compare the compiled and numpy kernel backends.

    python3 benchmarks/bench_kernels.py [--qubits 12 16 20] [--repeat 5]

Reports the best wall time of each kernel per backend, the python/cython time
ratio, and whether both backends produced the same output.
"""
import argparse
import timeit

import numpy as np

from maxcut_q2 import kernels
from maxcut_q2.graph import erdos_renyi


def cases(n, rng):
    """Kernel name -> f(backend) returning the kernel's output array."""
    g = erdos_renyi(n, 0.3, weighted=True, seed=n)
    src, dst, w = g.arrays
    psi = rng.standard_normal(1 << n) + 1j * rng.standard_normal(1 << n)
    psi /= np.linalg.norm(psi)
    cost = rng.uniform(0, g.total_weight, 1 << n)
    big = erdos_renyi(400 * n, 0.05, weighted=True, seed=n)
    indptr, indices, weights = big.csr
    start = rng.choice(np.array([-1, 1], dtype=np.int8), big.num_nodes)

    def phase(k):
        v = psi.copy()
        k.apply_phase(v, cost, 0.37)
        return v

    def mixer(k):
        v = psi.copy()
        k.apply_mixer(v, n, 0.21)
        return v

    def local_search(k):
        s = start.copy()
        k.one_exchange(indptr, indices, weights, s, 1e-12)
        return s

    return {
        "cost_diagonal": lambda k: k.cost_diagonal(n, src, dst, w),
        "apply_phase": phase,
        "apply_mixer": mixer,
        "one_exchange": local_search,
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--qubits", type=int, nargs="+", default=[12, 16, 20])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    names = kernels.available_backends()
    backends = [kernels.get_backend(b) for b in names]
    print(f"backends: {', '.join(names)} (active: {kernels.BACKEND})")
    if "cython" not in names:
        print("compiled extension not built; timing the fallback only")
    rng = np.random.default_rng(0)
    print(f"{'kernel':<14} {'n':>3} " + " ".join(f"{b + ' ms':>11}" for b in names) + "   py/cy  match")
    for n in args.qubits:
        for kname, fn in cases(n, rng).items():
            times = {b: min(timeit.repeat(lambda: fn(k), number=1, repeat=args.repeat)) * 1e3
                     for b, k in zip(names, backends)}
            outs = [fn(k) for k in backends]
            match = all(np.allclose(o, outs[0], atol=1e-10) for o in outs[1:])
            ratio = f"{times['python'] / times['cython']:6.1f}x" if "cython" in times else "     -"
            print(f"{kname:<14} {n:>3} " + " ".join(f"{times[b]:11.2f}" for b in names)
                  + f"  {ratio}  {match}")


if __name__ == "__main__":
    main()
