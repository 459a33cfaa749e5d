"""Compare the compiled Pauli-apply kernel against the numpy fallback.

Run:  python benchmarks/bench_kernels.py
"""

import time

import numpy as np

from lgtwave import _kernels_py, kernels


def bench(fn, z, x, coeff, src, repeats=30):
    out = np.zeros_like(src)
    fn(z, x, coeff, src, out)  # warm-up
    best = float("inf")
    for _ in range(repeats):
        out[:] = 0
        t0 = time.perf_counter()
        fn(z, x, coeff, src, out)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    rng = np.random.default_rng(0)
    print(f"active backend: {kernels.backend_name()}")
    if not kernels.COMPILED:
        print("compiled kernel unavailable; benchmarking fallback against itself")
    header = f"{'qubits':>6} {'dim':>10} {'numpy (ms)':>12} {'cython (ms)':>12} {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for width in (12, 14, 16, 18, 20, 22):
        dim = 1 << width
        src = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
        z = int(rng.integers(0, dim))
        x = int(rng.integers(0, dim))
        coeff = complex(rng.standard_normal(), rng.standard_normal())
        t_py = bench(_kernels_py.apply_term, z, x, coeff, src)
        t_cy = bench(kernels.apply_term, z, x, coeff, src) if kernels.COMPILED else t_py
        print(
            f"{width:>6} {dim:>10} {1e3 * t_py:>12.3f} {1e3 * t_cy:>12.3f}"
            f" {t_py / t_cy:>8.2f}x"
        )


if __name__ == "__main__":
    main()
