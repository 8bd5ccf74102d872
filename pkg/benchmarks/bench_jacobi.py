"""Time the compiled and pure-Python Jacobi backends on random symmetric matrices.

    python benchmarks/bench_jacobi.py [--sizes 30,60,150] [--repeats 3]

Matrix sizes mirror coupling-ratio matrices (3N x 3N).  Also reports the
reconstruction error and the largest eigenvalue gap to ``numpy.linalg.eigvalsh``.
"""
import argparse
import time

import numpy as np

from daqc import spectral


def bench(size: int, backend: str, repeats: int, rng: np.random.Generator) -> tuple[float, float, float]:
    a = rng.normal(size=(size, size))
    a = (a + a.T) / 2
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        e = spectral.eigendecompose_symmetric(a, backend=backend)
        best = min(best, time.perf_counter() - start)
    recon = float(np.max(np.abs(e.reconstruct() - a)))
    gap = float(np.max(np.abs(e.eigenvalues - np.linalg.eigvalsh(a)[::-1])))
    return best, recon, gap


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", default="30,60,150")
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]
    backends = spectral.available_backends()
    if "compiled" not in backends:
        print("compiled backend not built; timing the Python fallback only")
    print(f"{'size':>5} {'backend':>9} {'seconds':>10} {'recon err':>10} {'eig err':>10}")
    for size in sizes:
        times = {}
        for backend in backends:
            t, recon, gap = bench(size, backend, args.repeats, np.random.default_rng(size))
            times[backend] = t
            print(f"{size:5d} {backend:>9} {t:10.4f} {recon:10.2e} {gap:10.2e}")
        if len(times) == 2:
            print(f"{'':5} {'speedup':>9} {times['python'] / times['compiled']:10.1f}x")


if __name__ == "__main__":
    main()
