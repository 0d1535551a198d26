"""Time the compiled and pure-Python kernels on the same inputs.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Workloads mirror how the package uses the kernels: the Jacobi solver on all
Fourier blocks of a few triples from the sweep range, and the BFS
two-coloring on their neighbour tables.
"""

import argparse
import time

import numpy as np

from metacyclic.graph import build_structured, neighbor_table
from metacyclic.group import validate_params
from metacyclic.kernels import available_backends, load_backend
from metacyclic.spectral import fourier_blocks

TRIPLES = [(3, 7, 2), (5, 101, 36), (6, 342, 83), (8, 388, 33)]


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    backends = {name: load_backend(name) for name in available_backends()}
    rng = np.random.default_rng(0)
    raw = rng.normal(size=(2000, 8, 8)) + 1j * rng.normal(size=(2000, 8, 8))
    workloads = {"random 2000x(8x8)": (raw + np.conj(np.swapaxes(raw, 1, 2))) / 2}
    tables = {}
    for m, n, k in TRIPLES:
        p = validate_params(m, n, k)
        workloads[f"blocks T({m},{n},{k})"] = fourier_blocks(p)
        tables[f"bfs T({m},{n},{k})"] = neighbor_table(build_structured(p))

    names = list(backends)
    print(f"{'workload':28s}" + "".join(f"{n:>12s}" for n in names) + ("     speedup" if len(names) > 1 else ""))
    for label, blocks in workloads.items():
        ref = np.linalg.eigvalsh(blocks)
        row = []
        for name in names:
            kern = backends[name]
            err = np.abs(kern.jacobi_eigvalsh_batch(blocks) - ref).max()
            if err > 1e-10:
                raise SystemExit(f"{name} disagrees with numpy on {label}: {err:.2e}")
            row.append(best_of(lambda: kern.jacobi_eigvalsh_batch(blocks), args.repeat))
        _print_row(label, row)
    for label, table in tables.items():
        results = {name: backends[name].bfs_two_coloring(table) for name in names}
        if len(set(results.values())) != 1:
            raise SystemExit(f"backends disagree on {label}: {results}")
        row = [best_of(lambda: backends[name].bfs_two_coloring(table), args.repeat) for name in names]
        _print_row(label, row)


def _print_row(label, row):
    line = f"{label:28s}" + "".join(f"{t * 1e3:10.2f}ms" for t in row)
    if len(row) > 1:
        line += f"{row[-1] / row[0]:11.1f}x"
    print(line)


if __name__ == "__main__":
    main()
