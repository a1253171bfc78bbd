#!/usr/bin/env python3
"""Benchmark the compiled element kernels against the NumPy fallback.

Times the raw per-element kernels and the end-to-end assembly on red-refined
meshes of the unit square.  Run after installing the package:

    python benchmarks/bench_kernels.py --levels 4 5 6 --repeats 5
"""
import argparse
import time

import numpy as np

from mixed_spectra._kernels import available_backends
from mixed_spectra.fem import assemble
from mixed_spectra.geometry import make_polygon
from mixed_spectra.mesh import mesh_at_level


def best_of(fn, repeats):
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--levels", type=int, nargs="+", default=[4, 5, 6])
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    backends = available_backends()
    if len(backends) < 2:
        print("note: compiled backend not built; timing NumPy only")

    poly = make_polygon([[0, 0], [1, 0], [1, 1], [0, 1]], ["N", "D", "N", "N"])
    header = f"{'level':>5} {'elements':>9} {'kernel':>8} " \
             f"{'p2 matrices':>12} {'assemble':>10}"
    print(header)
    print("-" * len(header))
    for level in args.levels:
        mesh = mesh_at_level(poly, level)
        coords = np.ascontiguousarray(mesh.element_coords())
        rows = {}
        for name, kern in sorted(backends.items()):
            t_kernel = best_of(lambda: kern.p2_element_matrices(coords), args.repeats)
            t_asm = best_of(lambda: assemble(mesh, poly, 2, backend=name),
                            args.repeats)
            rows[name] = (t_kernel, t_asm)
            print(f"{level:>5} {mesh.n_elements:>9} {name:>8} "
                  f"{t_kernel * 1e3:>10.2f}ms {t_asm * 1e3:>8.2f}ms")
        if {"numpy", "cython"} <= rows.keys():
            ker = rows["numpy"][0] / rows["cython"][0]
            asm = rows["numpy"][1] / rows["cython"][1]
            print(f"{'':>5} {'':>9} {'speedup':>8} {ker:>11.1f}x {asm:>9.1f}x")
    print("\nassemble includes dof numbering, sparse scatter and constraint "
          "elimination, which bound the end-to-end gain.")


if __name__ == "__main__":
    main()
