"""Benchmark the point-location backends against each other.

Runs the compiled walk and the numpy walk on identical inputs over a range
of mesh sizes and hint qualities, checks the outputs are bit-identical,
and prints a timing table. Hint quality matters: "exact" starts each walk
in the containing element (the persistent-assembler case, where feet move
one element per step at most), "near" starts a few elements away, "cold"
always starts at element 0.

Usage: python3 benchmarks/bench_locate.py [--points N] [--repeats R]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from lgfem import _walk_py
from lgfem.mesh import TOL_BARY, Rect, build_uniform_mesh

try:
    from lgfem import _walk
except ImportError:
    _walk = None


def walk_args(mesh, pts, hints):
    max_hops = 2 * len(mesh.triangles) + 8
    return (mesh.triangles, mesh.neighbors, mesh.b_off, mesh.b_inv,
            mesh.star_off, mesh.star_el, pts, hints, TOL_BARY, max_hops)


def make_hints(mesh, exact_elems, quality, rng):
    nt = len(mesh.triangles)
    if quality == "exact":
        return exact_elems.copy()
    if quality == "near":
        # a short random walk away from the answer
        hints = exact_elems.copy()
        for _ in range(3):
            step = mesh.neighbors[hints, rng.integers(0, 3, len(hints))]
            hints = np.where(step >= 0, step, hints).astype(np.int32)
        return hints
    return np.zeros(len(exact_elems), dtype=np.int32)


def best_of(fn, args, repeats):
    best = np.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--points", type=int, default=200_000)
    ap.add_argument("--repeats", type=int, default=3)
    args = ap.parse_args()

    if _walk is None:
        raise SystemExit("compiled kernel not built; nothing to compare")

    rng = np.random.default_rng(2024)
    print(f"{'mesh':>10} {'points':>8} {'hints':>6} "
          f"{'python':>10} {'compiled':>10} {'speedup':>8}")
    for n in (32, 64, 128):
        mesh = build_uniform_mesh(Rect(-1.0, -1.0, 1.0, 1.0), n)
        pts = rng.uniform(-1.0, 1.0, (args.points, 2))
        cold = np.zeros(len(pts), dtype=np.int32)
        exact_elems, _ = _walk.walk(*walk_args(mesh, pts, cold))
        for quality in ("exact", "near", "cold"):
            hints = make_hints(mesh, exact_elems, quality, rng)
            tp, (ep, bp) = best_of(_walk_py.walk, walk_args(mesh, pts, hints),
                                   args.repeats)
            tc, (ec, bc) = best_of(_walk.walk, walk_args(mesh, pts, hints),
                                   args.repeats)
            if not (np.array_equal(ep, ec) and np.array_equal(bp, bc)):
                raise SystemExit(f"backend mismatch at n={n} hints={quality}")
            print(f"{2 * n * n:>10} {len(pts):>8} {quality:>6} "
                  f"{tp * 1e3:>8.1f}ms {tc * 1e3:>8.1f}ms {tp / tc:>7.1f}x")
    print("outputs bit-identical across backends")


if __name__ == "__main__":
    main()
