#!/usr/bin/env python3
"""Benchmark the chord-scan kernels: compiled extension vs pure-Python fallback.

Usage:
    python benchmarks/bench_kernels.py [--chords N] [--probes M]

Scans the glued-arc curves of both ambient spaces at the given
discretization and reports wall time per backend plus the maximum
disagreement (which must sit at rounding level).
"""

import argparse
import time

import numpy as np

from eqdecomp._kernels import BACKEND, backends
from eqdecomp.geometry import sample_piece
from eqdecomp.leaves import (
    PlaneSigmaParams,
    SphereSigmaParams,
    build_sigma_plane,
    build_sigma_sphere,
)


def chord_table(curve, n_chords):
    pts = np.vstack([sample_piece(p, n_chords) for p in curve.pieces])
    offsets = np.arange(0, (n_chords + 1) * len(curve.pieces) + 1, n_chords + 1)
    return np.ascontiguousarray(pts), offsets.astype(np.int64)


def run(name, fn, args, repeats=3):
    best = float("inf")
    out = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--chords", type=int, default=50_000, help="chords per piece")
    ap.add_argument("--probes", type=int, default=4_000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    print(f"active backend: {BACKEND}")
    print(f"{'case':34s}{'backend':>10s}{'time':>10s}{'per probe':>12s}")

    plane = build_sigma_plane(PlaneSigmaParams(1.0, 2.0), 10.0)
    pts, off = chord_table(plane, args.chords)
    probes = rng.uniform(-8, 8, (args.probes, 2))
    results = {}
    for name, mod in backends().items():
        dt, (d, _) = run(name, mod.min_dist_polyline_plane, (pts, off, probes))
        results[name] = d
        label = f"plane {len(pts):,} vertices x {args.probes:,}"
        print(f"{label:34s}{name:>10s}{dt:>9.3f}s{dt / args.probes * 1e6:>10.1f} us")
    if len(results) == 2:
        print(f"{'':34s}{'agree to':>10s}{np.abs(results['native'] - results['fallback']).max():>11.1e}")

    sphere = build_sigma_sphere(SphereSigmaParams(5, 3))
    pts, off = chord_table(sphere, args.chords)
    probes = rng.normal(size=(args.probes, 3))
    probes /= np.linalg.norm(probes, axis=1, keepdims=True)
    results = {}
    for name, mod in backends().items():
        dt, (d, _) = run(name, mod.min_dist_polyline_sphere, (pts, off, probes))
        results[name] = d
        label = f"sphere {len(pts):,} vertices x {args.probes:,}"
        print(f"{label:34s}{name:>10s}{dt:>9.3f}s{dt / args.probes * 1e6:>10.1f} us")
    if len(results) == 2:
        print(f"{'':34s}{'agree to':>10s}{np.abs(results['native'] - results['fallback']).max():>11.1e}")


if __name__ == "__main__":
    main()
