"""Pure NumPy/SciPy kernel backend.

Exact two-phase scan: a k-d tree over the polyline vertices yields an upper
bound per probe, then only chords with a vertex inside that bound (plus one
chord length) are evaluated exactly.  Results match the compiled backend to
rounding.
"""

from __future__ import annotations

import numpy as np
from scipy.spatial import cKDTree


def _chord_starts(offsets: np.ndarray) -> np.ndarray:
    """Global indices i such that (pts[i], pts[i+1]) is a chord."""
    starts = []
    for j in range(len(offsets) - 1):
        s, e = offsets[j], offsets[j + 1]
        if e - s >= 2:
            starts.append(np.arange(s, e - 1))
    if not starts:
        return np.empty(0, dtype=np.int64)
    return np.concatenate(starts)


def _is_chord_start(offsets: np.ndarray, n: int) -> np.ndarray:
    mask = np.zeros(n, dtype=bool)
    mask[_chord_starts(offsets)] = True
    return mask


def min_dist_polyline_plane(pts: np.ndarray, offsets: np.ndarray, probes: np.ndarray):
    """Minimum distance from each probe to the chord polylines.

    pts: (N, 2) vertices, piece j owning pts[offsets[j]:offsets[j+1]].
    Returns (dist (M,), chord_first_vertex (M,)).
    """
    pts = np.ascontiguousarray(pts, dtype=float)
    probes = np.atleast_2d(np.asarray(probes, dtype=float))
    offsets = np.asarray(offsets, dtype=np.int64)
    is_start = _is_chord_start(offsets, len(pts))
    starts = np.where(is_start)[0]
    max_len = np.linalg.norm(pts[starts + 1] - pts[starts], axis=1).max(initial=0.0)

    tree = cKDTree(pts)
    upper, _ = tree.query(probes)
    groups = tree.query_ball_point(probes, upper + max_len + 1e-12)

    dist = np.empty(len(probes))
    arg = np.empty(len(probes), dtype=np.int64)
    for i, group in enumerate(groups):
        ids = np.asarray(group, dtype=np.int64)
        cand = np.unique(np.concatenate([ids[is_start[ids]], ids[is_start[np.maximum(ids - 1, 0)] & (ids > 0)] - 1]))
        a = pts[cand]
        b = pts[cand + 1]
        d = b - a
        L2 = np.einsum("ij,ij->i", d, d)
        t = np.clip(np.einsum("ij,ij->i", probes[i] - a, d) / L2, 0.0, 1.0)
        feet = a + t[:, None] * d
        dd = np.linalg.norm(probes[i] - feet, axis=1)
        j = int(np.argmin(dd))
        dist[i] = dd[j]
        arg[i] = cand[j]
    return dist, arg


def sphere_chord_distance(e1: np.ndarray, e2: np.ndarray, p: np.ndarray):
    """Exact angular distance from one unit probe p to each great-circle
    chord (e1[i], e2[i])."""
    n = np.cross(e1, e2)
    nn = np.linalg.norm(n, axis=1)
    d_e1 = np.arctan2(np.linalg.norm(np.cross(e1, p), axis=1), e1 @ p)
    d_e2 = np.arctan2(np.linalg.norm(np.cross(e2, p), axis=1), e2 @ p)
    d_end = np.minimum(d_e1, d_e2)
    ok = nn > 1e-300
    nhat = np.where(ok[:, None], n / np.where(ok, nn, 1.0)[:, None], 0.0)
    s = nhat @ p
    f = p - s[:, None] * nhat
    fn = np.linalg.norm(f, axis=1)
    degenerate = fn < 1e-300
    fhat = f / np.where(degenerate, 1.0, fn)[:, None]
    cos_gap = np.einsum("ij,ij->i", e1, e2)
    inside = ok & ~degenerate & (np.einsum("ij,ij->i", fhat, e1) >= cos_gap - 1e-14) \
        & (np.einsum("ij,ij->i", fhat, e2) >= cos_gap - 1e-14)
    d_in = np.abs(np.arcsin(np.clip(s, -1.0, 1.0)))
    return np.where(inside, d_in, d_end)


def min_dist_polyline_sphere(pts: np.ndarray, offsets: np.ndarray, probes: np.ndarray):
    """Minimum angular distance from each unit probe to the great-circle
    chord polylines.  Same contract as the plane kernel."""
    pts = np.ascontiguousarray(pts, dtype=float)
    probes = np.atleast_2d(np.asarray(probes, dtype=float))
    offsets = np.asarray(offsets, dtype=np.int64)
    is_start = _is_chord_start(offsets, len(pts))
    chord_ang = np.zeros(len(pts))
    starts = np.where(is_start)[0]
    chord_ang[starts] = np.arctan2(
        np.linalg.norm(np.cross(pts[starts], pts[starts + 1]), axis=1),
        np.einsum("ij,ij->i", pts[starts], pts[starts + 1]))
    max_ang = chord_ang.max(initial=0.0)

    tree = cKDTree(pts)
    upper_eu, _ = tree.query(probes)
    upper_ang = 2.0 * np.arcsin(np.clip(upper_eu / 2.0, 0.0, 1.0))
    radius_ang = np.minimum(upper_ang + max_ang + 1e-12, np.pi)
    radius_eu = 2.0 * np.sin(radius_ang / 2.0) + 1e-12
    groups = tree.query_ball_point(probes, radius_eu)

    dist = np.empty(len(probes))
    arg = np.empty(len(probes), dtype=np.int64)
    for i, group in enumerate(groups):
        ids = np.asarray(group, dtype=np.int64)
        cand = np.unique(np.concatenate([ids[is_start[ids]], ids[is_start[np.maximum(ids - 1, 0)] & (ids > 0)] - 1]))
        dd = sphere_chord_distance(pts[cand], pts[cand + 1], probes[i])
        j = int(np.argmin(dd))
        dist[i] = dd[j]
        arg[i] = cand[j]
    return dist, arg
