# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernel backend.

Exact block-pruned scan: polyline vertices are grouped into fixed-size
blocks per piece; per probe, a cheap pass over block representatives prunes
everything that provably cannot contain the minimum, then the surviving
chords are evaluated exactly.  Same contract as the fallback backend.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport asin, atan2, cos, fabs, fmin, sin, sqrt

cnp.import_array()

DEF BLOCK = 128


def _blocks(cnp.int64_t[::1] offsets):
    """Block table: (start, stop_exclusive_vertex, piece) per block, where a
    block covers chords [start, stop-1)."""
    starts = []
    stops = []
    cdef Py_ssize_t j, s, e, b
    for j in range(offsets.shape[0] - 1):
        s = offsets[j]
        e = offsets[j + 1]
        if e - s < 2:
            continue
        b = s
        while b < e - 1:
            starts.append(b)
            stops.append(min(b + BLOCK + 1, e))
            b += BLOCK
    return np.asarray(starts, dtype=np.int64), np.asarray(stops, dtype=np.int64)


def min_dist_polyline_plane(pts_in, offsets_in, probes_in):
    """Minimum distance from each probe to the chord polylines.

    pts: (N, 2) vertices, piece j owning pts[offsets[j]:offsets[j+1]].
    Returns (dist (M,), chord_first_vertex (M,)).
    """
    cdef cnp.float64_t[:, ::1] pts = np.ascontiguousarray(pts_in, dtype=np.float64)
    cdef cnp.int64_t[::1] offsets = np.ascontiguousarray(offsets_in, dtype=np.int64)
    cdef cnp.float64_t[:, ::1] probes = np.ascontiguousarray(
        np.atleast_2d(np.asarray(probes_in, dtype=np.float64)))

    starts_arr, stops_arr = _blocks(offsets)
    cdef cnp.int64_t[::1] bstart = starts_arr
    cdef cnp.int64_t[::1] bstop = stops_arr
    cdef Py_ssize_t nblocks = bstart.shape[0]
    cdef Py_ssize_t m = probes.shape[0]

    # per-block representative (first vertex) and covering radius
    cdef cnp.float64_t[::1] bound = np.empty(nblocks)
    cdef cnp.float64_t[::1] repd = np.empty(nblocks)
    cdef Py_ssize_t b, i, k
    cdef double rx, ry, dx, dy, r, best, t, fx, fy, dd, L2, px, py, lower
    for b in range(nblocks):
        i = bstart[b]
        rx = pts[i, 0]
        ry = pts[i, 1]
        r = 0.0
        for k in range(bstart[b] + 1, bstop[b]):
            dx = pts[k, 0] - rx
            dy = pts[k, 1] - ry
            dd = sqrt(dx * dx + dy * dy)
            if dd > r:
                r = dd
        bound[b] = r + 1e-12

    dist_out = np.empty(m)
    arg_out = np.empty(m, dtype=np.int64)
    cdef cnp.float64_t[::1] dist = dist_out
    cdef cnp.int64_t[::1] arg = arg_out
    cdef Py_ssize_t besti
    cdef double upper, prune

    for i in range(m):
        px = probes[i, 0]
        py = probes[i, 1]
        upper = 1e300
        for b in range(nblocks):
            dx = pts[bstart[b], 0] - px
            dy = pts[bstart[b], 1] - py
            dd = sqrt(dx * dx + dy * dy)
            repd[b] = dd
            if dd < upper:
                upper = dd
        best = 1e300
        besti = -1
        for b in range(nblocks):
            prune = upper if upper < best else best
            if repd[b] - bound[b] > prune:
                continue
            for k in range(bstart[b], bstop[b] - 1):
                dx = pts[k + 1, 0] - pts[k, 0]
                dy = pts[k + 1, 1] - pts[k, 1]
                L2 = dx * dx + dy * dy
                t = ((px - pts[k, 0]) * dx + (py - pts[k, 1]) * dy) / L2
                if t < 0.0:
                    t = 0.0
                elif t > 1.0:
                    t = 1.0
                fx = pts[k, 0] + t * dx - px
                fy = pts[k, 1] + t * dy - py
                dd = sqrt(fx * fx + fy * fy)
                if dd < best:
                    best = dd
                    besti = k
        dist[i] = best
        arg[i] = besti
    return dist_out, arg_out


cdef inline double _clip1(double x) nogil:
    if x > 1.0:
        return 1.0
    if x < -1.0:
        return -1.0
    return x


cdef inline double _angle3(double ax, double ay, double az,
                           double bx, double by, double bz) nogil:
    cdef double cx = ay * bz - az * by
    cdef double cy = az * bx - ax * bz
    cdef double cz = ax * by - ay * bx
    return atan2(sqrt(cx * cx + cy * cy + cz * cz), ax * bx + ay * by + az * bz)


def min_dist_polyline_sphere(pts_in, offsets_in, probes_in):
    """Minimum angular distance from each unit probe to the great-circle
    chord polylines.  Same contract as the plane kernel."""
    cdef cnp.float64_t[:, ::1] pts = np.ascontiguousarray(pts_in, dtype=np.float64)
    cdef cnp.int64_t[::1] offsets = np.ascontiguousarray(offsets_in, dtype=np.int64)
    cdef cnp.float64_t[:, ::1] probes = np.ascontiguousarray(
        np.atleast_2d(np.asarray(probes_in, dtype=np.float64)))

    starts_arr, stops_arr = _blocks(offsets)
    cdef cnp.int64_t[::1] bstart = starts_arr
    cdef cnp.int64_t[::1] bstop = stops_arr
    cdef Py_ssize_t nblocks = bstart.shape[0]
    cdef Py_ssize_t m = probes.shape[0]

    # per-block covering radius, kept as (angle, cos, sin) so the pruning
    # pass only needs dot products
    cdef cnp.float64_t[::1] boundang = np.empty(nblocks)
    cdef cnp.float64_t[::1] cosb = np.empty(nblocks)
    cdef cnp.float64_t[::1] sinb = np.empty(nblocks)
    cdef cnp.float64_t[::1] repdot = np.empty(nblocks)
    cdef Py_ssize_t b, i, k, besti, bestb
    cdef double r, dd, best, upper, prune, last_prune, cp, sp, thresh, bdot
    cdef double px, py, pz, e1x, e1y, e1z, e2x, e2y, e2z
    cdef double nx, ny, nz, nn, s, fx, fy, fz, fn, cg, d1, d2

    for b in range(nblocks):
        i = bstart[b]
        r = 0.0
        for k in range(bstart[b] + 1, bstop[b]):
            dd = _angle3(pts[i, 0], pts[i, 1], pts[i, 2], pts[k, 0], pts[k, 1], pts[k, 2])
            if dd > r:
                r = dd
        r += 1e-9
        boundang[b] = r
        cosb[b] = cos(r)
        sinb[b] = sin(r)

    dist_out = np.empty(m)
    arg_out = np.empty(m, dtype=np.int64)
    cdef cnp.float64_t[::1] dist = dist_out
    cdef cnp.int64_t[::1] arg = arg_out

    for i in range(m):
        px = probes[i, 0]
        py = probes[i, 1]
        pz = probes[i, 2]
        bdot = -2.0
        bestb = 0
        for b in range(nblocks):
            dd = px * pts[bstart[b], 0] + py * pts[bstart[b], 1] + pz * pts[bstart[b], 2]
            repdot[b] = dd
            if dd > bdot:
                bdot = dd
                bestb = b
        upper = _angle3(px, py, pz, pts[bstart[bestb], 0], pts[bstart[bestb], 1],
                        pts[bstart[bestb], 2]) + 1e-12
        best = 1e300
        besti = -1
        last_prune = upper
        cp = cos(upper)
        sp = sin(upper)
        for b in range(nblocks):
            prune = upper if upper < best else best
            if prune != last_prune:
                last_prune = prune
                cp = cos(prune)
                sp = sin(prune)
            if prune + boundang[b] < 3.141592653589793:
                # candidate iff angle(rep) <= prune + bound, tested in dot space
                thresh = cp * cosb[b] - sp * sinb[b]
                if repdot[b] < thresh - 1e-12:
                    continue
            for k in range(bstart[b], bstop[b] - 1):
                e1x = pts[k, 0]
                e1y = pts[k, 1]
                e1z = pts[k, 2]
                e2x = pts[k + 1, 0]
                e2y = pts[k + 1, 1]
                e2z = pts[k + 1, 2]
                d1 = _angle3(px, py, pz, e1x, e1y, e1z)
                d2 = _angle3(px, py, pz, e2x, e2y, e2z)
                dd = fmin(d1, d2)
                nx = e1y * e2z - e1z * e2y
                ny = e1z * e2x - e1x * e2z
                nz = e1x * e2y - e1y * e2x
                nn = sqrt(nx * nx + ny * ny + nz * nz)
                if nn > 1e-300:
                    nx /= nn
                    ny /= nn
                    nz /= nn
                    s = px * nx + py * ny + pz * nz
                    fx = px - s * nx
                    fy = py - s * ny
                    fz = pz - s * nz
                    fn = sqrt(fx * fx + fy * fy + fz * fz)
                    if fn > 1e-300:
                        fx /= fn
                        fy /= fn
                        fz /= fn
                        cg = e1x * e2x + e1y * e2y + e1z * e2z
                        if (fx * e1x + fy * e1y + fz * e1z >= cg - 1e-14 and
                                fx * e2x + fy * e2y + fz * e2z >= cg - 1e-14):
                            d1 = fabs(asin(_clip1(s)))
                            if d1 < dd:
                                dd = d1
                if dd < best:
                    best = dd
                    besti = k
        dist[i] = best
        arg[i] = besti
    return dist_out, arg_out
