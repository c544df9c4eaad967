"""Numeric certification of the decomposition axioms and regularity claims.

Every check here works from raw piece geometry with an independent oracle:
the equidistance and reach checks never call the analytic evaluate() of the
descriptor under test, and the brute-force signed distance discretizes the
curve into chords and scans them all.  Checks are deterministic given the
profile's seed, and each returns a serializable report.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from . import _kernels
from .catalog import (
    DistanceToConvex,
    OrthogonalProjection,
    SignedDistanceSigmaPlane,
    SignedDistanceSigmaSphere,
    ambient_of,
    base_space,
    evaluate,
    evaluate_batch,
    fiber,
    singular_set,
)
from .errors import InvalidInputError
from .geometry import (
    CircularArc,
    LineSegment,
    PlanePoint,
    SpherePoint,
    SphericalArc,
    piece_endpoint_data,
    piece_length,
    piece_min_dist_batch,
    piece_points_at,
    pieces_min_dist,
    point_distance,
    sample_piece,
    sphere_distance,
)
from .leaves import FiberSet, LeafCurve, piece_components, wrap
from .quotient import (
    CircleSpace,
    ComposedSubmetry,
    HalfLineSpace,
    LineSpace,
    SegmentSpace,
    base_distance,
    clip_interval,
    space_contains,
)


@dataclass(frozen=True)
class ToleranceProfile:
    """Numeric tolerances and sampling sizes shared by all checks."""

    tol_pos: float = 1e-10
    tol_tan: float = 1e-10
    tol_metric: float = 1e-6
    oracle_chords: int = 100_000
    samples: int = 10_000
    rng_seed: int = 0

    def __post_init__(self):
        if min(self.tol_pos, self.tol_tan, self.tol_metric) <= 0:
            raise InvalidInputError("tolerances must be positive")
        if min(self.oracle_chords, self.samples) <= 0:
            raise InvalidInputError("sampling sizes must be positive")

    def rng(self) -> np.random.Generator:
        return np.random.default_rng(self.rng_seed)


@dataclass(frozen=True)
class VerificationReport:
    check_name: str
    passed: bool
    max_deviation: float
    witness: tuple
    parameters: dict
    seed: int

    def to_dict(self) -> dict:
        return {
            "check_name": self.check_name,
            "pass": bool(self.passed),
            "max_deviation": float(self.max_deviation),
            "witness": _jsonable(self.witness),
            "parameters": _jsonable(self.parameters),
            "seed": int(self.seed),
        }


def _jsonable(obj):
    if isinstance(obj, (PlanePoint, SpherePoint)):
        return [float(c) for c in obj]
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


# ---------------------------------------------------------------------------
# sampling helpers

def _as_point(ambient: str, row) -> object:
    if ambient == "sphere":
        return SpherePoint.normalized(*row)
    return PlanePoint(float(row[0]), float(row[1]))


def sample_on_pieces(pieces, n: int, rng: np.random.Generator):
    """n points spread over the pieces proportionally to length.

    Returns (points (n, dim), piece_index (n,), params (n,)).
    """
    lengths = np.array([piece_length(p) for p in pieces])
    counts = rng.multinomial(n, lengths / lengths.sum())
    pts, idx, prm = [], [], []
    for i, (piece, c) in enumerate(zip(pieces, counts)):
        if c == 0:
            continue
        s = rng.random(c)
        pts.append(piece_points_at(piece, s))
        idx.append(np.full(c, i))
        prm.append(s)
    return np.vstack(pts), np.concatenate(idx), np.concatenate(prm)


def _ball_samples(ambient: str, center, r: float, n: int, rng: np.random.Generator):
    """Uniform samples in the metric ball of radius r about center."""
    if ambient == "plane":
        rad = r * np.sqrt(rng.random(n))
        ang = rng.uniform(0.0, 2.0 * math.pi, n)
        return np.stack([center.x + rad * np.cos(ang), center.y + rad * np.sin(ang)], axis=1)
    r = min(r, math.pi)
    cv = center.v
    ref = np.array([0.0, 0.0, 1.0]) if abs(cv[2]) < 0.9 else np.array([1.0, 0.0, 0.0])
    u = np.cross(ref, cv)
    u /= np.linalg.norm(u)
    w = np.cross(cv, u)
    cos_t = rng.uniform(math.cos(r), 1.0, n)
    t = np.arccos(np.clip(cos_t, -1.0, 1.0))
    phi = rng.uniform(0.0, 2.0 * math.pi, n)
    pts = (np.cos(t)[:, None] * cv
           + np.sin(t)[:, None] * (np.cos(phi)[:, None] * u + np.sin(phi)[:, None] * w))
    return pts / np.linalg.norm(pts, axis=1, keepdims=True)


def _points_dist(ambient: str, pts: np.ndarray, ref) -> np.ndarray:
    if ambient == "plane":
        return np.hypot(pts[:, 0] - ref.x, pts[:, 1] - ref.y)
    rv = ref.v
    return np.arctan2(np.linalg.norm(np.cross(pts, rv), axis=1), pts @ rv)


def _fiber_min_dist(f: FiberSet, pts: np.ndarray, ambient: str) -> np.ndarray:
    """Distance from points to the full fiber support (pieces and isolated
    points), via raw piece geometry only."""
    n = pts.shape[0]
    best = np.full(n, np.inf)
    if f.pieces:
        best, _, _ = pieces_min_dist(f.pieces, pts)
    for sp in f.singular_points:
        best = np.minimum(best, _points_dist(ambient, pts, sp))
    return best


# ---------------------------------------------------------------------------
# brute-force oracle

class ChordOracle:
    """Signed distance to a leaf curve measured against a chord
    discretization: the minimum over all chords of all pieces, signed by the
    stored orientation of the nearest piece."""

    def __init__(self, curve: LeafCurve, n_chords: int):
        if not curve.pieces:
            raise InvalidInputError("cannot build an oracle for an empty curve")
        self.curve = curve
        self.n_chords = int(n_chords)
        pts = []
        offsets = [0]
        for piece in curve.pieces:
            pts.append(sample_piece(piece, self.n_chords))
            offsets.append(offsets[-1] + self.n_chords + 1)
        self._pts = np.ascontiguousarray(np.vstack(pts))
        self._offsets = np.asarray(offsets, dtype=np.int64)

    def distance(self, probes: np.ndarray):
        """(distance, nearest piece index) per probe."""
        probes = np.atleast_2d(np.asarray(probes, dtype=float))
        if self.curve.ambient == "plane":
            d, arg = _kernels.min_dist_polyline_plane(self._pts, self._offsets, probes)
        else:
            d, arg = _kernels.min_dist_polyline_sphere(self._pts, self._offsets, probes)
        piece_idx = np.searchsorted(self._offsets, arg, side="right") - 1
        return d, piece_idx

    def _side(self, probes: np.ndarray, piece_idx: np.ndarray) -> np.ndarray:
        """+1 on the positive-level side of the nearest piece, -1 on the
        other, using only stored piece data and orientation flags."""
        side = np.zeros(len(probes))
        for i in np.unique(piece_idx):
            piece = self.curve.pieces[i]
            flag = self.curve.orientation[i]
            mask = piece_idx == i
            sub = probes[mask]
            if isinstance(piece, LineSegment):
                dx, dy = piece.q.x - piece.p.x, piece.q.y - piece.p.y
                cross = dx * (sub[:, 1] - piece.p.y) - dy * (sub[:, 0] - piece.p.x)
                s = np.where(cross >= 0.0, 1.0, -1.0)
            elif isinstance(piece, CircularArc):
                rp = np.hypot(sub[:, 0] - piece.center.x, sub[:, 1] - piece.center.y)
                s = np.where(rp <= piece.radius, 1.0, -1.0)
            else:
                cv = piece.center.v
                ang = np.arctan2(np.linalg.norm(np.cross(sub, cv), axis=1), sub @ cv)
                s = np.where(ang <= piece.angular_radius, 1.0, -1.0)
            side[mask] = flag * s
        return side

    def signed_distance(self, probes: np.ndarray) -> np.ndarray:
        probes = np.atleast_2d(np.asarray(probes, dtype=float))
        d, piece_idx = self.distance(probes)
        return d * self._side(probes, piece_idx)


def brute_force_signed_distance(curve: LeafCurve, p, n_chords: int) -> float:
    """One-shot signed distance of a single point against the chord oracle."""
    probe = np.array([list(p)], dtype=float)
    return float(ChordOracle(curve, n_chords).signed_distance(probe)[0])


# ---------------------------------------------------------------------------
# checks

def check_junctions_c1(curve: LeafCurve, tol: ToleranceProfile = ToleranceProfile()) -> VerificationReport:
    """Endpoint gaps and tangent mismatches over all declared junctions."""
    if not curve.junctions:
        raise InvalidInputError("curve has no junctions to check")
    max_gap = 0.0
    max_ang = 0.0
    witness = None
    for j in curve.junctions:
        e = piece_endpoint_data(curve.pieces[j.left])
        s = piece_endpoint_data(curve.pieces[j.right])
        gap = point_distance(e.end, s.start)
        tv, sv = np.array(e.end_tangent.dir), np.array(s.start_tangent.dir)
        if len(tv) == 2:
            cross = abs(tv[0] * sv[1] - tv[1] * sv[0])
        else:
            cross = float(np.linalg.norm(np.cross(tv, sv)))
        ang = math.atan2(cross, float(np.dot(tv, sv)))
        if gap > max_gap or ang > max_ang:
            witness = j.point
        max_gap = max(max_gap, gap)
        max_ang = max(max_ang, ang)
    passed = max_gap <= tol.tol_pos and max_ang <= tol.tol_tan
    return VerificationReport(
        "junctions_c1", passed, max(max_gap, max_ang), (witness,),
        {"max_gap": max_gap, "max_tangent_angle": max_ang,
         "junctions": len(curve.junctions)}, tol.rng_seed)


def _plane_window_margin(d) -> float:
    """Extra window radius so that a clipped fiber is complete around any
    probe inside the nominal window."""
    if isinstance(d, SignedDistanceSigmaPlane):
        return 2.0 * d.params.center_distance + d.params.a
    if isinstance(d, DistanceToConvex):
        seed = d.seed
        pts = []
        if hasattr(seed, "p"):
            pts.append(seed.p)
        if hasattr(seed, "q"):
            pts.append(seed.q)
        if hasattr(seed, "origin"):
            pts.append(seed.origin)
        return 2.0 * max((math.hypot(p.x, p.y) for p in pts), default=0.0) + 1.0
    if isinstance(d, ComposedSubmetry):
        return _plane_window_margin(d.inner)
    return 1.0


def check_equidistance(d, eps1: float, eps2: float,
                       tol: ToleranceProfile = ToleranceProfile(),
                       window: Optional[float] = None) -> VerificationReport:
    """Sampled fiber-to-fiber distance against the base distance.

    Probes live on fiber(eps1); distances to fiber(eps2) are measured from
    raw piece geometry, never through evaluate().
    """
    base = base_space(d)
    if not (space_contains(base, eps1) and space_contains(base, eps2)):
        raise InvalidInputError("levels must lie in the base space")
    if eps1 == eps2:
        raise InvalidInputError("levels must differ")
    expected = base_distance(base, eps1, eps2)
    rng = tol.rng()
    ambient = ambient_of(d)
    if ambient == "plane":
        if window is None:
            raise InvalidInputError("plane equidistance checks need a window")
        source = fiber(d, eps1, window)
        target = fiber(d, eps2, window + expected + _plane_window_margin(d) + 1.0)
    else:
        source = fiber(d, eps1)
        target = fiber(d, eps2)
    if source.pieces:
        probes, _, _ = sample_on_pieces(source.pieces, tol.samples, rng)
    else:
        probes = np.empty((0, 3 if ambient == "sphere" else 2))
    if source.singular_points:
        probes = np.vstack([probes] + [[list(sp)] for sp in source.singular_points])
    dist = _fiber_min_dist(target, probes, ambient)
    dev = np.abs(dist - expected)
    worst = int(np.argmax(dev))
    passed = bool(dev.max() < tol.tol_metric)
    return VerificationReport(
        "equidistance", passed, float(dev.max()),
        (_as_point(ambient, probes[worst]),),
        {"eps1": eps1, "eps2": eps2, "expected": expected,
         "probes": int(len(probes))}, tol.rng_seed)


def check_lipschitz_and_ball(d, x, r: float,
                             tol: ToleranceProfile = ToleranceProfile()) -> VerificationReport:
    """1-Lipschitz bound and ball-to-ball surjectivity at one (x, r)."""
    if not r > 0.0:
        raise InvalidInputError("radius must be positive")
    rng = tol.rng()
    ambient = ambient_of(d)
    v0 = evaluate(d, x)
    pts = _ball_samples(ambient, x, r, tol.samples, rng)
    vals = evaluate_batch(d, pts)
    dists = _points_dist(ambient, pts, x)
    excess = np.abs(vals - v0) - dists
    violations = int(np.sum(excess > tol.tol_metric))

    base = base_space(d)
    ball = clip_interval(base, v0, r)
    if isinstance(ball, tuple) and ball and ball[0] == "circle":
        length = base.length
        if 2.0 * r >= length:
            anchored = np.sort(wrap(np.asarray(vals), length))
            gaps = np.diff(anchored, append=anchored[0] + length)
            max_gap = float(gaps.max())
        else:
            lo = ball[1]
            span = ball[2] - ball[1]
            anchored = np.sort(np.clip(wrap(np.asarray(vals) - lo, length), 0.0, span))
            pad = np.concatenate([[0.0], anchored, [span]])
            max_gap = float(np.diff(pad).max())
    else:
        lo, hi = ball
        anchored = np.sort(np.asarray(vals))
        pad = np.concatenate([[lo], anchored, [hi]])
        max_gap = float(np.diff(pad).max())

    gap_tol = 2.0 * r / math.sqrt(tol.samples)
    passed = violations == 0 and max_gap < gap_tol
    worst = int(np.argmax(excess))
    return VerificationReport(
        "lipschitz_and_ball", passed, float(max(excess.max(), 0.0)),
        (_as_point(ambient, pts[worst]),),
        {"x": _jsonable(x), "r": r, "value": v0, "violations": violations,
         "max_gap": max_gap, "gap_tol": gap_tol}, tol.rng_seed)


# ---------------------------------------------------------------------------
# horizontal traces

class TraceResult(NamedTuple):
    t: np.ndarray
    points: np.ndarray
    profile: np.ndarray
    predicted: np.ndarray
    flagged: bool
    singular_time: Optional[float]
    report: VerificationReport


def _orient_segment_normal(d, start, n: np.ndarray) -> np.ndarray:
    """Orient a segment-fiber normal away from the owning region center."""
    inner = d.inner if isinstance(d, ComposedSubmetry) else d
    if isinstance(inner, SignedDistanceSigmaPlane):
        # strip segments: away from the upper center's abscissa
        ref = np.array([start.x - inner.params.x0.x, 0.0])
        if float(n @ ref) < 0.0:
            return -n
        return n
    if isinstance(inner, OrthogonalProjection):
        return np.array(inner.axis)
    if isinstance(inner, DistanceToConvex):
        from .catalog import _seed_distance
        delta = 1e-6
        plus = PlanePoint(start.x + delta * n[0], start.y + delta * n[1])
        minus = PlanePoint(start.x - delta * n[0], start.y - delta * n[1])
        if _seed_distance(inner.seed, plus) < _seed_distance(inner.seed, minus):
            return -n
        return n
    return n


def _fiber_normal_at(d, start, window: Optional[float]):
    """Unit normal of the fiber through `start`, oriented away from the
    owning region center where that is meaningful."""
    ambient = ambient_of(d)
    v0 = evaluate(d, start)
    if ambient == "plane":
        if window is None:
            window = abs(v0) + math.hypot(start.x, start.y) + _plane_window_margin(d) + 4.0
        f = fiber(d, v0, window)
    else:
        f = fiber(d, v0)
    if not f.pieces:
        # point fiber: every direction is horizontal
        if ambient == "sphere":
            sv = start.v
            ref = np.array([0.0, 0.0, 1.0]) if abs(sv[2]) < 0.9 else np.array([1.0, 0.0, 0.0])
            u = np.cross(ref, sv)
            return u / np.linalg.norm(u)
        return np.array([1.0, 0.0])
    pv = np.array([list(start)])
    dist, idx, _ = pieces_min_dist(f.pieces, pv)
    if dist[0] > 1e-9:
        raise InvalidInputError(
            f"start point is not on the fiber at level {v0!r} (offset {dist[0]!r})")
    piece = f.pieces[int(idx[0])]
    if isinstance(piece, LineSegment):
        dx, dy = piece.q.x - piece.p.x, piece.q.y - piece.p.y
        L = math.hypot(dx, dy)
        return _orient_segment_normal(d, start, np.array([-dy / L, dx / L]))
    if isinstance(piece, CircularArc):
        rx, ry = start.x - piece.center.x, start.y - piece.center.y
        rp = math.hypot(rx, ry)
        return np.array([rx / rp, ry / rp])
    cv = piece.center.v
    sv = start.v
    toward = cv - float(np.dot(cv, sv)) * sv
    nt = np.linalg.norm(toward)
    if nt < 1e-15:
        raise InvalidInputError("start coincides with the fiber circle center")
    return -toward / nt


def _reflected_wave(base, v0: float, slope: float, ts: np.ndarray) -> np.ndarray:
    """Unit-speed quasigeodesic profile: straight on a line, reflected at the
    base endpoints otherwise."""
    raw = v0 + slope * ts
    if isinstance(base, LineSpace):
        return raw
    if isinstance(base, CircleSpace):
        return wrap(raw, base.length)
    if isinstance(base, HalfLineSpace):
        return base.origin + np.abs(raw - base.origin)
    L = base.hi - base.lo
    return base.lo + (L - np.abs(wrap(raw - base.lo, 2.0 * L) - L))


def trace_horizontal(d, start, outward: bool = True, t_max: float = 5.0, dt: float = 0.01,
                     tol: ToleranceProfile = ToleranceProfile(),
                     window: Optional[float] = None) -> TraceResult:
    """Integrate the horizontal geodesic from a middle-fiber point and
    compare the profile against the reflected triangle wave.

    The trace is truncated and flagged when the geodesic passes within
    10 * tol_pos of a singular point before t_max; the fold identity is only
    claimed inside the transnormal region.
    """
    ambient = ambient_of(d)
    v0 = evaluate(d, start)
    base = base_space(d)
    if isinstance(base, SegmentSpace):
        mid = 0.5 * (base.lo + base.hi)
        if isinstance(d, (SignedDistanceSigmaPlane, SignedDistanceSigmaSphere)) \
                and abs(v0 - mid) > 1e-9:
            raise InvalidInputError(f"start must lie on the middle fiber, evaluates to {v0!r}")
    normal = _fiber_normal_at(d, start, window)
    direction = normal if outward else -normal

    ts = np.arange(0.0, t_max + dt * 0.5, dt)
    if ambient == "plane":
        origin = np.array([start.x, start.y])
        pts = origin + ts[:, None] * direction
    else:
        sv = start.v
        pts = np.cos(ts)[:, None] * sv + np.sin(ts)[:, None] * direction
        pts /= np.linalg.norm(pts, axis=1, keepdims=True)

    # exact first passage near a singular point
    flagged = False
    singular_time = None
    hit = math.inf
    for sp in singular_set(d).points:
        if ambient == "plane":
            spv = np.array([sp.x, sp.y])
            t_star = float((spv - origin) @ direction)
            if 0.0 <= t_star <= t_max:
                gap = float(np.linalg.norm(origin + t_star * direction - spv))
                if gap <= 10.0 * tol.tol_pos:
                    hit = min(hit, t_star)
        else:
            spv = sp.v
            t_star = math.atan2(float(spv @ direction), float(spv @ start.v))
            if t_star < 0.0:
                t_star += 2.0 * math.pi
            if t_star <= t_max + 1e-12:
                gap = sphere_distance(sp, SpherePoint.from_vec(
                    math.cos(t_star) * start.v + math.sin(t_star) * direction))
                if gap <= 10.0 * tol.tol_pos:
                    hit = min(hit, t_star)
    if math.isfinite(hit):
        flagged = True
        singular_time = hit
        if hit < t_max - 1e-12:
            keep = ts < hit - 1e-12
            if not keep.any():
                keep[0] = True
            ts, pts = ts[keep], pts[keep]

    profile = evaluate_batch(d, pts)
    if len(profile) >= 2:
        slope = 1.0 if profile[1] >= profile[0] else -1.0
    else:
        slope = 1.0
    predicted = _reflected_wave(base, float(profile[0]), slope, ts)
    dev = np.abs(profile - predicted)
    steps = np.abs(np.diff(profile))
    lipschitz_ok = bool((steps <= dt + tol.tol_metric).all()) if len(steps) else True
    passed = bool(dev.max() < tol.tol_metric) and lipschitz_ok
    worst = int(np.argmax(dev))
    report = VerificationReport(
        "trace_fold_identity", passed, float(dev.max()),
        (_as_point(ambient, pts[worst]),),
        {"start": _jsonable(start), "outward": outward, "t_max": t_max, "dt": dt,
         "flagged": flagged, "singular_time": singular_time,
         "profile_lipschitz": lipschitz_ok, "retained_samples": int(len(ts))},
        tol.rng_seed)
    return TraceResult(ts, pts, profile, predicted, flagged, singular_time, report)


# ---------------------------------------------------------------------------
# positive reach

def _foot_normals(pieces, idx: np.ndarray, params: np.ndarray, pts: np.ndarray) -> np.ndarray:
    out = np.zeros_like(pts)
    for i in np.unique(idx):
        piece = pieces[i]
        mask = idx == i
        sub = pts[mask]
        if isinstance(piece, LineSegment):
            dx, dy = piece.q.x - piece.p.x, piece.q.y - piece.p.y
            L = math.hypot(dx, dy)
            out[mask] = np.array([-dy / L, dx / L])
        elif isinstance(piece, CircularArc):
            rel = sub - np.array([piece.center.x, piece.center.y])
            out[mask] = rel / np.linalg.norm(rel, axis=1, keepdims=True)
        else:
            cv = piece.center.v
            toward = cv - (sub @ cv)[:, None] * sub
            out[mask] = -toward / np.linalg.norm(toward, axis=1, keepdims=True)
    return out


def check_positive_reach(f: FiberSet, probe_dist: float,
                         tol: ToleranceProfile = ToleranceProfile(),
                         sample_radius: Optional[float] = None) -> VerificationReport:
    """Foot-point uniqueness for probes within probe_dist of the fiber.

    A probe fails when two pieces are equidistant from it (within
    tol_metric) with feet that are genuinely apart, or when it sits at the
    caustic center of an arc.  Half the offsets are uniform, half sit at the
    exact arc radii below probe_dist, which are the caustic offsets.
    """
    if not probe_dist > 0.0:
        raise InvalidInputError("probe distance must be positive")
    if not f.pieces:
        raise InvalidInputError("fiber has no pieces to probe")
    rng = tol.rng()
    ambient = "sphere" if isinstance(f.pieces[0], SphericalArc) else "plane"

    sample_pieces = list(f.pieces)
    if sample_radius is not None and ambient == "plane":
        def extent(piece):
            if isinstance(piece, LineSegment):
                return max(math.hypot(*piece.p), math.hypot(*piece.q))
            return math.hypot(piece.center.x, piece.center.y) + piece.radius
        sample_pieces = [p for p in f.pieces if extent(p) <= sample_radius]
        if not sample_pieces:
            raise InvalidInputError("sample radius excludes every piece")

    n = tol.samples
    feet, fidx, fprm = sample_on_pieces(sample_pieces, n, rng)
    normals = _foot_normals(sample_pieces, fidx, fprm, feet)
    t = rng.uniform(-probe_dist, probe_dist, n)
    # caustic ladder on arc feet
    ladder = rng.random(n) < 0.5
    for i in np.nonzero(ladder)[0]:
        piece = sample_pieces[fidx[i]]
        if isinstance(piece, CircularArc) and piece.radius < probe_dist:
            t[i] = -piece.radius
        elif isinstance(piece, SphericalArc) and piece.angular_radius < probe_dist:
            t[i] = -piece.angular_radius
    if ambient == "plane":
        probes = feet + t[:, None] * normals
    else:
        probes = np.cos(t)[:, None] * feet + np.sin(t)[:, None] * normals
        probes /= np.linalg.norm(probes, axis=1, keepdims=True)

    dists = np.empty((len(f.pieces), n))
    feet_all = np.empty((len(f.pieces), n, probes.shape[1]))
    for i, piece in enumerate(f.pieces):
        dists[i], feet_all[i] = piece_min_dist_batch(piece, probes)
    for sp in f.singular_points:
        dists = np.vstack([dists, _points_dist(ambient, probes, sp)[None, :]])
        feet_all = np.vstack([feet_all, np.broadcast_to(np.array(list(sp), dtype=float),
                                                        (1, n, probes.shape[1]))])

    d1 = dists.min(axis=0)
    sep_tol = max(tol.tol_pos, 10.0 * math.sqrt(max(probe_dist, tol.tol_metric) * tol.tol_metric))
    witnesses = []
    max_sep = 0.0
    candidates_mask = dists <= d1[None, :] + tol.tol_metric
    multi = np.nonzero(candidates_mask.sum(axis=0) >= 2)[0]
    for j in multi:
        cand = np.nonzero(candidates_mask[:, j])[0]
        fp = feet_all[cand, j]
        if ambient == "plane":
            sep = max(np.linalg.norm(fp[a] - fp[b]) for a in range(len(fp)) for b in range(a + 1, len(fp)))
        else:
            sep = max(math.atan2(np.linalg.norm(np.cross(fp[a], fp[b])), float(fp[a] @ fp[b]))
                      for a in range(len(fp)) for b in range(a + 1, len(fp)))
        if sep > sep_tol:
            max_sep = max(max_sep, sep)
            if len(witnesses) < 32:
                witnesses.append(_as_point(ambient, probes[j]))
    # caustic centers of arcs: the whole arc is equidistant
    for i, piece in enumerate(f.pieces):
        if isinstance(piece, CircularArc):
            at_center = np.hypot(probes[:, 0] - piece.center.x,
                                 probes[:, 1] - piece.center.y) <= 1e-9
        elif isinstance(piece, SphericalArc):
            ang = _points_dist(ambient, probes, piece.center)
            at_center = (ang <= 1e-9) | (ang >= math.pi - 1e-9)
        else:
            continue
        at_center &= dists[i] <= d1 + tol.tol_metric
        for j in np.nonzero(at_center)[0]:
            max_sep = max(max_sep, piece_length(piece))
            if len(witnesses) < 32:
                witnesses.append(_as_point(ambient, probes[j]))
    passed = not witnesses
    return VerificationReport(
        "positive_reach", passed, float(max_sep), tuple(witnesses),
        {"probe_dist": probe_dist, "level": f.level, "separation_tol": sep_tol,
         "probes": int(n)}, tol.rng_seed)


def check_connectivity(obj) -> int:
    """Number of connected components of a fiber or leaf curve, by
    endpoint-matching union-find; isolated singular points count as their
    own components."""
    pieces = obj.pieces
    comps = len(piece_components(pieces)) if pieces else 0
    endpoints = []
    for piece in pieces:
        e = piece_endpoint_data(piece)
        endpoints.append(np.array(list(e.start)))
        endpoints.append(np.array(list(e.end)))
    for sp in getattr(obj, "singular_points", ()):
        spv = np.array(list(sp))
        if not any(np.linalg.norm(spv - q) <= 1e-9 for q in endpoints):
            comps += 1
    return comps
