"""First-class descriptors for every equidistant decomposition of the plane
and the sphere with a one-dimensional base, with uniform evaluate / fiber /
base-space operations.

Plane: orthogonal projection (base R), distance to a convex seed (base
[0, inf); seed a point, segment, or half line), and the signed distance to
the glued-arc curve (base [-a, a]).  Sphere: distance from a pole (base
[0, pi]) and the signed distance to the spherical glued-arc curve (base
[-a, a]).  Post-composition with a discrete 1-D map yields the
disconnected-fiber decompositions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import singledispatch
from typing import Union

import numpy as np

from .errors import InvalidInputError, InvalidParameterError
from .geometry import (
    CircularArc,
    LineSegment,
    PlanePoint,
    Point,
    SpherePoint,
    SphericalArc,
    UnitTangent,
    plane_distance,
    sphere_distance,
    wrap_angle,
)
from .leaves import (
    FiberSet,
    PlaneSigmaParams,
    SphereSigmaParams,
    fiber_plane,
    fiber_sphere,
    piece_components,
    signed_distance_plane,
    signed_distance_plane_batch,
    signed_distance_sphere,
    signed_distance_sphere_batch,
)
from .quotient import (
    ComposedSubmetry,
    HalfLineSpace,
    LineSpace,
    SegmentSpace,
    Space1D,
    apply_map,
    map_codomain,
    map_preimages,
)

NORTH = SpherePoint(0.0, 0.0, 1.0)


# ---------------------------------------------------------------------------
# descriptors

@dataclass(frozen=True)
class OrthogonalProjection:
    """Projection of the plane onto the axis at `axis_angle`."""

    axis_angle: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "axis_angle", wrap_angle(float(self.axis_angle)))

    @property
    def axis(self):
        return math.cos(self.axis_angle), math.sin(self.axis_angle)


@dataclass(frozen=True)
class PointSeed:
    p: PlanePoint


@dataclass(frozen=True)
class SegmentSeed:
    p: PlanePoint
    q: PlanePoint

    def __post_init__(self):
        if self.p.x == self.q.x and self.p.y == self.q.y:
            raise InvalidParameterError("segment seed must be nondegenerate")


@dataclass(frozen=True)
class HalfLineSeed:
    origin: PlanePoint
    direction: UnitTangent

    def __post_init__(self):
        if len(self.direction.dir) != 2:
            raise InvalidParameterError("half-line seed needs a plane direction")


ConvexSeed = Union[PointSeed, SegmentSeed, HalfLineSeed]


@dataclass(frozen=True)
class DistanceToConvex:
    """Distance to a convex seed; a full line is not allowed because its
    level sets would disconnect the remaining fibers."""

    seed: ConvexSeed


@dataclass(frozen=True)
class SignedDistanceSigmaPlane:
    params: PlaneSigmaParams


@dataclass(frozen=True)
class SphereRotation:
    pole: SpherePoint = NORTH


@dataclass(frozen=True)
class SignedDistanceSigmaSphere:
    params: SphereSigmaParams

    def __post_init__(self):
        self.params.validate()


SubmetryDescriptor = Union[
    OrthogonalProjection, DistanceToConvex, SignedDistanceSigmaPlane,
    SphereRotation, SignedDistanceSigmaSphere,
]


@dataclass(frozen=True)
class SingularSet:
    points: tuple


def ambient_of(d) -> str:
    if isinstance(d, (SphereRotation, SignedDistanceSigmaSphere)):
        return "sphere"
    if isinstance(d, ComposedSubmetry):
        return ambient_of(d.inner)
    return "plane"


# ---------------------------------------------------------------------------
# evaluate

def _seed_distance(seed: ConvexSeed, p: PlanePoint) -> float:
    if isinstance(seed, PointSeed):
        return plane_distance(seed.p, p)
    if isinstance(seed, SegmentSeed):
        dx, dy = seed.q.x - seed.p.x, seed.q.y - seed.p.y
        t = ((p.x - seed.p.x) * dx + (p.y - seed.p.y) * dy) / (dx * dx + dy * dy)
        t = min(1.0, max(0.0, t))
        return math.hypot(p.x - seed.p.x - t * dx, p.y - seed.p.y - t * dy)
    ox, oy = seed.origin.x, seed.origin.y
    vx, vy = seed.direction.dir
    t = max(0.0, (p.x - ox) * vx + (p.y - oy) * vy)
    return math.hypot(p.x - ox - t * vx, p.y - oy - t * vy)


def _seed_distance_batch(seed: ConvexSeed, pts: np.ndarray) -> np.ndarray:
    pts = np.asarray(pts, dtype=float)
    if isinstance(seed, PointSeed):
        return np.hypot(pts[:, 0] - seed.p.x, pts[:, 1] - seed.p.y)
    if isinstance(seed, SegmentSeed):
        o = np.array([seed.p.x, seed.p.y])
        d = np.array([seed.q.x - seed.p.x, seed.q.y - seed.p.y])
        t = np.clip(((pts - o) @ d) / float(d @ d), 0.0, 1.0)
        return np.linalg.norm(pts - o - t[:, None] * d, axis=1)
    o = np.array([seed.origin.x, seed.origin.y])
    v = np.array(seed.direction.dir)
    t = np.maximum(0.0, (pts - o) @ v)
    return np.linalg.norm(pts - o - t[:, None] * v, axis=1)


@singledispatch
def evaluate(d, p: Point) -> float:
    """Base value of the decomposition at an ambient point."""
    raise InvalidInputError(f"unknown descriptor {type(d).__name__}")


@evaluate.register
def _(d: OrthogonalProjection, p: PlanePoint) -> float:
    ax, ay = d.axis
    return p.x * ax + p.y * ay


@evaluate.register
def _(d: DistanceToConvex, p: PlanePoint) -> float:
    return _seed_distance(d.seed, p)


@evaluate.register
def _(d: SignedDistanceSigmaPlane, p: PlanePoint) -> float:
    return signed_distance_plane(d.params, p)


@evaluate.register
def _(d: SphereRotation, p: SpherePoint) -> float:
    return sphere_distance(d.pole, p)


@evaluate.register
def _(d: SignedDistanceSigmaSphere, p: SpherePoint) -> float:
    return signed_distance_sphere(d.params, p)


@evaluate.register
def _(d: ComposedSubmetry, p: Point) -> float:
    return apply_map(d.outer, evaluate(d.inner, p))


@singledispatch
def evaluate_batch(d, pts: np.ndarray) -> np.ndarray:
    raise InvalidInputError(f"unknown descriptor {type(d).__name__}")


@evaluate_batch.register
def _(d: OrthogonalProjection, pts) -> np.ndarray:
    pts = np.asarray(pts, dtype=float)
    ax, ay = d.axis
    return pts[:, 0] * ax + pts[:, 1] * ay


@evaluate_batch.register
def _(d: DistanceToConvex, pts) -> np.ndarray:
    return _seed_distance_batch(d.seed, pts)


@evaluate_batch.register
def _(d: SignedDistanceSigmaPlane, pts) -> np.ndarray:
    return signed_distance_plane_batch(d.params, pts)


@evaluate_batch.register
def _(d: SphereRotation, pts) -> np.ndarray:
    pts = np.asarray(pts, dtype=float)
    pv = d.pole.v
    return np.arctan2(np.linalg.norm(np.cross(pts, pv), axis=1), pts @ pv)


@evaluate_batch.register
def _(d: SignedDistanceSigmaSphere, pts) -> np.ndarray:
    return signed_distance_sphere_batch(d.params, pts)


@evaluate_batch.register
def _(d: ComposedSubmetry, pts) -> np.ndarray:
    return apply_map(d.outer, evaluate_batch(d.inner, pts))


# ---------------------------------------------------------------------------
# base spaces and fibers

@singledispatch
def base_space(d) -> Space1D:
    raise InvalidInputError(f"unknown descriptor {type(d).__name__}")


@base_space.register
def _(d: OrthogonalProjection) -> Space1D:
    return LineSpace()


@base_space.register
def _(d: DistanceToConvex) -> Space1D:
    return HalfLineSpace(0.0)


@base_space.register
def _(d: SignedDistanceSigmaPlane) -> Space1D:
    return SegmentSpace(-d.params.a, d.params.a)


@base_space.register
def _(d: SphereRotation) -> Space1D:
    return SegmentSpace(0.0, math.pi)


@base_space.register
def _(d: SignedDistanceSigmaSphere) -> Space1D:
    return SegmentSpace(-d.params.a, d.params.a)


@base_space.register
def _(d: ComposedSubmetry) -> Space1D:
    return map_codomain(d.outer)


def _left_normal(v):
    return -v[1], v[0]


def _clip_ray_to_disk(origin, direction, window: float):
    """Largest t >= 0 with |origin + t*direction| <= window, or None."""
    ox, oy = origin
    vx, vy = direction
    b = ox * vx + oy * vy
    c = ox * ox + oy * oy - window * window
    disc = b * b - c
    if disc < 0.0:
        return None
    t_hi = -b + math.sqrt(disc)
    return t_hi if t_hi > 0.0 else None


def _stadium_pieces(seed: SegmentSeed, y: float):
    p, q = seed.p, seed.q
    L = plane_distance(p, q)
    v = ((q.x - p.x) / L, (q.y - p.y) / L)
    n = _left_normal(v)
    ang_n = math.atan2(n[1], n[0])
    return (
        LineSegment(PlanePoint(p.x + y * n[0], p.y + y * n[1]),
                    PlanePoint(q.x + y * n[0], q.y + y * n[1])),
        CircularArc(q, y, ang_n, -math.pi),
        LineSegment(PlanePoint(q.x - y * n[0], q.y - y * n[1]),
                    PlanePoint(p.x - y * n[0], p.y - y * n[1])),
        CircularArc(p, y, wrap_angle(ang_n + math.pi), -math.pi),
    )


@singledispatch
def fiber(d, y: float, window: float = None) -> FiberSet:
    """The fiber over a base value, as an explicit piece list.

    Plane fibers are clipped to the disk of radius `window` about the
    origin; sphere fibers ignore the window.
    """
    raise InvalidInputError(f"unknown descriptor {type(d).__name__}")


def _require_window(window):
    if window is None:
        raise InvalidInputError("plane fibers need an explicit window radius")
    return float(window)


@fiber.register
def _(d: OrthogonalProjection, y: float, window: float = None) -> FiberSet:
    window = _require_window(window)
    ax, ay = d.axis
    n = _left_normal((ax, ay))
    if abs(y) >= window:
        return FiberSet(y, (), ())
    half = math.sqrt(window * window - y * y)
    seg = LineSegment(PlanePoint(y * ax - half * n[0], y * ay - half * n[1]),
                      PlanePoint(y * ax + half * n[0], y * ay + half * n[1]))
    return FiberSet(y, (seg,), ((0,),))


@fiber.register
def _(d: DistanceToConvex, y: float, window: float = None) -> FiberSet:
    window = _require_window(window)
    if y < 0.0:
        raise InvalidInputError(f"distance level must be nonnegative, got {y!r}")
    seed = d.seed
    if isinstance(seed, PointSeed):
        if y == 0.0:
            return FiberSet(0.0, (), (), (seed.p,))
        circle = CircularArc(seed.p, y, 0.0, 2.0 * math.pi)
        return FiberSet(y, (circle,), ((0,),))
    if isinstance(seed, SegmentSeed):
        if y == 0.0:
            return FiberSet(0.0, (LineSegment(seed.p, seed.q),), ((0,),))
        pieces = _stadium_pieces(seed, y)
        return FiberSet(y, pieces, piece_components(pieces))
    o = (seed.origin.x, seed.origin.y)
    v = seed.direction.dir
    n = _left_normal(v)
    ang_n = math.atan2(n[1], n[0])
    if y == 0.0:
        t_hi = _clip_ray_to_disk(o, v, window)
        if t_hi is None:
            return FiberSet(0.0, (), ())
        seg = LineSegment(seed.origin, PlanePoint(o[0] + t_hi * v[0], o[1] + t_hi * v[1]))
        return FiberSet(0.0, (seg,), ((0,),))
    pieces = [CircularArc(seed.origin, y, ang_n, math.pi)]
    for side in (+1.0, -1.0):
        start = (o[0] + side * y * n[0], o[1] + side * y * n[1])
        t_hi = _clip_ray_to_disk(start, v, window)
        if t_hi is not None:
            pieces.append(LineSegment(PlanePoint(*start),
                                      PlanePoint(start[0] + t_hi * v[0], start[1] + t_hi * v[1])))
    pieces = tuple(pieces)
    return FiberSet(y, pieces, piece_components(pieces))


@fiber.register
def _(d: SignedDistanceSigmaPlane, y: float, window: float = None) -> FiberSet:
    return fiber_plane(d.params, y, _require_window(window))


def _any_orthonormal(p: SpherePoint):
    ref = np.array([0.0, 0.0, 1.0]) if abs(p.z) < 0.9 else np.array([1.0, 0.0, 0.0])
    u = np.cross(ref, p.v)
    u /= np.linalg.norm(u)
    return u


@fiber.register
def _(d: SphereRotation, y: float, window: float = None) -> FiberSet:
    if not (0.0 <= y <= math.pi):
        raise InvalidInputError(f"colatitude must lie in [0, pi], got {y!r}")
    if y == 0.0:
        return FiberSet(0.0, (), (), (d.pole,))
    if abs(y - math.pi) <= 1e-15:
        return FiberSet(y, (), (), (d.pole.antipode,))
    u = _any_orthonormal(d.pole)
    circle = SphericalArc(d.pole, y, UnitTangent(d.pole, tuple(u)), 2.0 * math.pi)
    return FiberSet(y, (circle,), ((0,),))


@fiber.register
def _(d: SignedDistanceSigmaSphere, y: float, window: float = None) -> FiberSet:
    return fiber_sphere(d.params, y)


@fiber.register
def _(d: ComposedSubmetry, y: float, window: float = None) -> FiberSet:
    inner_base = base_space(d.inner)
    if isinstance(inner_base, (LineSpace, HalfLineSpace)):
        w = _require_window(window)
        scale = 4.0 * w + 4.0
        lo = getattr(inner_base, "origin", -scale)
        preimages = map_preimages(d.outer, y, (lo, scale))
    else:
        preimages = map_preimages(d.outer, y)
    pieces = []
    components = []
    singular = []
    for v in preimages:
        f = fiber(d.inner, v, window)
        offset = len(pieces)
        pieces.extend(f.pieces)
        components.extend(tuple(i + offset for i in comp) for comp in f.components)
        singular.extend(f.singular_points)
    return FiberSet(y, tuple(pieces), tuple(components), tuple(singular))


# ---------------------------------------------------------------------------
# singular sets

@singledispatch
def singular_set(d) -> SingularSet:
    raise InvalidInputError(f"unknown descriptor {type(d).__name__}")


@singular_set.register
def _(d: OrthogonalProjection) -> SingularSet:
    return SingularSet(())


@singular_set.register
def _(d: DistanceToConvex) -> SingularSet:
    return SingularSet(())


@singular_set.register
def _(d: SphereRotation) -> SingularSet:
    return SingularSet(())


@singular_set.register
def _(d: SignedDistanceSigmaPlane) -> SingularSet:
    return SingularSet((d.params.x0, d.params.y0))


@singular_set.register
def _(d: SignedDistanceSigmaSphere) -> SingularSet:
    pts = list(fiber_sphere(d.params, d.params.a).singular_points)
    pts += list(fiber_sphere(d.params, -d.params.a).singular_points)
    return SingularSet(tuple(pts))


@singular_set.register
def _(d: ComposedSubmetry) -> SingularSet:
    return singular_set(d.inner)


# ---------------------------------------------------------------------------
# enumeration of the spherical classification

def _sigma_arc_pattern(k: int, s: int):
    """The spherical curve as a set of (hemisphere, center longitude, radius)
    triples, normalized under the antipodal aliasing
    circle(c, r) == circle(-c, pi - r)."""
    a = math.pi / (2.0 * k)
    arcs = []
    for i in range(k):
        arcs.append((+1, 0.0, (1 + 2 * i) * a))
        arcs.append((-1, 2.0 * a * s, (1 + 2 * i) * a))
    return arcs


def _canonical_arc(hem: int, lon: float, r: float):
    if r > math.pi / 2.0 + 1e-12:
        lon, r = lon + math.pi, math.pi - r
    lon = lon % (2.0 * math.pi)
    if abs(r - math.pi / 2.0) <= 1e-12 and lon >= math.pi - 1e-12:
        lon -= math.pi
    return hem, round(lon % (2.0 * math.pi), 9), round(r, 9)


def _pattern_key(arcs):
    return frozenset(_canonical_arc(*arc) for arc in arcs)


def congruent_sigma(k: int, s1: int, s2: int) -> bool:
    """Whether the two spherical curves agree up to an isometry, decided by
    matching their junction/arc patterns under all candidate equator-preserving
    isometries (rotations, meridian reflections, hemisphere swap)."""
    base = _pattern_key(_sigma_arc_pattern(k, s1))
    target_arcs = _sigma_arc_pattern(k, s2)
    target = _pattern_key(target_arcs)
    candidate_deltas = set()
    for _, lon, _ in target_arcs:
        for src_lon in (0.0, 2.0 * math.pi / (2.0 * k) * s1, math.pi):
            candidate_deltas.add(round(lon - src_lon, 12))
            candidate_deltas.add(round(lon + src_lon, 12))
    for sgn in (1.0, -1.0):
        for flip in (False, True):
            for delta in candidate_deltas:
                moved = []
                for hem, lon, r in _sigma_arc_pattern(k, s1):
                    moved.append((-hem if flip else hem, sgn * lon + delta, r))
                if _pattern_key(moved) == target:
                    return True
    return False


def valid_sphere_s(k: int):
    """All odd s in [1, 2k) coprime with k."""
    return [s for s in range(1, 2 * k, 2) if math.gcd(s, k) == 1]


def enumerate_sphere(k_max: int):
    """Representatives of every isometry class of spherical decompositions
    with k <= k_max: the rotation quotient plus one glued-arc curve per
    congruence class of valid s."""
    if k_max < 1:
        raise InvalidInputError(f"k_max must be at least 1, got {k_max!r}")
    out = [SphereRotation(NORTH)]
    for k in range(2, k_max + 1):
        reps = []
        for s in valid_sphere_s(k):
            if not any(congruent_sigma(k, r, s) for r in reps):
                reps.append(s)
        out.extend(SignedDistanceSigmaSphere(SphereSigmaParams(k, s)) for s in reps)
    return out
