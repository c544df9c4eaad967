"""Exact primitives for points, tangents, and curve pieces in the plane and
on the unit sphere.

Pieces are line segments, circular arcs, and spherical (small-circle) arcs.
A spherical arc with angular radius pi/2 is a great-circle arc.  Closest-point
queries are exact; ties break toward the smaller arc parameter so that
results are reproducible.  Everything here is an immutable value and all
operations are pure functions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Union

import numpy as np

from .errors import AmbientMismatchError, InvalidInputError

TWO_PI = 2.0 * math.pi

# Tolerance for unit-norm / orthogonality invariants on stored values.
UNIT_TOL = 1e-12


def wrap_angle(theta: float) -> float:
    """Normalize an angle to (-pi, pi]."""
    w = math.fmod(theta, TWO_PI)
    if w <= -math.pi:
        w += TWO_PI
    elif w > math.pi:
        w -= TWO_PI
    return w


@dataclass(frozen=True)
class PlanePoint:
    x: float
    y: float

    def __post_init__(self):
        object.__setattr__(self, "x", float(self.x))
        object.__setattr__(self, "y", float(self.y))
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise InvalidInputError(f"plane point has non-finite coordinates: ({self.x}, {self.y})")

    @property
    def v(self) -> np.ndarray:
        return np.array([self.x, self.y])

    def __iter__(self):
        yield self.x
        yield self.y


@dataclass(frozen=True)
class SpherePoint:
    """A point on the unit sphere; the stored vector must be unit to 1e-12."""

    x: float
    y: float
    z: float

    def __post_init__(self):
        object.__setattr__(self, "x", float(self.x))
        object.__setattr__(self, "y", float(self.y))
        object.__setattr__(self, "z", float(self.z))
        n = math.sqrt(self.x * self.x + self.y * self.y + self.z * self.z)
        if not math.isfinite(n) or abs(n - 1.0) > UNIT_TOL:
            raise InvalidInputError(f"sphere point is not unit: |v| = {n!r}")

    @classmethod
    def normalized(cls, x: float, y: float, z: float) -> "SpherePoint":
        n = math.sqrt(x * x + y * y + z * z)
        if n == 0.0 or not math.isfinite(n):
            raise InvalidInputError("cannot normalize a zero or non-finite vector")
        return cls(x / n, y / n, z / n)

    @classmethod
    def from_vec(cls, v) -> "SpherePoint":
        return cls.normalized(float(v[0]), float(v[1]), float(v[2]))

    @property
    def v(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])

    @property
    def antipode(self) -> "SpherePoint":
        return SpherePoint(-self.x, -self.y, -self.z)

    def __iter__(self):
        yield self.x
        yield self.y
        yield self.z


Point = Union[PlanePoint, SpherePoint]


@dataclass(frozen=True)
class UnitTangent:
    """A unit direction attached to a base point; on the sphere the direction
    must lie in the tangent plane of the base."""

    base: Point
    dir: tuple

    def __post_init__(self):
        d = tuple(float(c) for c in self.dir)
        object.__setattr__(self, "dir", d)
        n = math.sqrt(sum(c * c for c in d))
        if abs(n - 1.0) > UNIT_TOL:
            raise InvalidInputError(f"tangent direction is not unit: |dir| = {n!r}")
        if isinstance(self.base, SpherePoint):
            if len(d) != 3:
                raise InvalidInputError("sphere tangent needs a 3-vector direction")
            dot = d[0] * self.base.x + d[1] * self.base.y + d[2] * self.base.z
            if abs(dot) > UNIT_TOL:
                raise InvalidInputError(f"tangent not orthogonal to base point: <dir, base> = {dot!r}")
        elif len(d) != 2:
            raise InvalidInputError("plane tangent needs a 2-vector direction")

    @property
    def v(self) -> np.ndarray:
        return np.array(self.dir)


@dataclass(frozen=True)
class LineSegment:
    p: PlanePoint
    q: PlanePoint

    def __post_init__(self):
        if self.p.x == self.q.x and self.p.y == self.q.y:
            raise InvalidInputError("degenerate segment: endpoints coincide")


@dataclass(frozen=True)
class CircularArc:
    """Arc of the circle of `radius` about `center`, from `start_angle`
    through a signed `sweep`; angles in radians, start normalized to (-pi, pi]."""

    center: PlanePoint
    radius: float
    start_angle: float
    sweep: float

    def __post_init__(self):
        if not (self.radius > 0.0 and math.isfinite(self.radius)):
            raise InvalidInputError(f"arc radius must be positive, got {self.radius!r}")
        if not (0.0 < abs(self.sweep) <= TWO_PI + 1e-15):
            raise InvalidInputError(f"arc sweep must satisfy 0 < |sweep| <= 2*pi, got {self.sweep!r}")
        object.__setattr__(self, "radius", float(self.radius))
        object.__setattr__(self, "start_angle", wrap_angle(float(self.start_angle)))
        object.__setattr__(self, "sweep", float(np.clip(self.sweep, -TWO_PI, TWO_PI)))


@dataclass(frozen=True)
class SphericalArc:
    """Arc of the small circle at angular distance `angular_radius` from
    `center`, swept from the azimuth of `start_dir`.

    With frame u = start_dir and w = center x u, the parametrization is
    point(t) = cos(r) * center + sin(r) * (cos(t) * u + sin(t) * w) for t
    running from 0 to `sweep`.  angular_radius = pi/2 gives a great circle.
    """

    center: SpherePoint
    angular_radius: float
    start_dir: UnitTangent
    sweep: float

    def __post_init__(self):
        if not (0.0 < self.angular_radius < math.pi):
            raise InvalidInputError(
                f"spherical arc radius must lie in (0, pi), got {self.angular_radius!r}")
        if not (0.0 < abs(self.sweep) <= TWO_PI + 1e-15):
            raise InvalidInputError(f"arc sweep must satisfy 0 < |sweep| <= 2*pi, got {self.sweep!r}")
        if not isinstance(self.start_dir.base, SpherePoint):
            raise InvalidInputError("start_dir must be a sphere tangent")
        b = self.start_dir.base
        if sphere_distance(b, self.center) > 1e-9:
            raise InvalidInputError("start_dir must be based at the arc center")
        object.__setattr__(self, "angular_radius", float(self.angular_radius))
        object.__setattr__(self, "sweep", float(np.clip(self.sweep, -TWO_PI, TWO_PI)))

    @property
    def frame(self):
        """Orthonormal frame (c, u, w) with w = c x u."""
        c = self.center.v
        u = self.start_dir.v
        w = np.cross(c, u)
        return c, u, w


CurvePiece = Union[LineSegment, CircularArc, SphericalArc]


class PieceDistance(NamedTuple):
    distance: float
    foot: Point
    foot_is_endpoint: bool


class EndpointData(NamedTuple):
    start: Point
    start_tangent: UnitTangent
    end: Point
    end_tangent: UnitTangent


def plane_distance(p: PlanePoint, q: PlanePoint) -> float:
    return math.hypot(p.x - q.x, p.y - q.y)


def sphere_distance(p: SpherePoint, q: SpherePoint) -> float:
    """Geodesic (angular) distance, accurate for small and near-pi angles."""
    pv, qv = p.v, q.v
    return math.atan2(np.linalg.norm(np.cross(pv, qv)), float(np.dot(pv, qv)))


def point_distance(p: Point, q: Point) -> float:
    if isinstance(p, PlanePoint) and isinstance(q, PlanePoint):
        return plane_distance(p, q)
    if isinstance(p, SpherePoint) and isinstance(q, SpherePoint):
        return sphere_distance(p, q)
    raise AmbientMismatchError("points live in different ambient spaces")


def sphere_geodesic(start: SpherePoint, direction: UnitTangent, t: float) -> SpherePoint:
    """Arclength-parametrized great circle cos(t)*start + sin(t)*dir."""
    if not isinstance(direction.base, SpherePoint) or sphere_distance(direction.base, start) > 1e-9:
        raise InvalidInputError("direction must be based at the start point")
    v = math.cos(t) * start.v + math.sin(t) * direction.v
    return SpherePoint.from_vec(v)


def piece_ambient(piece: CurvePiece) -> str:
    return "sphere" if isinstance(piece, SphericalArc) else "plane"


def piece_length(piece: CurvePiece) -> float:
    if isinstance(piece, LineSegment):
        return plane_distance(piece.p, piece.q)
    if isinstance(piece, CircularArc):
        return piece.radius * abs(piece.sweep)
    return math.sin(piece.angular_radius) * abs(piece.sweep)


def point_on_piece(piece: CurvePiece, s: float) -> Point:
    """Constant-speed point at normalized parameter s in [0, 1]."""
    if not (0.0 <= s <= 1.0):
        raise InvalidInputError(f"parameter must lie in [0, 1], got {s!r}")
    if isinstance(piece, LineSegment):
        return PlanePoint(piece.p.x + s * (piece.q.x - piece.p.x),
                          piece.p.y + s * (piece.q.y - piece.p.y))
    if isinstance(piece, CircularArc):
        theta = piece.start_angle + s * piece.sweep
        return PlanePoint(piece.center.x + piece.radius * math.cos(theta),
                          piece.center.y + piece.radius * math.sin(theta))
    c, u, w = piece.frame
    theta = s * piece.sweep
    cr, sr = math.cos(piece.angular_radius), math.sin(piece.angular_radius)
    v = cr * c + sr * (math.cos(theta) * u + math.sin(theta) * w)
    return SpherePoint.from_vec(v)


def piece_points_at(piece: CurvePiece, s: np.ndarray) -> np.ndarray:
    """Constant-speed points at arbitrary normalized parameters (vectorized)."""
    s = np.asarray(s, dtype=float)
    if isinstance(piece, LineSegment):
        return np.stack([piece.p.x + s * (piece.q.x - piece.p.x),
                         piece.p.y + s * (piece.q.y - piece.p.y)], axis=1)
    if isinstance(piece, CircularArc):
        theta = piece.start_angle + s * piece.sweep
        return np.stack([piece.center.x + piece.radius * np.cos(theta),
                         piece.center.y + piece.radius * np.sin(theta)], axis=1)
    c, u, w = piece.frame
    theta = s * piece.sweep
    cr, sr = math.cos(piece.angular_radius), math.sin(piece.angular_radius)
    pts = cr * c + sr * (np.cos(theta)[:, None] * u + np.sin(theta)[:, None] * w)
    pts /= np.linalg.norm(pts, axis=1, keepdims=True)
    return pts


def sample_piece(piece: CurvePiece, n: int) -> np.ndarray:
    """(n+1, dim) array of constant-speed samples including both endpoints."""
    return piece_points_at(piece, np.linspace(0.0, 1.0, n + 1))


def piece_endpoint_data(piece: CurvePiece) -> EndpointData:
    """Endpoints with unit tangents pointing in the direction of increasing
    parameter."""
    if isinstance(piece, LineSegment):
        L = plane_distance(piece.p, piece.q)
        d = ((piece.q.x - piece.p.x) / L, (piece.q.y - piece.p.y) / L)
        return EndpointData(piece.p, UnitTangent(piece.p, d), piece.q, UnitTangent(piece.q, d))
    if isinstance(piece, CircularArc):
        sgn = 1.0 if piece.sweep >= 0 else -1.0

        def at(theta):
            pt = PlanePoint(piece.center.x + piece.radius * math.cos(theta),
                            piece.center.y + piece.radius * math.sin(theta))
            tan = UnitTangent(pt, (-sgn * math.sin(theta), sgn * math.cos(theta)))
            return pt, tan

        p0, t0 = at(piece.start_angle)
        p1, t1 = at(piece.start_angle + piece.sweep)
        return EndpointData(p0, t0, p1, t1)
    c, u, w = piece.frame
    cr, sr = math.cos(piece.angular_radius), math.sin(piece.angular_radius)
    sgn = 1.0 if piece.sweep >= 0 else -1.0

    def at(theta):
        pt = SpherePoint.from_vec(cr * c + sr * (math.cos(theta) * u + math.sin(theta) * w))
        tv = sgn * (-math.sin(theta) * u + math.cos(theta) * w)
        tv = tv - float(np.dot(tv, pt.v)) * pt.v
        tv /= np.linalg.norm(tv)
        return pt, UnitTangent(pt, tuple(tv))

    p0, t0 = at(0.0)
    p1, t1 = at(piece.sweep)
    return EndpointData(p0, t0, p1, t1)


def reverse_piece(piece: CurvePiece) -> CurvePiece:
    """The same point set traversed in the opposite direction."""
    if isinstance(piece, LineSegment):
        return LineSegment(piece.q, piece.p)
    if isinstance(piece, CircularArc):
        return CircularArc(piece.center, piece.radius,
                           wrap_angle(piece.start_angle + piece.sweep), -piece.sweep)
    c, u, w = piece.frame
    theta = piece.sweep
    u2 = math.cos(theta) * u + math.sin(theta) * w
    u2 /= np.linalg.norm(u2)
    return SphericalArc(piece.center, piece.angular_radius,
                        UnitTangent(piece.center, tuple(u2)), -piece.sweep)


def _arc_azimuth_offset(piece, theta_p: float):
    """Signed-parameter offset of azimuth theta_p from the arc start, in
    [0, 2*pi), measured along the sweep direction."""
    if piece.sweep >= 0:
        delta = math.fmod(theta_p - piece.start_angle, TWO_PI)
    else:
        delta = math.fmod(piece.start_angle - theta_p, TWO_PI)
    if delta < 0.0:
        delta += TWO_PI
    return delta


def distance_to_piece(point: Point, piece: CurvePiece) -> PieceDistance:
    """Exact minimal geodesic distance from `point` to the piece, with the
    attaining foot point.  Degenerate ties (e.g. the arc center) resolve to
    parameter 0."""
    if isinstance(piece, (LineSegment, CircularArc)):
        if not isinstance(point, PlanePoint):
            raise AmbientMismatchError("plane piece probed with a non-plane point")
    else:
        if not isinstance(point, SpherePoint):
            raise AmbientMismatchError("spherical arc probed with a non-sphere point")

    if isinstance(piece, LineSegment):
        dx, dy = piece.q.x - piece.p.x, piece.q.y - piece.p.y
        L2 = dx * dx + dy * dy
        t = ((point.x - piece.p.x) * dx + (point.y - piece.p.y) * dy) / L2
        t = min(1.0, max(0.0, t))
        foot = PlanePoint(piece.p.x + t * dx, piece.p.y + t * dy)
        return PieceDistance(plane_distance(point, foot), foot, t in (0.0, 1.0))

    if isinstance(piece, CircularArc):
        rx, ry = point.x - piece.center.x, point.y - piece.center.y
        rp = math.hypot(rx, ry)
        if rp == 0.0:
            return PieceDistance(piece.radius, point_on_piece(piece, 0.0), True)
        theta_p = math.atan2(ry, rx)
        delta = _arc_azimuth_offset(piece, theta_p)
        if delta <= abs(piece.sweep):
            foot = PlanePoint(piece.center.x + piece.radius * rx / rp,
                              piece.center.y + piece.radius * ry / rp)
            return PieceDistance(abs(rp - piece.radius), foot,
                                 delta == 0.0 or delta == abs(piece.sweep))
        ends = piece_endpoint_data(piece)
        d0 = plane_distance(point, ends.start)
        d1 = plane_distance(point, ends.end)
        if d0 <= d1:
            return PieceDistance(d0, ends.start, True)
        return PieceDistance(d1, ends.end, True)

    c, u, w = piece.frame
    pv = point.v
    rho = piece.angular_radius
    rho_p = math.atan2(np.linalg.norm(np.cross(pv, c)), float(np.dot(pv, c)))
    a1, a2 = float(np.dot(pv, u)), float(np.dot(pv, w))
    if math.hypot(a1, a2) < 1e-15:
        # point at (anti)center: every azimuth is equidistant
        return PieceDistance(abs(rho_p - rho), point_on_piece(piece, 0.0), True)
    theta_p = math.atan2(a2, a1)
    if piece.sweep >= 0:
        delta = math.fmod(theta_p, TWO_PI)
    else:
        delta = math.fmod(-theta_p, TWO_PI)
    if delta < 0.0:
        delta += TWO_PI
    if delta <= abs(piece.sweep):
        theta = theta_p
        cr, sr = math.cos(rho), math.sin(rho)
        foot = SpherePoint.from_vec(cr * c + sr * (math.cos(theta) * u + math.sin(theta) * w))
        return PieceDistance(abs(rho_p - rho), foot, delta == 0.0 or delta == abs(piece.sweep))
    ends = piece_endpoint_data(piece)
    d0 = sphere_distance(point, ends.start)
    d1 = sphere_distance(point, ends.end)
    if d0 <= d1:
        return PieceDistance(d0, ends.start, True)
    return PieceDistance(d1, ends.end, True)


def piece_min_dist_batch(piece: CurvePiece, pts: np.ndarray):
    """Vectorized exact distance from many points to one piece.

    Returns (dist, feet) with dist shape (n,) and feet shape (n, dim).
    """
    pts = np.asarray(pts, dtype=float)
    if isinstance(piece, LineSegment):
        p = np.array([piece.p.x, piece.p.y])
        d = np.array([piece.q.x - piece.p.x, piece.q.y - piece.p.y])
        L2 = float(d @ d)
        t = np.clip(((pts - p) @ d) / L2, 0.0, 1.0)
        feet = p + t[:, None] * d
        return np.linalg.norm(pts - feet, axis=1), feet

    if isinstance(piece, CircularArc):
        rel = pts - np.array([piece.center.x, piece.center.y])
        rp = np.linalg.norm(rel, axis=1)
        theta_p = np.arctan2(rel[:, 1], rel[:, 0])
        if piece.sweep >= 0:
            delta = np.mod(theta_p - piece.start_angle, TWO_PI)
        else:
            delta = np.mod(piece.start_angle - theta_p, TWO_PI)
        inside = delta <= abs(piece.sweep)
        safe = np.where(rp > 0.0, rp, 1.0)
        radial = rel / safe[:, None]
        ends = piece_endpoint_data(piece)
        e0 = np.array([ends.start.x, ends.start.y])
        e1 = np.array([ends.end.x, ends.end.y])
        d0 = np.linalg.norm(pts - e0, axis=1)
        d1 = np.linalg.norm(pts - e1, axis=1)
        dist_in = np.abs(rp - piece.radius)
        feet_in = np.array([piece.center.x, piece.center.y]) + piece.radius * radial
        # rp == 0 counts as inside with the tie foot at parameter 0
        feet_in[rp == 0.0] = e0
        inside = inside | (rp == 0.0)
        dist_out = np.minimum(d0, d1)
        feet_out = np.where((d0 <= d1)[:, None], e0, e1)
        dist = np.where(inside, dist_in, dist_out)
        feet = np.where(inside[:, None], feet_in, feet_out)
        return dist, feet

    c, u, w = piece.frame
    rho = piece.angular_radius
    dotc = pts @ c
    rho_p = np.arctan2(np.linalg.norm(np.cross(pts, c), axis=1), dotc)
    a1, a2 = pts @ u, pts @ w
    theta_p = np.arctan2(a2, a1)
    if piece.sweep >= 0:
        delta = np.mod(theta_p, TWO_PI)
    else:
        delta = np.mod(-theta_p, TWO_PI)
    degenerate = np.hypot(a1, a2) < 1e-15
    inside = (delta <= abs(piece.sweep)) | degenerate
    cr, sr = math.cos(rho), math.sin(rho)
    feet_in = cr * c + sr * (np.cos(theta_p)[:, None] * u + np.sin(theta_p)[:, None] * w)
    ends = piece_endpoint_data(piece)
    e0, e1 = ends.start.v, ends.end.v
    feet_in[degenerate] = e0
    d0 = np.arctan2(np.linalg.norm(np.cross(pts, e0), axis=1), pts @ e0)
    d1 = np.arctan2(np.linalg.norm(np.cross(pts, e1), axis=1), pts @ e1)
    dist = np.where(inside, np.abs(rho_p - rho), np.minimum(d0, d1))
    feet = np.where(inside[:, None], feet_in, np.where((d0 <= d1)[:, None], e0, e1))
    return dist, feet


def pieces_min_dist(pieces, pts: np.ndarray):
    """Minimal distance from each point to a collection of pieces.

    Returns (dist, piece_index, feet).
    """
    pts = np.asarray(pts, dtype=float)
    n = pts.shape[0]
    best = np.full(n, np.inf)
    best_idx = np.full(n, -1, dtype=np.int64)
    best_feet = np.zeros_like(pts)
    for i, piece in enumerate(pieces):
        d, feet = piece_min_dist_batch(piece, pts)
        better = d < best
        best[better] = d[better]
        best_idx[better] = i
        best_feet[better] = feet[better]
    return best, best_idx, best_feet
