"""Leaf curves of the two exotic decompositions and their signed distance
fields.

The planar curve glues two families of concentric half circles (radii
(1+2i)*a about the two centers) across an optional strip of width h; the
spherical curve glues k half circles in each hemisphere.  The signed
distance to either curve is, region by region, a triangle wave in the radial
coordinate; fibers of any level are recovered by solving that wave, which
makes offsetting and clipping exact.

Canonical placement (plane): the upper boundary line is y = h/2, the lower
one y = -h/2, the upper center sits at (0, h/2) and the lower center at
(2a, -h/2), so the centers are sqrt(4a^2 + h^2) apart.  Canonical placement
(sphere): the equator is z = 0, the upper center is (1, 0, 0) and the lower
center sits on the equator at longitude 2*a*s with a = pi/(2k).

Sign convention: the upper center is the positive pole, f(x0) = +a.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidInputError, InvalidParameterError
from .geometry import (
    CircularArc,
    CurvePiece,
    LineSegment,
    PlanePoint,
    Point,
    SpherePoint,
    SphericalArc,
    UnitTangent,
    piece_endpoint_data,
    point_on_piece,
    reverse_piece,
    sphere_distance,
)

# Endpoint matching tolerance for junctions and connectivity.
JUNCTION_TOL = 1e-10


def wrap(u, period):
    """Floor-based wrap of u into [0, period)."""
    return u - period * np.floor(u / period)


def fold_wave(u, a: float):
    """Triangle-wave level of a point at radial distance u from a region
    center: period 4a, value a at u = 0, zeros at u = a + 2ma, 1-Lipschitz.

    Accepts scalars or arrays; negative u folds symmetrically.
    """
    if a <= 0:
        raise InvalidParameterError(f"wave scale must be positive, got {a!r}")
    out = np.abs(wrap(np.asarray(u, dtype=float), 4.0 * a) - 2.0 * a) - a
    return float(out) if out.ndim == 0 else out


def level_radii(eps: float, a: float, u_max: float) -> list:
    """All u in [0, u_max] with fold_wave(u, a) == eps, exactly.

    The solutions are (a - eps) + 4ma and (3a + eps) + 4ma; at |eps| = a the
    two branches merge.
    """
    if abs(eps) > a + 1e-15:
        raise InvalidInputError(f"level {eps!r} outside [-a, a] with a = {a!r}")
    radii = set()
    for base in ((a - eps), (3.0 * a + eps)):
        m = 0
        while True:
            u = base + 4.0 * a * m
            if u > u_max + 1e-12:
                break
            if u >= 0.0:
                radii.add(round(u, 15))
            m += 1
    return sorted(radii)


@dataclass(frozen=True)
class PlaneSigmaParams:
    """Half-width a > 0 of the base spacing and strip width h >= 0."""

    a: float
    h: float = 0.0

    def __post_init__(self):
        if not (self.a > 0.0 and math.isfinite(self.a)):
            raise InvalidParameterError(f"a must be positive, got {self.a!r}")
        if not (self.h >= 0.0 and math.isfinite(self.h)):
            raise InvalidParameterError(f"h must be nonnegative, got {self.h!r}")
        object.__setattr__(self, "a", float(self.a))
        object.__setattr__(self, "h", float(self.h))

    @property
    def x0(self) -> PlanePoint:
        return PlanePoint(0.0, self.h / 2.0)

    @property
    def y0(self) -> PlanePoint:
        return PlanePoint(2.0 * self.a, -self.h / 2.0)

    @property
    def center_distance(self) -> float:
        return math.hypot(2.0 * self.a, self.h)


@dataclass(frozen=True)
class SphereSigmaParams:
    """k >= 2 half circles per hemisphere, centers 2*a*s apart on the
    equator with a = pi/(2k); s must be odd and coprime with k for the glued
    curve to be a single connected leaf."""

    k: int
    s: int

    def __post_init__(self):
        if not (isinstance(self.k, int) and self.k >= 2):
            raise InvalidParameterError(f"k must be an integer >= 2, got {self.k!r}")
        if not (isinstance(self.s, int) and 1 <= self.s <= 2 * self.k - 1):
            raise InvalidParameterError(f"s must be an integer in [1, 2k-1], got {self.s!r}")

    def validate(self):
        if self.s % 2 == 0:
            raise InvalidParameterError(f"s must be odd, got s = {self.s}")
        if math.gcd(self.s, self.k) != 1:
            raise InvalidParameterError(
                f"s must be coprime with k, got gcd({self.s}, {self.k}) = {math.gcd(self.s, self.k)}")

    @property
    def is_valid(self) -> bool:
        return self.s % 2 == 1 and math.gcd(self.s, self.k) == 1

    @property
    def a(self) -> float:
        return math.pi / (2.0 * self.k)

    @property
    def x0(self) -> SpherePoint:
        return SpherePoint(1.0, 0.0, 0.0)

    @property
    def y0(self) -> SpherePoint:
        lon = 2.0 * self.a * self.s
        return SpherePoint.normalized(math.cos(lon), math.sin(lon), 0.0)


@dataclass(frozen=True)
class RegionCoordinate:
    region: str  # upper_cap | lower_cap | strip | upper_hemisphere | lower_hemisphere
    u: float


@dataclass(frozen=True)
class Junction:
    left: int
    right: int
    point: Point


@dataclass(frozen=True)
class LeafCurve:
    """An ordered piecewise curve with junction metadata.

    orientation[i] is +1 when the positive-level side of piece i is the
    center side (arcs) or the left of travel (segments), -1 otherwise.
    """

    ambient: str
    pieces: tuple
    orientation: tuple
    junctions: tuple
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        if len(self.orientation) != len(self.pieces):
            raise InvalidInputError("one orientation flag per piece required")


@dataclass(frozen=True)
class FiberSet:
    """Explicit piece list of one fiber, with connectivity components and
    any degenerate isolated points (radius-0 or radius-pi solutions)."""

    level: float
    pieces: tuple
    components: tuple
    singular_points: tuple = ()


def region_coordinate_plane(params: PlaneSigmaParams, p: PlanePoint) -> RegionCoordinate:
    """Classify p into the closed caps or the open strip, with its radial
    coordinate (caps) or axial offset (strip)."""
    half = params.h / 2.0
    if p.y >= half:
        return RegionCoordinate("upper_cap", math.hypot(p.x - params.x0.x, p.y - params.x0.y))
    if p.y <= -half:
        return RegionCoordinate("lower_cap", math.hypot(p.x - params.y0.x, p.y - params.y0.y))
    return RegionCoordinate("strip", abs(p.x - params.x0.x))


def signed_distance_plane(params: PlaneSigmaParams, p: PlanePoint) -> float:
    """Signed distance to the planar leaf curve, in [-a, a]."""
    rc = region_coordinate_plane(params, p)
    if rc.region == "lower_cap":
        return -fold_wave(rc.u, params.a)
    return fold_wave(rc.u, params.a)


def signed_distance_plane_batch(params: PlaneSigmaParams, pts: np.ndarray) -> np.ndarray:
    pts = np.asarray(pts, dtype=float)
    half = params.h / 2.0
    x0, y0 = params.x0, params.y0
    upper = pts[:, 1] >= half
    lower = pts[:, 1] <= -half
    u = np.abs(pts[:, 0] - x0.x)
    u = np.where(upper, np.hypot(pts[:, 0] - x0.x, pts[:, 1] - x0.y), u)
    u = np.where(lower, np.hypot(pts[:, 0] - y0.x, pts[:, 1] - y0.y), u)
    f = fold_wave(u, params.a)
    return np.where(lower, -f, f)


def signed_distance_sphere(params: SphereSigmaParams, p: SpherePoint) -> float:
    """Signed distance to the spherical leaf curve, in [-a, a]."""
    params.validate()
    if p.z >= 0.0:
        return fold_wave(sphere_distance(p, params.x0), params.a)
    return -fold_wave(sphere_distance(p, params.y0), params.a)


def signed_distance_sphere_batch(params: SphereSigmaParams, pts: np.ndarray) -> np.ndarray:
    params.validate()
    pts = np.asarray(pts, dtype=float)
    x0, y0 = params.x0.v, params.y0.v
    du = np.arctan2(np.linalg.norm(np.cross(pts, x0), axis=1), pts @ x0)
    dl = np.arctan2(np.linalg.norm(np.cross(pts, y0), axis=1), pts @ y0)
    return np.where(pts[:, 2] >= 0.0, fold_wave(du, params.a), -fold_wave(dl, params.a))


def _equator_tangent(center: SpherePoint) -> UnitTangent:
    """Tangent at an equator point along increasing longitude."""
    lon = math.atan2(center.y, center.x)
    return UnitTangent(center, (-math.sin(lon), math.cos(lon), 0.0))


def _hemisphere_half_circle(center: SpherePoint, radius: float, upper: bool) -> SphericalArc:
    """Half circle of `radius` about an equator point, contained in the
    closed upper (sweep +pi) or lower (sweep -pi) hemisphere; endpoints on
    the equator at longitudes lon(center) +- radius."""
    return SphericalArc(center, radius, _equator_tangent(center), math.pi if upper else -math.pi)


def _cap_half_circle(params: PlaneSigmaParams, radius: float, upper: bool) -> CircularArc:
    """Half circle of radius about x0 in the closed upper half plane, or
    about y0 in the lower one; endpoints on the boundary lines."""
    if upper:
        return CircularArc(params.x0, radius, 0.0, math.pi)
    return CircularArc(params.y0, radius, math.pi, math.pi)


def _strip_segment(params: PlaneSigmaParams, x: float) -> LineSegment:
    return LineSegment(PlanePoint(x, params.h / 2.0), PlanePoint(x, -params.h / 2.0))


def _endpoints_of(piece: CurvePiece):
    e = piece_endpoint_data(piece)
    return e.start, e.end


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, i: int) -> int:
        while self.parent[i] != i:
            self.parent[i] = self.parent[self.parent[i]]
            i = self.parent[i]
        return i

    def union(self, i: int, j: int):
        ri, rj = self.find(i), self.find(j)
        if ri != rj:
            self.parent[rj] = ri


def _match_endpoints(pieces, tol: float = JUNCTION_TOL):
    """Pairs (i, end_i, j, end_j, point) of coinciding piece endpoints."""
    entries = []
    for i, piece in enumerate(pieces):
        s, e = _endpoints_of(piece)
        entries.append((i, 0, s))
        entries.append((i, 1, e))
    pairs = []
    for n, (i, ei, p) in enumerate(entries):
        for j, ej, q in entries[n + 1:]:
            if i == j:
                continue
            if all(abs(a - b) <= tol for a, b in zip(p, q)):
                pairs.append((i, ei, j, ej, p))
    return pairs


def piece_components(pieces, tol: float = JUNCTION_TOL):
    """Connected components of a piece list by endpoint matching."""
    uf = _UnionFind(len(pieces))
    for i, _, j, _, _ in _match_endpoints(pieces, tol):
        uf.union(i, j)
    groups = {}
    for i in range(len(pieces)):
        groups.setdefault(uf.find(i), []).append(i)
    return tuple(tuple(g) for g in groups.values())


def _chain_pieces(pieces, tol: float = JUNCTION_TOL):
    """Order and orient pieces into chains; returns (ordered pieces, junctions,
    index map old->position)."""
    n = len(pieces)
    adj = {}  # (piece, end) -> (other piece, other end)
    for i, ei, j, ej, _ in _match_endpoints(pieces, tol):
        adj[(i, ei)] = (j, ej)
        adj[(j, ej)] = (i, ei)

    visited = [False] * n
    ordered = []
    junctions = []

    def key_of(i):
        s, e = _endpoints_of(pieces[i])
        return min(tuple(s), tuple(e))

    def walk(start_i, start_end):
        """Walk a chain starting at piece start_i entering from endpoint
        start_end (0 = start, 1 = end)."""
        chain = []
        i, entry = start_i, start_end
        while True:
            visited[i] = True
            chain.append(pieces[i] if entry == 0 else reverse_piece(pieces[i]))
            nxt = adj.get((i, 1 - entry))
            if nxt is None:
                break
            j, ej = nxt
            if visited[j]:
                break
            i, entry = j, ej
        return chain

    # open chains first, from their dangling ends
    free_ends = []
    for i in range(n):
        s, e = _endpoints_of(pieces[i])
        if (i, 0) not in adj:
            free_ends.append((tuple(s), i, 0))
        if (i, 1) not in adj:
            free_ends.append((tuple(e), i, 1))
    for _, i, ei in sorted(free_ends):
        if not visited[i]:
            ordered.extend(walk(i, ei))
    # remaining pieces sit on closed loops
    for i in sorted(range(n), key=key_of):
        if not visited[i]:
            ordered.extend(walk(i, 0))

    # recompute junctions between consecutive oriented pieces
    for idx in range(len(ordered)):
        nxt = (idx + 1) % len(ordered)
        if nxt == idx:
            break
        e = piece_endpoint_data(ordered[idx]).end
        s = piece_endpoint_data(ordered[nxt]).start
        if all(abs(a - b) <= tol for a, b in zip(e, s)):
            junctions.append(Junction(idx, nxt, e))
    return ordered, tuple(junctions)


def _orientation_flags(pieces, level_fn, scale: float):
    """Per-piece +1/-1 flag: +1 when the positive-level side is the center
    side (arcs) or the left of travel (segments)."""
    flags = []
    delta = 1e-4 * scale
    for piece in pieces:
        e = piece_endpoint_data(piece)
        mid = point_on_piece(piece, 0.5)
        if isinstance(piece, LineSegment):
            d = e.start_tangent.dir
            nleft = (-d[1], d[0])
            plus = PlanePoint(mid.x + delta * nleft[0], mid.y + delta * nleft[1])
            minus = PlanePoint(mid.x - delta * nleft[0], mid.y - delta * nleft[1])
        elif isinstance(piece, CircularArc):
            rx, ry = mid.x - piece.center.x, mid.y - piece.center.y
            rp = math.hypot(rx, ry)
            plus = PlanePoint(mid.x - delta * rx / rp, mid.y - delta * ry / rp)
            minus = PlanePoint(mid.x + delta * rx / rp, mid.y + delta * ry / rp)
        else:
            c = piece.center.v
            mv = mid.v
            toward = c - float(np.dot(c, mv)) * mv
            toward /= np.linalg.norm(toward)
            plus = SpherePoint.from_vec(math.cos(delta) * mv + math.sin(delta) * toward)
            minus = SpherePoint.from_vec(math.cos(delta) * mv - math.sin(delta) * toward)
        flags.append(1 if level_fn(plus) > level_fn(minus) else -1)
    return tuple(flags)


def build_sigma_plane(params: PlaneSigmaParams, window_radius: float) -> LeafCurve:
    """The planar leaf curve, truncated to pieces with radius (arcs) or
    offset (strip segments) at most window_radius."""
    if not window_radius > params.center_distance:
        raise InvalidInputError(
            f"window radius {window_radius!r} must exceed the center distance "
            f"{params.center_distance!r}")
    a, h = params.a, params.h
    pieces = []
    radii = level_radii(0.0, a, window_radius)
    for r in radii:
        pieces.append(_cap_half_circle(params, r, upper=True))
    for r in radii:
        pieces.append(_cap_half_circle(params, r, upper=False))
    if h > 0.0:
        m = 0
        while (2 * m + 1) * a <= window_radius + 1e-12:
            x = (2 * m + 1) * a
            pieces.append(_strip_segment(params, x))
            pieces.append(_strip_segment(params, -x))
            m += 1
    ordered, junctions = _chain_pieces(pieces)
    flags = _orientation_flags(ordered, lambda p: signed_distance_plane(params, p), a)
    return LeafCurve("plane", tuple(ordered), flags, junctions,
                     {"kind": "plane_sigma", "a": a, "h": h, "window_radius": window_radius})


def build_sigma_sphere(params: SphereSigmaParams, allow_disconnected: bool = False) -> LeafCurve:
    """The spherical leaf curve: k half circles about each center, glued
    along the equator into one closed C^1 loop.

    With allow_disconnected=True the parameter validation is bypassed so the
    connectivity oracle can inspect invalid (k, s); the result may then have
    several components and carries no orientation guarantee for even s.
    """
    if not allow_disconnected:
        params.validate()
    a = params.a
    pieces = []
    for i in range(params.k):
        pieces.append(_hemisphere_half_circle(params.x0, (1 + 2 * i) * a, upper=True))
    for i in range(params.k):
        pieces.append(_hemisphere_half_circle(params.y0, (1 + 2 * i) * a, upper=False))
    ordered, junctions = _chain_pieces(pieces)
    if params.is_valid:
        flags = _orientation_flags(ordered, lambda p: signed_distance_sphere(params, p), a)
    else:
        flags = tuple(1 for _ in ordered)
    return LeafCurve("sphere", tuple(ordered), flags, junctions,
                     {"kind": "sphere_sigma", "k": params.k, "s": params.s})


def fiber_plane(params: PlaneSigmaParams, eps: float, window_radius: float) -> FiberSet:
    """The fiber at level eps of the planar decomposition, clipped to the
    window.  Radius-0 solutions enter as singular points; boundary fibers
    (|eps| = a) are half-lines anchored there."""
    a, h = params.a, params.h
    if abs(eps) > a + 1e-15:
        raise InvalidInputError(f"level {eps!r} outside [-{a}, {a}]")
    pieces = []
    singular = []
    upper = level_radii(eps, a, window_radius)
    lower = level_radii(-eps, a, window_radius)
    for r in upper:
        if r == 0.0:
            singular.append(params.x0)
        else:
            pieces.append(_cap_half_circle(params, r, upper=True))
    for r in lower:
        if r == 0.0:
            singular.append(params.y0)
        else:
            pieces.append(_cap_half_circle(params, r, upper=False))
    if h > 0.0:
        for u in level_radii(eps, a, window_radius):
            if u == 0.0:
                pieces.append(_strip_segment(params, 0.0))
            else:
                pieces.append(_strip_segment(params, u))
                pieces.append(_strip_segment(params, -u))
    return FiberSet(eps, tuple(pieces), piece_components(pieces), tuple(singular))


def fiber_sphere(params: SphereSigmaParams, eps: float) -> FiberSet:
    """The fiber at level eps of the spherical decomposition.  Radius-0 and
    radius-pi solutions enter as singular points (the four boundary-fiber
    endpoints)."""
    a = params.a
    if abs(eps) > a + 1e-15:
        raise InvalidInputError(f"level {eps!r} outside [-{a}, {a}]")
    params.validate()
    pieces = []
    singular = []
    for r in level_radii(eps, a, math.pi):
        if r == 0.0:
            singular.append(params.x0)
        elif abs(r - math.pi) <= 1e-12:
            singular.append(params.x0.antipode)
        else:
            pieces.append(_hemisphere_half_circle(params.x0, r, upper=True))
    for r in level_radii(-eps, a, math.pi):
        if r == 0.0:
            singular.append(params.y0)
        elif abs(r - math.pi) <= 1e-12:
            singular.append(params.y0.antipode)
        else:
            pieces.append(_hemisphere_half_circle(params.y0, r, upper=False))
    return FiberSet(eps, tuple(pieces), piece_components(pieces), tuple(singular))
