"""JSON schemas for descriptors, curves, fibers, 1-D spaces/maps, and
reports.

All documents are plain JSON objects with a "type"/"kind" tag and numeric
fields (angles in radians).  `canonical_dumps` provides the byte-stable
encoding used for round-trip guarantees.
"""

from __future__ import annotations

import json

from .catalog import (
    DistanceToConvex,
    HalfLineSeed,
    OrthogonalProjection,
    PointSeed,
    SegmentSeed,
    SignedDistanceSigmaPlane,
    SignedDistanceSigmaSphere,
    SphereRotation,
)
from .errors import InvalidInputError
from .geometry import (
    CircularArc,
    LineSegment,
    PlanePoint,
    SpherePoint,
    SphericalArc,
    UnitTangent,
)
from .leaves import FiberSet, Junction, LeafCurve, PlaneSigmaParams, SphereSigmaParams
from .quotient import (
    CircleSpace,
    ComposedSubmetry,
    CoverCircleToCircle,
    CoverLineToCircle,
    FoldCircleToSegment,
    FoldHalfLineToSegment,
    FoldLineToHalfLine,
    FoldLineToSegment,
    FoldSegmentToSegment,
    HalfLineSpace,
    IdentityMap,
    LineSpace,
    SegmentSpace,
)


def canonical_dumps(doc) -> str:
    """Deterministic JSON encoding: sorted keys, tight separators."""
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))


def _point(p) -> list:
    return [float(c) for c in p]


def piece_to_json(piece) -> dict:
    if isinstance(piece, LineSegment):
        return {"kind": "line_segment", "p": _point(piece.p), "q": _point(piece.q)}
    if isinstance(piece, CircularArc):
        return {"kind": "circular_arc", "center": _point(piece.center),
                "radius": piece.radius, "start_angle": piece.start_angle,
                "sweep": piece.sweep}
    return {"kind": "spherical_arc", "center": _point(piece.center),
            "angular_radius": piece.angular_radius,
            "start_dir": list(piece.start_dir.dir), "sweep": piece.sweep}


def piece_from_json(doc: dict):
    kind = doc.get("kind")
    if kind == "line_segment":
        return LineSegment(PlanePoint(*doc["p"]), PlanePoint(*doc["q"]))
    if kind == "circular_arc":
        return CircularArc(PlanePoint(*doc["center"]), doc["radius"],
                           doc["start_angle"], doc["sweep"])
    if kind == "spherical_arc":
        center = SpherePoint(*doc["center"])
        return SphericalArc(center, doc["angular_radius"],
                            UnitTangent(center, tuple(doc["start_dir"])), doc["sweep"])
    raise InvalidInputError(f"unknown piece kind {kind!r}")


def curve_to_json(curve: LeafCurve) -> dict:
    return {
        "ambient": curve.ambient,
        "pieces": [piece_to_json(p) for p in curve.pieces],
        "orientation": list(curve.orientation),
        "junctions": [[j.left, j.right, _point(j.point)] for j in curve.junctions],
        "metadata": dict(curve.metadata),
    }


def curve_from_json(doc: dict) -> LeafCurve:
    ambient = doc["ambient"]
    mk = (lambda c: SpherePoint(*c)) if ambient == "sphere" else (lambda c: PlanePoint(*c))
    junctions = tuple(Junction(int(i), int(j), mk(pt)) for i, j, pt in doc["junctions"])
    return LeafCurve(ambient, tuple(piece_from_json(p) for p in doc["pieces"]),
                     tuple(int(o) for o in doc["orientation"]), junctions,
                     dict(doc.get("metadata", {})))


def fiber_to_json(f: FiberSet) -> dict:
    return {
        "level": f.level,
        "pieces": [piece_to_json(p) for p in f.pieces],
        "components": [list(c) for c in f.components],
        "singular_points": [_point(p) for p in f.singular_points],
    }


def fiber_from_json(doc: dict) -> FiberSet:
    pieces = tuple(piece_from_json(p) for p in doc["pieces"])
    sphere = any(isinstance(p, SphericalArc) for p in pieces) or \
        any(len(sp) == 3 for sp in doc.get("singular_points", []))
    mk = (lambda c: SpherePoint(*c)) if sphere else (lambda c: PlanePoint(*c))
    return FiberSet(doc["level"], pieces,
                    tuple(tuple(int(i) for i in c) for c in doc["components"]),
                    tuple(mk(sp) for sp in doc.get("singular_points", [])))


def space_to_json(space) -> dict:
    if isinstance(space, LineSpace):
        return {"type": "line"}
    if isinstance(space, HalfLineSpace):
        return {"type": "half_line", "origin": space.origin}
    if isinstance(space, SegmentSpace):
        return {"type": "segment", "lo": space.lo, "hi": space.hi}
    return {"type": "circle", "length": space.length}


def space_from_json(doc: dict):
    t = doc.get("type")
    if t == "line":
        return LineSpace()
    if t == "half_line":
        return HalfLineSpace(doc.get("origin", 0.0))
    if t == "segment":
        return SegmentSpace(doc["lo"], doc["hi"])
    if t == "circle":
        return CircleSpace(doc["length"])
    raise InvalidInputError(f"unknown space type {t!r}")


_MAP_FIELDS = {
    "identity": (IdentityMap, ()),
    "cover_line_to_circle": (CoverLineToCircle, ("circumference",)),
    "fold_line_to_half_line": (FoldLineToHalfLine, ("pivot",)),
    "fold_line_to_segment": (FoldLineToSegment, ("period", "phase")),
    "fold_half_line_to_segment": (FoldHalfLineToSegment, ("length", "origin")),
    "cover_circle_to_circle": (CoverCircleToCircle, ("circumference", "degree")),
    "fold_circle_to_segment": (FoldCircleToSegment, ("circumference", "half_period")),
    "fold_segment_to_segment": (FoldSegmentToSegment, ("lo", "hi", "degree", "phase")),
}

_MAP_NAMES = {cls: name for name, (cls, _) in _MAP_FIELDS.items()}


def map_to_json(m) -> dict:
    name = _MAP_NAMES[type(m)]
    doc = {"type": name}
    if isinstance(m, IdentityMap):
        doc["space"] = space_to_json(m.space)
    else:
        for f in _MAP_FIELDS[name][1]:
            doc[f] = getattr(m, f)
    return doc


def map_from_json(doc: dict):
    t = doc.get("type")
    if t not in _MAP_FIELDS:
        raise InvalidInputError(f"unknown map type {t!r}")
    cls, fields = _MAP_FIELDS[t]
    if cls is IdentityMap:
        return IdentityMap(space_from_json(doc["space"]))
    return cls(**{f: doc[f] for f in fields if f in doc})


def seed_to_json(seed) -> dict:
    if isinstance(seed, PointSeed):
        return {"kind": "point", "p": _point(seed.p)}
    if isinstance(seed, SegmentSeed):
        return {"kind": "segment", "p": _point(seed.p), "q": _point(seed.q)}
    return {"kind": "half_line", "origin": _point(seed.origin),
            "direction": list(seed.direction.dir)}


def seed_from_json(doc: dict):
    kind = doc.get("kind")
    if kind == "point":
        return PointSeed(PlanePoint(*doc["p"]))
    if kind == "segment":
        return SegmentSeed(PlanePoint(*doc["p"]), PlanePoint(*doc["q"]))
    if kind == "half_line":
        origin = PlanePoint(*doc["origin"])
        return HalfLineSeed(origin, UnitTangent(origin, tuple(doc["direction"])))
    raise InvalidInputError(f"unknown seed kind {kind!r}")


def descriptor_to_json(d) -> dict:
    if isinstance(d, OrthogonalProjection):
        return {"type": "orthogonal_projection", "axis_angle": d.axis_angle}
    if isinstance(d, DistanceToConvex):
        return {"type": "distance_to_convex", "seed": seed_to_json(d.seed)}
    if isinstance(d, SignedDistanceSigmaPlane):
        return {"type": "plane_sigma", "a": d.params.a, "h": d.params.h}
    if isinstance(d, SphereRotation):
        return {"type": "sphere_rotation", "pole": _point(d.pole)}
    if isinstance(d, SignedDistanceSigmaSphere):
        return {"type": "sphere_sigma", "k": d.params.k, "s": d.params.s}
    if isinstance(d, ComposedSubmetry):
        return {"type": "composed", "inner": descriptor_to_json(d.inner),
                "outer": map_to_json(d.outer)}
    raise InvalidInputError(f"unknown descriptor {type(d).__name__}")


def descriptor_from_json(doc: dict):
    t = doc.get("type")
    if t == "orthogonal_projection":
        return OrthogonalProjection(doc.get("axis_angle", 0.0))
    if t == "distance_to_convex":
        return DistanceToConvex(seed_from_json(doc["seed"]))
    if t == "plane_sigma":
        return SignedDistanceSigmaPlane(PlaneSigmaParams(doc["a"], doc.get("h", 0.0)))
    if t == "sphere_rotation":
        pole = doc.get("pole", [0.0, 0.0, 1.0])
        return SphereRotation(SpherePoint(*pole))
    if t == "sphere_sigma":
        return SignedDistanceSigmaSphere(SphereSigmaParams(int(doc["k"]), int(doc["s"])))
    if t == "composed":
        from .quotient import compose
        return compose(descriptor_from_json(doc["inner"]), map_from_json(doc["outer"]))
    raise InvalidInputError(f"unknown descriptor type {t!r}")
