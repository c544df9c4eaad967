"""One-dimensional base spaces as quotients of the line, and the discrete
fiber folding/covering maps between them.

Every 1-D Alexandrov space is R/G for a discrete isometry group G: the line
itself, a circle (translation), a half line (reflection), or a segment
(translation plus reflection).  The submetries with discrete fibers between
such spaces are modular reductions and triangle-wave folds; composing one
with a connected-fiber decomposition produces the disconnected-fiber
decompositions of the plane and the sphere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import InvalidInputError, InvalidParameterError
from .leaves import wrap

_ALIGN_TOL = 1e-9


# ---------------------------------------------------------------------------
# spaces

@dataclass(frozen=True)
class LineSpace:
    pass


@dataclass(frozen=True)
class HalfLineSpace:
    origin: float = 0.0


@dataclass(frozen=True)
class SegmentSpace:
    lo: float
    hi: float

    def __post_init__(self):
        if not self.hi > self.lo:
            raise InvalidParameterError(f"segment needs hi > lo, got [{self.lo!r}, {self.hi!r}]")

    @property
    def length(self) -> float:
        return self.hi - self.lo


@dataclass(frozen=True)
class CircleSpace:
    length: float

    def __post_init__(self):
        if not self.length > 0.0:
            raise InvalidParameterError(f"circle length must be positive, got {self.length!r}")


Space1D = Union[LineSpace, HalfLineSpace, SegmentSpace, CircleSpace]


def space_contains(space: Space1D, x: float, tol: float = 1e-9) -> bool:
    if isinstance(space, LineSpace):
        return True
    if isinstance(space, HalfLineSpace):
        return x >= space.origin - tol
    if isinstance(space, SegmentSpace):
        return space.lo - tol <= x <= space.hi + tol
    return 0.0 - tol <= x <= space.length + tol


def base_distance(space: Space1D, x: float, y: float) -> float:
    """Metric of the base space; circles use arc distance."""
    if isinstance(space, CircleSpace):
        d = abs(wrap(x - y, space.length))
        return min(d, space.length - d)
    return abs(x - y)


def clip_interval(space: Space1D, center: float, radius: float):
    """The closed radius-ball around `center`, clipped to the space.

    Returns (lo, hi) for interval-like spaces and ("circle", lo, hi) when the
    ball is a circle arc (hi - lo may exceed the circumference: full circle).
    """
    if isinstance(space, LineSpace):
        return center - radius, center + radius
    if isinstance(space, HalfLineSpace):
        return max(space.origin, center - radius), center + radius
    if isinstance(space, SegmentSpace):
        return max(space.lo, center - radius), min(space.hi, center + radius)
    return ("circle", center - radius, center + radius)


# ---------------------------------------------------------------------------
# groups

@dataclass(frozen=True)
class TrivialGroup:
    pass


@dataclass(frozen=True)
class TranslationGroup:
    a: float

    def __post_init__(self):
        if not self.a > 0.0:
            raise InvalidParameterError(f"translation step must be positive, got {self.a!r}")


@dataclass(frozen=True)
class ReflectionGroup:
    b: float


@dataclass(frozen=True)
class TranslationReflectionGroup:
    a: float
    b: float

    def __post_init__(self):
        if not self.a > 0.0:
            raise InvalidParameterError(f"parameter a must be positive, got {self.a!r}")


IsometryGroup1D = Union[TrivialGroup, TranslationGroup, ReflectionGroup, TranslationReflectionGroup]


def quotient_space(group: IsometryGroup1D) -> Space1D:
    """R/G for each discrete isometry group of the line."""
    if isinstance(group, TrivialGroup):
        return LineSpace()
    if isinstance(group, TranslationGroup):
        return CircleSpace(group.a)
    if isinstance(group, ReflectionGroup):
        return HalfLineSpace(group.b)
    if group.a >= group.b:
        raise InvalidInputError(
            f"translation-reflection group needs a < b, got a = {group.a!r}, b = {group.b!r}")
    return SegmentSpace(group.a, group.b)


# ---------------------------------------------------------------------------
# discrete-fiber maps

@dataclass(frozen=True)
class IdentityMap:
    space: Space1D


@dataclass(frozen=True)
class CoverLineToCircle:
    circumference: float

    def __post_init__(self):
        if not self.circumference > 0.0:
            raise InvalidParameterError("circumference must be positive")


@dataclass(frozen=True)
class FoldLineToHalfLine:
    pivot: float = 0.0


@dataclass(frozen=True)
class FoldLineToSegment:
    period: float
    phase: float = 0.0

    def __post_init__(self):
        if not self.period > 0.0:
            raise InvalidParameterError("period must be positive")

    @property
    def half_period(self) -> float:
        return self.period / 2.0


@dataclass(frozen=True)
class FoldHalfLineToSegment:
    length: float
    origin: float = 0.0

    def __post_init__(self):
        if not self.length > 0.0:
            raise InvalidParameterError("length must be positive")


@dataclass(frozen=True)
class CoverCircleToCircle:
    circumference: float
    degree: int

    def __post_init__(self):
        if not self.circumference > 0.0:
            raise InvalidParameterError("circumference must be positive")
        if not (isinstance(self.degree, int) and self.degree >= 1):
            raise InvalidParameterError(f"degree must be a positive integer, got {self.degree!r}")


@dataclass(frozen=True)
class FoldCircleToSegment:
    circumference: float
    half_period: float

    def __post_init__(self):
        if not (self.circumference > 0.0 and self.half_period > 0.0):
            raise InvalidParameterError("circumference and half period must be positive")
        ratio = self.circumference / (2.0 * self.half_period)
        if abs(ratio - round(ratio)) > 1e-9 or round(ratio) < 1:
            raise InvalidParameterError(
                "circumference must be an even multiple of the half period for the "
                "fold to be well defined on the circle")

    @property
    def degree(self) -> int:
        return int(round(self.circumference / (2.0 * self.half_period)))


@dataclass(frozen=True)
class FoldSegmentToSegment:
    """Degree-k fold of a segment onto a segment 1/k its length.

    The phase must be a multiple of the half period: otherwise a domain
    endpoint would map to an interior value and balls there would not map
    onto balls.
    """

    lo: float
    hi: float
    degree: int
    phase: float = 0.0

    def __post_init__(self):
        if not self.hi > self.lo:
            raise InvalidParameterError("segment needs hi > lo")
        if not (isinstance(self.degree, int) and self.degree >= 1):
            raise InvalidParameterError(f"degree must be a positive integer, got {self.degree!r}")
        L = self.half_period
        ratio = self.phase / L
        if abs(ratio - round(ratio)) > 1e-9:
            raise InvalidParameterError(
                f"phase must be a multiple of the half period {L!r}, got {self.phase!r}")

    @property
    def half_period(self) -> float:
        return (self.hi - self.lo) / self.degree


DiscreteMap1D = Union[
    IdentityMap, CoverLineToCircle, FoldLineToHalfLine, FoldLineToSegment,
    FoldHalfLineToSegment, CoverCircleToCircle, FoldCircleToSegment, FoldSegmentToSegment,
]


def map_domain(m: DiscreteMap1D) -> Space1D:
    if isinstance(m, IdentityMap):
        return m.space
    if isinstance(m, (CoverLineToCircle, FoldLineToHalfLine, FoldLineToSegment)):
        return LineSpace()
    if isinstance(m, FoldHalfLineToSegment):
        return HalfLineSpace(m.origin)
    if isinstance(m, (CoverCircleToCircle, FoldCircleToSegment)):
        return CircleSpace(m.circumference)
    return SegmentSpace(m.lo, m.hi)


def map_codomain(m: DiscreteMap1D) -> Space1D:
    if isinstance(m, IdentityMap):
        return m.space
    if isinstance(m, CoverLineToCircle):
        return CircleSpace(m.circumference)
    if isinstance(m, FoldLineToHalfLine):
        return HalfLineSpace(0.0)
    if isinstance(m, FoldLineToSegment):
        return SegmentSpace(0.0, m.half_period)
    if isinstance(m, FoldHalfLineToSegment):
        return SegmentSpace(0.0, m.length)
    if isinstance(m, CoverCircleToCircle):
        return CircleSpace(m.circumference / m.degree)
    if isinstance(m, FoldCircleToSegment):
        return SegmentSpace(0.0, m.half_period)
    return SegmentSpace(0.0, m.half_period)


def _triangle(u, L):
    return L - np.abs(wrap(u, 2.0 * L) - L)


def apply_map(m: DiscreteMap1D, x):
    """Value of the folding/covering map; accepts scalars or arrays.

    Scalar inputs are checked against the map's domain.
    """
    scalar = np.isscalar(x)
    if scalar and not space_contains(map_domain(m), float(x)):
        raise InvalidInputError(f"{x!r} outside the domain of {type(m).__name__}")
    x = np.asarray(x, dtype=float)
    if isinstance(m, IdentityMap):
        out = x
    elif isinstance(m, CoverLineToCircle):
        out = wrap(x, m.circumference)
    elif isinstance(m, FoldLineToHalfLine):
        out = np.abs(x - m.pivot)
    elif isinstance(m, FoldLineToSegment):
        out = _triangle(x - m.phase, m.half_period)
    elif isinstance(m, FoldHalfLineToSegment):
        out = _triangle(x - m.origin, m.length)
    elif isinstance(m, CoverCircleToCircle):
        out = wrap(x, m.circumference / m.degree)
    elif isinstance(m, FoldCircleToSegment):
        out = _triangle(x, m.half_period)
    else:
        out = _triangle(x - m.lo - m.phase, m.half_period)
    return float(out) if out.ndim == 0 else out


def map_preimages(m: DiscreteMap1D, y: float, window=None) -> list:
    """All domain points mapping to y; for unbounded domains only those in
    the closed interval `window` = (lo, hi)."""
    cod = map_codomain(m)
    if not space_contains(cod, y):
        raise InvalidInputError(f"{y!r} outside the codomain of {type(m).__name__}")

    def in_window(vals):
        if window is None:
            return sorted(set(vals))
        lo, hi = window
        return sorted({v for v in vals if lo - 1e-12 <= v <= hi + 1e-12})

    if isinstance(m, IdentityMap):
        return [y]
    if isinstance(m, CoverLineToCircle):
        if window is None:
            raise InvalidInputError("a window is required to enumerate preimages on the line")
        lo, hi = window
        c = m.circumference
        n0 = math.floor((lo - y) / c)
        vals = []
        n = n0
        while y + n * c <= hi + 1e-12:
            if y + n * c >= lo - 1e-12:
                vals.append(y + n * c)
            n += 1
        return vals
    if isinstance(m, FoldLineToHalfLine):
        return in_window({m.pivot + y, m.pivot - y})
    if isinstance(m, FoldLineToSegment):
        if window is None:
            raise InvalidInputError("a window is required to enumerate preimages on the line")
        lo, hi = window
        T = m.period
        vals = set()
        for branch in (y, -y):
            n0 = math.floor((lo - m.phase - branch) / T)
            n = n0
            while m.phase + branch + n * T <= hi + 1e-12:
                v = m.phase + branch + n * T
                if v >= lo - 1e-12:
                    vals.add(v)
                n += 1
        return sorted(vals)
    if isinstance(m, FoldHalfLineToSegment):
        if window is None:
            raise InvalidInputError("a window is required to enumerate preimages on a half line")
        hi = window[1]
        vals = set()
        n = 0
        while m.origin + 2.0 * n * m.length - abs(y) <= hi + 1e-12:
            for v in (m.origin + 2.0 * n * m.length + y, m.origin + 2.0 * n * m.length - y):
                if m.origin - 1e-12 <= v <= hi + 1e-12:
                    vals.add(v)
            n += 1
        return sorted(vals)
    if isinstance(m, CoverCircleToCircle):
        step = m.circumference / m.degree
        return sorted(wrap(y + i * step, m.circumference) for i in range(m.degree))
    if isinstance(m, FoldCircleToSegment):
        vals = set()
        n = 0
        while 2.0 * n * m.half_period < m.circumference - 1e-12:
            vals.add(round(wrap(2.0 * n * m.half_period + y, m.circumference), 12))
            vals.add(round(wrap(2.0 * n * m.half_period - y, m.circumference), 12))
            n += 1
        return sorted(vals)
    vals = set()
    L = m.half_period
    n = 0
    while m.lo + m.phase + 2.0 * n * L - abs(y) <= m.hi + 1e-12:
        for v in (m.lo + m.phase + 2.0 * n * L + y, m.lo + m.phase + 2.0 * n * L - y):
            if m.lo - 1e-12 <= v <= m.hi + 1e-12:
                vals.add(round(v, 12))
        n += 1
    # the phase may also leave room below lo + phase
    n = -1
    while m.lo + m.phase + 2.0 * n * L + abs(y) >= m.lo - 1e-12:
        for v in (m.lo + m.phase + 2.0 * n * L + y, m.lo + m.phase + 2.0 * n * L - y):
            if m.lo - 1e-12 <= v <= m.hi + 1e-12:
                vals.add(round(v, 12))
        n -= 1
    return sorted(vals)


@dataclass(frozen=True)
class MapFamily:
    """One item of the classification with its free parameters left symbolic."""

    kind: str
    free: tuple
    fixed: dict

    def instantiate(self, **params) -> DiscreteMap1D:
        missing = set(self.free) - set(params)
        if missing:
            raise InvalidInputError(f"family {self.kind} needs parameters {sorted(missing)}")
        kw = dict(self.fixed)
        kw.update({k: params[k] for k in self.free if k in params})
        ctor = {
            "identity": IdentityMap,
            "cover_line_to_circle": CoverLineToCircle,
            "fold_line_to_half_line": FoldLineToHalfLine,
            "fold_line_to_segment": FoldLineToSegment,
            "fold_half_line_to_segment": FoldHalfLineToSegment,
            "cover_circle_to_circle": CoverCircleToCircle,
            "fold_circle_to_segment": FoldCircleToSegment,
            "fold_segment_to_segment": FoldSegmentToSegment,
        }[self.kind]
        if self.kind == "fold_circle_to_segment" and "degree" in kw:
            k = kw.pop("degree")
            kw["half_period"] = self.fixed["circumference"] / (2.0 * k)
        return ctor(**kw)


def enumerate_maps(domain: Space1D) -> list:
    """The families of discrete-fiber submetries out of a 1-D space."""
    if isinstance(domain, LineSpace):
        return [
            MapFamily("identity", (), {"space": domain}),
            MapFamily("cover_line_to_circle", ("circumference",), {}),
            MapFamily("fold_line_to_half_line", ("pivot",), {}),
            MapFamily("fold_line_to_segment", ("period", "phase"), {}),
        ]
    if isinstance(domain, HalfLineSpace):
        return [
            MapFamily("identity", (), {"space": domain}),
            MapFamily("fold_half_line_to_segment", ("length",), {"origin": domain.origin}),
        ]
    if isinstance(domain, SegmentSpace):
        return [
            MapFamily("identity", (), {"space": domain}),
            MapFamily("fold_segment_to_segment", ("degree", "phase"),
                      {"lo": domain.lo, "hi": domain.hi}),
        ]
    return [
        MapFamily("identity", (), {"space": domain}),
        MapFamily("cover_circle_to_circle", ("degree",), {"circumference": domain.length}),
        MapFamily("fold_circle_to_segment", ("degree",), {"circumference": domain.length}),
    ]


# ---------------------------------------------------------------------------
# composition

@dataclass(frozen=True)
class ComposedSubmetry:
    """A connected-fiber decomposition post-composed with a discrete-fiber
    map of its base."""

    inner: object
    outer: DiscreteMap1D


def _align_outer(inner_base: Space1D, outer: DiscreteMap1D) -> DiscreteMap1D:
    """Recenter the outer map so its domain coincides with the inner base."""
    dom = map_domain(outer)
    if type(dom) is not type(inner_base):
        raise InvalidInputError(
            f"outer map domain {type(dom).__name__} does not match the inner base "
            f"{type(inner_base).__name__}")
    if isinstance(dom, LineSpace):
        return outer
    if isinstance(dom, CircleSpace):
        if abs(dom.length - inner_base.length) > _ALIGN_TOL:
            raise InvalidInputError("circle lengths differ")
        return outer
    if isinstance(dom, HalfLineSpace):
        delta = inner_base.origin - dom.origin
        if abs(delta) <= _ALIGN_TOL:
            return outer
        if isinstance(outer, IdentityMap):
            return IdentityMap(inner_base)
        return FoldHalfLineToSegment(outer.length, origin=inner_base.origin)
    if abs(dom.hi - dom.lo - (inner_base.hi - inner_base.lo)) > _ALIGN_TOL:
        raise InvalidInputError(
            f"segment lengths differ: {dom.hi - dom.lo!r} vs {inner_base.hi - inner_base.lo!r}")
    delta = inner_base.lo - dom.lo
    if abs(delta) <= _ALIGN_TOL:
        return outer
    if isinstance(outer, IdentityMap):
        return IdentityMap(inner_base)
    return FoldSegmentToSegment(inner_base.lo, inner_base.hi, outer.degree, outer.phase)


def compose(inner, outer: DiscreteMap1D) -> ComposedSubmetry:
    """Compose a catalog descriptor with a discrete map of its base space."""
    from .catalog import base_space

    aligned = _align_outer(base_space(inner), outer)
    return ComposedSubmetry(inner, aligned)
