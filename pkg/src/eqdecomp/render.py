"""SVG figures of decompositions: fibers drawn as exact-arc polylines.

Plane figures use direct coordinates inside the window; sphere figures show
two orthographic hemisphere disks side by side (upper z >= 0 on the left,
lower z <= 0 on the right, the equator being the shared rim).  The middle
fiber draws black, the two boundary families blue and green.  Every path
carries data attributes with its piece inventory (kind, center, radius,
level) so figures remain machine-checkable.
"""

from __future__ import annotations

import math
from xml.sax.saxutils import quoteattr

import numpy as np

from .catalog import ambient_of, base_space, fiber
from .errors import InvalidInputError
from .geometry import CircularArc, LineSegment, sample_piece
from .quotient import SegmentSpace, space_contains

SAMPLES_PER_PI = 256

COLOR_MIDDLE = "#000000"
COLOR_PLUS = "#1f6feb"
COLOR_MINUS = "#1a7f37"
COLOR_OTHER = "#999999"


def _polyline(piece) -> np.ndarray:
    if isinstance(piece, LineSegment):
        return sample_piece(piece, 1)
    n = max(2, int(math.ceil(SAMPLES_PER_PI * abs(piece.sweep) / math.pi)))
    return sample_piece(piece, n)


def _level_color(level: float, base) -> str:
    if isinstance(base, SegmentSpace):
        span = base.hi - base.lo
        if abs(level - base.hi) <= 1e-12 * max(1.0, span):
            return COLOR_PLUS
        if abs(level - base.lo) <= 1e-12 * max(1.0, span):
            return COLOR_MINUS
    if abs(level) <= 1e-12:
        return COLOR_MIDDLE
    return COLOR_OTHER


def _piece_attrs(piece, level: float, idx: int) -> str:
    parts = [f'data-level={quoteattr(repr(float(level)))}', f'data-piece="{idx}"']
    if isinstance(piece, LineSegment):
        parts.append('data-kind="line_segment"')
        parts.append(f'data-p={quoteattr(" ".join(repr(float(c)) for c in piece.p))}')
        parts.append(f'data-q={quoteattr(" ".join(repr(float(c)) for c in piece.q))}')
    elif isinstance(piece, CircularArc):
        parts.append('data-kind="circular_arc"')
        parts.append(f'data-center={quoteattr(" ".join(repr(float(c)) for c in piece.center))}')
        parts.append(f'data-radius={quoteattr(repr(float(piece.radius)))}')
        parts.append(f'data-sweep={quoteattr(repr(float(piece.sweep)))}')
    else:
        parts.append('data-kind="spherical_arc"')
        parts.append(f'data-center={quoteattr(" ".join(repr(float(c)) for c in piece.center))}')
        parts.append(f'data-radius={quoteattr(repr(float(piece.angular_radius)))}')
        parts.append(f'data-sweep={quoteattr(repr(float(piece.sweep)))}')
    return " ".join(parts)


def _path(points_px: np.ndarray, color: str, width: float, attrs: str) -> str:
    coords = " L ".join(f"{x:.3f} {y:.3f}" for x, y in points_px)
    return (f'<path d="M {coords}" fill="none" stroke="{color}" '
            f'stroke-width="{width:.2f}" stroke-linecap="round" {attrs}/>')


def _render_plane(d, levels, window: float, size: int, stroke: float) -> list:
    scale = size / (2.0 * window)

    def to_px(pts):
        return np.stack([(pts[:, 0] + window) * scale, (window - pts[:, 1]) * scale], axis=1)

    base = base_space(d)
    out = [f'<circle cx="{size/2}" cy="{size/2}" r="{size/2:.1f}" fill="none" '
           f'stroke="#dddddd" stroke-width="1"/>']
    for level in levels:
        f = fiber(d, level, window)
        color = _level_color(level, base)
        width = stroke * (1.4 if color == COLOR_MIDDLE else 1.0)
        for i, piece in enumerate(f.pieces):
            out.append(_path(to_px(_polyline(piece)), color, width,
                             _piece_attrs(piece, level, i)))
        for sp in f.singular_points:
            px = to_px(np.array([[sp.x, sp.y]]))[0]
            out.append(f'<circle cx="{px[0]:.3f}" cy="{px[1]:.3f}" r="{2.0*stroke:.2f}" '
                       f'fill="{color}" data-level={quoteattr(repr(float(level)))} '
                       f'data-kind="point"/>')
    return out


def _render_sphere(d, levels, size: int, stroke: float) -> list:
    r_px = size / 2.0 - 8.0
    cxu, cxl, cy = size / 2.0, size * 1.5, size / 2.0

    def upper_px(pts):
        return np.stack([cxu + pts[:, 0] * r_px, cy - pts[:, 1] * r_px], axis=1)

    def lower_px(pts):
        return np.stack([cxl + pts[:, 0] * r_px, cy + pts[:, 1] * r_px], axis=1)

    base = base_space(d)
    out = [f'<circle cx="{cxu}" cy="{cy}" r="{r_px:.1f}" fill="none" stroke="#dddddd"/>',
           f'<circle cx="{cxl}" cy="{cy}" r="{r_px:.1f}" fill="none" stroke="#dddddd"/>']
    for level in levels:
        f = fiber(d, level)
        color = _level_color(level, base)
        width = stroke * (1.4 if color == COLOR_MIDDLE else 1.0)
        for i, piece in enumerate(f.pieces):
            pts = _polyline(piece)
            attrs = _piece_attrs(piece, level, i)
            for mask, proj in ((pts[:, 2] >= -1e-9, upper_px), (pts[:, 2] <= 1e-9, lower_px)):
                runs = _runs(mask)
                for a, b in runs:
                    if b - a >= 2:
                        out.append(_path(proj(pts[a:b]), color, width, attrs))
        for sp in f.singular_points:
            proj = upper_px if sp.z >= 0.0 else lower_px
            px = proj(np.array([[sp.x, sp.y, sp.z]]))[0]
            out.append(f'<circle cx="{px[0]:.3f}" cy="{px[1]:.3f}" r="{2.0*stroke:.2f}" '
                       f'fill="{color}" data-level={quoteattr(repr(float(level)))} '
                       f'data-kind="point"/>')
    return out


def _runs(mask: np.ndarray) -> list:
    """Maximal index ranges [a, b) where mask holds."""
    runs = []
    a = None
    for i, m in enumerate(mask):
        if m and a is None:
            a = i
        elif not m and a is not None:
            runs.append((a, i))
            a = None
    if a is not None:
        runs.append((a, len(mask)))
    return runs


def render_svg(d, levels, window: float = None, size: int = 640,
               stroke: float = 1.5) -> str:
    """An SVG document showing the listed fibers of the decomposition."""
    base = base_space(d)
    for level in levels:
        if not space_contains(base, level):
            raise InvalidInputError(f"level {level!r} outside the base space")
    if ambient_of(d) == "plane":
        if window is None:
            raise InvalidInputError("plane figures need a window radius")
        body = _render_plane(d, levels, window, size, stroke)
        width = height = size
    else:
        body = _render_sphere(d, levels, size, stroke)
        width, height = 2 * size, size
    head = (f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
            f'viewBox="0 0 {width} {height}">')
    return "\n".join([head, *body, "</svg>"]) + "\n"
