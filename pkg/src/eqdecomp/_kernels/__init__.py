"""Hot kernels: exact minimum distance from probe points to a discretized
curve (chord polylines in the plane, great-circle chord polylines on the
sphere).

The compiled extension is preferred; a NumPy/SciPy implementation with the
same contract is selected at import time when the extension is missing.
Both return, per probe, the exact minimum over all chords together with the
index of the chord's first vertex.
"""

from . import _fallback

try:
    from . import _native as _active

    BACKEND = "native"
except ImportError:  # extension not built
    _active = _fallback
    BACKEND = "fallback"

min_dist_polyline_plane = _active.min_dist_polyline_plane
min_dist_polyline_sphere = _active.min_dist_polyline_sphere


def backends() -> dict:
    """Importable kernel backends keyed by name."""
    out = {"fallback": _fallback}
    if BACKEND == "native":
        out["native"] = _active
    return out
