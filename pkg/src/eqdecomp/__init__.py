"""Equidistant decompositions of the Euclidean plane and the round sphere.

The package constructs the glued-arc leaf curves whose signed distance
fields decompose the plane and the sphere into pairwise equidistant leaves,
evaluates those fields exactly, enumerates the full catalog of such
decompositions (including the 1-D quotient compositions with disconnected
fibers), and certifies the defining axioms numerically with independent
brute-force oracles.
"""

from ._kernels import BACKEND as KERNEL_BACKEND
from .catalog import (
    DistanceToConvex,
    HalfLineSeed,
    OrthogonalProjection,
    PointSeed,
    SegmentSeed,
    SignedDistanceSigmaPlane,
    SignedDistanceSigmaSphere,
    SphereRotation,
    base_space,
    enumerate_sphere,
    evaluate,
    evaluate_batch,
    fiber,
    singular_set,
)
from .geometry import (
    CircularArc,
    LineSegment,
    PlanePoint,
    SpherePoint,
    SphericalArc,
    UnitTangent,
    distance_to_piece,
    piece_endpoint_data,
    point_on_piece,
    sphere_geodesic,
)
from .leaves import (
    FiberSet,
    LeafCurve,
    PlaneSigmaParams,
    SphereSigmaParams,
    build_sigma_plane,
    build_sigma_sphere,
    fiber_plane,
    fiber_sphere,
    fold_wave,
    region_coordinate_plane,
    signed_distance_plane,
    signed_distance_sphere,
)
from .quotient import (
    CircleSpace,
    ComposedSubmetry,
    HalfLineSpace,
    LineSpace,
    SegmentSpace,
    apply_map,
    compose,
    enumerate_maps,
    quotient_space,
)
from .verify import (
    ChordOracle,
    ToleranceProfile,
    VerificationReport,
    brute_force_signed_distance,
    check_connectivity,
    check_equidistance,
    check_junctions_c1,
    check_lipschitz_and_ball,
    check_positive_reach,
    trace_horizontal,
)

__version__ = "0.1.0"
