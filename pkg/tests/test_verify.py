import math

import numpy as np
import pytest

from eqdecomp.catalog import (
    SignedDistanceSigmaPlane,
    SignedDistanceSigmaSphere,
    SphereRotation,
    evaluate_batch,
    fiber,
    singular_set,
)
from eqdecomp.errors import InvalidInputError
from eqdecomp.geometry import CircularArc, LineSegment, PlanePoint, SpherePoint
from eqdecomp.leaves import (
    Junction,
    LeafCurve,
    PlaneSigmaParams,
    SphereSigmaParams,
    build_sigma_plane,
    build_sigma_sphere,
)
from eqdecomp.quotient import FoldSegmentToSegment, compose
from eqdecomp.verify import (
    ChordOracle,
    ToleranceProfile,
    brute_force_signed_distance,
    check_connectivity,
    check_equidistance,
    check_junctions_c1,
    check_lipschitz_and_ball,
    check_positive_reach,
    sample_on_pieces,
    trace_horizontal,
)

TOL = ToleranceProfile(samples=2000, oracle_chords=20_000, rng_seed=5)
D_PLANE = SignedDistanceSigmaPlane(PlaneSigmaParams(1.0, 0.0))
D_SPHERE = SignedDistanceSigmaSphere(SphereSigmaParams(2, 1))


class TestJunctions:
    def test_sigma_plane_passes(self):
        r = check_junctions_c1(build_sigma_plane(PlaneSigmaParams(1, 2), 10.0), TOL)
        assert r.passed and r.max_deviation < 1e-12

    def test_sigma_sphere_passes(self):
        r = check_junctions_c1(build_sigma_sphere(SphereSigmaParams(2, 1)), TOL)
        assert r.passed

    def test_broken_offset_fails_with_tangent_mismatch(self):
        # lower center displaced by (0.1, 0): the strip segment that keeps the
        # curve connected is tilted, so the junction is no longer C^1
        h = 2.0
        up = CircularArc(PlanePoint(0, h / 2), 1.0, 0.0, -math.pi / 2)
        seg = LineSegment(PlanePoint(1.0, h / 2), PlanePoint(1.1, -h / 2))
        low = CircularArc(PlanePoint(2.1, -h / 2), 1.0, math.pi, math.pi / 2)
        curve = LeafCurve("plane", (up, seg, low), (1, 1, 1),
                          (Junction(0, 1, PlanePoint(1.0, h / 2)),
                           Junction(1, 2, PlanePoint(1.1, -h / 2))))
        r = check_junctions_c1(curve, TOL)
        assert not r.passed
        assert r.parameters["max_tangent_angle"] > 0.01

    def test_requires_junctions(self):
        curve = LeafCurve("plane", (LineSegment(PlanePoint(0, 0), PlanePoint(1, 0)),), (1,), ())
        with pytest.raises(InvalidInputError):
            check_junctions_c1(curve, TOL)


class TestBruteForce:
    def test_point_off_curve(self):
        c = build_sigma_plane(D_PLANE.params, 12.0)
        v = brute_force_signed_distance(c, PlanePoint(0, 0.5), 20_000)
        assert v == pytest.approx(0.5, abs=1e-4)

    def test_point_on_curve(self):
        c = build_sigma_plane(D_PLANE.params, 12.0)
        v = brute_force_signed_distance(c, PlanePoint(0, 1.0), 20_000)
        assert abs(v) < 1e-8

    def test_sphere_pole(self):
        c = build_sigma_sphere(D_SPHERE.params)
        v = brute_force_signed_distance(c, SpherePoint(0, 0, 1), 20_000)
        assert v == pytest.approx(-math.pi / 4, abs=1e-4)

    def test_oracle_agrees_with_analytic_in_bulk(self):
        c = build_sigma_plane(D_PLANE.params, 12.0)
        oracle = ChordOracle(c, 20_000)
        rng = np.random.default_rng(0)
        R = 12.0 - (D_PLANE.params.a + D_PLANE.params.center_distance + 0.1)
        rad = R * np.sqrt(rng.random(2000))
        ang = rng.uniform(0, 2 * math.pi, 2000)
        probes = np.stack([rad * np.cos(ang), rad * np.sin(ang)], axis=1)
        dev = np.abs(oracle.signed_distance(probes) - evaluate_batch(D_PLANE, probes))
        assert dev.max() < 1e-4


class TestEquidistance:
    def test_plane(self):
        r = check_equidistance(D_PLANE, 0.0, 0.5, TOL, window=10.0)
        assert r.passed and r.max_deviation < 1e-6

    def test_sphere(self):
        r = check_equidistance(D_SPHERE, -math.pi / 8, math.pi / 8, TOL)
        assert r.passed and abs(r.parameters["expected"] - math.pi / 4) < 1e-15

    def test_composed_fold(self):
        a = D_SPHERE.params.a
        comp = compose(D_SPHERE, FoldSegmentToSegment(-a, a, 2, phase=a))
        r = check_equidistance(comp, 0.0, a / 2, TOL)
        assert r.passed

    def test_symmetry(self):
        r1 = check_equidistance(D_PLANE, 0.1, 0.6, TOL, window=10.0)
        r2 = check_equidistance(D_PLANE, 0.6, 0.1, TOL, window=10.0)
        assert abs(r1.max_deviation - r2.max_deviation) < 2 * TOL.tol_metric

    def test_rejects_equal_levels(self):
        with pytest.raises(InvalidInputError):
            check_equidistance(D_PLANE, 0.3, 0.3, TOL, window=10.0)

    def test_rejects_levels_outside_base(self):
        with pytest.raises(InvalidInputError):
            check_equidistance(D_PLANE, 0.0, 1.7, TOL, window=10.0)


class TestLipschitzBall:
    def test_interior_point(self):
        r = check_lipschitz_and_ball(D_PLANE, PlanePoint(0, 0.5), 0.3, TOL)
        assert r.passed and r.parameters["violations"] == 0

    def test_singular_point_clipped_interval(self):
        # at the boundary-fiber endpoint the image interval clips to [0.5, 1]
        r = check_lipschitz_and_ball(D_PLANE, PlanePoint(0, 0), 0.5, TOL)
        assert r.passed
        assert r.parameters["value"] == pytest.approx(1.0)

    def test_rotation_pole(self):
        r = check_lipschitz_and_ball(SphereRotation(SpherePoint(0, 0, 1)),
                                     SpherePoint(0, 0, 1), 1.0, TOL)
        assert r.passed

    def test_deterministic_given_seed(self):
        r1 = check_lipschitz_and_ball(D_PLANE, PlanePoint(0.2, 0.4), 0.5, TOL)
        r2 = check_lipschitz_and_ball(D_PLANE, PlanePoint(0.2, 0.4), 0.5, TOL)
        assert r1.to_dict() == r2.to_dict()


class TestTrace:
    def test_plane_outward_profile(self):
        tr = trace_horizontal(D_PLANE, PlanePoint(0, 1), True, 5.0, 0.25,
                              ToleranceProfile(rng_seed=0, tol_metric=1e-9))
        prof = dict(zip(np.round(tr.t, 9), tr.profile))
        assert [round(prof[float(k)], 9) for k in range(6)] == [0.0, -1.0, 0.0, 1.0, 0.0, -1.0]
        assert tr.report.passed and not tr.flagged

    def test_plane_inward_flagged_at_singular(self):
        tr = trace_horizontal(D_PLANE, PlanePoint(0, 1), False, 3.0, 0.25,
                              ToleranceProfile(rng_seed=0, tol_metric=1e-9))
        assert tr.flagged
        assert tr.singular_time == pytest.approx(1.0)
        assert tr.t[-1] < 1.0  # identity checked on [0, 1) only
        assert tr.report.passed

    def test_sphere_outward_profile(self):
        u0 = math.pi / 4
        m = np.array([0.3, -0.2, 1.0])
        m -= (m @ np.array([1.0, 0, 0])) * np.array([1.0, 0, 0])
        m /= np.linalg.norm(m)
        start = SpherePoint.from_vec(math.cos(u0) * np.array([1.0, 0, 0]) + math.sin(u0) * m)
        tr = trace_horizontal(D_SPHERE, start, True, 3 * math.pi / 4, math.pi / 16,
                              ToleranceProfile(rng_seed=0, tol_metric=1e-9))
        prof = dict(zip(np.round(tr.t, 9), tr.profile))
        want = {0.0: 0.0, math.pi / 4: -math.pi / 4, math.pi / 2: 0.0,
                3 * math.pi / 4: math.pi / 4}
        for t, v in want.items():
            assert prof[round(t, 9)] == pytest.approx(v, abs=1e-12)
        assert tr.report.passed
        assert tr.flagged  # the final sample sits on a singular point

    def test_profile_is_one_lipschitz(self):
        tr = trace_horizontal(D_PLANE, PlanePoint(0, 1), True, 6.0, 0.05,
                              ToleranceProfile(rng_seed=0))
        assert tr.report.parameters["profile_lipschitz"]

    def test_rejects_start_off_middle_fiber(self):
        with pytest.raises(InvalidInputError):
            trace_horizontal(D_PLANE, PlanePoint(0, 1.4), True, 1.0, 0.1, TOL)


class TestPositiveReach:
    def test_passes_below_reach(self):
        f = fiber(D_PLANE, 0.0, window=14.0)
        r = check_positive_reach(f, 0.95, TOL, sample_radius=9.0)
        assert r.passed

    def test_fails_beyond_reach_with_witness_at_singular(self):
        f = fiber(D_PLANE, 0.0, window=14.0)
        r = check_positive_reach(f, 1.05, TOL, sample_radius=9.0)
        assert not r.passed
        sing = singular_set(D_PLANE).points
        best = min(math.hypot(w.x - s.x, w.y - s.y) for w in r.witness for s in sing)
        assert best < 1e-3

    def test_boundary_fiber_reach_two(self):
        fplus = fiber(D_PLANE, 1.0, window=14.0)
        assert check_positive_reach(fplus, 1.9, TOL, sample_radius=9.0).passed
        assert not check_positive_reach(fplus, 2.05, TOL, sample_radius=9.0).passed

    def test_sphere_reach(self):
        f = fiber(D_SPHERE, 0.0)
        a = D_SPHERE.params.a
        assert check_positive_reach(f, 0.95 * a, TOL).passed
        assert not check_positive_reach(f, 1.05 * a, TOL).passed


class TestConnectivity:
    def test_examples(self):
        assert check_connectivity(build_sigma_sphere(SphereSigmaParams(2, 1))) == 1
        bypass = build_sigma_sphere(SphereSigmaParams(6, 3), allow_disconnected=True)
        assert check_connectivity(bypass) == 3
        assert check_connectivity(build_sigma_plane(PlaneSigmaParams(1, 2), 10.0)) == 1

    def test_point_fiber(self):
        f = fiber(SphereRotation(SpherePoint(0, 0, 1)), 0.0)
        assert check_connectivity(f) == 1

    def test_boundary_fiber_chain(self):
        f = fiber(D_PLANE, 1.0, window=9.0)
        assert check_connectivity(f) == 1


def test_reports_deterministic_and_seed_recorded():
    r1 = check_equidistance(D_PLANE, 0.0, 0.5, TOL, window=10.0)
    r2 = check_equidistance(D_PLANE, 0.0, 0.5, TOL, window=10.0)
    assert r1.to_dict() == r2.to_dict()
    assert r1.seed == TOL.rng_seed


def test_sample_on_pieces_is_length_weighted():
    pieces = (LineSegment(PlanePoint(0, 0), PlanePoint(10, 0)),
              LineSegment(PlanePoint(0, 1), PlanePoint(1, 1)))
    pts, idx, _ = sample_on_pieces(pieces, 5000, np.random.default_rng(0))
    frac = np.mean(idx == 0)
    assert 0.87 < frac < 0.95
