import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from eqdecomp.errors import InvalidInputError, InvalidParameterError
from eqdecomp.geometry import (
    CircularArc,
    LineSegment,
    PlanePoint,
    SpherePoint,
    piece_endpoint_data,
    point_distance,
    sample_piece,
)
from eqdecomp.leaves import (
    PlaneSigmaParams,
    SphereSigmaParams,
    build_sigma_plane,
    build_sigma_sphere,
    fiber_plane,
    fiber_sphere,
    fold_wave,
    level_radii,
    piece_components,
    region_coordinate_plane,
    signed_distance_plane,
    signed_distance_plane_batch,
    signed_distance_sphere,
    signed_distance_sphere_batch,
)


class TestFoldWave:
    def test_frozen_values(self):
        assert fold_wave(0, 1) == 1.0
        assert fold_wave(1, 1) == 0.0
        assert fold_wave(2, 1) == -1.0
        assert fold_wave(5, 1) == 0.0

    def test_matches_dense_polyline_oracle(self):
        # independent check: distance from the wave's zero set, signed by
        # nearest-zero parity
        a = 0.7
        zeros = np.array([a + 2 * m * a for m in range(12)])
        for u in np.linspace(0, 8 * a, 113):
            d = np.abs(zeros - u).min()
            j = int(np.abs(zeros - u).argmin())
            inward = u < zeros[j]
            sign = 1.0 if (j % 2 == 0) == inward else -1.0
            assert fold_wave(u, a) == pytest.approx(sign * d, abs=1e-12)

    @settings(max_examples=300, deadline=None)
    @given(st.floats(0, 100), st.floats(0, 100), st.floats(0.01, 10))
    def test_lipschitz(self, u, v, a):
        assert abs(fold_wave(u, a) - fold_wave(v, a)) <= abs(u - v) + 1e-12

    @settings(max_examples=200, deadline=None)
    @given(st.floats(0, 50), st.floats(0.01, 10))
    def test_periodic(self, u, a):
        assert fold_wave(u + 4 * a, a) == pytest.approx(fold_wave(u, a), abs=1e-9)

    def test_zero_set(self):
        a = 1.3
        for m in range(6):
            assert fold_wave(a + 2 * m * a, a) == pytest.approx(0.0, abs=1e-12)

    def test_sphere_closure_parity(self):
        # antipodal value: +a for even k, -a for odd k
        for k in range(2, 10):
            a = math.pi / (2 * k)
            expected = a if k % 2 == 0 else -a
            assert fold_wave(math.pi, a) == pytest.approx(expected, abs=1e-12)


class TestRegions:
    def test_examples(self):
        p = PlaneSigmaParams(1, 2)
        rc = region_coordinate_plane(p, PlanePoint(0, 3))
        assert rc.region == "upper_cap" and rc.u == pytest.approx(2.0)
        rc = region_coordinate_plane(p, PlanePoint(1, 0))
        assert rc.region == "strip" and rc.u == pytest.approx(1.0)
        rc = region_coordinate_plane(PlaneSigmaParams(1, 0), PlanePoint(2, -2))
        assert rc.region == "lower_cap" and rc.u == pytest.approx(2.0)


class TestSignedDistancePlane:
    def test_examples(self):
        p = PlaneSigmaParams(1, 0)
        assert signed_distance_plane(p, PlanePoint(0, 0.5)) == pytest.approx(0.5)
        assert signed_distance_plane(p, PlanePoint(0, 3)) == pytest.approx(0.0)
        assert signed_distance_plane(p, PlanePoint(2, -2)) == pytest.approx(1.0)

    @pytest.mark.parametrize("a,h", [(0.5, 0.0), (1.0, 2.0), (2.0, 1.0)])
    def test_continuous_across_region_boundaries(self, a, h):
        p = PlaneSigmaParams(a, h)
        xs = np.linspace(-12 * a, 12 * a, 1000)
        for y in (h / 2, -h / 2):
            pts = np.stack([xs, np.full_like(xs, y)], axis=1)
            above = signed_distance_plane_batch(p, pts + [0, 1e-12])
            below = signed_distance_plane_batch(p, pts - [0, 1e-12])
            assert np.abs(above - below).max() < 1e-9

    def test_batch_matches_scalar(self):
        p = PlaneSigmaParams(0.8, 1.3)
        rng = np.random.default_rng(0)
        pts = rng.uniform(-10, 10, (200, 2))
        batch = signed_distance_plane_batch(p, pts)
        scalar = [signed_distance_plane(p, PlanePoint(*q)) for q in pts]
        assert np.allclose(batch, scalar, atol=0)


class TestSignedDistanceSphere:
    def test_examples(self):
        sp = SphereSigmaParams(2, 1)
        assert signed_distance_sphere(sp, SpherePoint(0, 0, 1)) == pytest.approx(-math.pi / 4)
        assert signed_distance_sphere(sp, sp.x0) == pytest.approx(math.pi / 4)
        eq = SpherePoint.normalized(math.cos(math.pi / 4), math.sin(math.pi / 4), 0)
        assert signed_distance_sphere(sp, eq) == pytest.approx(0.0, abs=1e-15)

    @pytest.mark.parametrize("k,s", [(2, 1), (3, 1), (5, 3), (8, 5)])
    def test_hemisphere_formulas_agree_on_equator(self, k, s):
        sp = SphereSigmaParams(k, s)
        lon = np.linspace(0, 2 * math.pi, 1000, endpoint=False)
        pts = np.stack([np.cos(lon), np.sin(lon), np.zeros_like(lon)], axis=1)
        x0, y0 = sp.x0.v, sp.y0.v
        du = np.arctan2(np.linalg.norm(np.cross(pts, x0), axis=1), pts @ x0)
        dl = np.arctan2(np.linalg.norm(np.cross(pts, y0), axis=1), pts @ y0)
        upper = fold_wave(du, sp.a)
        lower = -fold_wave(dl, sp.a)
        assert np.abs(upper - lower).max() < 1e-9

    def test_even_s_rejected(self):
        with pytest.raises(InvalidParameterError):
            signed_distance_sphere(SphereSigmaParams(3, 2), SpherePoint(0, 0, 1))


class TestBuildSigmaPlane:
    def test_piece_count_h0(self):
        c = build_sigma_plane(PlaneSigmaParams(1, 0), 10.0)
        arcs = [p for p in c.pieces if isinstance(p, CircularArc)]
        assert len(c.pieces) == 10 and len(arcs) == 10
        upper = sorted(p.radius for p in arcs if p.center.y >= 0 and p.center.x == 0)
        assert upper == [1, 3, 5, 7, 9]
        for j in c.junctions:
            assert abs(j.point.y) < 1e-12  # junctions on the line y = 0

    def test_piece_count_h2(self):
        c = build_sigma_plane(PlaneSigmaParams(1, 2), 10.0)
        segs = [p for p in c.pieces if isinstance(p, LineSegment)]
        assert len(c.pieces) == 20 and len(segs) == 10
        assert sorted(round(s.p.x) for s in segs) == [-9, -7, -5, -3, -1, 1, 3, 5, 7, 9]
        for s in segs:
            e = piece_endpoint_data(s)
            assert abs(abs(e.start_tangent.dir[1]) - 1.0) < 1e-12  # vertical

    def test_small_window(self):
        c = build_sigma_plane(PlaneSigmaParams(0.5, 0), 2.0)
        assert len(c.pieces) == 4
        assert sorted({round(p.radius, 6) for p in c.pieces}) == [0.5, 1.5]

    def test_window_must_exceed_center_distance(self):
        with pytest.raises(InvalidInputError):
            build_sigma_plane(PlaneSigmaParams(1, 0), 1.5)

    def test_junction_c1(self):
        for a, h in [(0.5, 0.0), (1.0, 2.0), (2.0, 3.0)]:
            c = build_sigma_plane(PlaneSigmaParams(a, h), 12 * a)
            for j in c.junctions:
                e = piece_endpoint_data(c.pieces[j.left])
                s = piece_endpoint_data(c.pieces[j.right])
                assert point_distance(e.end, s.start) < 1e-10
                tv, sv = np.array(e.end_tangent.dir), np.array(s.start_tangent.dir)
                assert float(tv @ sv) > 1.0 - 1e-12

    def test_nonadjacent_pieces_disjoint(self):
        c = build_sigma_plane(PlaneSigmaParams(1, 1), 8.0)
        adjacent = {(j.left, j.right) for j in c.junctions} | {(j.right, j.left) for j in c.junctions}
        for i in range(len(c.pieces)):
            pts = sample_piece(c.pieces[i], 64)
            for j in range(i + 1, len(c.pieces)):
                if (i, j) in adjacent:
                    continue
                d, _ = __import__("eqdecomp.geometry", fromlist=["piece_min_dist_batch"]) \
                    .piece_min_dist_batch(c.pieces[j], pts)
                assert d.min() > 1e-6


class TestBuildSigmaSphere:
    def test_k2(self):
        c = build_sigma_sphere(SphereSigmaParams(2, 1))
        assert len(c.pieces) == 4
        assert len(piece_components(c.pieces)) == 1
        lons = sorted(round(math.atan2(j.point.y, j.point.x), 9) for j in c.junctions)
        expect = sorted(round(v, 9) for v in (-3 * math.pi / 4, -math.pi / 4, math.pi / 4, 3 * math.pi / 4))
        assert lons == expect

    def test_k3(self):
        c = build_sigma_sphere(SphereSigmaParams(3, 1))
        assert len(c.pieces) == 6
        assert len(piece_components(c.pieces)) == 1

    def test_invalid_s_raises_and_bypass_disconnects(self):
        with pytest.raises(InvalidParameterError):
            build_sigma_sphere(SphereSigmaParams(6, 3))
        c = build_sigma_sphere(SphereSigmaParams(6, 3), allow_disconnected=True)
        assert len(piece_components(c.pieces)) == 3  # gcd(6, 3)

    def test_component_count_is_gcd(self):
        for k, s in [(4, 2), (6, 2), (8, 6), (9, 3)]:
            c = build_sigma_sphere(SphereSigmaParams(k, s), allow_disconnected=True)
            assert len(piece_components(c.pieces)) == math.gcd(k, s)

    def test_junction_c1(self):
        for k, s in [(2, 1), (3, 1), (5, 3), (8, 7)]:
            c = build_sigma_sphere(SphereSigmaParams(k, s))
            assert len(c.junctions) == 2 * k
            for j in c.junctions:
                e = piece_endpoint_data(c.pieces[j.left])
                st_ = piece_endpoint_data(c.pieces[j.right])
                assert point_distance(e.end, st_.start) < 1e-10
                tv, sv = np.array(e.end_tangent.dir), np.array(st_.start_tangent.dir)
                assert float(tv @ sv) > 1.0 - 1e-12


class TestFiberPlane:
    def test_level_radii_example(self):
        assert level_radii(0.5, 1.0, 8.0) == pytest.approx([0.5, 3.5, 4.5, 7.5])
        assert level_radii(-0.5, 1.0, 8.0) == pytest.approx([1.5, 2.5, 5.5, 6.5])

    def test_boundary_fiber(self):
        f = fiber_plane(PlaneSigmaParams(1, 0), 1.0, 9.0)
        upper = sorted(p.radius for p in f.pieces if p.center.x == 0)
        lower = sorted(p.radius for p in f.pieces if p.center.x == 2)
        assert upper == [4, 8] and lower == [2, 6]
        assert [tuple(s) for s in f.singular_points] == [(0.0, 0.0)]
        assert len(f.components) == 1  # connected half-line shape

    def test_zero_level_is_the_curve(self):
        params = PlaneSigmaParams(1, 0)
        f = fiber_plane(params, 0.0, 10.0)
        c = build_sigma_plane(params, 10.0)
        fr = sorted((round(p.center.x, 9), round(p.radius, 9)) for p in f.pieces)
        cr = sorted((round(p.center.x, 9), round(p.radius, 9)) for p in c.pieces)
        assert fr == cr

    def test_strip_fiber_has_segments(self):
        f = fiber_plane(PlaneSigmaParams(1, 2), 0.25, 8.0)
        segs = [p for p in f.pieces if isinstance(p, LineSegment)]
        assert segs and all(abs(fold_wave(abs(s.p.x), 1.0) - 0.25) < 1e-12 for s in segs)

    def test_level_out_of_range(self):
        with pytest.raises(InvalidInputError):
            fiber_plane(PlaneSigmaParams(1, 0), 1.5, 8.0)

    @pytest.mark.parametrize("eps", [-1.0, -0.3, 0.0, 0.6, 1.0])
    def test_level_consistency(self, eps):
        params = PlaneSigmaParams(1.0, 1.5)
        f = fiber_plane(params, eps, 9.0)
        for piece in f.pieces:
            pts = sample_piece(piece, 100)
            vals = signed_distance_plane_batch(params, pts)
            assert np.abs(vals - eps).max() < 1e-9


class TestFiberSphere:
    def test_boundary_fiber_k2(self):
        sp = SphereSigmaParams(2, 1)
        f = fiber_sphere(sp, math.pi / 4)
        assert len(f.pieces) == 1  # lower half circle of radius pi/2 about y0
        piece = f.pieces[0]
        assert piece.angular_radius == pytest.approx(math.pi / 2)
        sing = sorted(tuple(round(c, 9) for c in s) for s in f.singular_points)
        assert sing == [(-1.0, -0.0, -0.0), (1.0, 0.0, 0.0)]
        assert len(f.components) == 1

    def test_interior_fiber_radii(self):
        sp = SphereSigmaParams(2, 1)
        f = fiber_sphere(sp, math.pi / 8)
        upper = sorted(p.angular_radius for p in f.pieces
                       if point_distance(p.center, sp.x0) < 1e-9)
        lower = sorted(p.angular_radius for p in f.pieces
                       if point_distance(p.center, sp.y0) < 1e-9)
        assert upper == pytest.approx([math.pi / 8, 7 * math.pi / 8])
        assert lower == pytest.approx([3 * math.pi / 8, 5 * math.pi / 8])
        assert len(f.components) == 1  # single closed curve

    def test_zero_level_is_sigma(self):
        sp = SphereSigmaParams(2, 1)
        f = fiber_sphere(sp, 0.0)
        assert len(f.pieces) == 4 and len(f.components) == 1

    @pytest.mark.parametrize("k,s", [(2, 1), (4, 3), (7, 5)])
    @pytest.mark.parametrize("frac", [-1.0, -0.4, 0.0, 0.7, 1.0])
    def test_level_consistency(self, k, s, frac):
        sp = SphereSigmaParams(k, s)
        eps = frac * sp.a
        f = fiber_sphere(sp, eps)
        for piece in f.pieces:
            pts = sample_piece(piece, 60)
            vals = signed_distance_sphere_batch(sp, pts)
            assert np.abs(vals - eps).max() < 1e-9
        for sing in f.singular_points:
            assert abs(signed_distance_sphere(sp, sing) - eps) < 1e-9

    @pytest.mark.parametrize("k,s", [(2, 1), (3, 1), (5, 3)])
    def test_interior_fibers_are_single_closed_curves(self, k, s):
        sp = SphereSigmaParams(k, s)
        for frac in (-0.6, 0.33):
            f = fiber_sphere(sp, frac * sp.a)
            assert len(f.components) == 1


def test_plane_params_validation():
    with pytest.raises(InvalidParameterError):
        PlaneSigmaParams(0.0, 1.0)
    with pytest.raises(InvalidParameterError):
        PlaneSigmaParams(1.0, -0.5)
    p = PlaneSigmaParams(1.5, 2.0)
    assert p.center_distance == pytest.approx(math.hypot(3.0, 2.0))


def test_sphere_params_validation():
    with pytest.raises(InvalidParameterError):
        SphereSigmaParams(1, 1)
    with pytest.raises(InvalidParameterError):
        SphereSigmaParams(4, 9)
    assert SphereSigmaParams(4, 3).is_valid
    assert not SphereSigmaParams(4, 2).is_valid
