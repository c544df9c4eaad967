import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from eqdecomp.catalog import (
    OrthogonalProjection,
    SignedDistanceSigmaSphere,
    evaluate,
    fiber,
)
from eqdecomp.errors import InvalidInputError
from eqdecomp.geometry import PlanePoint, SpherePoint
from eqdecomp.leaves import SphereSigmaParams
from eqdecomp.quotient import (
    CircleSpace,
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
    ReflectionGroup,
    SegmentSpace,
    TranslationGroup,
    TranslationReflectionGroup,
    TrivialGroup,
    apply_map,
    base_distance,
    compose,
    enumerate_maps,
    map_codomain,
    map_domain,
    map_preimages,
    quotient_space,
)


class TestQuotientSpace:
    def test_cases(self):
        assert isinstance(quotient_space(TrivialGroup()), LineSpace)
        c = quotient_space(TranslationGroup(2.0))
        assert isinstance(c, CircleSpace) and c.length == 2.0
        h = quotient_space(ReflectionGroup(0.0))
        assert isinstance(h, HalfLineSpace) and h.origin == 0.0
        s = quotient_space(TranslationReflectionGroup(1.0, 3.0))
        assert isinstance(s, SegmentSpace) and (s.lo, s.hi) == (1.0, 3.0)

    def test_invalid_translation_reflection(self):
        with pytest.raises(InvalidInputError):
            quotient_space(TranslationReflectionGroup(3.0, 1.0))


class TestApplyMap:
    def test_examples(self):
        assert apply_map(FoldLineToHalfLine(0.0), -3.0) == pytest.approx(3.0)
        assert apply_map(CoverLineToCircle(2.0), 5.0) == pytest.approx(1.0)
        m = FoldSegmentToSegment(0.0, 1.0, 2)
        assert apply_map(m, 0.8) == pytest.approx(0.2)
        assert map_codomain(m).hi == pytest.approx(0.5)

    def test_domain_validation(self):
        with pytest.raises(InvalidInputError):
            apply_map(FoldSegmentToSegment(0.0, 1.0, 2), 1.5)
        with pytest.raises(InvalidInputError):
            apply_map(FoldHalfLineToSegment(1.0), -0.5)

    def test_segment_fold_phase_must_align_with_half_period(self):
        # a misaligned phase would break ball-surjectivity at the endpoints
        with pytest.raises(InvalidInputError):
            FoldSegmentToSegment(-1.0, 1.0, 3, phase=0.5)
        FoldSegmentToSegment(-1.0, 1.0, 3, phase=2.0 / 3.0)

    def test_preimages_map_back(self):
        maps = [
            IdentityMap(SegmentSpace(0, 1)),
            CoverLineToCircle(1.5),
            FoldLineToHalfLine(0.7),
            FoldLineToSegment(2.0, 0.3),
            FoldHalfLineToSegment(0.8),
            CoverCircleToCircle(3.0, 3),
            FoldCircleToSegment(3.0, 0.5),
            FoldSegmentToSegment(-1.0, 1.0, 2, phase=1.0),
        ]
        for m in maps:
            cod = map_codomain(m)
            ys = [0.1, 0.3] if not isinstance(cod, CircleSpace) else [0.2, 0.9]
            for y in ys:
                pre = map_preimages(m, y, window=(-8.0, 8.0))
                assert pre, m
                for x in pre:
                    assert apply_map(m, x) == pytest.approx(y, abs=1e-9)

    @settings(max_examples=200, deadline=None)
    @given(st.floats(-20, 20), st.floats(-20, 20))
    def test_folds_are_one_lipschitz_on_the_line(self, x, y):
        for m in (FoldLineToHalfLine(0.3), FoldLineToSegment(3.0, -0.4), CoverLineToCircle(2.5)):
            vx, vy = apply_map(m, x), apply_map(m, y)
            assert base_distance(map_codomain(m), vx, vy) <= abs(x - y) + 1e-12

    def test_circle_maps_lipschitz_in_arc_metric(self):
        rng = np.random.default_rng(0)
        for m in (CoverCircleToCircle(2.0, 4), FoldCircleToSegment(2.0, 0.25)):
            dom = map_domain(m)
            xs = rng.uniform(0, dom.length, 500)
            ys = rng.uniform(0, dom.length, 500)
            for x, y in zip(xs, ys):
                d = base_distance(dom, x, y)
                dd = base_distance(map_codomain(m), apply_map(m, x), apply_map(m, y))
                assert dd <= d + 1e-12


def _ball_surjective(m, rng, n=200, samples=400, tol=2e-2):
    dom = map_domain(m)
    cod = map_codomain(m)
    for _ in range(n):
        if isinstance(dom, LineSpace):
            x = rng.uniform(-5, 5)
        elif isinstance(dom, HalfLineSpace):
            x = rng.uniform(dom.origin, dom.origin + 5)
        elif isinstance(dom, SegmentSpace):
            x = rng.uniform(dom.lo, dom.hi)
        else:
            x = rng.uniform(0, dom.length)
        r = rng.uniform(0.05, 1.0)
        if isinstance(dom, HalfLineSpace):
            zs = np.clip(rng.uniform(x - r, x + r, samples), dom.origin, None)
        elif isinstance(dom, SegmentSpace):
            zs = np.clip(rng.uniform(x - r, x + r, samples), dom.lo, dom.hi)
        elif isinstance(dom, CircleSpace):
            zs = np.mod(rng.uniform(x - r, x + r, samples), dom.length)
        else:
            zs = rng.uniform(x - r, x + r, samples)
        vals = np.sort(np.atleast_1d(apply_map(m, zs)))
        v0 = apply_map(m, x)
        if isinstance(cod, CircleSpace):
            covered = np.concatenate([vals - cod.length, vals, vals + cod.length])
            target_lo, target_hi = v0 - min(r, cod.length / 2), v0 + min(r, cod.length / 2)
        else:
            covered = vals
            lo = getattr(cod, "lo", getattr(cod, "origin", -math.inf))
            hi = getattr(cod, "hi", math.inf)
            target_lo, target_hi = max(lo, v0 - r), min(hi, v0 + r)
        inside = covered[(covered >= target_lo - tol) & (covered <= target_hi + tol)]
        assert inside.size, (m, x, r)
        pad = np.concatenate([[target_lo], inside, [target_hi]])
        assert np.diff(pad).max() < tol + 4 * r / math.sqrt(samples), (m, x, r)


def test_every_enumerated_family_is_a_submetry():
    rng = np.random.default_rng(3)
    instances = []
    for fam in enumerate_maps(LineSpace()):
        if fam.kind == "identity":
            instances.append(fam.instantiate())
        elif fam.kind == "cover_line_to_circle":
            instances.append(fam.instantiate(circumference=1.7))
        elif fam.kind == "fold_line_to_half_line":
            instances.append(fam.instantiate(pivot=0.4))
        else:
            instances.append(fam.instantiate(period=2.2, phase=0.3))
    for fam in enumerate_maps(HalfLineSpace(0.0)):
        instances.append(fam.instantiate(length=0.9) if fam.free else fam.instantiate())
    for fam in enumerate_maps(SegmentSpace(0.0, 2.0)):
        instances.append(fam.instantiate(degree=3, phase=0.0) if fam.free else fam.instantiate())
    for fam in enumerate_maps(CircleSpace(2.0)):
        instances.append(fam.instantiate(degree=2) if fam.free else fam.instantiate())
    assert len(instances) == 4 + 2 + 2 + 3
    for m in instances:
        _ball_surjective(m, rng)


def test_segment_family_supports_every_degree():
    fams = enumerate_maps(SegmentSpace(0.0, 1.0))
    fold = [f for f in fams if f.kind == "fold_segment_to_segment"][0]
    for k in range(1, 6):
        m = fold.instantiate(degree=k, phase=0.0)
        assert map_codomain(m).hi == pytest.approx(1.0 / k)


def test_subgroup_quotient_covers_group_quotient():
    # R -> R/T_c -> [0, c/2] commutes with the direct fold R -> [0, c/2]
    c = 1.8
    cover = CoverLineToCircle(c)
    fold_circle = FoldCircleToSegment(c, c / 2.0)
    fold_line = FoldLineToSegment(c, 0.0)
    xs = np.linspace(-7, 7, 1000)
    via_circle = apply_map(fold_circle, apply_map(cover, xs))
    direct = apply_map(fold_line, xs)
    assert np.abs(via_circle - direct).max() < 1e-12


class TestCompose:
    def test_sphere_fold_two_components(self):
        inner = SignedDistanceSigmaSphere(SphereSigmaParams(2, 1))
        a = inner.params.a
        outer = FoldSegmentToSegment(-a, a, 2, phase=a)  # y -> |y|
        comp = compose(inner, outer)
        # the north pole sits on the lower boundary fiber, so |.| gives a
        assert evaluate(comp, SpherePoint(0, 0, 1)) == pytest.approx(a)
        f = fiber(comp, a / 2)
        assert len(f.components) == 2
        fb = fiber(comp, a)
        assert len(fb.components) == 2  # both boundary segments

    def test_projection_with_abs(self):
        inner = OrthogonalProjection(0.0)
        comp = compose(inner, FoldLineToHalfLine(0.0))
        assert evaluate(comp, PlanePoint(-3, 5)) == pytest.approx(3.0)
        f = fiber(comp, 2.0, window=6.0)
        assert len(f.pieces) == 2  # two parallel lines

    def test_alignment_recenters_segment_fold(self):
        inner = SignedDistanceSigmaSphere(SphereSigmaParams(2, 1))
        a = inner.params.a
        outer = FoldSegmentToSegment(0.0, 2 * a, 2, phase=a)
        comp = compose(inner, outer)
        assert comp.outer.lo == pytest.approx(-a)
        assert comp.outer.hi == pytest.approx(a)

    def test_length_mismatch_rejected(self):
        inner = SignedDistanceSigmaSphere(SphereSigmaParams(2, 1))
        with pytest.raises(InvalidInputError):
            compose(inner, FoldSegmentToSegment(0.0, 1.0, 2))
        with pytest.raises(InvalidInputError):
            compose(inner, FoldLineToHalfLine(0.0))

    def test_composed_fiber_levels(self):
        inner = SignedDistanceSigmaSphere(SphereSigmaParams(2, 1))
        a = inner.params.a
        comp = compose(inner, FoldSegmentToSegment(-a, a, 2, phase=a))
        from eqdecomp.catalog import evaluate_batch
        from eqdecomp.geometry import sample_piece
        for y in (0.1 * a, 0.5 * a, a):
            f = fiber(comp, y)
            for piece in f.pieces:
                vals = evaluate_batch(comp, sample_piece(piece, 40))
                assert np.abs(vals - y).max() < 1e-9
