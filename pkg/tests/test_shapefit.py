import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import polygon_mask, rect_perimeter
from overlapseg.errors import InsufficientPointsError, ParameterError
from overlapseg.geomfit import Ellipse, angle_distance, fit_ellipse_lsq
from overlapseg.grouping import SegmentGroup
from overlapseg.shapefit import (CIRCLE_LIKE, ROD_LIKE, RodBox, bounding_box_rod, classify_shape,
                                 fit_group, px_to_um, shape_object)
from overlapseg.tracer import trace_contours


class TestClassify:
    @pytest.mark.parametrize("a, b, cls", [(10, 9, CIRCLE_LIKE), (30, 5, ROD_LIKE), (20, 10, ROD_LIKE)])
    def test_examples(self, a, b, cls):
        assert classify_shape(Ellipse(0, 0, a, b, 0)) == cls

    @settings(max_examples=60)
    @given(st.floats(1, 50), st.floats(1, 50), st.floats(0.01, 100))
    def test_scale_invariant(self, p, q, k):
        e = Ellipse.canonical(0, 0, p, q, 0)
        ek = Ellipse.canonical(0, 0, k * p, k * q, 0)
        if abs(e.a / e.b - 2.0) > 1e-9:
            assert classify_shape(e) == classify_shape(ek)


class TestFitGroup:
    def test_full_circle(self):
        t = np.linspace(0, 2 * np.pi, 60, endpoint=False)
        pts = np.column_stack([30 + 12 * np.cos(t), 40 + 12 * np.sin(t)])
        e = fit_group(SegmentGroup((0,), pts))
        assert (e.cx, e.cy, e.a, e.b) == pytest.approx((30, 40, 12, 12), abs=1e-9)

    def test_two_arcs_of_one_ellipse(self):
        truth = Ellipse(100, 80, 40, 15, 0.6)
        pts = np.vstack([truth.sample(25, 0.2, 1.4), truth.sample(25, 3.3, 4.6)])
        e = fit_group(SegmentGroup((0, 1), pts))
        for got, want in zip((e.cx, e.cy, e.a, e.b), (100, 80, 40, 15)):
            assert abs(got - want) / want < 1e-3
        assert angle_distance(e.theta, 0.6) < 1e-3

    def test_four_points(self):
        with pytest.raises(InsufficientPointsError):
            fit_group(SegmentGroup((0,), np.array([[0, 0], [1, 0], [0, 1], [1, 1]])))


class TestRodBox:
    def test_axis_aligned(self):
        pts = rect_perimeter(60, 40, 100, 10, 0.0)
        box = bounding_box_rod(pts, Ellipse(60, 40, 50, 5, 0.0))
        assert box.length == pytest.approx(100) and box.width == pytest.approx(10)
        assert (box.cx, box.cy) == pytest.approx((60, 40))

    def test_rotated_30(self):
        th = math.radians(30)
        pts = rect_perimeter(200, 150, 100, 10, th)
        box = bounding_box_rod(pts, fit_ellipse_lsq(pts))
        assert abs(box.length - 100) < 1 and abs(box.width - 10) < 1
        assert angle_distance(box.theta, th) < math.radians(1)

    def test_traced_rectangle(self):
        m = polygon_mask((200, 300), RodBox(150, 100, 100, 10, 0.5).corners())
        (c,) = trace_contours(m)
        box = bounding_box_rod(c.points, fit_ellipse_lsq(c.points))
        assert abs(box.length - 100) <= 1.5 and abs(box.width - 10) <= 1.5

    def test_occluded_end_not_extrapolated(self):
        pts = rect_perimeter(0, 0, 100, 10, 0.0)
        visible = pts[pts[:, 0] <= 30]  # the +x end is hidden
        box = bounding_box_rod(visible, fit_ellipse_lsq(visible))
        assert box.length == pytest.approx(visible[:, 0].max() - visible[:, 0].min())
        assert box.cx == pytest.approx((visible[:, 0].max() + visible[:, 0].min()) / 2)

    def test_swaps_when_width_exceeds_length(self):
        pts = rect_perimeter(0, 0, 100, 10, 0.0)
        box = bounding_box_rod(pts, Ellipse(0, 0, 50, 5, math.pi / 2))
        assert box.length == pytest.approx(100) and box.width == pytest.approx(10)
        assert angle_distance(box.theta, 0.0) < 1e-12

    def test_degenerate(self):
        with pytest.raises(ParameterError):
            bounding_box_rod(np.ones((5, 2)), Ellipse(1, 1, 2, 1, 0))

    def test_random_poses_contain_points(self, rng):
        for _ in range(30):
            L, W = rng.uniform(40, 150), rng.uniform(5, 20)
            pts = rect_perimeter(*rng.uniform(-100, 100, 2), L, W, rng.uniform(0, math.pi))
            pts = pts + rng.normal(0, 0.3, pts.shape)
            e = fit_ellipse_lsq(pts)
            box = bounding_box_rod(pts, e)
            assert box.contains(pts[:, 0], pts[:, 1], slack=1e-9).all()
            assert box.length >= box.width
            assert box.length <= 2 * e.a + 2


def test_px_to_um():
    assert px_to_um(0, 3.0) == 0
    assert px_to_um(100, 1.5) == 150
    assert px_to_um(np.array([10.0]), 0.8)[0] == pytest.approx(8.0)
    with pytest.raises(ParameterError):
        px_to_um(1, 0)


def test_shape_object_rod_present_iff_rodlike():
    rod = shape_object(SegmentGroup((0,), rect_perimeter(0, 0, 80, 10, 0.2)))
    assert rod.shape_class == ROD_LIKE and rod.rod is not None
    assert rod.rod.length * 0.8 == pytest.approx(px_to_um(rod.rod.length, 0.8))
    t = np.linspace(0, 2 * np.pi, 40, endpoint=False)
    disc = shape_object(SegmentGroup((0,), np.column_stack([20 * np.cos(t), 18 * np.sin(t)])))
    assert disc.shape_class == CIRCLE_LIKE and disc.rod is None
    assert disc.center == pytest.approx((0, 0), abs=1e-9)
