import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import disc_mask, polygon_mask, rect_perimeter, star_vertices
from overlapseg.concavity import concave_points
from overlapseg.grouping import ContourSegment, UnionFind, map_segments, split_segments
from overlapseg.shapefit import RodBox
from overlapseg.tracer import trace_contours


def rod_mask(shape, cx, cy, length, width, theta):
    return polygon_mask(shape, RodBox(cx, cy, length, width, theta).corners())


def traced(mask):
    (c,) = trace_contours(mask)
    _, concave = concave_points(c.points, 2.0)
    return c, concave


def truncated_star():
    verts = star_vertices(100, 100, 70, 30, phase=-math.pi / 2)
    out = []
    for k in range(5):
        tip = np.array(verts[2 * k])
        before, after = np.array(verts[2 * k - 1]), np.array(verts[2 * k + 1])
        out += [tuple(tip + 0.2 * (before - tip)), tuple(tip + 0.2 * (after - tip)), verts[2 * k + 1]]
    return polygon_mask((200, 200), out)


class TestSplit:
    def test_convex_single_segment(self):
        c, concave = traced(disc_mask((80, 80), 40, 40, 25))
        segs = split_segments(c.points, concave)
        assert len(segs) == 1 and np.array_equal(segs[0].points, c.points)

    def test_one_concave_point_single_segment(self):
        pts = rect_perimeter(0, 0, 40, 20, 0)
        segs = split_segments(pts, [7])
        assert len(segs) == 1

    def test_two_discs_one_arc_each(self):
        c1, c2 = (60, 70), (100, 70)
        m = disc_mask((140, 160), *c1, 30) | disc_mask((140, 160), *c2, 30)
        c, concave = traced(m)
        segs = split_segments(c.points, concave)
        assert len(segs) == 2
        owners = []
        for s in segs:
            d1 = np.abs(np.hypot(*(s.points - c1).T) - 30)
            d2 = np.abs(np.hypot(*(s.points - c2).T) - 30)
            on1, on2 = (d1 <= 2).all(), (d2 <= 2).all()
            assert on1 != on2
            owners.append(on1)
        assert owners[0] != owners[1]

    def test_star_segments_cover_contour(self):
        c, concave = traced(truncated_star())
        segs = split_segments(c.points, concave)
        assert len(segs) == len(concave) == 5
        assert sum(len(s) for s in segs) == len(c.points) + len(concave)
        # circular concatenation with shared endpoints dropped gives the contour
        joined = np.concatenate([s.points[:-1] for s in segs])
        start = int(concave.min())
        assert np.array_equal(joined, np.roll(c.points, -start, axis=0))
        for s in segs:
            assert s.start in concave and s.stop in concave


class TestUnionFind:
    def test_transitive(self):
        uf = UnionFind(5)
        uf.union(3, 1)
        uf.union(1, 4)
        assert uf.groups() == [[0], [1, 3, 4], [2]]
        assert uf.find(4) == 1


class TestMap:
    def test_empty(self):
        assert map_segments([]) == []

    def test_single_segment(self):
        seg = ContourSegment(0, rect_perimeter(50, 50, 60, 10, 0.4))
        groups = map_segments([seg])
        assert len(groups) == 1 and groups[0].members == (0,)

    def test_rod_crossed_by_disc(self):
        shape = (200, 300)
        m = rod_mask(shape, 150, 100, 100, 10, 0.0) | disc_mask(shape, 150, 100, 25)
        c, concave = traced(m)
        segs = split_segments(c.points, concave)
        assert len(segs) == 4
        groups = map_segments(segs)
        assert len(groups) == 3
        rod_group = [g for g in groups if len(g.members) == 2]
        assert len(rod_group) == 1
        for e in rod_group[0].segment_fits:
            assert e.aspect_ratio >= 2
            assert min(e.theta, math.pi - e.theta) < math.radians(5)
        # both rod stubs lie at the ends of the rod
        xs = sorted(segs[i].centroid[0] for i in rod_group[0].members)
        assert xs[0] < 125 and xs[1] > 175

    def test_distant_parallel_rods_not_merged(self):
        a = ContourSegment(0, rect_perimeter(100, 100, 100, 10, 0.0))
        b = ContourSegment(0, rect_perimeter(400, 100, 100, 10, 0.0))
        assert len(map_segments([a, b], proximity_factor=1.0)) == 2
        # orientation alone would merge them
        assert len(map_segments([a, b], proximity_factor=1e6)) == 1

    def test_crossing_rods_not_merged(self):
        a = ContourSegment(0, rect_perimeter(100, 100, 100, 10, 0.0))
        b = ContourSegment(0, rect_perimeter(100, 100, 100, 10, math.pi / 2))
        assert len(map_segments([a, b])) == 2

    def test_round_segments_never_merge(self):
        arcs = [ContourSegment(0, np.column_stack([50 + 20 * np.cos(t), 50 + 20 * np.sin(t)]))
                for t in (np.linspace(0, 3, 30), np.linspace(3, 6, 30))]
        assert len(map_segments(arcs)) == 2


def random_cluster(rng):
    shape = (160, 160)
    m = np.zeros(shape, dtype=bool)
    for _ in range(rng.integers(2, 5)):
        if rng.random() < 0.5:
            m |= disc_mask(shape, *rng.uniform(50, 110, 2), rng.uniform(12, 30))
        else:
            m |= rod_mask(shape, *rng.uniform(60, 100, 2), rng.uniform(50, 90),
                          rng.uniform(8, 14), rng.uniform(0, math.pi))
    return trace_contours(m)


def check_partition(c, concave, segs, groups):
    members = [i for g in groups for i in g.members]
    assert sorted(members) == list(range(len(segs)))  # union is everything, no overlap
    assert len(groups) <= len(segs)
    if len(concave) >= 2:
        assert len(segs) == len(concave)
        cset = set(concave.tolist())
        for s in segs:
            assert s.start in cset and s.stop in cset


def test_partition_invariants_random(rng):
    for _ in range(25):
        for c in random_cluster(rng):
            _, concave = concave_points(c.points, 2.0)
            segs = split_segments(c.points, concave, c.id)
            groups = map_segments(segs)
            check_partition(c, concave, segs, groups)
            assert len(concave) <= len(c.points)


def test_order_independence(rng):
    for _ in range(15):
        for c in random_cluster(rng):
            _, concave = concave_points(c.points, 2.0)
            segs = split_segments(c.points, concave, c.id)
            base = {frozenset(map(int, g.members)) for g in map_segments(segs)}
            perm = rng.permutation(len(segs))
            shuffled = [segs[i] for i in perm]
            got = {frozenset(int(perm[i]) for i in g.members) for g in map_segments(shuffled)}
            assert got == base


@settings(max_examples=40, deadline=None)
@given(st.integers(8, 200), st.lists(st.integers(0, 199), max_size=12, unique=True))
def test_split_lengths(n, cuts):
    t = np.linspace(0, 2 * np.pi, n, endpoint=False)
    pts = np.column_stack([np.cos(t), np.sin(t)]) * 50
    cuts = [k for k in cuts if k < n]
    segs = split_segments(pts, cuts)
    if len(cuts) < 2:
        assert len(segs) == 1 and len(segs[0]) == n
    else:
        assert len(segs) == len(cuts)
        assert sum(len(s) for s in segs) == n + len(cuts)
