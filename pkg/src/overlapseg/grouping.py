"""Splitting contour clusters at concave points and regrouping the pieces."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import SegmentationError
from .geomfit import Ellipse, angle_distance, fit_ellipse_lsq

MIN_FIT_POINTS = 5


@dataclass
class ContourSegment:
    """Arc of a cluster between two consecutive concave points.

    ``start`` and ``stop`` index into the cluster's point list; ``stop`` may
    wrap past the end. Both endpoints are included in ``points``.
    """
    cluster_id: int
    points: np.ndarray
    start: int = 0
    stop: int = 0

    def __len__(self):
        return len(self.points)

    @property
    def centroid(self):
        return self.points.mean(axis=0)


@dataclass
class SegmentGroup:
    members: tuple
    pooled_points: np.ndarray
    cluster_id: int = 0
    segment_fits: list = field(default_factory=list)


def split_segments(points, concave, cluster_id: int = 0) -> list[ContourSegment]:
    """Cut a closed contour at its concave points.

    With two or more concave points each segment runs from one concave point to
    the next (circularly), both endpoints included, so a concave point is the
    end of one segment and the start of the next. With fewer, the whole contour
    is a single segment.
    """
    pts = np.asarray(points)
    n = len(pts)
    cuts = sorted(int(i) for i in np.asarray(concave).ravel())
    if len(cuts) < 2:
        return [ContourSegment(cluster_id, pts.copy(), 0, n - 1)]
    segments = []
    for k, start in enumerate(cuts):
        stop = cuts[(k + 1) % len(cuts)]
        if stop > start:
            idx = np.arange(start, stop + 1)
        else:
            idx = np.concatenate([np.arange(start, n), np.arange(0, stop + 1)])
        segments.append(ContourSegment(cluster_id, pts[idx], start, stop))
    return segments


class UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, i):
        root = i
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[i] != root:
            self.parent[i], i = root, self.parent[i]
        return root

    def union(self, i, j):
        ri, rj = self.find(i), self.find(j)
        if ri != rj:
            # smaller root wins so the labelling is order independent
            lo, hi = min(ri, rj), max(ri, rj)
            self.parent[hi] = lo

    def groups(self):
        out = {}
        for i in range(len(self.parent)):
            out.setdefault(self.find(i), []).append(i)
        return sorted(out.values())


def fit_segment(seg: ContourSegment):
    """Ellipse for one segment, or ``None`` when it cannot be fitted."""
    if len(seg.points) < MIN_FIT_POINTS:
        return None
    try:
        return fit_ellipse_lsq(seg.points)
    except SegmentationError:
        return None


def mergeable(seg_i, e_i: Ellipse, seg_j, e_j: Ellipse, orient_tol: float,
              proximity_factor: float) -> bool:
    """Orientation-and-proximity test for two elongated segment ellipses."""
    if angle_distance(e_i.theta, e_j.theta) >= orient_tol:
        return False
    ci, cj = seg_i.centroid, seg_j.centroid
    dist = math.hypot(ci[0] - cj[0], ci[1] - cj[1])
    return dist < proximity_factor * (e_i.a + e_j.a)


def map_segments(segments, orient_tol: float = math.radians(10.0),
                 proximity_factor: float = 2.5, aspect_threshold: float = 2.0,
                 fits=None) -> list[SegmentGroup]:
    """Group segments that belong to the same object.

    Segments whose fitted ellipse is close to a circle (aspect ratio below
    ``aspect_threshold``), or that cannot be fitted, stay alone. Elongated
    segments are merged pairwise when their ellipse orientations differ by
    less than ``orient_tol`` and their centroids are closer than
    ``proximity_factor * (a_i + a_j)``; merges are closed transitively.
    Groups are returned sorted by their smallest member index.
    """
    segments = list(segments)
    if not segments:
        return []
    if fits is None:
        fits = [fit_segment(s) for s in segments]
    elongated = [i for i, e in enumerate(fits)
                 if e is not None and e.aspect_ratio >= aspect_threshold]
    uf = UnionFind(len(segments))
    for k, i in enumerate(elongated):
        for j in elongated[k + 1:]:
            if mergeable(segments[i], fits[i], segments[j], fits[j],
                         orient_tol, proximity_factor):
                uf.union(i, j)
    groups = []
    cluster_id = segments[0].cluster_id
    for members in uf.groups():
        pooled = pool_points([segments[i] for i in members])
        groups.append(SegmentGroup(tuple(members), pooled, cluster_id,
                                   [fits[i] for i in members]))
    return groups


def pool_points(segments) -> np.ndarray:
    """Concatenate segment points, dropping exact duplicate rows."""
    stacked = np.concatenate([s.points for s in segments])
    _, first = np.unique(stacked, axis=0, return_index=True)
    return stacked[np.sort(first)]
