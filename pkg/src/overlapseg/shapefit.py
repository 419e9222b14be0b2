"""Shape entities for grouped segments: ellipses for round objects, oriented
boxes for rods, and pixel-to-micrometre conversion."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import ParameterError
from .geomfit import Ellipse, fit_ellipse_lsq, normalize_angle, project_extent

CIRCLE_LIKE = "CircleLike"
ROD_LIKE = "RodLike"


@dataclass(frozen=True)
class RodBox:
    cx: float
    cy: float
    length: float
    width: float
    theta: float

    def corners(self) -> np.ndarray:
        """Box corners in drawing order."""
        c, s = math.cos(self.theta), math.sin(self.theta)
        u = np.array([c, s]) * self.length / 2
        v = np.array([-s, c]) * self.width / 2
        ctr = np.array([self.cx, self.cy])
        return np.array([ctr - u - v, ctr + u - v, ctr + u + v, ctr - u + v])

    def contains(self, x, y, slack: float = 0.0):
        c, s = math.cos(self.theta), math.sin(self.theta)
        dx = np.asarray(x, dtype=np.float64) - self.cx
        dy = np.asarray(y, dtype=np.float64) - self.cy
        u = dx * c + dy * s
        v = -dx * s + dy * c
        return (np.abs(u) <= self.length / 2 + slack) & (np.abs(v) <= self.width / 2 + slack)


@dataclass
class DetectedObject:
    shape_class: str
    ellipse: Ellipse
    rod: Optional[RodBox] = None
    cluster_id: int = 0
    group_id: int = 0

    @property
    def center(self):
        if self.rod is not None:
            return (self.rod.cx, self.rod.cy)
        return (self.ellipse.cx, self.ellipse.cy)


def fit_group(group) -> Ellipse:
    """Ellipse through all points of a segment group."""
    pts = getattr(group, "pooled_points", group)
    return fit_ellipse_lsq(pts)


def classify_shape(e: Ellipse, threshold: float = 2.0) -> str:
    return CIRCLE_LIKE if e.a / e.b < threshold else ROD_LIKE


def bounding_box_rod(points, e: Ellipse) -> RodBox:
    """Oriented box from the extreme projections along the ellipse axes.

    Two line pairs, one parallel to the major axis and one to the minor axis,
    are pushed outward until they touch the farthest contour points; that
    stopping position is exactly the min/max projection, so it is computed
    directly. Hidden parts of the object are not extrapolated.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=np.float64))
    if len(pts) < 2 or np.all(pts == pts[0]):
        raise ParameterError("bounding box needs at least two distinct points")
    origin = (e.cx, e.cy)
    major = (math.cos(e.theta), math.sin(e.theta))
    minor = (-major[1], major[0])
    u0, u1 = project_extent(pts, origin, major)
    v0, v1 = project_extent(pts, origin, minor)
    um, vm = (u0 + u1) / 2, (v0 + v1) / 2
    cx = e.cx + um * major[0] + vm * minor[0]
    cy = e.cy + um * major[1] + vm * minor[1]
    length, width, theta = u1 - u0, v1 - v0, e.theta
    if width > length:
        length, width, theta = width, length, theta + math.pi / 2
    return RodBox(cx, cy, length, width, normalize_angle(theta))


def px_to_um(value, scale: float):
    if scale <= 0:
        raise ParameterError("scale must be positive")
    return value * scale


def shape_object(group, aspect_threshold: float = 2.0, cluster_id: int = 0,
                 group_id: int = 0) -> DetectedObject:
    """Fit, classify and (for rods) box one segment group."""
    e = fit_group(group)
    cls = classify_shape(e, aspect_threshold)
    rod = bounding_box_rod(group.pooled_points, e) if cls == ROD_LIKE else None
    return DetectedObject(cls, e, rod, cluster_id, group_id)
