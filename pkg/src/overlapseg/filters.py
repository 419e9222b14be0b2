"""False-positive rejection: masking (fill) test and area-overlap test."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geomfit import Ellipse

ACCEPTED = "Accepted"
MASKING_REJECTED = "MaskingRejected"
OVERLAP_REJECTED = "OverlapRejected"


@dataclass(frozen=True)
class FilterVerdict:
    object_id: int
    accepted: bool
    reason: str


def _bbox(shape):
    if isinstance(shape, Ellipse):
        return shape.bbox()
    pts = shape.corners()
    return pts[:, 0].min(), pts[:, 1].min(), pts[:, 0].max(), pts[:, 1].max()


MAX_RASTER = 4_000_000


def rasterize(shape, window=None, step: int = 1):
    """Integer pixel centres inside an ellipse or rod box.

    Returns ``(x0, y0, mask)`` where ``mask[r, c]`` covers pixel
    ``(x0 + c*step, y0 + r*step)``. ``window`` = ``(xmin, ymin, xmax, ymax)``
    clips the scanned grid.
    """
    xmin, ymin, xmax, ymax = _bbox(shape)
    if window is not None:
        xmin, ymin = max(xmin, window[0]), max(ymin, window[1])
        xmax, ymax = min(xmax, window[2]), min(ymax, window[3])
    x0, y0 = math.ceil(xmin), math.ceil(ymin)
    x1, y1 = math.floor(xmax), math.floor(ymax)
    if x1 < x0 or y1 < y0:
        return x0, y0, np.zeros((0, 0), dtype=bool)
    yy, xx = np.mgrid[y0:y1 + 1:step, x0:x1 + 1:step]
    if isinstance(shape, Ellipse):
        inside = shape.implicit(xx, yy) <= 0
    else:
        inside = shape.contains(xx, yy)
    return x0, y0, inside


def _bbox_pixels(shape):
    xmin, ymin, xmax, ymax = _bbox(shape)
    return (xmax - xmin + 1) * (ymax - ymin + 1)


def _shape_area(shape):
    return shape.area if isinstance(shape, Ellipse) else shape.length * shape.width


def region_of(obj):
    """Shape used by the masking test: the box for rods, else the ellipse."""
    return obj.rod if obj.rod is not None else obj.ellipse


def fill_fraction(shape, mask: np.ndarray) -> float:
    """Fraction of the shape's pixels that are foreground in ``mask``.

    Pixels outside the image count as background. Returns 0.0 for a shape
    covering no pixel centre.
    """
    h, w = mask.shape
    x0, y0, inside = rasterize(shape, window=(0, 0, w - 1, h - 1))
    ys, xs = np.nonzero(inside)
    fg = int(mask[ys + y0, xs + x0].sum())
    if _bbox_pixels(shape) <= MAX_RASTER:
        total = int(rasterize(shape)[2].sum())
    else:
        # far larger than any image: the analytic area is accurate enough
        total = max(int(inside.sum()), int(_shape_area(shape)))
    if total == 0:
        return 0.0
    return fg / total


def masking_filter(obj, mask: np.ndarray, fill_threshold: float = 0.75) -> bool:
    """True when at least ``fill_threshold`` of the object's pixels are foreground.

    A shape that covers no pixel centre is rejected.
    """
    return fill_fraction(region_of(obj), mask) >= fill_threshold


def _coverage_pixels(small: Ellipse):
    step = max(1, math.ceil(math.sqrt(_bbox_pixels(small) / MAX_RASTER)))
    sx, sy, smask = rasterize(small, step=step)
    ys, xs = np.nonzero(smask)
    return xs * step + sx, ys * step + sy


def coverage(small: Ellipse, large: Ellipse, pixels=None) -> float:
    """Fraction of ``small``'s rasterized pixels that also lie inside ``large``."""
    xs, ys = pixels if pixels is not None else _coverage_pixels(small)
    if len(xs) == 0:
        return 1.0 if large.implicit(small.cx, small.cy) <= 0 else 0.0
    return float((large.implicit(xs, ys) <= 0).sum()) / len(xs)


def _boxes_overlap(b1, b2):
    return not (b1[2] < b2[0] or b2[2] < b1[0] or b1[3] < b2[1] or b2[3] < b1[1])


def overlap_filter(objects, overlap_threshold: float = 0.5) -> list[FilterVerdict]:
    """Reject the smaller of two ellipses when the larger covers more than
    ``overlap_threshold`` of it.

    Objects are visited by decreasing ellipse area (ties by index); a rejected
    object can no longer reject others. Verdicts are returned in input order.
    """
    ellipses = [o.ellipse if hasattr(o, "ellipse") else o for o in objects]
    order = sorted(range(len(ellipses)), key=lambda i: (-ellipses[i].area, i))
    boxes = [e.bbox() for e in ellipses]
    rejected = [False] * len(ellipses)
    cache = {}
    for pos, i in enumerate(order):
        if rejected[i]:
            continue
        for j in order[pos + 1:]:
            if rejected[j] or not _boxes_overlap(boxes[i], boxes[j]):
                continue
            if j not in cache:
                cache[j] = _coverage_pixels(ellipses[j])
            if coverage(ellipses[j], ellipses[i], cache[j]) > overlap_threshold:
                rejected[j] = True
    return [FilterVerdict(i, not r, OVERLAP_REJECTED if r else ACCEPTED)
            for i, r in enumerate(rejected)]


def apply_filters(objects, mask: np.ndarray, fill_threshold: float = 0.75,
                  overlap_threshold: float = 0.5) -> list[FilterVerdict]:
    """Masking test first, then the overlap test on the survivors."""
    verdicts = [None] * len(objects)
    survivors = []
    for i, obj in enumerate(objects):
        if masking_filter(obj, mask, fill_threshold):
            survivors.append(i)
        else:
            verdicts[i] = FilterVerdict(i, False, MASKING_REJECTED)
    for v in overlap_filter([objects[i] for i in survivors], overlap_threshold):
        i = survivors[v.object_id]
        verdicts[i] = FilterVerdict(i, v.accepted, v.reason)
    return verdicts
