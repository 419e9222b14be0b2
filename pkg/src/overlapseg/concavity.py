"""Corner points by polyline simplification and concave points by orientation breaks."""

from __future__ import annotations

import numpy as np

from .errors import AmbiguousOrientationError, ParameterError


def point_segment_distance(pts: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Euclidean distance from each row of ``pts`` to the segment ``a-b``."""
    pts = np.asarray(pts, dtype=np.float64)
    a = np.asarray(a, dtype=np.float64)
    ab = np.asarray(b, dtype=np.float64) - a
    ap = pts - a
    denom = float(ab @ ab)
    if denom == 0.0:
        return np.hypot(ap[:, 0], ap[:, 1])
    t = np.clip(ap @ ab / denom, 0.0, 1.0)
    d = ap - t[:, None] * ab
    return np.hypot(d[:, 0], d[:, 1])


def _simplify_open(pts, first, last, epsilon, keep):
    stack = [(first, last)]
    while stack:
        i, j = stack.pop()
        if j - i < 2:
            continue
        d = point_segment_distance(pts[i + 1:j], pts[i], pts[j])
        k = int(np.argmax(d))
        if d[k] > epsilon:
            k += i + 1
            keep[k] = True
            stack.append((i, k))
            stack.append((k, j))


def rdp_simplify(points, epsilon: float = 2.0) -> np.ndarray:
    """Ramer-Douglas-Peucker on a closed contour.

    The contour is cut at point 0 and at the point farthest from it; both
    halves are simplified recursively (distances measured to the chord
    segment, first maximum wins). Returns the retained indices in traversal
    order.
    """
    pts = np.asarray(points, dtype=np.float64)
    n = len(pts)
    if epsilon <= 0:
        raise ParameterError("epsilon must be > 0")
    if n < 3:
        raise ParameterError("need at least 3 contour points")
    far = int(np.argmax(np.hypot(*(pts - pts[0]).T)))
    if far == 0:
        return np.array([0], dtype=np.int64)
    closed = np.vstack([pts, pts[:1]])
    keep = np.zeros(n + 1, dtype=bool)
    keep[0] = keep[far] = True
    _simplify_open(closed, 0, far, epsilon, keep)
    _simplify_open(closed, far, n, epsilon, keep)
    return np.flatnonzero(keep[:n])


def cross_sign(p_prev, p, p_next) -> int:
    """Sign of the z-component of ``(p - p_prev) x (p_next - p)``."""
    z = ((p[0] - p_prev[0]) * (p_next[1] - p[1])
         - (p[1] - p_prev[1]) * (p_next[0] - p[0]))
    return int(np.sign(z))


def corner_orientations(corner_pts: np.ndarray) -> np.ndarray:
    """Per-corner orientation signs with circular neighbours."""
    c = np.asarray(corner_pts, dtype=np.int64)
    prev = np.roll(c, 1, axis=0)
    nxt = np.roll(c, -1, axis=0)
    z = ((c[:, 0] - prev[:, 0]) * (nxt[:, 1] - c[:, 1])
         - (c[:, 1] - prev[:, 1]) * (nxt[:, 0] - c[:, 0]))
    return np.sign(z)


def extract_concave_points(points, corners) -> np.ndarray:
    """Select corners whose turn direction disagrees with the net contour turn.

    ``corners`` indexes into ``points``. The net orientation is the sign of the
    summed per-corner signs; collinear corners (sign 0) are never concave.
    Returns the concave subset of ``corners`` (contour indices) in order.
    Raises ``AmbiguousOrientationError`` when the signs cancel exactly.
    """
    corners = np.asarray(corners, dtype=np.int64)
    if len(corners) < 3:
        raise ParameterError("need at least 3 corner points")
    orient = corner_orientations(np.asarray(points)[corners])
    net = int(np.sign(orient.sum()))
    if net == 0:
        raise AmbiguousOrientationError("corner orientation signs sum to zero")
    concave = (orient != 0) & (orient != net)
    return corners[concave]


def concave_points(points, epsilon: float = 2.0):
    """Corners and concave points of one contour.

    Returns ``(corners, concave)`` as contour index arrays. Contours with fewer
    than three corners, or with ambiguous orientation, have no concave points.
    """
    pts = np.asarray(points)
    corners = rdp_simplify(pts, epsilon)
    if len(corners) < 3:
        return corners, corners[:0]
    try:
        return corners, extract_concave_points(pts, corners)
    except AmbiguousOrientationError:
        return corners, corners[:0]
