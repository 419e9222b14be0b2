"""Outer-border extraction by topological border following.

Each 8-connected foreground component yields one closed chain of boundary
pixels, started at the component's raster-first pixel. Hole borders are not
traced.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import ndimage

# (drow, dcol) in clockwise order as displayed (rows grow downward), starting east.
_DIRS = ((0, 1), (1, 1), (1, 0), (1, -1), (0, -1), (-1, -1), (-1, 0), (-1, 1))
_WEST = 4


@dataclass
class ContourCluster:
    """Closed chain of boundary pixels for one blob.

    ``points`` is an ``(N, 2)`` integer array of ``(x, y)`` pixel coordinates in
    traversal order; the last point is 8-adjacent to the first.
    """
    id: int
    points: np.ndarray

    def __len__(self):
        return len(self.points)


def signed_area(points: np.ndarray) -> float:
    """Shoelace area of a closed polygon in ``(x, y)`` coordinates."""
    pts = np.asarray(points, dtype=np.float64)
    x, y = pts[:, 0], pts[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))


def _follow(flat, stride, start):
    offsets = [dr * stride + dc for dr, dc in _DIRS]
    # Look clockwise from the west neighbour for the first foreground pixel.
    first = -1
    for k in range(8):
        d = (_WEST + k) % 8
        if flat[start + offsets[d]]:
            first = start + offsets[d]
            break
    if first < 0:
        return [start]
    chain = []
    prev, cur = first, start
    back = _direction_of(prev - cur, offsets)
    while True:
        # Counter-clockwise sweep beginning just after the previous pixel.
        nxt = -1
        for k in range(1, 9):
            d = (back - k) % 8
            cand = cur + offsets[d]
            if flat[cand]:
                nxt = cand
                break
        chain.append(cur)
        if nxt == start and cur == first:
            return chain
        back = (d + 4) % 8
        cur = nxt


def _direction_of(delta, offsets):
    return offsets.index(delta)


def trace_contours(mask: np.ndarray, min_points: int = 20) -> list[ContourCluster]:
    """Trace the outer border of every 8-connected foreground component.

    Chains are oriented so that their shoelace area in ``(x, y)`` coordinates
    is negative, i.e. counter-clockwise as the image is displayed with y
    pointing down. Chains shorter than ``min_points`` are discarded; ids are
    assigned consecutively in raster order of the start pixels.
    """
    mask = np.asarray(mask, dtype=bool)
    if mask.size == 0 or not mask.any():
        return []
    padded = np.pad(mask, 1)
    h, w = padded.shape
    flat = padded.ravel().tobytes()
    labels, n = ndimage.label(padded, structure=np.ones((3, 3), dtype=bool))
    _, first_idx = np.unique(labels.ravel(), return_index=True)
    starts = sorted(int(i) for i in first_idx[1:])  # label 0 is background

    clusters = []
    for start in starts:
        chain = _follow(flat, w, start)
        if len(chain) < min_points:
            continue
        idx = np.asarray(chain, dtype=np.int64)
        pts = np.column_stack([idx % w - 1, idx // w - 1])
        if signed_area(pts) > 0:
            pts = np.concatenate([pts[:1], pts[1:][::-1]])
        clusters.append(ContourCluster(id=len(clusters), points=pts))
    return clusters


def rasterize_chain(points: np.ndarray, shape) -> np.ndarray:
    """Mask of the region enclosed by a chain (chain pixels plus interior)."""
    out = np.zeros(shape, dtype=bool)
    pts = np.asarray(points)
    out[pts[:, 1], pts[:, 0]] = True
    return ndimage.binary_fill_holes(out)


def format_trace(clusters) -> str:
    """Debug dump, one contour per line: ``id: (x,y) (x,y) ...``."""
    lines = []
    for c in clusters:
        coords = " ".join(f"({x},{y})" for x, y in c.points.tolist())
        lines.append(f"{c.id}: {coords}")
    return "\n".join(lines) + ("\n" if lines else "")
