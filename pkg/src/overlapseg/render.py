"""Overlay drawing for segmentation results."""

from __future__ import annotations

import colorsys

import numpy as np
from PIL import Image, ImageDraw

from .filters import ACCEPTED, MASKING_REJECTED

RED = (255, 0, 0)
BLUE = (0, 80, 255)
GREEN = (0, 200, 0)
ORANGE = (255, 150, 0)
YELLOW = (255, 230, 0)
MAGENTA = (255, 0, 255)


def _rgb(gray):
    return Image.fromarray(np.ascontiguousarray(gray, dtype=np.uint8)).convert("RGB")


def _poly(points):
    return [(float(x), float(y)) for x, y in points]


def group_color(k: int):
    """Deterministic, well-spread color for group ``k``."""
    h = (k * 0.618033988749895) % 1.0
    r, g, b = colorsys.hsv_to_rgb(h, 0.9, 1.0)
    return int(r * 255), int(g * 255), int(b * 255)


def draw_results(gray, result, show_rejected: bool = True) -> Image.Image:
    """Red ellipses for round objects, blue boxes for rods.

    Rejected objects are drawn as green (masking) or orange (overlap) ellipses.
    """
    im = _rgb(gray)
    draw = ImageDraw.Draw(im)
    for obj, verdict in zip(result.objects, result.verdicts):
        if verdict.reason == ACCEPTED:
            if obj.rod is not None:
                draw.polygon(_poly(obj.rod.corners()), outline=BLUE)
            else:
                draw.polygon(_poly(obj.ellipse.sample(72)), outline=RED)
        elif show_rejected:
            color = GREEN if verdict.reason == MASKING_REJECTED else ORANGE
            draw.polygon(_poly(obj.ellipse.sample(72)), outline=color)
    return im


def draw_debug(gray, result) -> Image.Image:
    """Segments colored by group, corner points in yellow, concave points in magenta."""
    im = _rgb(gray)
    draw = ImageDraw.Draw(im)
    k = 0
    for trace in result.clusters:
        for group in trace.groups:
            color = group_color(k)
            k += 1
            for i in group.members:
                pts = trace.segments[i].points
                draw.point(_poly(pts), fill=color)
        pts = trace.cluster.points
        for i in trace.corners:
            x, y = pts[i]
            draw.rectangle([x - 1, y - 1, x + 1, y + 1], outline=YELLOW)
        for i in trace.concave:
            x, y = pts[i]
            draw.ellipse([x - 3, y - 3, x + 3, y + 3], outline=MAGENTA)
    return im
