import math
import sys

import numpy as np
import pytest


def disc_mask(shape, cx, cy, r):
    yy, xx = np.mgrid[:shape[0], :shape[1]]
    return (xx - cx) ** 2 + (yy - cy) ** 2 <= r * r


def polygon_mask(shape, vertices):
    """Pixel centres inside a simple polygon (even-odd rule)."""
    yy, xx = np.mgrid[:shape[0], :shape[1]]
    inside = np.zeros(shape, dtype=bool)
    v = np.asarray(vertices, dtype=float)
    n = len(v)
    for k in range(n):
        x1, y1 = v[k]
        x2, y2 = v[(k + 1) % n]
        crosses = (y1 > yy) != (y2 > yy)
        with np.errstate(divide="ignore", invalid="ignore"):
            xint = x1 + (yy - y1) * (x2 - x1) / (y2 - y1)
        inside ^= crosses & (xx < xint)
    return inside


def star_vertices(cx, cy, r_out, r_in, phase=0.0, points=5):
    verts = []
    for k in range(2 * points):
        r = r_out if k % 2 == 0 else r_in
        t = phase + k * math.pi / points
        verts.append((cx + r * math.cos(t), cy + r * math.sin(t)))
    return verts


def rect_perimeter(cx, cy, length, width, theta, step=0.5):
    """Points sampled along the boundary of a rotated rectangle."""
    hl, hw = length / 2, width / 2
    corners = [(-hl, -hw), (hl, -hw), (hl, hw), (-hl, hw)]
    pts = []
    for k in range(4):
        (x1, y1), (x2, y2) = corners[k], corners[(k + 1) % 4]
        n = max(2, int(math.hypot(x2 - x1, y2 - y1) / step))
        for t in np.linspace(0, 1, n, endpoint=False):
            pts.append((x1 + t * (x2 - x1), y1 + t * (y2 - y1)))
    pts = np.array(pts)
    c, s = math.cos(theta), math.sin(theta)
    rot = np.array([[c, -s], [s, c]])
    return pts @ rot.T + (cx, cy)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
