"""Seeded synthetic scenes of overlapping discs/ellipses and rods with exact truth."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import ParameterError, PlacementError
from .filters import rasterize
from .geomfit import Ellipse
from .metrics import ALPHA_DENSITY, BETA_DENSITY, rod_volume, sphere_volume
from .shapefit import CIRCLE_LIKE, ROD_LIKE, RodBox


@dataclass
class SceneSpec:
    width: int = 640
    height: int = 480
    count: int = 40
    rod_fraction: float = 0.0
    # semi-major axis range for round objects, and their a/b range
    radius: tuple = (15.0, 30.0)
    aspect: tuple = (1.0, 1.0)
    rod_length: tuple = (80.0, 140.0)
    rod_width: tuple = (12.0, 20.0)
    max_overlap: float = 0.3
    background: int = 200
    foreground: int = 60
    noise_sigma: float = 8.0
    seed: int = 0
    margin: int = 3
    max_tries: int = 1000
    scale: float = 1.0
    # When set, classes are chosen to steer the rod weight share to this percentage.
    target_alpha_weight: Optional[float] = None

    def validate(self):
        if self.width <= 0 or self.height <= 0:
            raise ParameterError("image size must be positive")
        if self.count < 0:
            raise ParameterError("count must be >= 0")
        for name in ("rod_fraction", "max_overlap"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ParameterError(f"{name} must be in [0, 1]")
        for name in ("radius", "aspect", "rod_length", "rod_width"):
            lo, hi = getattr(self, name)
            if not 0 < lo <= hi:
                raise ParameterError(f"{name} range must be positive and ordered")
        if self.aspect[0] < 1.0:
            raise ParameterError("aspect must be >= 1")
        if self.noise_sigma < 0:
            raise ParameterError("noise_sigma must be >= 0")
        if self.scale <= 0:
            raise ParameterError("scale must be positive")
        if self.target_alpha_weight is not None and not 0 <= self.target_alpha_weight <= 100:
            raise ParameterError("target_alpha_weight must be a percentage")


@dataclass
class TruthObject:
    shape_class: str
    cx: float
    cy: float
    a: float = 0.0
    b: float = 0.0
    theta: float = 0.0
    length: float = 0.0
    width: float = 0.0
    volume: float = 0.0  # cubic micrometres at the scene scale

    @property
    def center(self):
        return (self.cx, self.cy)

    def shape(self):
        if self.shape_class == ROD_LIKE:
            return RodBox(self.cx, self.cy, self.length, self.width, self.theta)
        return Ellipse(self.cx, self.cy, self.a, self.b, self.theta)


@dataclass
class SceneTruth:
    objects: list = field(default_factory=list)
    scale: float = 1.0


def _pixels(shape):
    x0, y0, inside = rasterize(shape)
    ys, xs = np.nonzero(inside)
    return xs + x0, ys + y0


def _bbox_inside(shape, spec):
    if isinstance(shape, Ellipse):
        xmin, ymin, xmax, ymax = shape.bbox()
    else:
        c = shape.corners()
        xmin, ymin = c.min(axis=0)
        xmax, ymax = c.max(axis=0)
    m = spec.margin
    return xmin >= m and ymin >= m and xmax <= spec.width - 1 - m and ymax <= spec.height - 1 - m


def _draw_shape(rng, spec, cls):
    theta = rng.uniform(0.0, math.pi)
    if cls == ROD_LIKE:
        length = rng.uniform(*spec.rod_length)
        width = rng.uniform(*spec.rod_width)
        return dict(length=length, width=width, theta=theta)
    a = rng.uniform(*spec.radius)
    b = a / rng.uniform(*spec.aspect)
    return dict(a=a, b=b, theta=theta)


def _volume(obj: TruthObject, scale):
    if obj.shape_class == ROD_LIKE:
        return rod_volume(obj.length * scale, obj.width * scale)
    return sphere_volume(obj.a * scale, obj.b * scale)


def generate_scene(spec: SceneSpec):
    """Render a scene; returns ``(gray_image, SceneTruth)``.

    Objects are placed by rejection sampling so that no pair overlaps by more
    than ``max_overlap`` of the smaller one's rasterized area. Identical specs
    produce identical output.
    """
    spec.validate()
    rng = np.random.default_rng(spec.seed)
    occupancy = np.zeros((spec.height, spec.width), dtype=bool)
    scratch = np.zeros_like(occupancy)
    # per-object pixel lists, so pairwise intersections can be counted
    placed_px, placed_box = [], []
    truth = SceneTruth(scale=spec.scale)
    mass = {ROD_LIKE: 0.0, CIRCLE_LIKE: 0.0}
    for k in range(spec.count):
        if spec.target_alpha_weight is not None:
            total = mass[ROD_LIKE] + mass[CIRCLE_LIKE]
            share = 100.0 * mass[ROD_LIKE] / total if total else 0.0
            cls = ROD_LIKE if share < spec.target_alpha_weight else CIRCLE_LIKE
        else:
            cls = ROD_LIKE if rng.random() < spec.rod_fraction else CIRCLE_LIKE
        for _ in range(spec.max_tries):
            dims = _draw_shape(rng, spec, cls)
            cx = rng.uniform(0, spec.width - 1)
            cy = rng.uniform(0, spec.height - 1)
            obj = TruthObject(cls, cx, cy, **dims)
            shape = obj.shape()
            if not _bbox_inside(shape, spec):
                continue
            xs, ys = _pixels(shape)
            if len(xs) == 0:
                continue
            if _overlap_ok(xs, ys, scratch, placed_px, placed_box, spec.max_overlap):
                break
        else:
            raise PlacementError(
                f"could not place object {k} within max_overlap={spec.max_overlap} "
                f"after {spec.max_tries} tries")
        obj.volume = _volume(obj, spec.scale)
        mass[cls] += obj.volume * (ALPHA_DENSITY if cls == ROD_LIKE else BETA_DENSITY)
        truth.objects.append(obj)
        placed_px.append((xs, ys))
        placed_box.append((xs.min(), ys.min(), xs.max(), ys.max()))
        occupancy[ys, xs] = True
    img = np.full((spec.height, spec.width), float(spec.background))
    img[occupancy] = spec.foreground
    if spec.noise_sigma > 0:
        img += rng.normal(0.0, spec.noise_sigma, img.shape)
    img = np.clip(np.floor(img + 0.5), 0, 255).astype(np.uint8)
    return img, truth


def _overlap_ok(xs, ys, scratch, placed_px, placed_box, max_overlap):
    box = (xs.min(), ys.min(), xs.max(), ys.max())
    scratch[ys, xs] = True
    try:
        for (oxs, oys), ob in zip(placed_px, placed_box):
            if ob[2] < box[0] or box[2] < ob[0] or ob[3] < box[1] or box[3] < ob[1]:
                continue
            inter = int(scratch[oys, oxs].sum())
            if inter > max_overlap * min(len(xs), len(oxs)):
                return False
        return True
    finally:
        scratch[ys, xs] = False


def pairwise_overlap(truth: SceneTruth) -> float:
    """Largest pairwise intersection over smaller area, by rasterization."""
    px = [set(zip(*(v.tolist() for v in _pixels(o.shape())))) for o in truth.objects]
    worst = 0.0
    for i in range(len(px)):
        for j in range(i + 1, len(px)):
            inter = len(px[i] & px[j])
            if inter:
                worst = max(worst, inter / min(len(px[i]), len(px[j])))
    return worst
