"""End-to-end segmentation of one image, and the tunable configuration."""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field

import numpy as np

from .concavity import concave_points
from .errors import ParameterError, SegmentationError
from .filters import ACCEPTED, apply_filters
from .grouping import fit_segment, map_segments, split_segments
from .imgproc import binarize
from .shapefit import shape_object
from .tracer import trace_contours


@dataclass
class PipelineConfig:
    median_radius: int = 1
    open_radius: int = 1
    close_radius: int = 2
    min_area: int = 30
    dark_foreground: bool = True
    min_contour_points: int = 20
    rdp_epsilon: float = 2.0
    orient_tol_deg: float = 10.0
    proximity_factor: float = 2.5
    aspect_threshold: float = 2.0
    fill_threshold: float = 0.75
    overlap_threshold: float = 0.5
    rho: float = 8.0
    scale: float = 1.0  # micrometres per pixel
    density_alpha: float = 1.369
    density_beta: float = 1.379

    def validate(self):
        checks = [
            ("median_radius", self.median_radius >= 0),
            ("open_radius", self.open_radius >= 0),
            ("close_radius", self.close_radius >= 0),
            ("min_area", self.min_area >= 0),
            ("min_contour_points", self.min_contour_points >= 3),
            ("rdp_epsilon", self.rdp_epsilon > 0),
            ("orient_tol_deg", 0 < self.orient_tol_deg <= 90),
            ("proximity_factor", self.proximity_factor > 0),
            ("aspect_threshold", self.aspect_threshold >= 1),
            ("fill_threshold", 0 <= self.fill_threshold <= 1),
            ("overlap_threshold", 0 <= self.overlap_threshold <= 1),
            ("rho", self.rho > 0),
            ("scale", self.scale > 0),
            ("density_alpha", self.density_alpha > 0),
            ("density_beta", self.density_beta > 0),
        ]
        bad = [name for name, ok in checks if not ok]
        if bad:
            raise ParameterError("invalid config value(s): " + ", ".join(
                f"{n}={getattr(self, n)!r}" for n in bad))
        return self

    @property
    def orient_tol(self) -> float:
        return math.radians(self.orient_tol_deg)

    @property
    def densities(self):
        return {"alpha": self.density_alpha, "beta": self.density_beta}

    def updated(self, pairs) -> "PipelineConfig":
        """Copy with ``key=value`` string overrides applied."""
        return dataclasses.replace(self, **parse_assignments(pairs)).validate()

    def to_text(self) -> str:
        lines = ["# effective pipeline configuration"]
        for f in dataclasses.fields(self):
            v = getattr(self, f.name)
            text = str(v).lower() if isinstance(v, bool) else repr(v)
            lines.append(f"{f.name} = {text}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "PipelineConfig":
        pairs = []
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ParameterError(f"line {lineno}: expected key = value, got {raw!r}")
            pairs.append(line)
        return cls().updated(pairs)


_FIELD_TYPES = {f.name: f.type for f in dataclasses.fields(PipelineConfig)}


def _convert(key, raw):
    kind = _FIELD_TYPES[key]
    raw = raw.strip()
    if kind in ("bool", bool):
        low = raw.lower()
        if low in ("true", "1", "yes", "on"):
            return True
        if low in ("false", "0", "no", "off"):
            return False
        raise ParameterError(f"{key}: not a boolean: {raw!r}")
    try:
        if kind in ("int", int):
            return int(raw)
        return float(raw)
    except ValueError:
        raise ParameterError(f"{key}: cannot parse {raw!r}") from None


def parse_assignments(pairs) -> dict:
    out = {}
    for item in pairs:
        key, sep, value = item.partition("=")
        key = key.strip()
        if not sep:
            raise ParameterError(f"expected key=value, got {item!r}")
        if key not in _FIELD_TYPES:
            raise ParameterError(f"unknown config key {key!r}")
        out[key] = _convert(key, value)
    return out


@dataclass
class ClusterTrace:
    """Intermediate products for one contour cluster (for overlays and checks)."""
    cluster: object
    corners: np.ndarray
    concave: np.ndarray
    segments: list
    groups: list


@dataclass
class ImageResult:
    mask: np.ndarray
    clusters: list = field(default_factory=list)
    objects: list = field(default_factory=list)
    verdicts: list = field(default_factory=list)
    diagnostics: list = field(default_factory=list)

    @property
    def accepted(self):
        return [o for o, v in zip(self.objects, self.verdicts) if v.reason == ACCEPTED]


def process_cluster(cluster, cfg: PipelineConfig) -> ClusterTrace:
    corners, concave = concave_points(cluster.points, cfg.rdp_epsilon)
    segments = split_segments(cluster.points, concave, cluster.id)
    fits = [fit_segment(s) for s in segments]
    groups = map_segments(segments, cfg.orient_tol, cfg.proximity_factor,
                          cfg.aspect_threshold, fits=fits)
    return ClusterTrace(cluster, corners, concave, segments, groups)


def segment_mask(mask: np.ndarray, cfg: PipelineConfig | None = None) -> ImageResult:
    """Contour, split, group, fit and filter objects of a binary mask."""
    cfg = cfg or PipelineConfig()
    result = ImageResult(mask=mask)
    for cluster in trace_contours(mask, cfg.min_contour_points):
        trace = process_cluster(cluster, cfg)
        result.clusters.append(trace)
        for gid, group in enumerate(trace.groups):
            try:
                obj = shape_object(group, cfg.aspect_threshold, cluster.id, gid)
            except SegmentationError as exc:
                result.diagnostics.append(
                    f"cluster {cluster.id} group {gid}: dropped ({exc})")
                continue
            result.objects.append(obj)
    result.verdicts = apply_filters(result.objects, mask, cfg.fill_threshold,
                                    cfg.overlap_threshold)
    return result


def segment_image(gray: np.ndarray, cfg: PipelineConfig | None = None) -> ImageResult:
    """Full pipeline on an 8-bit gray image."""
    cfg = cfg or PipelineConfig()
    mask = binarize(gray, cfg.median_radius, cfg.dark_foreground, cfg.open_radius,
                    cfg.close_radius, cfg.min_area)
    return segment_mask(mask, cfg)
