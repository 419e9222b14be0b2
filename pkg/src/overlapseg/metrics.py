"""Center-based evaluation (precision, recall, Jaccard) and composition analysis."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import ParameterError, UndefinedReportError
from .shapefit import ROD_LIKE, px_to_um

ALPHA_DENSITY = 1.369  # g/ml, rod polymorph
BETA_DENSITY = 1.379  # g/ml, round polymorph


@dataclass(frozen=True)
class GroundTruthEntry:
    x: float
    y: float
    shape_class: Optional[str] = None


@dataclass
class EvalReport:
    tp: int
    fp: int
    fn: int
    precision: Optional[float]
    recall: Optional[float]
    jsc: Optional[float]
    rho: float


@dataclass
class CompositionReport:
    weight_pct: dict
    volumes: dict
    densities: dict
    counts: dict = field(default_factory=dict)


def _centers(items):
    out = []
    for it in items:
        if hasattr(it, "center"):
            out.append(it.center)
        elif hasattr(it, "x"):
            out.append((it.x, it.y))
        else:
            out.append(tuple(it)[:2])
    return np.asarray(out, dtype=np.float64).reshape(-1, 2)


def distance_matrix(dets, gt) -> np.ndarray:
    a, b = _centers(dets), _centers(gt)
    return np.hypot(a[:, None, 0] - b[None, :, 0], a[:, None, 1] - b[None, :, 1])


def greedy_pairs(dist: np.ndarray, rho: float):
    """Nearest-first one-to-one matching of pairs closer than ``rho``."""
    cand = np.argwhere(dist < rho)
    order = sorted(range(len(cand)), key=lambda k: (dist[tuple(cand[k])], *cand[k]))
    used_d, used_g, pairs = set(), set(), []
    for k in order:
        i, j = (int(v) for v in cand[k])
        if i in used_d or j in used_g:
            continue
        used_d.add(i)
        used_g.add(j)
        pairs.append((i, j))
    return sorted(pairs)


def optimal_pairs(dist: np.ndarray, rho: float):
    """Maximum-cardinality matching under ``rho``, minimum total distance among those.

    Forbidden pairs get a cost larger than any sum of allowed distances, so
    the assignment first maximizes the number of allowed pairs.
    """
    if dist.size == 0:
        return []
    allowed = dist < rho
    if not allowed.any():
        return []
    big = float(dist[allowed].sum()) + 1.0
    cost = np.where(allowed, dist, big)
    rows, cols = linear_sum_assignment(cost)
    return sorted((int(i), int(j)) for i, j in zip(rows, cols) if allowed[i, j])


def match_detections(dets, gt, rho: float = 8.0, method: str = "optimal"):
    """One-to-one center matching within distance ``rho`` (strict).

    Returns ``(tp, fp, fn, pairs)`` with ``pairs`` as ``(det_index, gt_index)``.
    ``method`` is ``"optimal"`` (default) or ``"greedy"``.
    """
    if rho < 0:
        raise ParameterError("rho must be >= 0")
    dist = distance_matrix(dets, gt)
    if method == "optimal":
        pairs = optimal_pairs(dist, rho)
    elif method == "greedy":
        pairs = greedy_pairs(dist, rho)
    else:
        raise ParameterError(f"unknown matching method {method!r}")
    tp = len(pairs)
    return tp, dist.shape[0] - tp, dist.shape[1] - tp, pairs


def precision_recall(tp: int, fp: int, fn: int):
    """Precision and recall; ``None`` where the denominator is zero."""
    precision = tp / (tp + fp) if tp + fp > 0 else None
    recall = tp / (tp + fn) if tp + fn > 0 else None
    return precision, recall


def jsc(dets, gt, rho: float = 8.0) -> Optional[float]:
    """Jaccard index of detection and ground-truth center sets at ``rho``."""
    n_det, n_gt = len(dets), len(gt)
    if n_det + n_gt == 0:
        return None
    tp = match_detections(dets, gt, rho)[0]
    return tp / (n_det + n_gt - tp)


def evaluate(dets, gt, rho: float = 8.0) -> EvalReport:
    tp, fp, fn, _ = match_detections(dets, gt, rho)
    p, r = precision_recall(tp, fp, fn)
    j = tp / (tp + fp + fn) if tp + fp + fn else None
    return EvalReport(tp, fp, fn, p, r, j, rho)


def evaluate_dataset(images, rho: float = 8.0) -> EvalReport:
    """Pooled counts over ``(dets, gt)`` pairs; ``jsc`` is the per-image mean (AJSC)."""
    reports = [evaluate(d, g, rho) for d, g in images]
    tp = sum(r.tp for r in reports)
    fp = sum(r.fp for r in reports)
    fn = sum(r.fn for r in reports)
    p, r = precision_recall(tp, fp, fn)
    js = [x.jsc for x in reports if x.jsc is not None]
    return EvalReport(tp, fp, fn, p, r, float(np.mean(js)) if js else None, rho)


def ajsc_curve(images, rho_values):
    """``(rho, mean JSC)`` for each threshold; images with undefined JSC are skipped."""
    rho_values = list(rho_values)
    if not rho_values:
        raise ParameterError("rho_values must be nonempty")
    images = list(images)
    curve = []
    for rho in rho_values:
        vals = [jsc(d, g, rho) for d, g in images]
        vals = [v for v in vals if v is not None]
        curve.append((rho, float(np.mean(vals)) if vals else None))
    return curve


def rod_volume(length: float, width: float) -> float:
    return math.pi * (width / 2) ** 2 * length


def sphere_volume(a: float, b: float) -> float:
    r = (a + b) / 2
    return 4.0 / 3.0 * math.pi * r ** 3


def object_volume(obj, scale: float) -> float:
    """Volume in cubic micrometres: cylinder for rods, sphere otherwise."""
    if obj.shape_class == ROD_LIKE and obj.rod is not None:
        return rod_volume(px_to_um(obj.rod.length, scale), px_to_um(obj.rod.width, scale))
    return sphere_volume(px_to_um(obj.ellipse.a, scale), px_to_um(obj.ellipse.b, scale))


def composition(objects, densities=None, scale: float = 1.0) -> CompositionReport:
    """Weight percentage of the rod (alpha) and round (beta) classes."""
    objects = list(objects)
    if not objects:
        raise UndefinedReportError("no objects to analyse")
    if scale <= 0:
        raise ParameterError("scale must be positive")
    densities = dict(densities or {"alpha": ALPHA_DENSITY, "beta": BETA_DENSITY})
    volumes = {"alpha": 0.0, "beta": 0.0}
    counts = {"alpha": 0, "beta": 0}
    for obj in objects:
        key = "alpha" if obj.shape_class == ROD_LIKE else "beta"
        volumes[key] += object_volume(obj, scale)
        counts[key] += 1
    mass = {k: volumes[k] * densities[k] for k in volumes}
    total = sum(mass.values())
    if total <= 0:
        raise UndefinedReportError("total mass is zero")
    pct = {"alpha": 100.0 * mass["alpha"] / total}
    pct["beta"] = 100.0 - pct["alpha"]
    return CompositionReport(pct, volumes, densities, counts)
