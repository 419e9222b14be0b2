"""Line-oriented text formats: results, ground truth, scene truth, reports.

Column layouts are described in FORMATS.md; every file allows ``#`` comments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

from .errors import ParameterError
from .geomfit import Ellipse
from .metrics import GroundTruthEntry
from .shapefit import CIRCLE_LIKE, ROD_LIKE, DetectedObject, RodBox
from .synthgen import SceneSpec, TruthObject

RESULT_COLUMNS = (
    "image", "object", "cluster", "group", "class", "verdict",
    "cx", "cy", "cx_um", "cy_um",
    "ex", "ey", "a", "b", "theta", "a_um", "b_um",
    "length", "width", "rod_theta", "length_um", "width_um",
)

_CLASS_ALIASES = {
    "circlelike": CIRCLE_LIKE, "circle": CIRCLE_LIKE, "beta": CIRCLE_LIKE,
    "rodlike": ROD_LIKE, "rod": ROD_LIKE, "alpha": ROD_LIKE,
}


class FormatError(ParameterError):
    pass


def parse_class(token: str) -> str:
    try:
        return _CLASS_ALIASES[token.lower()]
    except KeyError:
        raise FormatError(f"unknown shape class {token!r}") from None


def _f(v, digits=3):
    return f"{v:.{digits}f}"


@dataclass
class ResultRow:
    image: str
    object: int
    cluster: int
    group: int
    verdict: str
    detection: DetectedObject

    @property
    def accepted(self):
        return self.verdict == "Accepted"


def format_results(image_results, scale: float = 1.0) -> str:
    """Serialize ``[(image_name, ImageResult), ...]``; names must not contain tabs."""
    lines = ["# overlapseg results v1", "# " + "\t".join(RESULT_COLUMNS)]
    for name, res in image_results:
        counts = {"Accepted": 0, "MaskingRejected": 0, "OverlapRejected": 0}
        for v in res.verdicts:
            counts[v.reason] += 1
        lines.append(
            f"# image {name}: fitted_groups={len(res.objects)} accepted={counts['Accepted']} "
            f"masking_rejected={counts['MaskingRejected']} "
            f"overlap_rejected={counts['OverlapRejected']} dropped={len(res.diagnostics)}")
    for name, res in image_results:
        if "\t" in name:
            raise FormatError(f"image name contains a tab: {name!r}")
        for k, (obj, verdict) in enumerate(zip(res.objects, res.verdicts)):
            lines.append("\t".join(result_fields(name, k, obj, verdict.reason, scale)))
    return "\n".join(lines) + "\n"


def result_fields(name, k, obj, verdict, scale):
    e = obj.ellipse
    cx, cy = obj.center
    row = [name, str(k), str(obj.cluster_id), str(obj.group_id), obj.shape_class, verdict,
           _f(cx), _f(cy), _f(cx * scale), _f(cy * scale),
           _f(e.cx), _f(e.cy), _f(e.a), _f(e.b), _f(e.theta, 6), _f(e.a * scale), _f(e.b * scale)]
    if obj.rod is not None:
        r = obj.rod
        row += [_f(r.length), _f(r.width), _f(r.theta, 6), _f(r.length * scale), _f(r.width * scale)]
    else:
        row += ["-"] * 5
    return row


def parse_results(text: str) -> list[ResultRow]:
    rows = []
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != len(RESULT_COLUMNS):
            raise FormatError(
                f"line {lineno}: expected {len(RESULT_COLUMNS)} tab-separated fields, got {len(parts)}")
        try:
            rows.append(_row_from_fields(parts))
        except (ValueError, KeyError) as exc:
            raise FormatError(f"line {lineno}: {exc}") from None
    return rows


def _row_from_fields(p):
    image, obj, cluster, group, cls, verdict = p[:6]
    cls = parse_class(cls)
    if verdict not in ("Accepted", "MaskingRejected", "OverlapRejected"):
        raise ValueError(f"bad verdict {verdict!r}")
    cx, cy = float(p[6]), float(p[7])
    ex, ey, a, b, theta = (float(v) for v in p[10:15])
    e = Ellipse.canonical(ex, ey, a, b, theta)
    rod = None
    if p[17] != "-":
        length, width, rtheta = float(p[17]), float(p[18]), float(p[19])
        rod = RodBox(cx, cy, length, width, rtheta)
    det = DetectedObject(cls, e, rod, int(cluster), int(group))
    return ResultRow(image, int(obj), int(cluster), int(group), verdict, det)


def read_results(path) -> list[ResultRow]:
    return parse_results(Path(path).read_text())


def format_ground_truth(entries) -> str:
    lines = ["# x y [class]"]
    for g in entries:
        cls = f" {g.shape_class}" if g.shape_class else ""
        lines.append(f"{_f(g.x)} {_f(g.y)}{cls}")
    return "\n".join(lines) + "\n"


def parse_ground_truth(text: str) -> list[GroundTruthEntry]:
    out = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) not in (2, 3):
            raise FormatError(f"line {lineno}: expected 'x y [class]', got {raw!r}")
        try:
            x, y = float(parts[0]), float(parts[1])
        except ValueError:
            raise FormatError(f"line {lineno}: non-numeric coordinate in {raw!r}") from None
        if not (math.isfinite(x) and math.isfinite(y)):
            raise FormatError(f"line {lineno}: non-finite coordinate")
        cls = parse_class(parts[2]) if len(parts) == 3 else None
        out.append(GroundTruthEntry(x, y, cls))
    return out


def read_ground_truth(path) -> list[GroundTruthEntry]:
    return parse_ground_truth(Path(path).read_text())


TRUTH_COLUMNS = ("class", "cx", "cy", "a", "b", "theta", "length", "width", "volume_um3")


def format_truth(truth) -> str:
    lines = [f"# scale_um_per_px {truth.scale!r}", "# " + " ".join(TRUTH_COLUMNS)]
    for o in truth.objects:
        lines.append(" ".join([o.shape_class, _f(o.cx, 6), _f(o.cy, 6), _f(o.a, 6), _f(o.b, 6),
                               _f(o.theta, 6), _f(o.length, 6), _f(o.width, 6),
                               _f(o.volume, 6)]))
    return "\n".join(lines) + "\n"


def parse_truth(text: str) -> list[TruthObject]:
    out = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != len(TRUTH_COLUMNS):
            raise FormatError(f"line {lineno}: expected {len(TRUTH_COLUMNS)} fields")
        try:
            vals = [float(v) for v in parts[1:]]
        except ValueError:
            raise FormatError(f"line {lineno}: non-numeric field") from None
        out.append(TruthObject(parse_class(parts[0]), *vals))
    return out


def truth_to_detection(o: TruthObject) -> DetectedObject:
    """Perfect detection matching a truth object (for composition checks)."""
    if o.shape_class == ROD_LIKE:
        rod = RodBox(o.cx, o.cy, o.length, o.width, o.theta)
        e = Ellipse.canonical(o.cx, o.cy, o.length / 2, o.width / 2, o.theta)
        return DetectedObject(ROD_LIKE, e, rod)
    return DetectedObject(CIRCLE_LIKE, Ellipse.canonical(o.cx, o.cy, o.a, o.b, o.theta))


def truth_to_results(name: str, truth_objects, scale: float = 1.0) -> str:
    """Results-file text describing ``truth_objects`` as accepted detections."""
    lines = ["# overlapseg results v1", "# " + "\t".join(RESULT_COLUMNS)]
    for k, o in enumerate(truth_objects):
        det = truth_to_detection(o)
        det.group_id = k
        lines.append("\t".join(result_fields(name, k, det, "Accepted", scale)))
    return "\n".join(lines) + "\n"


def _fmt_opt(v):
    return "absent" if v is None else repr(round(float(v), 12))


def format_report(report, n_images: int) -> str:
    lines = [
        "# overlapseg evaluation report",
        f"tp = {report.tp}",
        f"fp = {report.fp}",
        f"fn = {report.fn}",
        f"precision = {_fmt_opt(report.precision)}",
        f"recall = {_fmt_opt(report.recall)}",
        f"ajsc = {_fmt_opt(report.jsc)}",
        f"rho = {report.rho!r}",
        f"images = {n_images}",
    ]
    return "\n".join(lines) + "\n"


def parse_keyvalue(text: str) -> dict:
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise FormatError(f"line {lineno}: expected key = value")
        out[key.strip()] = value.strip()
    return out


def format_curve(curve) -> str:
    lines = ["# rho,ajsc"]
    for rho, v in curve:
        lines.append(f"{rho!r},{'' if v is None else repr(round(v, 12))}")
    return "\n".join(lines) + "\n"


def format_composition(report) -> str:
    lines = ["# overlapseg composition report (alpha = rod class, beta = round class)"]
    for k in ("alpha", "beta"):
        lines.append(f"{k}_wt_pct = {report.weight_pct[k]!r}")
    for k in ("alpha", "beta"):
        lines.append(f"{k}_volume_um3 = {report.volumes[k]!r}")
    for k in ("alpha", "beta"):
        lines.append(f"{k}_count = {report.counts[k]}")
    for k in ("alpha", "beta"):
        lines.append(f"{k}_density_g_per_ml = {report.densities[k]!r}")
    return "\n".join(lines) + "\n"


_RANGE_FIELDS = ("radius", "aspect", "rod_length", "rod_width")
_SYNTH_EXTRA = ("images", "subsets", "prefix")


def parse_scene_specs(text: str):
    """Parse a synth spec file into ``[(name, SceneSpec), ...]``.

    Keys are ``SceneSpec`` fields plus ``images`` (per subset), ``subsets`` and
    ``prefix``. Ranges are written ``lo, hi``; ``rod_fraction`` may list one
    value per subset. Scene ``i`` gets seed ``seed + i``.
    """
    kv = parse_keyvalue(text)
    fields = SceneSpec.__dataclass_fields__
    unknown = [k for k in kv if k not in fields and k not in _SYNTH_EXTRA]
    if unknown:
        raise FormatError(f"unknown synth key(s): {', '.join(unknown)}")
    subsets = int(kv.get("subsets", 1))
    per_subset = int(kv.get("images", 1))
    prefix = kv.get("prefix", "scene")
    if subsets < 1 or per_subset < 1:
        raise FormatError("subsets and images must be >= 1")
    fractions = [float(v) for v in kv.get("rod_fraction", "0").split(",")]
    if len(fractions) == 1:
        fractions *= subsets
    if len(fractions) != subsets:
        raise FormatError("rod_fraction needs one value or one per subset")
    base = {}
    try:
        for k, v in kv.items():
            if k in _SYNTH_EXTRA or k == "rod_fraction":
                continue
            if k in _RANGE_FIELDS:
                lo, hi = (float(x) for x in v.split(","))
                base[k] = (lo, hi)
            elif k in ("max_overlap", "noise_sigma", "scale"):
                base[k] = float(v)
            elif k == "target_alpha_weight":
                base[k] = None if v.lower() in ("none", "") else float(v)
            else:
                base[k] = int(v)
    except ValueError as exc:
        raise FormatError(str(exc)) from None
    seed0 = base.pop("seed", 0)
    out = []
    idx = 0
    for s in range(subsets):
        for i in range(per_subset):
            spec = SceneSpec(**base, rod_fraction=fractions[s], seed=seed0 + idx)
            spec.validate()
            name = f"{prefix}_s{s}_{i:03d}" if subsets > 1 else f"{prefix}_{i:03d}"
            out.append((name, spec))
            idx += 1
    return out
