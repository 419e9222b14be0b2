"""Command line entry point: ``segment``, ``evaluate``, ``synth`` and ``compose``."""

from __future__ import annotations

import argparse
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import formats
from .errors import SegmentationError
from .imagefile import read_gray, write_image, write_pgm
from .metrics import ajsc_curve, composition, evaluate_dataset
from .pipeline import PipelineConfig, segment_image
from .render import draw_debug, draw_results
from .synthgen import generate_scene
from .tracer import format_trace

log = logging.getLogger("overlapseg")


def load_config(path=None, overrides=()) -> PipelineConfig:
    cfg = PipelineConfig()
    if path:
        cfg = PipelineConfig.from_text(Path(path).read_text())
    return cfg.updated(overrides)


def _segment_one(job):
    path, cfg, out_dir, overlay, debug = job
    path = Path(path)
    try:
        gray = read_gray(path)
    except Exception as exc:  # unreadable or corrupt file: reported, batch continues
        return path.name, None, f"{path}: cannot read image ({exc})"
    res = segment_image(gray, cfg)
    stem = path.stem
    if overlay:
        draw_results(gray, res).save(out_dir / f"{stem}.overlay.png")
    if debug:
        draw_debug(gray, res).save(out_dir / f"{stem}.debug.png")
        write_pgm(out_dir / f"{stem}.mask.pgm", res.mask)
        (out_dir / f"{stem}.trace.txt").write_text(
            format_trace([t.cluster for t in res.clusters]))
    # masks and cluster traces are large; only the table goes back to the parent
    res.mask = None
    res.clusters = []
    return path.name, res, None


def cmd_segment(args) -> int:
    cfg = load_config(args.config, args.set)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "effective_config.txt").write_text(cfg.to_text())
    jobs = [(p, cfg, out_dir, args.overlay, args.debug) for p in args.inputs]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            outcomes = list(pool.map(_segment_one, jobs))
    else:
        outcomes = [_segment_one(j) for j in jobs]
    done, failures = [], 0
    for name, res, err in outcomes:
        if err:
            log.error(err)
            failures += 1
            continue
        for msg in res.diagnostics:
            log.info("%s: %s", name, msg)
        done.append((name, res))
    (out_dir / "results.txt").write_text(formats.format_results(done, cfg.scale))
    n_acc = sum(len(r.accepted) for _, r in done)
    print(f"segmented {len(done)} image(s), {n_acc} accepted object(s) -> {out_dir / 'results.txt'}")
    return 1 if failures else 0


def _ground_truth_for(gt_path: Path, names):
    if gt_path.is_dir():
        out = {}
        for name in names:
            cand = gt_path / f"{Path(name).stem}.gt.txt"
            if not cand.exists():
                raise SegmentationError(f"no ground truth file {cand}")
            out[name] = formats.read_ground_truth(cand)
        return out
    if len(names) > 1:
        raise SegmentationError("a single ground-truth file needs a single-image results file")
    entries = formats.read_ground_truth(gt_path)
    return {name: entries for name in names} if names else {"": entries}


def cmd_evaluate(args) -> int:
    rows = formats.read_results(args.results)
    names = list(dict.fromkeys(r.image for r in rows))
    gt = _ground_truth_for(Path(args.gt), names)
    images = []
    for name in gt:
        dets = [r.detection for r in rows if r.image == name and r.accepted]
        images.append((dets, gt[name]))
    report = evaluate_dataset(images, args.rho)
    rhos = [float(v) for v in args.rhos.split(",")] if args.rhos else [2.0, 4.0, 8.0, 16.0]
    curve = ajsc_curve(images, rhos)
    text = formats.format_report(report, len(images))
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "report.txt").write_text(text)
    (out / "ajsc_curve.csv").write_text(formats.format_curve(curve))
    sys.stdout.write(text)
    return 0


def cmd_synth(args) -> int:
    specs = formats.parse_scene_specs(Path(args.spec).read_text())
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for name, spec in specs:
        if args.seed is not None:
            spec.seed = args.seed + (spec.seed - specs[0][1].seed)
        img, truth = generate_scene(spec)
        ext = args.format
        write_image(out / f"{name}.{ext}", img)
        entries = [formats.GroundTruthEntry(o.cx, o.cy, o.shape_class) for o in truth.objects]
        (out / f"{name}.gt.txt").write_text(formats.format_ground_truth(entries))
        (out / f"{name}.truth.txt").write_text(formats.format_truth(truth))
    print(f"wrote {len(specs)} scene(s) to {out}")
    return 0


def cmd_compose(args) -> int:
    cfg = load_config(args.config, args.set)
    rows = formats.read_results(args.results)
    dets = [r.detection for r in rows if r.accepted]
    report = composition(dets, cfg.densities, cfg.scale)
    text = formats.format_composition(report)
    if args.out:
        Path(args.out).write_text(text)
    sys.stdout.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="overlapseg",
                                description="Segment overlapping round and rod-like objects.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def config_args(sp):
        sp.add_argument("--config", help="key = value configuration file")
        sp.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                        help="override one configuration key (repeatable)")

    sp = sub.add_parser("segment", help="segment images and write results + overlays")
    sp.add_argument("inputs", nargs="+")
    sp.add_argument("--out", required=True)
    sp.add_argument("--overlay", action=argparse.BooleanOptionalAction, default=True)
    sp.add_argument("--debug", action="store_true",
                    help="also write masks, contour traces and grouping overlays")
    sp.add_argument("--jobs", type=int, default=1)
    config_args(sp)
    sp.set_defaults(func=cmd_segment)

    sp = sub.add_parser("evaluate", help="precision / recall / AJSC against ground truth")
    sp.add_argument("--results", required=True)
    sp.add_argument("--gt", required=True, help="ground-truth file or directory of <stem>.gt.txt")
    sp.add_argument("--rho", type=float, default=8.0)
    sp.add_argument("--rhos", help="comma-separated thresholds for the AJSC curve")
    sp.add_argument("--out", default=".")
    sp.set_defaults(func=cmd_evaluate)

    sp = sub.add_parser("synth", help="generate synthetic scenes with ground truth")
    sp.add_argument("spec")
    sp.add_argument("--out", required=True)
    sp.add_argument("--seed", type=int)
    sp.add_argument("--format", choices=("png", "pgm"), default="png")
    sp.set_defaults(func=cmd_synth)

    sp = sub.add_parser("compose", help="weight percentages of rod and round classes")
    sp.add_argument("--results", required=True)
    sp.add_argument("--out")
    config_args(sp)
    sp.set_defaults(func=cmd_compose)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except (SegmentationError, OSError) as exc:
        log.error("%s", exc)
        return 2


if __name__ == "__main__":
    sys.exit(main())
