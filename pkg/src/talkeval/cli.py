"""talkeval command line: eval | blink | sync | heatmap | pairs | losses.

Exit codes: 0 ok, 1 usage error, 2 partial per-entry failures (details in
the sidecar errors file), 3 fatal I/O or invalid manifest. TALKEVAL_LOG
in {error, warn, info, debug} sets verbosity. All outputs are written
atomically (temp file + rename) with fixed float formatting so reruns
with identical inputs and seeds are byte-identical.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import tempfile
import zlib
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import av_pipeline, losses, motion, sync_metrics
from .errors import MissingLandmarks, TalkevalError
from .expression_metrics import BlinkDetectorConfig, blink_stats
from .frame_metrics import CpbdConfig
from .losses import LossWeights
from .media import load_audio, load_embeddings, load_frame_sequence, load_manifest
from .motion import FlowConfig
from .report import (
    EvalConfig,
    build_report,
    entry_blinks,
    format_value,
    report_to_csv,
    report_to_json_obj,
    round_trip_value,
)

log = logging.getLogger("talkeval")

_LOG_LEVELS = {
    "error": logging.ERROR,
    "warn": logging.WARNING,
    "info": logging.INFO,
    "debug": logging.DEBUG,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage errors exit 1, not argparse's 2
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _atomic_write_text(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _atomic_write_png(path: Path, raster: np.ndarray) -> None:
    from PIL import Image

    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".png")
    os.close(fd)
    try:
        Image.fromarray(raster).save(tmp, format="PNG")
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _json_text(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def load_config(path: str | None) -> EvalConfig:
    """EvalConfig from a JSON file overriding any subset of module defaults."""
    cfg = EvalConfig()
    if path is None:
        return cfg
    raw = json.loads(Path(path).read_text(encoding="utf-8"))
    sections = {
        "cpbd": (CpbdConfig, "cpbd"),
        "blink": (BlinkDetectorConfig, "blink"),
        "flow": (FlowConfig, "flow"),
        "weights": (LossWeights, "weights"),
    }
    updates: dict = {}
    for key, (cls, attr) in sections.items():
        if key in raw:
            updates[attr] = replace(getattr(cfg, attr), **raw[key])
    for key in ("max_offset", "min_shift"):
        if key in raw:
            updates[key] = int(raw[key])
    return replace(cfg, **updates)


def _errors_path(out: Path) -> Path:
    if out.suffix:
        return out.with_suffix(out.suffix + ".errors.json")
    return out / "errors.json"


def _finish(out: Path, errors: list[dict]) -> int:
    _atomic_write_text(_errors_path(out), _json_text(errors))
    if errors:
        log.warning("%d entries failed; see %s", len(errors), _errors_path(out))
        return 2
    return 0


def cmd_eval(args) -> int:
    cfg = load_config(args.config)
    entries = load_manifest(args.manifest)
    reference = load_manifest(args.reference) if args.reference else None
    report = build_report(entries, reference, cfg, jobs=args.jobs)
    out = Path(args.out)
    if args.format == "csv":
        _atomic_write_text(out, report_to_csv(report))
    else:
        _atomic_write_text(out, _json_text(report_to_json_obj(report)))
    return _finish(out, report.errors)


def cmd_blink(args) -> int:
    cfg = load_config(args.config)
    entries = load_manifest(args.manifest)
    out = Path(args.out)
    events_by_id: dict[str, list] = {}
    durations: dict[str, float] = {}
    errors = []
    for entry in entries:
        try:
            if entry.landmarks_path is None:
                raise MissingLandmarks(f"entry {entry.id!r} has no landmarks")
            frames = load_frame_sequence(entry.frames_dir)
            events_by_id[entry.id] = entry_blinks(entry, frames.fps, len(frames), cfg.blink)
            durations[entry.id] = frames.duration_s
        except Exception as exc:
            errors.append({"id": entry.id, "error": type(exc).__name__, "message": str(exc)})

    ids = sorted(events_by_id)
    lines = ["video_id,start,apex,end,duration_s"]
    for vid in ids:
        for e in events_by_id[vid]:
            lines.append(f"{vid},{e.start},{e.apex},{e.end},{format_value(e.duration_s)}")
    _atomic_write_text(out / "events.csv", "\n".join(lines) + "\n")

    stats = blink_stats([events_by_id[v] for v in ids], [durations[v] for v in ids]) if ids else None
    stats_obj = {
        "videos": len(ids),
        "total_blinks": stats.total_blinks if stats else 0,
        "blinks_per_second": round_trip_value(stats.blinks_per_second) if stats else 0.0,
        "median_duration_s": round_trip_value(stats.median_duration_s)
        if stats and stats.median_duration_s is not None
        else None,
    }
    _atomic_write_text(out / "stats.json", _json_text(stats_obj))

    def histogram_csv(hist: dict) -> str:
        rows = ["bin,count"] + [f"{format_value(k)},{v}" for k, v in hist.items()]
        return "\n".join(rows) + "\n"

    _atomic_write_text(out / "count_histogram.csv", histogram_csv(stats.count_histogram if stats else {}))
    _atomic_write_text(out / "duration_histogram.csv", histogram_csv(stats.duration_histogram if stats else {}))

    sorted_errors = sorted(errors, key=lambda e: e["id"])
    _atomic_write_text(out / "errors.json", _json_text(sorted_errors))
    return 2 if sorted_errors else 0


def cmd_sync(args) -> int:
    cfg = load_config(args.config)
    max_offset = args.max_offset if args.max_offset is not None else cfg.max_offset
    entries = load_manifest(args.manifest)
    out = Path(args.out)
    results = {}
    errors = []
    for entry in entries:
        try:
            if not (entry.video_embeddings_path and entry.audio_embeddings_path):
                raise TalkevalError(f"entry {entry.id!r} lacks video/audio embeddings")
            video_emb = load_embeddings(entry.video_embeddings_path)
            audio_emb = load_embeddings(entry.audio_embeddings_path)
            curve = sync_metrics.distance_curve(video_emb, audio_emb, max_offset)
            score = sync_metrics.sync_score(curve)
            results[entry.id] = {
                "av_offset": score.av_offset,
                "av_confidence": round_trip_value(score.av_confidence),
            }
            curve_lines = ["offset,mean_distance"] + [
                f"{int(k)},{format_value(float(d))}"
                for k, d in zip(curve.offsets, curve.mean_distance)
            ]
            _atomic_write_text(out / f"{entry.id}.curve.csv", "\n".join(curve_lines) + "\n")
        except Exception as exc:
            errors.append({"id": entry.id, "error": type(exc).__name__, "message": str(exc)})
    _atomic_write_text(out / "sync.json", _json_text(results))
    sorted_errors = sorted(errors, key=lambda e: e["id"])
    _atomic_write_text(out / "errors.json", _json_text(sorted_errors))
    return 2 if sorted_errors else 0


def cmd_heatmap(args) -> int:
    cfg = load_config(args.config)
    entries = load_manifest(args.manifest)
    out = Path(args.out)
    videos = []
    errors = []
    for entry in entries:
        try:
            video = load_frame_sequence(entry.frames_dir)
            videos.append(video)
            hsv = motion.flow_to_hsv(motion.mean_flow(video, cfg.flow))
            _atomic_write_png(out / f"{entry.id}.hsv.png", hsv)
        except Exception as exc:
            errors.append({"id": entry.id, "error": type(exc).__name__, "message": str(exc)})
    if videos:
        magnitude = motion.mean_flow_magnitude(videos, cfg.flow)
        peak = magnitude.max()
        scaled = magnitude / peak * 255.0 if peak > 0 else magnitude
        _atomic_write_png(out / "average_heatmap.png", np.round(scaled).astype(np.uint8))
        if args.magnitudes:
            rows = [",".join(format_value(float(v)) for v in row) for row in magnitude]
            _atomic_write_text(out / "average_magnitude.csv", "\n".join(rows) + "\n")
    sorted_errors = sorted(errors, key=lambda e: e["id"])
    _atomic_write_text(out / "errors.json", _json_text(sorted_errors))
    return 2 if sorted_errors else 0


def cmd_pairs(args) -> int:
    cfg = load_config(args.config)
    min_shift = args.min_shift if args.min_shift is not None else cfg.min_shift
    entries = load_manifest(args.manifest)
    out = Path(args.out)
    errors = []
    for entry in entries:
        try:
            video = load_frame_sequence(entry.frames_dir)
            audio = load_audio(entry.audio_path)
            framing = av_pipeline.AvFramingConfig(
                sample_rate=audio.sample_rate, fps=video.fps
            )
            entry_seed = (args.seed + zlib.crc32(entry.id.encode())) % 2**63
            pairs = av_pipeline.sample_sync_pairs(
                video,
                audio,
                None,
                framing,
                min_shift=min_shift,
                seed=entry_seed,
                n_anchors=args.anchors,
            )
            records = [json.dumps(av_pipeline.pair_record(p), sort_keys=True) for p in pairs]
            _atomic_write_text(out / f"{entry.id}.pairs.jsonl", "\n".join(records) + "\n")
        except Exception as exc:
            errors.append({"id": entry.id, "error": type(exc).__name__, "message": str(exc)})
    sorted_errors = sorted(errors, key=lambda e: e["id"])
    _atomic_write_text(out / "errors.json", _json_text(sorted_errors))
    return 2 if sorted_errors else 0


def cmd_losses(args) -> int:
    cfg = load_config(args.config)
    scores = json.loads(Path(args.scores).read_text(encoding="utf-8"))
    frame = losses.adv_frame_loss(scores["frame_real"], scores["frame_fake"])
    sync = losses.adv_sync_loss(scores["sync_in"], scores["sync_out"], scores["sync_fake"])
    seq = losses.adv_seq_loss(scores["seq_real"], scores["seq_fake"])
    total = losses.total_adv_loss(frame, sync, seq, cfg.weights)

    reference = load_frame_sequence(args.ref_frames)
    generated = load_frame_sequence(args.gen_frames)
    if len(reference) != len(generated):
        raise TalkevalError(
            f"{len(reference)} reference vs {len(generated)} generated frames"
        )
    l1_values = [
        losses.lower_half_l1(r, g) for r, g in zip(reference.frames, generated.frames)
    ]
    l1 = float(np.mean(l1_values))

    out_obj = {
        "frame_adv_loss": round_trip_value(frame),
        "sync_adv_loss": round_trip_value(sync),
        "seq_adv_loss": round_trip_value(seq),
        "total_adv_loss": round_trip_value(total),
        "lower_half_l1": round_trip_value(l1),
        "full_objective": round_trip_value(losses.full_objective(total, l1, cfg.weights)),
    }
    _atomic_write_text(Path(args.out), _json_text(out_obj))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="talkeval", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, manifest=True):
        if manifest:
            p.add_argument("--manifest", required=True, help="candidate manifest JSON")
        p.add_argument("--out", required=True, help="output file or directory")
        p.add_argument("--config", help="JSON config overriding module defaults")

    p = sub.add_parser("eval", help="metric report per manifest entry")
    common(p)
    p.add_argument("--reference", help="reference manifest for PSNR/SSIM")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--jobs", type=int, default=os.cpu_count())
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("blink", help="blink events, stats and histograms")
    common(p)
    p.set_defaults(func=cmd_blink)

    p = sub.add_parser("sync", help="AV offset/confidence and distance curves")
    common(p)
    p.add_argument("--max-offset", type=int, default=None)
    p.set_defaults(func=cmd_sync)

    p = sub.add_parser("heatmap", help="average motion heatmap and HSV maps")
    common(p)
    p.add_argument(
        "--magnitudes", action="store_true",
        help="also write raw mean magnitudes as average_magnitude.csv",
    )
    p.set_defaults(func=cmd_heatmap)

    p = sub.add_parser("pairs", help="sync-discriminator training pairs (JSONL)")
    common(p)
    p.add_argument("--min-shift", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--anchors", type=int, default=None, help="anchors per video (default: all)")
    p.set_defaults(func=cmd_pairs)

    p = sub.add_parser("losses", help="objective values from score batches and frames")
    common(p, manifest=False)
    p.add_argument("--scores", required=True, help="JSON file of discriminator score batches")
    p.add_argument("--ref-frames", required=True, help="reference frame directory")
    p.add_argument("--gen-frames", required=True, help="generated frame directory")
    p.set_defaults(func=cmd_losses)
    return parser


def main(argv: list[str] | None = None) -> int:
    level = os.environ.get("TALKEVAL_LOG", "warn").lower()
    logging.basicConfig(level=_LOG_LEVELS.get(level, logging.WARNING))
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (TalkevalError, OSError, json.JSONDecodeError, KeyError) as exc:
        log.error("%s: %s", type(exc).__name__, exc)
        print(f"talkeval: fatal: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
