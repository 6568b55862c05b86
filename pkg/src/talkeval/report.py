"""Manifest-driven batch evaluation and report rows.

One row per manifest entry, mirroring the usual talking-head comparison
table: reconstruction (PSNR/SSIM), sharpness (CPBD), identity (ACD),
content (WER), synchrony (AV offset/confidence) and spontaneous blinks.
Metrics whose sidecar inputs are missing stay absent, never imputed; the
aggregate row averages only present finite values.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import content_metrics, expression_metrics, frame_metrics, sync_metrics
from .errors import LengthMismatch, NoMatchingIds, TalkevalError
from .expression_metrics import BlinkDetectorConfig, BlinkEvent
from .frame_metrics import CpbdConfig
from .losses import LossWeights
from .media import (
    ManifestEntry,
    load_embeddings,
    load_frame_sequence,
    load_landmarks,
    read_transcript,
)
from .motion import FlowConfig

REPORT_FIELDS = (
    "psnr",
    "ssim",
    "cpbd",
    "acd",
    "wer",
    "av_offset",
    "av_confidence",
    "blinks_per_sec",
    "median_blink_duration_s",
)

CSV_HEADER = "id," + ",".join(REPORT_FIELDS)


@dataclass(frozen=True)
class EvalConfig:
    cpbd: CpbdConfig = field(default_factory=CpbdConfig)
    blink: BlinkDetectorConfig = field(default_factory=BlinkDetectorConfig)
    flow: FlowConfig = field(default_factory=FlowConfig)
    weights: LossWeights = field(default_factory=LossWeights)
    max_offset: int = 15
    min_shift: int = 2


@dataclass
class EvaluationReport:
    rows: list[dict]  # {"id": ..., metric: value} sorted by id
    aggregate: dict  # metric -> mean over present finite values
    errors: list[dict]  # {"id", "error", "message"} sorted by id


def entry_blinks(
    entry: ManifestEntry, fps: float, n_frames: int | None, cfg: BlinkDetectorConfig
) -> list[BlinkEvent]:
    """Blink events for one entry's landmark sidecar."""
    layout = entry.meta.get("landmarks_layout", "ibug68")
    landmarks = load_landmarks(entry.landmarks_path, layout)
    if n_frames is not None and len(landmarks) != n_frames:
        raise LengthMismatch(
            f"{len(landmarks)} landmark frames vs {n_frames} video frames"
        )
    signal = expression_metrics.ear_signal(landmarks, fps, cfg.smooth_radius)
    return expression_metrics.detect_blinks(signal, cfg)


def evaluate_entry(
    entry: ManifestEntry,
    reference: ManifestEntry | None,
    cfg: EvalConfig = EvalConfig(),
) -> dict:
    """All computable metrics for one entry; absent inputs yield absent keys."""
    row: dict = {"id": entry.id}
    frames = load_frame_sequence(entry.frames_dir)

    if reference is not None:
        ref_frames = load_frame_sequence(reference.frames_dir)
        vm = frame_metrics.video_metrics(ref_frames, frames, cfg.cpbd)
        row["psnr"] = vm.psnr_mean
        row["ssim"] = vm.ssim_mean
        if vm.cpbd_mean is not None:
            row["cpbd"] = vm.cpbd_mean
    else:
        scores = []
        for frame in frames.frames:
            try:
                scores.append(frame_metrics.cpbd(frame, cfg.cpbd))
            except TalkevalError:
                continue
        if scores:
            row["cpbd"] = float(np.mean(scores))

    if entry.still_embedding_path and entry.video_embeddings_path:
        still = load_embeddings(entry.still_embedding_path)
        video_emb = load_embeddings(entry.video_embeddings_path)
        row["acd"] = content_metrics.acd(still.vectors[0], video_emb)

    if entry.transcript_ref and entry.transcript_hyp:
        row["wer"] = content_metrics.wer(
            read_transcript(entry.transcript_ref), read_transcript(entry.transcript_hyp)
        )

    if entry.video_embeddings_path and entry.audio_embeddings_path:
        video_emb = load_embeddings(entry.video_embeddings_path)
        audio_emb = load_embeddings(entry.audio_embeddings_path)
        curve = sync_metrics.distance_curve(video_emb, audio_emb, cfg.max_offset)
        result = sync_metrics.sync_score(curve)
        row["av_offset"] = result.av_offset
        row["av_confidence"] = result.av_confidence

    if entry.landmarks_path:
        events = entry_blinks(entry, frames.fps, len(frames), cfg.blink)
        row["blinks_per_sec"] = len(events) / frames.duration_s
        if events:
            row["median_blink_duration_s"] = float(
                np.median([e.duration_s for e in events])
            )
    return row


def _aggregate(rows: list[dict]) -> dict:
    aggregate: dict = {"id": "aggregate"}
    for name in REPORT_FIELDS:
        values = [
            row[name]
            for row in rows
            if name in row and isinstance(row[name], (int, float)) and math.isfinite(row[name])
        ]
        if values:
            aggregate[name] = float(np.mean(values))
    return aggregate


def build_report(
    entries: list[ManifestEntry],
    reference_entries: list[ManifestEntry] | None = None,
    cfg: EvalConfig = EvalConfig(),
    jobs: int | None = None,
) -> EvaluationReport:
    """Fan out per entry (no shared mutable state), then aggregate.

    Per-entry failures land in the errors list; the remaining entries are
    still processed. Results are independent of scheduling order.
    """
    refs_by_id = None
    if reference_entries is not None:
        refs_by_id = {e.id: e for e in reference_entries}
        if not any(e.id in refs_by_id for e in entries):
            raise NoMatchingIds("reference manifest shares no ids with candidates")

    def work(entry: ManifestEntry):
        try:
            reference = None
            if refs_by_id is not None:
                reference = refs_by_id.get(entry.id)
                if reference is None:
                    raise NoMatchingIds(f"no reference entry for id {entry.id!r}")
            return entry.id, evaluate_entry(entry, reference, cfg), None
        except Exception as exc:  # collected, never aborts the batch
            return entry.id, None, {
                "id": entry.id,
                "error": type(exc).__name__,
                "message": str(exc),
            }

    with ThreadPoolExecutor(max_workers=jobs) as pool:
        results = list(pool.map(work, entries))

    rows = sorted((row for _, row, _ in results if row is not None), key=lambda r: r["id"])
    errors = sorted((err for _, _, err in results if err is not None), key=lambda e: e["id"])
    return EvaluationReport(rows=rows, aggregate=_aggregate(rows), errors=errors)


# --- deterministic formatting -------------------------------------------


def format_value(value) -> str:
    """Fixed 6-significant-digit formatting; inf spelled 'inf'."""
    if isinstance(value, bool):
        raise TypeError("no boolean report values")
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if math.isinf(value):
            return "inf"
        return f"{value:.6g}"
    return str(value)


def round_trip_value(value):
    """Value as stored in JSON: 6-significant-digit float, 'inf' as string."""
    if isinstance(value, float) and not isinstance(value, bool):
        if math.isinf(value):
            return "inf"
        return float(f"{value:.6g}")
    return value


def report_to_json_obj(report: EvaluationReport) -> dict:
    def clean(row: dict) -> dict:
        return {k: round_trip_value(v) for k, v in row.items()}

    return {
        "rows": [clean(r) for r in report.rows],
        "aggregate": clean(report.aggregate),
    }


def report_to_csv(report: EvaluationReport) -> str:
    lines = [CSV_HEADER]
    for row in report.rows + [report.aggregate]:
        cells = [str(row["id"])]
        for name in REPORT_FIELDS:
            cells.append(format_value(row[name]) if name in row else "")
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"
