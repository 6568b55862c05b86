"""Eye-aspect-ratio signal, blink detection and blink statistics.

A blink shows up as a sharp drop in the per-frame EAR signal; the event's
start and end are the peaks on either side of the drop location. The drop
threshold is deliberately strict so false alarms stay minimal.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateEye, SignalTooShort
from .media import LandmarkSeries


def ear(points: np.ndarray) -> float:
    """(|p2-p6| + |p3-p5|) / |p1-p4| for six eye landmarks, rows p1..p6."""
    p = np.asarray(points, dtype=np.float64)
    if p.shape != (6, 2):
        raise ValueError(f"expected six 2D points, got {p.shape}")
    horizontal = np.linalg.norm(p[0] - p[3])
    if horizontal == 0.0:
        raise DegenerateEye("p1 and p4 coincide")
    return float((np.linalg.norm(p[1] - p[5]) + np.linalg.norm(p[2] - p[4])) / horizontal)


@dataclass(frozen=True)
class EarSignal:
    values: np.ndarray  # (n,) float64, >= 0
    fps: float

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        if v.ndim != 1 or not np.all(np.isfinite(v)) or np.any(v < 0):
            raise ValueError("EAR values must be finite, non-negative, 1-D")
        if self.fps <= 0:
            raise ValueError("fps must be > 0")
        object.__setattr__(self, "values", v)

    def __len__(self) -> int:
        return self.values.shape[0]


def moving_average(values: np.ndarray, radius: int) -> np.ndarray:
    """Centered moving average; windows truncate at the signal bounds."""
    if radius <= 0:
        return np.asarray(values, dtype=np.float64)
    v = np.asarray(values, dtype=np.float64)
    out = np.empty_like(v)
    for i in range(len(v)):
        lo = max(0, i - radius)
        hi = min(len(v), i + radius + 1)
        out[i] = v[lo:hi].mean()
    return out


def ear_signal(landmarks: LandmarkSeries, fps: float, smooth_radius: int = 1) -> EarSignal:
    """Mean of left and right EAR per frame, then moving-average smoothing."""
    values = np.empty(len(landmarks), dtype=np.float64)
    for i in range(len(landmarks)):
        left, right = landmarks.eye_points(i)
        try:
            values[i] = 0.5 * (ear(left) + ear(right))
        except DegenerateEye as exc:
            raise DegenerateEye(f"frame {i}: {exc}") from exc
    return EarSignal(values=moving_average(values, smooth_radius), fps=fps)


@dataclass(frozen=True)
class BlinkDetectorConfig:
    drop_delta: float = 0.1
    drop_window: int = 3
    min_separation: int = 5
    smooth_radius: int = 1

    def __post_init__(self):
        if min(self.drop_delta, self.drop_window, self.min_separation, self.smooth_radius) <= 0:
            raise ValueError("blink detector parameters must be positive")


@dataclass(frozen=True)
class BlinkEvent:
    start: int
    apex: int
    end: int
    duration_s: float

    def __post_init__(self):
        if not self.start <= self.apex <= self.end:
            raise ValueError("blink event must satisfy start <= apex <= end")


def _peak_outward(values: np.ndarray, apex: int, step: int) -> int:
    """First frame from the apex (moving by step) where the rise stops."""
    i = apex
    while True:
        j = i + step
        if j < 0 or j >= len(values) or values[j] <= values[i]:
            return i
        i = j


def detect_blinks(signal: EarSignal, cfg: BlinkDetectorConfig = BlinkDetectorConfig()) -> list[BlinkEvent]:
    """Sharp-drop blink detection with start/end at the surrounding peaks.

    Apex candidates satisfy values[t - drop_window] - values[t] >= drop_delta
    at a local minimum; candidates closer than min_separation merge into the
    deeper one. Start/end are the nearest frames (walking outward) where the
    signal stops rising, clipped to the signal bounds.
    """
    v = signal.values
    n = len(v)
    if n < 2 * cfg.drop_window + 1:
        raise SignalTooShort(f"signal of {n} frames < {2 * cfg.drop_window + 1}")

    candidates = []
    for t in range(cfg.drop_window, n):
        if v[t - cfg.drop_window] - v[t] < cfg.drop_delta:
            continue
        left_ok = v[t] <= v[t - 1]
        right_ok = t == n - 1 or v[t] <= v[t + 1]
        if left_ok and right_ok:
            candidates.append(t)

    merged: list[int] = []
    for t in candidates:
        if merged and t - merged[-1] < cfg.min_separation:
            if v[t] < v[merged[-1]]:
                merged[-1] = t
        else:
            merged.append(t)

    events = []
    for apex in merged:
        start = _peak_outward(v, apex, -1)
        end = _peak_outward(v, apex, +1)
        events.append(
            BlinkEvent(
                start=start,
                apex=apex,
                end=end,
                duration_s=(end - start) / signal.fps,
            )
        )
    return events


@dataclass(frozen=True)
class BlinkStats:
    blinks_per_second: float
    median_duration_s: float | None  # None when there are no events
    count_histogram: dict[int, int]  # blinks per video -> videos
    duration_histogram: dict[float, int]  # bin lower edge (s) -> blinks

    @property
    def total_blinks(self) -> int:
        return sum(k * v for k, v in self.count_histogram.items())


DURATION_BIN_S = 0.04


def blink_stats(
    events_per_video: list[list[BlinkEvent]],
    video_durations_s: list[float],
) -> BlinkStats:
    """Corpus-level rate, median duration and plot-ready histograms."""
    if len(events_per_video) != len(video_durations_s):
        raise ValueError("one duration per video required")
    if any(d <= 0 for d in video_durations_s):
        raise ValueError("video durations must be positive")
    total_seconds = float(sum(video_durations_s))
    durations = [e.duration_s for events in events_per_video for e in events]
    count_histogram: dict[int, int] = {}
    for events in events_per_video:
        count_histogram[len(events)] = count_histogram.get(len(events), 0) + 1
    duration_histogram: dict[float, int] = {}
    for d in durations:
        edge = round(int(d / DURATION_BIN_S) * DURATION_BIN_S, 10)
        duration_histogram[edge] = duration_histogram.get(edge, 0) + 1
    return BlinkStats(
        blinks_per_second=len(durations) / total_seconds,
        median_duration_s=float(np.median(durations)) if durations else None,
        count_histogram=dict(sorted(count_histogram.items())),
        duration_histogram=dict(sorted(duration_histogram.items())),
    )


def evaluate_detector(
    events: list[BlinkEvent],
    annotations: list[BlinkEvent],
    match_tolerance: int = 5,
) -> dict[str, float]:
    """Greedy one-to-one apex matching against annotated blinks.

    Returns accuracy TP/(TP+FP+FN), precision, recall, and the mean
    absolute start/end frame errors over matched pairs.
    """
    pairs = sorted(
        (
            (abs(e.apex - a.apex), i, j)
            for i, e in enumerate(events)
            for j, a in enumerate(annotations)
            if abs(e.apex - a.apex) <= match_tolerance
        ),
    )
    matched_e: set[int] = set()
    matched_a: set[int] = set()
    matches = []
    for _, i, j in pairs:
        if i in matched_e or j in matched_a:
            continue
        matched_e.add(i)
        matched_a.add(j)
        matches.append((events[i], annotations[j]))
    tp = len(matches)
    fp = len(events) - tp
    fn = len(annotations) - tp
    denominator = tp + fp + fn
    return {
        "accuracy": tp / denominator if denominator else 1.0,
        "precision": tp / (tp + fp) if events else 1.0,
        "recall": tp / (tp + fn) if annotations else 1.0,
        "mae_start": float(np.mean([abs(e.start - a.start) for e, a in matches])) if matches else 0.0,
        "mae_end": float(np.mean([abs(e.end - a.end) for e, a in matches])) if matches else 0.0,
    }
