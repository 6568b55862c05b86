"""Audio-visual offset and confidence from embedding streams.

The offset-indexed curve holds, for each candidate shift k, the mean
Euclidean distance between video embeddings at t and audio embeddings at
t - k (partial overlap only, so edge offsets are not biased by padding).
The reported offset is the curve's argmin and is positive when the audio
leads the video; confidence is median minus minimum of the curve, with
values below 0.5 indicating uncorrelated streams.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, SeriesTooShort
from .media import EmbeddingSeries


@dataclass(frozen=True)
class DistanceCurve:
    offsets: np.ndarray  # (2*max_offset + 1,) ints, -O..O
    mean_distance: np.ndarray  # same length, >= 0

    def __post_init__(self):
        o = np.asarray(self.offsets, dtype=np.int64)
        d = np.asarray(self.mean_distance, dtype=np.float64)
        if o.shape != d.shape or o.ndim != 1 or len(o) % 2 != 1:
            raise ValueError("curve needs matching odd-length offset/distance arrays")
        if not np.all(np.isfinite(d)) or np.any(d < 0):
            raise ValueError("distances must be finite and non-negative")
        object.__setattr__(self, "offsets", o)
        object.__setattr__(self, "mean_distance", d)


@dataclass(frozen=True)
class SyncResult:
    av_offset: int
    av_confidence: float


def distance_curve(
    video_emb: EmbeddingSeries,
    audio_emb: EmbeddingSeries,
    max_offset: int = 15,
) -> DistanceCurve:
    """Mean embedding distance for every audio shift k in [-max_offset, max_offset]."""
    if video_emb.dim != audio_emb.dim:
        raise DimensionMismatch(f"video dim {video_emb.dim} vs audio dim {audio_emb.dim}")
    n_v, n_a = len(video_emb), len(audio_emb)
    if n_v <= max_offset or n_a <= max_offset:
        raise SeriesTooShort(
            f"series lengths ({n_v}, {n_a}) must exceed max_offset {max_offset}"
        )
    v = video_emb.vectors
    a = audio_emb.vectors
    offsets = np.arange(-max_offset, max_offset + 1)
    means = np.empty(len(offsets), dtype=np.float64)
    for i, k in enumerate(offsets):
        t_lo = max(0, k)
        t_hi = min(n_v, n_a + k)
        d = np.linalg.norm(v[t_lo:t_hi] - a[t_lo - k : t_hi - k], axis=1)
        means[i] = d.mean()
    return DistanceCurve(offsets=offsets, mean_distance=means)


def sync_score(curve: DistanceCurve) -> SyncResult:
    """Argmin offset (ties: smallest |offset|, then negative) and median - min."""
    d = curve.mean_distance
    best = d.min()
    tied = curve.offsets[d == best]
    order = np.lexsort((tied >= 0, np.abs(tied)))  # |offset| asc, negative first
    offset = int(tied[order[0]])
    confidence = float(np.median(d) - best)
    return SyncResult(av_offset=offset, av_confidence=confidence)


def windowed_embeddings(series: EmbeddingSeries, window: int = 5) -> EmbeddingSeries:
    """Sliding mean vector over each window (stride 1); unit becomes 'window'."""
    if len(series) < window:
        raise SeriesTooShort(f"series length {len(series)} < window {window}")
    cumulative = np.cumsum(series.vectors, axis=0, dtype=np.float64)
    cumulative = np.vstack([np.zeros((1, series.dim)), cumulative])
    sums = cumulative[window:] - cumulative[:-window]
    return EmbeddingSeries(vectors=sums / window, dim=series.dim, unit="window")
