"""Audio-to-video framing, snippet extraction and sync-pair sampling.

The driving audio is cut into overlapping windows, one per video frame,
each centered on its frame via stride = sample_rate / fps and symmetric
zero padding. Sync pairs combine lower-half video snippets with aligned,
shifted or generated-counterpart audio windows.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import MissingPose, NonIntegerStride, VideoTooShort
from .media import AudioClip, FrameSequence, ManifestEntry, PoseSeries


@dataclass(frozen=True)
class AvFramingConfig:
    sample_rate: int
    fps: float
    window_seconds: float = 0.2

    def __post_init__(self):
        if self.window_seconds <= 0:
            raise ValueError("window_seconds must be > 0")

    @property
    def stride(self) -> int:
        return compute_stride(self.sample_rate, self.fps)

    @property
    def window_samples(self) -> int:
        return int(round(self.window_seconds * self.sample_rate))

    @property
    def window_frames(self) -> int:
        return max(1, int(round(self.window_seconds * self.fps)))


@dataclass(frozen=True)
class AudioFrame:
    """One audio window centered on a video frame.

    `start` is the window's first sample index in unpadded audio
    coordinates (may be negative; out-of-range samples are zero).
    """

    center_video_index: int
    samples: np.ndarray
    start: int

    @property
    def sample_range(self) -> tuple[int, int]:
        return (self.start, self.start + len(self.samples))


class PairKind(str, enum.Enum):
    IN_SYNC = "in_sync"
    OUT_OF_SYNC = "out_of_sync"
    FAKE = "fake"


@dataclass(frozen=True)
class SyncPair:
    kind: PairKind
    video_snippet: FrameSequence  # lower-half crop
    audio_window: np.ndarray
    shift_frames: int
    anchor: int
    snippet_frames: tuple[int, ...]
    audio_range: tuple[int, int]


def compute_stride(sample_rate: int, fps: float) -> int:
    """Samples of audio per video frame: sample_rate / fps, integer only."""
    if sample_rate <= 0 or fps <= 0:
        raise ValueError("sample_rate and fps must be > 0")
    stride = sample_rate / fps
    if abs(stride - round(stride)) > 1e-9:
        raise NonIntegerStride(
            f"{sample_rate} Hz / {fps} fps = {stride}; resample audio externally"
        )
    return int(round(stride))


def _window(samples: np.ndarray, center: int, width: int) -> tuple[np.ndarray, int]:
    """Window [center - width//2, center - width//2 + width), zero padded."""
    start = center - width // 2
    out = np.zeros(width, dtype=samples.dtype)
    lo = max(start, 0)
    hi = min(start + width, len(samples))
    if hi > lo:
        out[lo - start : hi - start] = samples[lo:hi]
    return out, start


def frame_audio(
    audio: AudioClip, cfg: AvFramingConfig, n_video_frames: int
) -> list[AudioFrame]:
    """One window per video frame, window i centered on sample i*stride."""
    stride = cfg.stride
    width = cfg.window_samples
    frames = []
    for i in range(n_video_frames):
        samples, start = _window(audio.samples, i * stride, width)
        frames.append(AudioFrame(center_video_index=i, samples=samples, start=start))
    return frames


def lower_half_crop(frames: FrameSequence) -> FrameSequence:
    """Keep rows floor(H/2)..H-1; width unchanged."""
    if frames.height < 2:
        raise ValueError("lower_half_crop needs height >= 2")
    top = frames.height // 2
    return FrameSequence(
        width=frames.width,
        height=frames.height - top,
        fps=frames.fps,
        frames=frames.frames[:, top:, :, :],
    )


def _feasible_anchors(n_frames: int, snippet_len: int) -> range:
    lead = snippet_len // 2
    return range(lead, n_frames - snippet_len + lead + 1)


def sample_sync_pairs(
    video: FrameSequence,
    audio: AudioClip,
    fake: FrameSequence | None,
    cfg: AvFramingConfig,
    min_shift: int = 2,
    seed: int = 0,
    n_anchors: int | None = None,
) -> list[SyncPair]:
    """Emit (in-sync, out-of-sync[, fake]) pair triples per anchor frame.

    Anchors are deterministic (evenly spaced over the feasible range, or
    all of them when n_anchors is None); the seed only drives the
    out-of-sync shift draw, uniform over feasible shifts with
    |shift| >= min_shift. Runs with the same seed are bit-identical;
    different seeds change only the shifts.
    """
    if min_shift < 1:
        raise ValueError("min_shift must be >= 1")
    snippet_len = cfg.window_frames
    n = len(video)
    if n < snippet_len:
        raise VideoTooShort(f"{n} frames < one {snippet_len}-frame window")
    anchors = list(_feasible_anchors(n, snippet_len))
    if n_anchors is not None and n_anchors < len(anchors):
        idx = np.linspace(0, len(anchors) - 1, n_anchors).round().astype(int)
        anchors = [anchors[i] for i in sorted(set(idx.tolist()))]

    stride = cfg.stride
    width = cfg.window_samples
    cropped = lower_half_crop(video)
    cropped_fake = lower_half_crop(fake) if fake is not None else None
    rng = np.random.default_rng(seed)

    def snippet(source: FrameSequence, anchor: int) -> tuple[FrameSequence, tuple[int, ...]]:
        first = anchor - snippet_len // 2
        indices = tuple(range(first, first + snippet_len))
        return (
            FrameSequence(
                width=source.width,
                height=source.height,
                fps=source.fps,
                frames=source.frames[first : first + snippet_len],
            ),
            indices,
        )

    pairs = []
    for anchor in anchors:
        clip, indices = snippet(cropped, anchor)
        window, start = _window(audio.samples, anchor * stride, width)
        pairs.append(
            SyncPair(
                kind=PairKind.IN_SYNC,
                video_snippet=clip,
                audio_window=window,
                shift_frames=0,
                anchor=anchor,
                snippet_frames=indices,
                audio_range=(start, start + width),
            )
        )
        shifts = [
            s
            for s in range(-anchor, n - anchor)
            if abs(s) >= min_shift
        ]
        if shifts:
            shift = int(rng.choice(np.asarray(shifts)))
            window, start = _window(audio.samples, (anchor + shift) * stride, width)
            pairs.append(
                SyncPair(
                    kind=PairKind.OUT_OF_SYNC,
                    video_snippet=clip,
                    audio_window=window,
                    shift_frames=shift,
                    anchor=anchor,
                    snippet_frames=indices,
                    audio_range=(start, start + width),
                )
            )
        if cropped_fake is not None:
            fclip, findices = snippet(cropped_fake, anchor)
            window, start = _window(audio.samples, anchor * stride, width)
            pairs.append(
                SyncPair(
                    kind=PairKind.FAKE,
                    video_snippet=fclip,
                    audio_window=window,
                    shift_frames=0,
                    anchor=anchor,
                    snippet_frames=findices,
                    audio_range=(start, start + width),
                )
            )
    return pairs


def pair_record(pair: SyncPair) -> dict:
    """JSON-serializable record for the pairs JSONL export."""
    return {
        "kind": pair.kind.value,
        "anchor": pair.anchor,
        "shift": pair.shift_frames,
        "snippet_frames": list(pair.snippet_frames),
        "audio_range": list(pair.audio_range),
    }


def filter_by_pose(
    entries: list[ManifestEntry],
    poses: dict[str, PoseSeries],
    max_abs_degrees: float = 10.0,
) -> list[ManifestEntry]:
    """Keep entries whose every frame satisfies |roll|,|pitch|,|yaw| < limit."""
    kept = []
    for entry in entries:
        pose = poses.get(entry.id)
        if pose is None:
            raise MissingPose(f"no pose series for entry {entry.id!r}")
        if np.all(np.abs(pose.angles) < max_abs_degrees):
            kept.append(entry)
    return kept
