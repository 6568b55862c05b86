"""Core media types and on-disk ingestion.

Videos are ingested as PNG frame sequences plus a meta.json sidecar
(width, height, fps), audio as 16-bit PCM WAV, landmarks / embeddings /
pose as UTF-8 CSV. Loaded objects are immutable value types and safe to
share across threads.
"""

from __future__ import annotations

import csv
import json
import re
import wave
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import (
    DimensionMismatch,
    EmptyAudio,
    GapInFrameNumbering,
    ManifestInvalid,
    MissingFrames,
    MissingMeta,
    RaggedRows,
    UnknownLayout,
    UnsupportedFormat,
)

_FRAME_RE = re.compile(r"^frame_(\d{6})\.png$")

# iBUG 68-point scheme: eye contours sit at 36-41 (left) and 42-47 (right),
# already ordered corner, upper lid x2, corner, lower lid x2 = p1..p6.
_LAYOUTS = {
    "ibug68": (tuple(range(36, 42)), tuple(range(42, 48))),
    "eye6": (tuple(range(0, 6)), tuple(range(6, 12))),
}


@dataclass(frozen=True)
class EyeLayout:
    """Maps landmark point indices to the six eye points p1..p6 per eye."""

    name: str
    left: tuple[int, ...]
    right: tuple[int, ...]

    def __post_init__(self):
        if len(self.left) != 6 or len(self.right) != 6:
            raise UnknownLayout(f"layout {self.name!r} must map 6 points per eye")
        if len(set(self.left)) != 6 or len(set(self.right)) != 6:
            raise UnknownLayout(f"layout {self.name!r} has duplicate eye points")


def eye_layout(name: str) -> EyeLayout:
    try:
        left, right = _LAYOUTS[name]
    except KeyError:
        raise UnknownLayout(f"unknown landmark layout {name!r}") from None
    return EyeLayout(name, left, right)


@dataclass(frozen=True)
class FrameSequence:
    """Ordered 8-bit RGB frames with shared dimensions and a frame rate."""

    width: int
    height: int
    fps: float
    frames: np.ndarray  # (n, height, width, 3) uint8

    def __post_init__(self):
        if self.fps <= 0:
            raise ValueError("fps must be > 0")
        f = np.asarray(self.frames, dtype=np.uint8)
        if f.ndim != 4 or f.shape[0] < 1 or f.shape[3] != 3:
            raise ValueError("frames must be a non-empty (n, h, w, 3) array")
        if f.shape[1] != self.height or f.shape[2] != self.width:
            raise DimensionMismatch(
                f"frames are {f.shape[2]}x{f.shape[1]}, "
                f"meta says {self.width}x{self.height}"
            )
        object.__setattr__(self, "frames", f)

    def __len__(self) -> int:
        return self.frames.shape[0]

    @property
    def duration_s(self) -> float:
        return len(self) / self.fps


@dataclass(frozen=True)
class AudioClip:
    """Mono 16-bit PCM samples."""

    sample_rate: int
    samples: np.ndarray  # (n,) int16

    def __post_init__(self):
        if self.sample_rate <= 0:
            raise ValueError("sample_rate must be > 0")
        s = np.asarray(self.samples, dtype=np.int16)
        if s.ndim != 1 or s.size == 0:
            raise EmptyAudio("audio must contain at least one sample")
        object.__setattr__(self, "samples", s)

    def __len__(self) -> int:
        return self.samples.shape[0]

    @property
    def duration_s(self) -> float:
        return len(self) / self.sample_rate


@dataclass(frozen=True)
class LandmarkSeries:
    """Per-frame 2D landmark points with an eye layout for p1..p6 lookup."""

    points: np.ndarray  # (n_frames, n_points, 2) float64
    layout: EyeLayout

    def __post_init__(self):
        p = np.asarray(self.points, dtype=np.float64)
        if p.ndim != 3 or p.shape[2] != 2:
            raise ValueError("points must be (n_frames, n_points, 2)")
        needed = max(max(self.layout.left), max(self.layout.right))
        if p.shape[1] <= needed:
            raise ValueError(
                f"layout {self.layout.name!r} needs point index {needed}, "
                f"series has {p.shape[1]} points per frame"
            )
        object.__setattr__(self, "points", p)

    def __len__(self) -> int:
        return self.points.shape[0]

    def eye_points(self, frame: int) -> tuple[np.ndarray, np.ndarray]:
        """(left, right) arrays of shape (6, 2) holding p1..p6 for one frame."""
        pts = self.points[frame]
        return pts[list(self.layout.left)], pts[list(self.layout.right)]


@dataclass(frozen=True)
class EmbeddingSeries:
    """Ordered real vectors from an external encoder."""

    vectors: np.ndarray  # (n, dim) float64
    dim: int
    unit: str = "frame"  # "frame" | "window"

    def __post_init__(self):
        v = np.atleast_2d(np.asarray(self.vectors, dtype=np.float64))
        if self.dim < 1:
            raise ValueError("dim must be >= 1")
        if v.size == 0:
            v = v.reshape(0, self.dim)
        if v.shape[1] != self.dim:
            raise DimensionMismatch(
                f"vectors have length {v.shape[1]}, declared dim {self.dim}"
            )
        object.__setattr__(self, "vectors", v)

    def __len__(self) -> int:
        return self.vectors.shape[0]


@dataclass(frozen=True)
class PoseSeries:
    """Per-frame (roll, pitch, yaw) head pose in degrees."""

    angles: np.ndarray  # (n, 3) float64

    def __post_init__(self):
        a = np.asarray(self.angles, dtype=np.float64).reshape(-1, 3)
        if not np.all(np.isfinite(a)):
            raise ValueError("pose angles must be finite")
        object.__setattr__(self, "angles", a)

    def __len__(self) -> int:
        return self.angles.shape[0]


@dataclass(frozen=True)
class ManifestEntry:
    id: str
    frames_dir: Path | None = None
    meta: dict = field(default_factory=dict)
    audio_path: Path | None = None
    landmarks_path: Path | None = None
    video_embeddings_path: Path | None = None
    audio_embeddings_path: Path | None = None
    still_embedding_path: Path | None = None
    transcript_ref: Path | None = None
    transcript_hyp: Path | None = None
    pose_path: Path | None = None


# --- loaders -----------------------------------------------------------


def load_frame_sequence(directory: str | Path) -> FrameSequence:
    """Load meta.json + frame_%06d.png (dense from 0) as a FrameSequence."""
    from PIL import Image

    directory = Path(directory)
    meta_path = directory / "meta.json"
    if not meta_path.is_file():
        raise MissingMeta(f"{meta_path} not found")
    meta = json.loads(meta_path.read_text())
    width, height, fps = int(meta["width"]), int(meta["height"]), float(meta["fps"])

    indexed = {}
    for p in directory.iterdir():
        m = _FRAME_RE.match(p.name)
        if m:
            indexed[int(m.group(1))] = p
    if not indexed:
        raise GapInFrameNumbering(f"no frame_%06d.png files in {directory}")
    expected = set(range(len(indexed)))
    if set(indexed) != expected:
        missing = sorted(expected - set(indexed))[:5]
        raise GapInFrameNumbering(f"frame numbering has gaps near {missing}")

    frames = np.empty((len(indexed), height, width, 3), dtype=np.uint8)
    for i in range(len(indexed)):
        img = Image.open(indexed[i]).convert("RGB")
        arr = np.asarray(img, dtype=np.uint8)
        if arr.shape[0] != height or arr.shape[1] != width:
            raise DimensionMismatch(
                f"frame {i} is {arr.shape[1]}x{arr.shape[0]}, "
                f"meta says {width}x{height}"
            )
        frames[i] = arr
    return FrameSequence(width=width, height=height, fps=fps, frames=frames)


def save_frame_sequence(seq: FrameSequence, directory: str | Path) -> None:
    """Inverse of load_frame_sequence; round-trips bit-exactly (PNG is lossless)."""
    from PIL import Image

    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    (directory / "meta.json").write_text(
        json.dumps({"width": seq.width, "height": seq.height, "fps": seq.fps})
    )
    for i, frame in enumerate(seq.frames):
        Image.fromarray(frame, mode="RGB").save(directory / f"frame_{i:06d}.png")


def _downmix(channels: np.ndarray) -> np.ndarray:
    """Channel average, rounding half away from zero, back to int16."""
    mean = channels.astype(np.float64).mean(axis=1)
    rounded = np.where(mean >= 0, np.floor(mean + 0.5), np.ceil(mean - 0.5))
    return rounded.astype(np.int16)


def load_audio(path: str | Path) -> AudioClip:
    """Load a 16-bit PCM WAV; stereo is averaged down to mono."""
    path = Path(path)
    try:
        with wave.open(str(path), "rb") as wf:
            if wf.getsampwidth() != 2 or wf.getcomptype() != "NONE":
                raise UnsupportedFormat(
                    f"{path} is not 16-bit PCM (sampwidth={wf.getsampwidth()})"
                )
            n_channels = wf.getnchannels()
            sample_rate = wf.getframerate()
            raw = wf.readframes(wf.getnframes())
    except wave.Error as exc:
        raise UnsupportedFormat(f"{path}: {exc}") from exc
    data = np.frombuffer(raw, dtype="<i2")
    if data.size == 0:
        raise EmptyAudio(f"{path} contains no samples")
    if n_channels > 1:
        data = _downmix(data.reshape(-1, n_channels))
    return AudioClip(sample_rate=sample_rate, samples=data)


def save_audio(clip: AudioClip, path: str | Path) -> None:
    with wave.open(str(path), "wb") as wf:
        wf.setnchannels(1)
        wf.setsampwidth(2)
        wf.setframerate(clip.sample_rate)
        wf.writeframes(clip.samples.astype("<i2").tobytes())


def load_landmarks(path: str | Path, layout: str) -> LandmarkSeries:
    """Load a frame,point,x,y CSV into a dense per-frame point array."""
    lay = eye_layout(layout)
    by_frame: dict[int, dict[int, tuple[float, float]]] = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        for row in reader:
            f, p = int(row["frame"]), int(row["point"])
            by_frame.setdefault(f, {})[p] = (float(row["x"]), float(row["y"]))
    if not by_frame:
        raise MissingFrames(f"{path} has no landmark rows")
    n_frames = max(by_frame) + 1
    if set(by_frame) != set(range(n_frames)):
        missing = sorted(set(range(n_frames)) - set(by_frame))[:5]
        raise MissingFrames(f"{path} missing frames {missing}")
    n_points = len(by_frame[0])
    points = np.empty((n_frames, n_points, 2), dtype=np.float64)
    for f in range(n_frames):
        pts = by_frame[f]
        if set(pts) != set(range(n_points)):
            raise MissingFrames(f"{path} frame {f} does not have points 0..{n_points - 1}")
        for p, xy in pts.items():
            points[f, p] = xy
    return LandmarkSeries(points=points, layout=lay)


def load_embeddings(path: str | Path) -> EmbeddingSeries:
    """Load an idx,e0..e{d-1} CSV; row order preserved, dim from header."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or len(header) < 2:
            raise RaggedRows(f"{path} has no usable header")
        dim = len(header) - 1
        rows = []
        for lineno, row in enumerate(reader, start=2):
            if len(row) != dim + 1:
                raise RaggedRows(
                    f"{path}:{lineno} has {len(row) - 1} values, header declares {dim}"
                )
            rows.append([float(v) for v in row[1:]])
    vectors = np.asarray(rows, dtype=np.float64).reshape(len(rows), dim)
    return EmbeddingSeries(vectors=vectors, dim=dim, unit="frame")


def save_embeddings(series: EmbeddingSeries, path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["idx"] + [f"e{i}" for i in range(series.dim)])
        for i, vec in enumerate(series.vectors):
            writer.writerow([i] + [repr(float(v)) for v in vec])


def load_pose(path: str | Path) -> PoseSeries:
    """Load a frame,roll,pitch,yaw CSV with dense frame indices from 0."""
    rows: dict[int, tuple[float, float, float]] = {}
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            rows[int(row["frame"])] = (
                float(row["roll"]),
                float(row["pitch"]),
                float(row["yaw"]),
            )
    if not rows:
        raise MissingFrames(f"{path} has no pose rows")
    if set(rows) != set(range(len(rows))):
        raise MissingFrames(f"{path} pose frames are not dense from 0")
    return PoseSeries(angles=np.asarray([rows[i] for i in range(len(rows))]))


def read_transcript(path: str | Path) -> str:
    """One utterance per file, UTF-8."""
    return Path(path).read_text(encoding="utf-8")


_PATH_FIELDS = (
    "frames_dir",
    "audio_path",
    "landmarks_path",
    "video_embeddings_path",
    "audio_embeddings_path",
    "still_embedding_path",
    "transcript_ref",
    "transcript_hyp",
    "pose_path",
)


def load_manifest(path: str | Path) -> list[ManifestEntry]:
    """Load and validate a manifest: unique ids, referenced files exist.

    Relative paths resolve against the manifest's own directory.
    """
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ManifestInvalid(f"{path}: {exc}") from exc
    if not isinstance(raw, list):
        raise ManifestInvalid(f"{path}: manifest must be a JSON array of entries")
    base = path.parent
    entries = []
    seen: set[str] = set()
    for obj in raw:
        if not isinstance(obj, dict) or "id" not in obj:
            raise ManifestInvalid(f"{path}: every entry needs an 'id'")
        entry_id = str(obj["id"])
        if entry_id in seen:
            raise ManifestInvalid(f"{path}: duplicate id {entry_id!r}")
        seen.add(entry_id)
        kwargs = {"id": entry_id, "meta": dict(obj.get("meta") or {})}
        for key in _PATH_FIELDS:
            value = obj.get(key)
            if value is None:
                continue
            resolved = (base / value).resolve() if not Path(value).is_absolute() else Path(value)
            if not resolved.exists():
                raise ManifestInvalid(f"{path}: entry {entry_id!r} references missing {resolved}")
            kwargs[key] = resolved
        entries.append(ManifestEntry(**kwargs))
    return entries
