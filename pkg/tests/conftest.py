"""Shared synthetic-data builders for the test suite."""

import csv
import json

import numpy as np
import pytest

from talkeval.expression_metrics import BlinkEvent, EarSignal
from talkeval.media import (
    AudioClip,
    EmbeddingSeries,
    FrameSequence,
    save_audio,
    save_embeddings,
    save_frame_sequence,
)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def random_frames(rng, n=3, height=16, width=16, fps=25.0):
    frames = rng.integers(0, 256, size=(n, height, width, 3), dtype=np.uint8)
    return FrameSequence(width=width, height=height, fps=fps, frames=frames)


def textured_image(height=96, width=96, seed=7):
    """Smooth low-frequency texture suitable for optical-flow tests."""
    rng = np.random.default_rng(seed)
    yy, xx = np.mgrid[0:height, 0:width].astype(np.float64)
    img = 128.0 + np.zeros((height, width))
    for _ in range(4):
        fx = rng.uniform(1.0, 3.0) / width
        fy = rng.uniform(1.0, 3.0) / height
        phase = rng.uniform(0, 2 * np.pi)
        img += rng.uniform(15, 30) * np.sin(2 * np.pi * (fx * xx + fy * yy) + phase)
    return np.clip(img, 0, 255)


def edge_rich_image(seed, height=192, width=192):
    """Three 64-column bands: strong steps + two low-contrast sine gratings.

    Calibrated so the sharpness score stays graded under Gaussian blur:
    steps turn wide (blurred) first, the period-5 grating drops out of
    the edge map by sigma=2, the period-8 one by sigma=4.
    """
    rng = np.random.default_rng(seed)
    img = np.empty((height, width), dtype=np.float64)
    xx = np.arange(width, dtype=np.float64)
    third = width // 3
    band = np.full(third, 120.0)
    cols = sorted(rng.choice(np.arange(10, third - 10), size=2, replace=False).tolist())
    level = 120.0
    for c in cols:
        level += float(rng.choice([-35.0, 35.0]))
        band[c:] = level
    band[-6:] = 120.0
    img[:, :third] = np.clip(band, 0, 255)[None, :]
    for lo, hi, period in ((third, 2 * third, 8.0), (2 * third, width, 5.0)):
        phase = rng.uniform(0, 2 * np.pi)
        img[:, lo:hi] = 120.0 + 22.0 * np.sin(2 * np.pi * xx[lo:hi] / period + phase)[None, :]
    return img


def blink_corpus_signal(rng, n_frames=150, fps=25.0, ramp=3, base=0.30, noise=0.003):
    """One synthetic EAR signal with planted V-dip blinks and ground truth."""
    values = base + rng.normal(0.0, noise, size=n_frames)
    margin = ramp + 6
    n_blinks = int(rng.integers(1, 4))
    apexes = []
    attempts = 0
    while len(apexes) < n_blinks and attempts < 50:
        attempts += 1
        apex = int(rng.integers(margin, n_frames - margin))
        if all(abs(apex - a) >= 4 * ramp + 10 for a in apexes):
            apexes.append(apex)
    annotations = []
    for apex in sorted(apexes):
        depth = float(rng.uniform(0.05, 0.09))
        for i in range(ramp + 1):
            level = base - (base - depth) * (i / ramp)
            values[apex - ramp + i] = level + rng.normal(0.0, noise)
            values[apex + ramp - i] = level + rng.normal(0.0, noise)
        values[apex] = depth
        annotations.append(
            BlinkEvent(
                start=apex - ramp,
                apex=apex,
                end=apex + ramp,
                duration_s=2 * ramp / fps,
            )
        )
    return EarSignal(values=np.clip(values, 0.0, None), fps=fps), annotations


def shifted_embedding_pair(rng, offset, n=120, dim=16, snr=10.0, max_shift=15):
    """(video, audio) embedding streams where audio leads video by `offset`.

    audio[t] = video[t + offset] + noise, so the minimum-distance shift k
    (video[t] vs audio[t-k]) sits at k = offset.
    """
    master = rng.normal(0.0, 1.0, size=(n + 2 * max_shift, dim))
    video = master[max_shift : max_shift + n]
    audio_clean = master[max_shift + offset : max_shift + offset + n]
    noise_scale = 1.0 / np.sqrt(snr)
    audio = audio_clean + rng.normal(0.0, noise_scale, size=audio_clean.shape)
    return (
        EmbeddingSeries(vectors=video, dim=dim),
        EmbeddingSeries(vectors=audio, dim=dim),
    )


def face_like_frames(rng, n=40, height=64, width=64, fps=25.0):
    """Edge-bearing frames with slight per-frame jitter (CPBD-friendly)."""
    base = np.full((height, width, 3), 30, dtype=np.float64)
    base[:, 10:20] = [200, 180, 160]
    base[:, 34:40] = [90, 120, 210]
    base[12:52, 48:58] = [230, 230, 40]
    frames = np.empty((n, height, width, 3), dtype=np.uint8)
    for i in range(n):
        jitter = rng.normal(0, 2.0, size=(height, width, 1))
        frames[i] = np.clip(base + jitter, 0, 255).astype(np.uint8)
    return FrameSequence(width=width, height=height, fps=fps, frames=frames)


def write_landmarks_csv(path, n_frames, blink_apexes=(), n_points=12):
    """eye6-layout landmark CSV; EAR dips to ~0.05 at each planted apex."""
    ramp = 3
    scale = {}
    for apex in blink_apexes:
        for i in range(-ramp, ramp + 1):
            level = 0.05 / 0.30 + (1 - 0.05 / 0.30) * abs(i) / ramp
            scale[apex + i] = min(scale.get(apex + i, 1.0), level)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["frame", "point", "x", "y"])
        for f in range(n_frames):
            s = scale.get(f, 1.0)
            # EAR at s=1 is (0.6 + 0.6) / 4 = 0.30 per eye
            half = 0.3 * s
            for eye, x0 in ((0, 10.0), (6, 30.0)):
                pts = [
                    (x0, 5.0),
                    (x0 + 1, 5.0 - half),
                    (x0 + 3, 5.0 - half),
                    (x0 + 4, 5.0),
                    (x0 + 3, 5.0 + half),
                    (x0 + 1, 5.0 + half),
                ]
                for p, (x, y) in enumerate(pts):
                    writer.writerow([f, eye + p, x, y])


def build_manifest_entry(root, entry_id, rng, n_frames=24, with_blink=True,
                         sync_offset=0, transcript=("set blue at c nine now", None)):
    """Write one complete synthetic corpus entry; returns its manifest dict."""
    entry_dir = root / entry_id
    entry_dir.mkdir(parents=True, exist_ok=True)

    frames = face_like_frames(rng, n=n_frames)
    save_frame_sequence(frames, entry_dir / "frames")

    audio = AudioClip(
        sample_rate=16000,
        samples=(1000 * np.sin(np.arange(int(16000 * n_frames / 25)) * 0.05)).astype(np.int16),
    )
    save_audio(audio, entry_dir / "audio.wav")

    apexes = (n_frames // 2,) if with_blink else ()
    write_landmarks_csv(entry_dir / "landmarks.csv", n_frames, apexes)

    video_emb, audio_emb = shifted_embedding_pair(rng, sync_offset, n=n_frames, dim=8)
    save_embeddings(video_emb, entry_dir / "video_emb.csv")
    save_embeddings(audio_emb, entry_dir / "audio_emb.csv")
    still = EmbeddingSeries(vectors=video_emb.vectors[:1], dim=8)
    save_embeddings(still, entry_dir / "still_emb.csv")

    ref_text, hyp_text = transcript
    (entry_dir / "ref.txt").write_text(ref_text, encoding="utf-8")
    (entry_dir / "hyp.txt").write_text(hyp_text or ref_text, encoding="utf-8")

    with open(entry_dir / "pose.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["frame", "roll", "pitch", "yaw"])
        for f in range(n_frames):
            writer.writerow([f, 2.0, -3.0, 1.5])

    return {
        "id": entry_id,
        "frames_dir": f"{entry_id}/frames",
        "meta": {"landmarks_layout": "eye6"},
        "audio_path": f"{entry_id}/audio.wav",
        "landmarks_path": f"{entry_id}/landmarks.csv",
        "video_embeddings_path": f"{entry_id}/video_emb.csv",
        "audio_embeddings_path": f"{entry_id}/audio_emb.csv",
        "still_embedding_path": f"{entry_id}/still_emb.csv",
        "transcript_ref": f"{entry_id}/ref.txt",
        "transcript_hyp": f"{entry_id}/hyp.txt",
        "pose_path": f"{entry_id}/pose.csv",
    }


def build_manifest(root, n_entries=3, seed=11, **entry_kwargs):
    rng = np.random.default_rng(seed)
    entries = [
        build_manifest_entry(root, f"v{i:02d}", rng, **entry_kwargs)
        for i in range(n_entries)
    ]
    manifest_path = root / "manifest.json"
    manifest_path.write_text(json.dumps(entries, indent=2), encoding="utf-8")
    return manifest_path
