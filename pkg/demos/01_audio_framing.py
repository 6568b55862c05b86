"""
Audio framing and sync-pair sampling
====================================

Cut a speech signal into one 0.2 s window per video frame, then build the
three kinds of audio-visual training pairs (in-sync, shifted, fake).
"""

import numpy as np

from talkeval import AudioClip, AvFramingConfig, FrameSequence
from talkeval import compute_stride, frame_audio, sample_sync_pairs
from talkeval.av_pipeline import pair_record

# One video frame covers sample_rate / fps audio samples.
print("stride @ 16 kHz, 25 fps:", compute_stride(16000, 25), "samples/frame")
print("stride @ 44.1 kHz, 25 fps:", compute_stride(44100, 25), "samples/frame")

# A 3 s clip at 25 fps has 75 frames; each gets a centered 3200-sample window.
rng = np.random.default_rng(0)
audio = AudioClip(sample_rate=16000, samples=rng.integers(-5000, 5000, 48000).astype(np.int16))
cfg = AvFramingConfig(sample_rate=16000, fps=25)
windows = frame_audio(audio, cfg, n_video_frames=75)
print(f"{len(windows)} windows of {len(windows[0].samples)} samples")
print("window 0 starts at sample", windows[0].start, "(negative = zero padded)")

# Sync pairs: snippets are lower-half crops, the seed only drives the shifts.
frames = rng.integers(0, 256, size=(75, 64, 64, 3), dtype=np.uint8)
video = FrameSequence(width=64, height=64, fps=25, frames=frames)
fake = FrameSequence(width=64, height=64, fps=25, frames=frames[::-1].copy())
pairs = sample_sync_pairs(video, audio, fake, cfg, min_shift=2, seed=7, n_anchors=3)
for pair in pairs:
    print(pair_record(pair))
