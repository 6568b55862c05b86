"""
Audio-visual synchrony scoring
==============================

Slide the audio embedding stream against the video embedding stream and
read the offset (argmin of the distance curve, positive = audio leads)
and the confidence (median minus minimum; < 0.5 means uncorrelated).
"""

import numpy as np

from talkeval import EmbeddingSeries, distance_curve, sync_score, windowed_embeddings

rng = np.random.default_rng(3)
master = rng.normal(size=(150, 64))

video = EmbeddingSeries(vectors=master[15:135], dim=64)

for label, offset in (("in sync", 0), ("audio leads by 4", 4), ("audio lags by 6", -6)):
    audio = EmbeddingSeries(
        vectors=master[15 + offset : 135 + offset] + rng.normal(0, 0.3, (120, 64)),
        dim=64,
    )
    result = sync_score(distance_curve(video, audio, max_offset=15))
    print(f"{label:18s} -> offset {result.av_offset:+d}, confidence {result.av_confidence:.2f}")

# Uncorrelated streams give a flat curve and a confidence below 0.5.
noise_audio = EmbeddingSeries(vectors=rng.normal(size=(120, 64)), dim=64)
result = sync_score(distance_curve(video, noise_audio, max_offset=15))
print(f"{'uncorrelated':18s} -> offset {result.av_offset:+d}, confidence {result.av_confidence:.2f}")

# Per-frame embeddings can be pooled into 0.2 s (5-frame) windows first.
pooled = windowed_embeddings(video, window=5)
print("windowed:", len(video), "frame vectors ->", len(pooled), "window vectors")
