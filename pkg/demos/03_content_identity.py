"""
Content and identity metrics
============================

Word error rate over lip-read transcripts and average content distance
over face embeddings. For both, lower is better.
"""

import numpy as np

from talkeval import EmbeddingSeries, acd, wer

# --- WER: word-level substitutions, deletions and insertions over N ----
reference = "set blue at c nine now"
for hypothesis in (
    "set blue at c nine now",
    "set blue at sea nine now",
    "set blue nine now",
    "place set blue at c nine now again",
):
    print(f"{wer(reference, hypothesis):.4f}  <- {hypothesis!r}")

# Normalization is case/punctuation insensitive.
print("normalized:", wer("Bin BLUE, at F two now.", "bin blue at f two now"))

# --- ACD: does the video keep looking like the still image? ------------
rng = np.random.default_rng(2)
still = rng.normal(size=128)

same_person = EmbeddingSeries(
    vectors=still + rng.normal(0, 0.01, size=(75, 128)), dim=128
)
other_person = EmbeddingSeries(
    vectors=rng.normal(size=(75, 128)), dim=128
)
print(f"ACD same person:  {acd(still, same_person):.4f}")
print(f"ACD other person: {acd(still, other_person):.4f}")
