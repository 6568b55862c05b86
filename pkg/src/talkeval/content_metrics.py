"""Identity preservation (average content distance) and word error rate.

Embeddings and transcripts are ingested from external encoders and
lip readers; only the arithmetic lives here.
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionMismatch, EmptyReference, EmptySeries
from .media import EmbeddingSeries


def acd(still: np.ndarray, frames: EmbeddingSeries) -> float:
    """Mean Euclidean distance between the still embedding and each frame's."""
    still = np.asarray(still, dtype=np.float64).reshape(-1)
    if len(frames) == 0:
        raise EmptySeries("no frame embeddings")
    if still.shape[0] != frames.dim:
        raise DimensionMismatch(f"still dim {still.shape[0]} vs frames dim {frames.dim}")
    return float(np.linalg.norm(frames.vectors - still, axis=1).mean())


def tokenize(text: str) -> list[str]:
    """Lowercase, split on whitespace, strip leading/trailing punctuation."""
    words = []
    for token in text.lower().split():
        word = token.strip("!\"#$%&'()*+,-./:;<=>?@[\\]^_`{|}~")
        if word:
            words.append(word)
    return words


def word_edit_distance(reference: list[str], hypothesis: list[str]) -> int:
    """Word-level Levenshtein distance with unit costs.

    On equal cost, substitution is preferred over deletion over insertion;
    only the count is contractual.
    """
    n, m = len(reference), len(hypothesis)
    prev = list(range(m + 1))
    for i in range(1, n + 1):
        cur = [i] + [0] * m
        for j in range(1, m + 1):
            sub = prev[j - 1] + (reference[i - 1] != hypothesis[j - 1])
            dele = prev[j] + 1
            ins = cur[j - 1] + 1
            cur[j] = min(sub, dele, ins)
        prev = cur
    return prev[m]


def wer(reference: str | list[str], hypothesis: str | list[str]) -> float:
    """(S + D + I) / N over normalized words; may exceed 1."""
    ref = tokenize(reference) if isinstance(reference, str) else list(reference)
    hyp = tokenize(hypothesis) if isinstance(hypothesis, str) else list(hypothesis)
    if not ref:
        raise EmptyReference("reference transcript has no words")
    return word_edit_distance(ref, hyp) / len(ref)
