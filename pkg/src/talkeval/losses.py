"""Adversarial and reconstruction loss arithmetic over supplied scores.

Expectations are realized as batch means; scores are clamped away from
{0, 1} so every logarithm stays finite. These functions only evaluate the
written objectives; optimizers consume them externally.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, EmptyBatch

SCORE_EPS = 1e-7


@dataclass(frozen=True)
class LossWeights:
    lambda_rec: float = 600.0
    lambda_img: float = 1.0
    lambda_sync: float = 0.8
    lambda_seq: float = 0.2

    def __post_init__(self):
        if min(self.lambda_rec, self.lambda_img, self.lambda_sync, self.lambda_seq) < 0:
            raise ValueError("loss weights must be non-negative")


def clamp_scores(scores) -> np.ndarray:
    """Probabilities clamped to [eps, 1 - eps]; rejects empty batches."""
    arr = np.asarray(scores, dtype=np.float64).reshape(-1)
    if arr.size == 0:
        raise EmptyBatch("score batch is empty")
    return np.clip(arr, SCORE_EPS, 1.0 - SCORE_EPS)


def _mean_log(scores: np.ndarray) -> float:
    return float(np.mean(np.log(scores)))


def adv_frame_loss(real_scores, fake_scores) -> float:
    """mean(log real) + mean(log(1 - fake))."""
    real = clamp_scores(real_scores)
    fake = clamp_scores(fake_scores)
    return _mean_log(real) + _mean_log(1.0 - fake)


def adv_sync_loss(in_scores, out_scores, fake_scores) -> float:
    """mean(log in) + 0.5*mean(log(1 - out)) + 0.5*mean(log(1 - fake))."""
    in_s = clamp_scores(in_scores)
    out_s = clamp_scores(out_scores)
    fake_s = clamp_scores(fake_scores)
    return _mean_log(in_s) + 0.5 * _mean_log(1.0 - out_s) + 0.5 * _mean_log(1.0 - fake_s)


def adv_seq_loss(real_scores, fake_scores) -> float:
    """Sequence-level variant of the frame loss."""
    return adv_frame_loss(real_scores, fake_scores)


def total_adv_loss(frame: float, sync: float, seq: float, w: LossWeights = LossWeights()) -> float:
    return w.lambda_img * frame + w.lambda_sync * sync + w.lambda_seq * seq


def lower_half_l1(reference: np.ndarray, generated: np.ndarray) -> float:
    """Sum of |F - G| over the lower-half rows (floor(H/2)..H-1), all channels."""
    ref = np.asarray(reference)
    gen = np.asarray(generated)
    if ref.shape != gen.shape:
        raise DimensionMismatch(f"reference {ref.shape} vs generated {gen.shape}")
    top = ref.shape[0] // 2
    diff = ref[top:].astype(np.float64) - gen[top:].astype(np.float64)
    return float(np.abs(diff).sum())


def full_objective(adv: float, l1: float, w: LossWeights = LossWeights()) -> float:
    """adv + lambda_rec * l1.

    lambda_rec's default (600) makes the weighted reconstruction term
    roughly triple the adversarial loss at convergence-scale values.
    """
    return adv + w.lambda_rec * l1
