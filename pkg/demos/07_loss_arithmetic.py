"""
GAN objective arithmetic
========================

Compose the three adversarial losses (frame, sync, sequence) with their
weights and add the lower-half-of-the-face L1 reconstruction term. The
default weights make the weighted L1 roughly triple the adversarial part.
"""

import numpy as np

from talkeval import (
    LossWeights,
    adv_frame_loss,
    adv_seq_loss,
    adv_sync_loss,
    full_objective,
    lower_half_l1,
    total_adv_loss,
)

rng = np.random.default_rng(5)

# Discriminator outputs midway through training: real ~ 0.7, fake ~ 0.35.
frame = adv_frame_loss(rng.uniform(0.6, 0.8, 32), rng.uniform(0.3, 0.4, 32))
sync = adv_sync_loss(
    rng.uniform(0.6, 0.8, 32), rng.uniform(0.2, 0.4, 32), rng.uniform(0.3, 0.5, 32)
)
seq = adv_seq_loss(rng.uniform(0.6, 0.8, 8), rng.uniform(0.3, 0.4, 8))
print(f"frame {frame:+.4f}  sync {sync:+.4f}  seq {seq:+.4f}")

weights = LossWeights()  # lambda_rec 600, lambda_img 1, lambda_sync 0.8, lambda_seq 0.2
adv = total_adv_loss(frame, sync, seq, weights)
print(f"total adversarial: {adv:+.4f}")

# Reconstruction is summed over the lower half only, so the upper face is
# free to blink and frown.
reference = rng.integers(0, 256, size=(96, 96, 3), dtype=np.uint8)
generated = reference.copy()
generated[:48] = rng.integers(0, 256, size=(48, 96, 3), dtype=np.uint8)  # upper half differs
print("upper-half-only difference ->", lower_half_l1(reference, generated))

generated[70:72, 30:40] = 0  # now touch the mouth region
l1 = lower_half_l1(reference, generated) / reference[48:].size  # per-pixel scale
print(f"objective: {full_objective(adv, l1, weights):+.4f} "
      f"(weighted L1 {weights.lambda_rec * l1:+.4f})")
