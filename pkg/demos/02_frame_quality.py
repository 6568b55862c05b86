"""
Frame quality metrics
=====================

PSNR and SSIM against a reference, CPBD sharpness without one. All three
should fall as a frame degrades.
"""

import numpy as np
from scipy import ndimage

from talkeval import cpbd, psnr, ssim

# A synthetic "face": flat background, a few strong vertical structures.
rng = np.random.default_rng(1)
frame = np.full((96, 96, 3), 40, dtype=np.float64)
frame[:, 20:30] = [210, 180, 150]
frame[:, 55:60] = [90, 120, 200]
frame[30:70, 70:82] = [230, 230, 60]
frame = np.clip(frame + rng.normal(0, 2, frame.shape), 0, 255).astype(np.uint8)

print(f"{'sigma':>5} {'psnr':>8} {'ssim':>7} {'cpbd':>7}")
for sigma in (0.0, 0.5, 1.0, 2.0, 4.0):
    if sigma:
        degraded = ndimage.gaussian_filter(frame.astype(np.float64), (sigma, sigma, 0))
        degraded = np.clip(degraded, 0, 255).astype(np.uint8)
    else:
        degraded = frame
    p = psnr(frame, degraded)
    s = ssim(frame, degraded)
    c = cpbd(degraded)
    print(f"{sigma:5.1f} {p:8.2f} {s:7.4f} {c:7.4f}")

# Identical frames: PSNR is reported as the infinite sentinel.
print("identical frames -> psnr:", psnr(frame, frame))
