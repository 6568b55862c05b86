"""Reference reconstruction metrics (PSNR, SSIM) and no-reference sharpness.

Sharpness follows the cumulative-probability-of-blur-detection recipe:
Sobel edges, per-block just-noticeable-blur widths, and the fraction of
edges whose blur probability stays below the detection threshold. Higher
is sharper for all three metrics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .errors import DimensionMismatch, LengthMismatch, NoEdges, TooSmall
from .media import FrameSequence

_LUMA = np.array([0.299, 0.587, 0.114])


def luma(frame: np.ndarray) -> np.ndarray:
    """0.299R + 0.587G + 0.114B as float64; grayscale passes through."""
    arr = np.asarray(frame, dtype=np.float64)
    if arr.ndim == 2:
        return arr
    if arr.ndim == 3 and arr.shape[2] == 3:
        return arr @ _LUMA
    raise ValueError(f"expected (h, w) or (h, w, 3) raster, got {arr.shape}")


def _check_same_shape(reference: np.ndarray, candidate: np.ndarray) -> None:
    if reference.shape != candidate.shape:
        raise DimensionMismatch(
            f"reference {reference.shape} vs candidate {candidate.shape}"
        )


def psnr(reference: np.ndarray, candidate: np.ndarray) -> float:
    """10*log10(255^2 / MSE) over all pixels and channels; inf when identical."""
    reference = np.asarray(reference)
    candidate = np.asarray(candidate)
    _check_same_shape(reference, candidate)
    diff = reference.astype(np.float64) - candidate.astype(np.float64)
    mse = float(np.mean(diff * diff))
    if mse == 0.0:
        return math.inf
    return 10.0 * math.log10(255.0**2 / mse)


def _gaussian_kernel_1d(radius: int, sigma: float) -> np.ndarray:
    x = np.arange(-radius, radius + 1, dtype=np.float64)
    k = np.exp(-(x * x) / (2.0 * sigma * sigma))
    return k / k.sum()


def ssim(
    reference: np.ndarray,
    candidate: np.ndarray,
    k1: float = 0.01,
    k2: float = 0.03,
    sigma: float = 1.5,
    window: int = 11,
) -> float:
    """Mean local SSIM on luma; Gaussian 11x11 window, valid region only."""
    reference = np.asarray(reference)
    candidate = np.asarray(candidate)
    _check_same_shape(reference, candidate)
    x = luma(reference)
    y = luma(candidate)
    if min(x.shape) < window:
        raise TooSmall(f"ssim needs min dimension >= {window}, got {x.shape}")

    radius = window // 2
    kern = _gaussian_kernel_1d(radius, sigma)

    def smooth(img):
        out = ndimage.correlate1d(img, kern, axis=0, mode="constant")
        out = ndimage.correlate1d(out, kern, axis=1, mode="constant")
        return out[radius:-radius, radius:-radius]

    c1 = (k1 * 255.0) ** 2
    c2 = (k2 * 255.0) ** 2
    mu_x = smooth(x)
    mu_y = smooth(y)
    var_x = smooth(x * x) - mu_x * mu_x
    var_y = smooth(y * y) - mu_y * mu_y
    cov = smooth(x * y) - mu_x * mu_y
    ssim_map = ((2 * mu_x * mu_y + c1) * (2 * cov + c2)) / (
        (mu_x * mu_x + mu_y * mu_y + c1) * (var_x + var_y + c2)
    )
    return float(ssim_map.mean())


@dataclass(frozen=True)
class CpbdConfig:
    block_size: int = 64
    beta: float = 3.6
    p_jnb: float = 0.63
    contrast_threshold: float = 50.0
    edge_block_fraction: float = 0.002

    def __post_init__(self):
        if min(self.block_size, self.beta, self.contrast_threshold) <= 0:
            raise ValueError("CPBD parameters must be positive")
        if not 0.0 < self.p_jnb < 1.0:
            raise ValueError("p_jnb must lie in (0, 1)")


def _edge_width(row: np.ndarray, col: int, rising: bool) -> int:
    """Horizontal distance between the monotone extrema around an edge pixel.

    Walks outward from col while the signal keeps falling on one side and
    rising on the other (direction set by the edge polarity); plateaus
    terminate the walk. Returns 0 when no width is measurable.
    """
    n = len(row)
    if col <= 0 or col >= n - 1:
        return 0
    left = col
    right = col
    if rising:
        while left > 0 and row[left - 1] < row[left]:
            left -= 1
        while right < n - 1 and row[right + 1] > row[right]:
            right += 1
    else:
        while left > 0 and row[left - 1] > row[left]:
            left -= 1
        while right < n - 1 and row[right + 1] < row[right]:
            right += 1
    return right - left


def cpbd(frame: np.ndarray, cfg: CpbdConfig = CpbdConfig()) -> float:
    """Fraction of edges whose blur probability stays below the JNB threshold.

    Per qualifying 64x64 block (enough Sobel edge pixels), each
    predominantly-vertical edge pixel contributes a horizontal edge width
    w; its blur probability is 1 - exp(-(w / w_jnb)^beta) with w_jnb = 5
    for low-contrast blocks and 3 otherwise. The score is the fraction of
    widths with probability <= p_jnb, in [0, 1].
    """
    img = luma(frame)
    b = cfg.block_size
    if img.shape[0] < b or img.shape[1] < b:
        raise TooSmall(f"cpbd needs at least one {b}x{b} block, got {img.shape}")

    gx = ndimage.sobel(img, axis=1, mode="nearest")
    gy = ndimage.sobel(img, axis=0, mode="nearest")
    magnitude = np.hypot(gx, gy)
    threshold = 2.0 * magnitude.mean()
    edges = magnitude > threshold
    measurable = edges & (np.abs(gx) >= np.abs(gy))

    min_edges = cfg.edge_block_fraction * b * b
    sharp = 0
    total = 0
    for br in range(img.shape[0] // b):
        for bc in range(img.shape[1] // b):
            rows = slice(br * b, (br + 1) * b)
            cols = slice(bc * b, (bc + 1) * b)
            if np.count_nonzero(edges[rows, cols]) <= min_edges:
                continue
            block = img[rows, cols]
            w_jnb = 5.0 if block.max() - block.min() <= cfg.contrast_threshold else 3.0
            for r, c in zip(*np.nonzero(measurable[rows, cols])):
                rising = gx[br * b + r, bc * b + c] > 0
                width = _edge_width(img[br * b + r], bc * b + c, rising)
                if width == 0:
                    continue
                p_blur = 1.0 - math.exp(-((width / w_jnb) ** cfg.beta))
                total += 1
                if p_blur <= cfg.p_jnb:
                    sharp += 1
    if total == 0:
        raise NoEdges("no edge blocks with measurable widths")
    return sharp / total


@dataclass(frozen=True)
class VideoMetrics:
    psnr_mean: float  # mean over finite frames; inf when every frame is identical
    psnr_infinite_count: int
    ssim_mean: float
    cpbd_mean: float | None  # None when no frame has edges


def video_metrics(
    reference: FrameSequence,
    candidate: FrameSequence,
    cpbd_cfg: CpbdConfig = CpbdConfig(),
) -> VideoMetrics:
    """Per-frame PSNR/SSIM means against the reference, CPBD on the candidate.

    Frames with infinite PSNR are excluded from the mean and counted
    separately; frames without edges are excluded from the CPBD mean.
    """
    if len(reference) != len(candidate):
        raise LengthMismatch(f"{len(reference)} reference vs {len(candidate)} candidate frames")
    psnr_values = []
    infinite = 0
    ssim_values = []
    for ref, cand in zip(reference.frames, candidate.frames):
        value = psnr(ref, cand)
        if math.isinf(value):
            infinite += 1
        else:
            psnr_values.append(value)
        ssim_values.append(ssim(ref, cand))
    cpbd_values = []
    for frame in candidate.frames:
        try:
            cpbd_values.append(cpbd(frame, cpbd_cfg))
        except (NoEdges, TooSmall):
            continue
    return VideoMetrics(
        psnr_mean=float(np.mean(psnr_values)) if psnr_values else math.inf,
        psnr_infinite_count=infinite,
        ssim_mean=float(np.mean(ssim_values)),
        cpbd_mean=float(np.mean(cpbd_values)) if cpbd_values else None,
    )
