"""Dense optical flow, HSV motion maps and average-magnitude heatmaps.

Flow is a coarse-to-fine Horn-Schunck estimate: a Gaussian pyramid,
incremental warping between levels, and per-level Jacobi iterations that
trade brightness constancy against alpha^2-weighted smoothness.
Visualization maps the flow angle to hue and the magnitude to value.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .errors import DimensionMismatch, EmptySet
from .frame_metrics import luma
from .media import FrameSequence


@dataclass(frozen=True)
class FlowConfig:
    alpha: float = 15.0
    iterations: int = 100
    pyramid_levels: int = 3

    def __post_init__(self):
        if min(self.alpha, self.iterations, self.pyramid_levels) <= 0:
            raise ValueError("flow parameters must be positive")


@dataclass(frozen=True)
class FlowField:
    u: np.ndarray  # (h, w) horizontal displacement, +x right
    v: np.ndarray  # (h, w) vertical displacement, +y down

    def __post_init__(self):
        u = np.asarray(self.u, dtype=np.float64)
        v = np.asarray(self.v, dtype=np.float64)
        if u.shape != v.shape or u.ndim != 2:
            raise ValueError("u and v must be matching 2-D arrays")
        if not (np.all(np.isfinite(u)) and np.all(np.isfinite(v))):
            raise ValueError("flow must be finite")
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)

    @property
    def magnitude(self) -> np.ndarray:
        return np.hypot(self.u, self.v)


# Horn-Schunck neighbour-average weights for the Jacobi update.
_AVG_KERNEL = np.array(
    [[1 / 12, 1 / 6, 1 / 12], [1 / 6, 0.0, 1 / 6], [1 / 12, 1 / 6, 1 / 12]]
)
_KX = 0.25 * np.array([[-1.0, 1.0], [-1.0, 1.0]])
_KY = 0.25 * np.array([[-1.0, -1.0], [1.0, 1.0]])
_KT = 0.25 * np.ones((2, 2))


def _derivatives(prev: np.ndarray, nxt: np.ndarray):
    """Spatial/temporal derivatives averaged over both frames, replicate edges.

    correlate, not convolve: the 2x2 kernels are written as correlation
    masks and must not be flipped.
    """
    corr = lambda img, k: ndimage.correlate(img, k, mode="nearest")
    fx = corr(prev, _KX) + corr(nxt, _KX)
    fy = corr(prev, _KY) + corr(nxt, _KY)
    ft = corr(nxt, _KT) - corr(prev, _KT)
    return fx, fy, ft


def _hs_increment(prev, nxt, alpha, iterations):
    fx, fy, ft = _derivatives(prev, nxt)
    denominator = alpha * alpha + fx * fx + fy * fy
    u = np.zeros_like(prev)
    v = np.zeros_like(prev)
    for _ in range(iterations):
        u_avg = ndimage.convolve(u, _AVG_KERNEL, mode="nearest")
        v_avg = ndimage.convolve(v, _AVG_KERNEL, mode="nearest")
        common = (fx * u_avg + fy * v_avg + ft) / denominator
        u = u_avg - fx * common
        v = v_avg - fy * common
    return u, v


def _downsample(img: np.ndarray) -> np.ndarray:
    return ndimage.gaussian_filter(img, sigma=1.0, mode="nearest")[::2, ::2]


def _resize_flow(u, v, shape):
    zoom = (shape[0] / u.shape[0], shape[1] / u.shape[1])
    u = ndimage.zoom(u, zoom, order=1, mode="nearest") * zoom[1]
    v = ndimage.zoom(v, zoom, order=1, mode="nearest") * zoom[0]
    return u, v


def _warp(img: np.ndarray, u: np.ndarray, v: np.ndarray) -> np.ndarray:
    h, w = img.shape
    yy, xx = np.mgrid[0:h, 0:w].astype(np.float64)
    return ndimage.map_coordinates(img, [yy + v, xx + u], order=1, mode="nearest")


def optical_flow(prev: np.ndarray, nxt: np.ndarray, cfg: FlowConfig = FlowConfig()) -> FlowField:
    """Dense flow from prev to nxt (nxt(x + u, y + v) ~ prev(x, y))."""
    p = luma(prev)
    n = luma(nxt)
    if p.shape != n.shape:
        raise DimensionMismatch(f"prev {p.shape} vs next {n.shape}")

    pyramid = [(p, n)]
    for _ in range(cfg.pyramid_levels - 1):
        p_c, n_c = pyramid[-1]
        if min(p_c.shape) < 16:
            break
        pyramid.append((_downsample(p_c), _downsample(n_c)))

    u = np.zeros_like(pyramid[-1][0])
    v = np.zeros_like(pyramid[-1][0])
    for level, (p_l, n_l) in enumerate(reversed(pyramid)):
        if level > 0:
            u, v = _resize_flow(u, v, p_l.shape)
        warped = _warp(n_l, u, v)
        du, dv = _hs_increment(p_l, warped, cfg.alpha, cfg.iterations)
        u = u + du
        v = v + dv
    return FlowField(u=u, v=v)


def flow_to_hsv(flow: FlowField, max_magnitude: float | None = None) -> np.ndarray:
    """RGB raster with hue = flow angle, saturation 1, value = scaled magnitude.

    max_magnitude None selects the field's 99th-percentile magnitude.
    """
    magnitude = flow.magnitude
    if max_magnitude is None:
        max_magnitude = float(np.percentile(magnitude, 99))
    if max_magnitude <= 0:
        value = np.zeros_like(magnitude)
    else:
        value = np.clip(magnitude / max_magnitude, 0.0, 1.0)
    hue = np.mod(np.arctan2(flow.v, flow.u), 2 * np.pi) / (2 * np.pi)  # [0, 1)

    # HSV -> RGB with s = 1: p = 0, q = v(1-f), t = v*f.
    sector = np.floor(hue * 6.0).astype(int) % 6
    f = hue * 6.0 - np.floor(hue * 6.0)
    q = value * (1.0 - f)
    t = value * f
    zeros = np.zeros_like(value)
    channels = [
        (value, t, zeros),
        (q, value, zeros),
        (zeros, value, t),
        (zeros, q, value),
        (t, zeros, value),
        (value, zeros, q),
    ]
    rgb = np.zeros(magnitude.shape + (3,), dtype=np.float64)
    for s, (r, g, b) in enumerate(channels):
        mask = sector == s
        rgb[mask, 0] = r[mask]
        rgb[mask, 1] = g[mask]
        rgb[mask, 2] = b[mask]
    return np.round(rgb * 255.0).astype(np.uint8)


def mean_flow_magnitude(
    videos: list[FrameSequence], cfg: FlowConfig = FlowConfig()
) -> np.ndarray:
    """Per-pixel mean flow magnitude (pixels) over all consecutive pairs."""
    if not videos:
        raise EmptySet("no videos to average")
    shape = (videos[0].height, videos[0].width)
    for video in videos:
        if (video.height, video.width) != shape:
            raise DimensionMismatch("all videos must share dimensions")
    total = np.zeros(shape, dtype=np.float64)
    n_pairs = 0
    for video in videos:
        for i in range(len(video) - 1):
            flow = optical_flow(video.frames[i], video.frames[i + 1], cfg)
            total += flow.magnitude
            n_pairs += 1
    if n_pairs:
        total /= n_pairs
    return total


def average_heatmap(
    videos: list[FrameSequence], cfg: FlowConfig = FlowConfig()
) -> np.ndarray:
    """Per-pixel mean flow magnitude over all consecutive-frame pairs.

    Normalized to [0, 255] (uint8 grayscale) by the global maximum so all
    panels of one comparison share a scale; a set with no motion anywhere
    stays all zero.
    """
    magnitude = mean_flow_magnitude(videos, cfg)
    peak = magnitude.max()
    if peak > 0:
        magnitude = magnitude / peak * 255.0
    return np.round(magnitude).astype(np.uint8)


def mean_flow(video: FrameSequence, cfg: FlowConfig = FlowConfig()) -> FlowField:
    """Average flow field over a video's consecutive-frame pairs."""
    if len(video) < 2:
        return FlowField(
            u=np.zeros((video.height, video.width)),
            v=np.zeros((video.height, video.width)),
        )
    u = np.zeros((video.height, video.width), dtype=np.float64)
    v = np.zeros_like(u)
    for i in range(len(video) - 1):
        flow = optical_flow(video.frames[i], video.frames[i + 1], cfg)
        u += flow.u
        v += flow.v
    u /= len(video) - 1
    v /= len(video) - 1
    return FlowField(u=u, v=v)
