import numpy as np
import pytest
from conftest import textured_image
from scipy import ndimage

from talkeval import errors
from talkeval.media import FrameSequence
from talkeval.motion import (
    FlowConfig,
    FlowField,
    average_heatmap,
    flow_to_hsv,
    mean_flow,
    optical_flow,
)

INNER = np.s_[8:-8, 8:-8]


def to_rgb(gray):
    return np.repeat(np.asarray(gray, dtype=np.uint8)[:, :, None], 3, axis=2)


class TestOpticalFlow:
    def test_identical_frames_zero_field(self):
        img = textured_image(64, 64, seed=2)
        flow = optical_flow(img, img)
        assert np.abs(flow.u).max() < 1e-6
        assert np.abs(flow.v).max() < 1e-6

    def test_recovers_two_pixel_translation(self):
        prev = textured_image(96, 96, seed=7)
        nxt = np.roll(prev, 2, axis=1)
        flow = optical_flow(prev, nxt)
        assert 1.6 <= flow.u[INNER].mean() <= 2.4
        assert np.abs(flow.v[INNER]).mean() < 0.3

    def test_vertical_translation(self):
        prev = textured_image(96, 96, seed=9)
        nxt = np.roll(prev, 2, axis=0)
        flow = optical_flow(prev, nxt)
        assert 1.6 <= flow.v[INNER].mean() <= 2.4
        assert np.abs(flow.u[INNER]).mean() < 0.3

    def test_dimension_mismatch(self):
        with pytest.raises(errors.DimensionMismatch):
            optical_flow(np.zeros((96, 128)), np.zeros((64, 64)))

    def test_swap_approximately_negates(self):
        prev = textured_image(96, 96, seed=7)
        nxt = np.roll(prev, 2, axis=1)
        forward = optical_flow(prev, nxt)
        backward = optical_flow(nxt, prev)
        assert np.abs(forward.u[INNER] + backward.u[INNER]).mean() < 0.5
        assert np.abs(forward.v[INNER] + backward.v[INNER]).mean() < 0.5

    def test_rgb_input_accepted(self):
        img = to_rgb(textured_image(48, 48, seed=1))
        flow = optical_flow(img, img)
        assert flow.u.shape == (48, 48)


class TestFlowToHsv:
    def test_zero_flow_black(self):
        flow = FlowField(u=np.zeros((8, 8)), v=np.zeros((8, 8)))
        assert np.all(flow_to_hsv(flow) == 0)

    def test_uniform_right_flow_is_red(self):
        flow = FlowField(u=np.ones((4, 4)), v=np.zeros((4, 4)))
        raster = flow_to_hsv(flow, max_magnitude=1.0)
        assert np.all(raster[:, :, 0] == 255)
        assert np.all(raster[:, :, 1:] == 0)

    def test_opposite_flows_hues_180_apart(self):
        right = flow_to_hsv(FlowField(u=np.ones((2, 2)), v=np.zeros((2, 2))), 1.0)
        left = flow_to_hsv(FlowField(u=-np.ones((2, 2)), v=np.zeros((2, 2))), 1.0)
        # hue 0 is pure red; hue 180 is pure cyan
        assert right[0, 0].tolist() == [255, 0, 0]
        assert left[0, 0].tolist() == [0, 255, 255]

    def test_scale_consistency(self, rng):
        u = rng.normal(size=(12, 12))
        v = rng.normal(size=(12, 12))
        one = flow_to_hsv(FlowField(u=u, v=v), max_magnitude=2.0)
        two = flow_to_hsv(FlowField(u=2 * u, v=2 * v), max_magnitude=4.0)
        assert np.array_equal(one, two)

    def test_auto_max_magnitude_percentile(self, rng):
        u = rng.normal(size=(32, 32))
        v = rng.normal(size=(32, 32))
        auto = flow_to_hsv(FlowField(u=u, v=v))
        explicit = flow_to_hsv(
            FlowField(u=u, v=v), float(np.percentile(np.hypot(u, v), 99))
        )
        assert np.array_equal(auto, explicit)


def moving_block_video(n=14, size=64, seed=5):
    rng = np.random.default_rng(seed)
    background = np.clip(
        ndimage.gaussian_filter(rng.normal(0, 1, (size, size)), 1.5) * 40 + 60, 0, 255
    )
    frames = []
    mask = np.zeros((size, size), dtype=bool)
    for i in range(n):
        frame = background.copy()
        col = 4 + 2 * i
        frame[28:36, col : col + 8] = 230.0
        mask[28:36, col : col + 8] = True
        frames.append(to_rgb(frame))
    video = FrameSequence(width=size, height=size, fps=25, frames=np.stack(frames))
    return video, mask


HEATMAP_CFG = FlowConfig(alpha=5.0, iterations=80, pyramid_levels=2)


class TestAverageHeatmap:
    def test_static_videos_zero(self):
        frame = to_rgb(textured_image(32, 32, seed=4))
        video = FrameSequence(width=32, height=32, fps=25, frames=np.stack([frame] * 4))
        heat = average_heatmap([video, video])
        assert np.all(heat == 0)

    def test_moving_block_mass_concentrates(self):
        video, mask = moving_block_video()
        heat = average_heatmap([video], HEATMAP_CFG).astype(np.float64)
        dilated = ndimage.binary_dilation(mask, iterations=6)
        assert heat[dilated].sum() / heat.sum() >= 0.9

    def test_empty_set(self):
        with pytest.raises(errors.EmptySet):
            average_heatmap([])

    def test_dimension_mismatch(self, rng):
        a = FrameSequence(width=16, height=16, fps=25, frames=np.zeros((2, 16, 16, 3), np.uint8))
        b = FrameSequence(width=16, height=18, fps=25, frames=np.zeros((2, 18, 16, 3), np.uint8))
        with pytest.raises(errors.DimensionMismatch):
            average_heatmap([a, b])

    def test_permutation_invariance(self):
        video_a, _ = moving_block_video(seed=5)
        video_b, _ = moving_block_video(seed=6)
        forward = average_heatmap([video_a, video_b], HEATMAP_CFG)
        backward = average_heatmap([video_b, video_a], HEATMAP_CFG)
        assert np.array_equal(forward, backward)

    def test_normalized_to_255(self):
        video, _ = moving_block_video()
        heat = average_heatmap([video], HEATMAP_CFG)
        assert heat.dtype == np.uint8
        assert heat.max() == 255


class TestMeanFlow:
    def test_single_frame_video_zero(self):
        frame = to_rgb(textured_image(24, 24, seed=2))
        video = FrameSequence(width=24, height=24, fps=25, frames=frame[None])
        flow = mean_flow(video)
        assert np.all(flow.u == 0) and np.all(flow.v == 0)

    def test_constant_motion_direction(self):
        base = textured_image(64, 64, seed=8)
        frames = np.stack([to_rgb(np.roll(base, 2 * i, axis=1)) for i in range(4)])
        video = FrameSequence(width=64, height=64, fps=25, frames=frames)
        flow = mean_flow(video)
        assert flow.u[INNER].mean() > 1.0
