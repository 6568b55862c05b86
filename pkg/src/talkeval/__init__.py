"""talkeval: quantitative evaluation toolkit for talking-head video.

Frame quality (PSNR/SSIM/CPBD), identity (ACD), content (WER), synchrony
(AV offset/confidence), spontaneous expression (EAR blink detection and
statistics), motion analysis (dense flow, HSV maps, heatmaps), plus the
audio-visual framing pipeline and adversarial/reconstruction loss
arithmetic. Everything operates on ingested media and sidecar files; no
models are bundled.
"""

from .av_pipeline import (
    AudioFrame,
    AvFramingConfig,
    PairKind,
    SyncPair,
    compute_stride,
    filter_by_pose,
    frame_audio,
    lower_half_crop,
    sample_sync_pairs,
)
from .content_metrics import acd, tokenize, wer, word_edit_distance
from .expression_metrics import (
    BlinkDetectorConfig,
    BlinkEvent,
    BlinkStats,
    EarSignal,
    blink_stats,
    detect_blinks,
    ear,
    ear_signal,
    evaluate_detector,
)
from .frame_metrics import CpbdConfig, VideoMetrics, cpbd, luma, psnr, ssim, video_metrics
from .losses import (
    LossWeights,
    adv_frame_loss,
    adv_seq_loss,
    adv_sync_loss,
    clamp_scores,
    full_objective,
    lower_half_l1,
    total_adv_loss,
)
from .media import (
    AudioClip,
    EmbeddingSeries,
    FrameSequence,
    LandmarkSeries,
    ManifestEntry,
    PoseSeries,
    load_audio,
    load_embeddings,
    load_frame_sequence,
    load_landmarks,
    load_manifest,
    load_pose,
    read_transcript,
    save_audio,
    save_embeddings,
    save_frame_sequence,
)
from .motion import (
    FlowConfig,
    FlowField,
    average_heatmap,
    flow_to_hsv,
    mean_flow,
    mean_flow_magnitude,
    optical_flow,
)
from .report import EvalConfig, EvaluationReport, build_report, evaluate_entry
from .sync_metrics import (
    DistanceCurve,
    SyncResult,
    distance_curve,
    sync_score,
    windowed_embeddings,
)

__version__ = "0.1.0"
