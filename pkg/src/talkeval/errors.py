"""Exception hierarchy for talkeval.

Every failure mode raised by the library derives from TalkevalError so
callers can catch the whole family or a specific condition.
"""


class TalkevalError(Exception):
    """Base class for all talkeval errors."""


# --- media ingestion ---

class MissingMeta(TalkevalError):
    """Frame directory has no meta.json."""


class GapInFrameNumbering(TalkevalError):
    """Frame files are not numbered densely from 0."""


class DimensionMismatch(TalkevalError):
    """Two rasters, embedding streams or sequences disagree in shape."""


class UnsupportedFormat(TalkevalError):
    """Audio file is not 16-bit PCM WAV."""


class EmptyAudio(TalkevalError):
    """Audio file contains no samples."""


class MissingFrames(TalkevalError):
    """Landmark/pose CSV does not cover every frame densely."""


class UnknownLayout(TalkevalError):
    """Landmark layout name is not recognised."""


class RaggedRows(TalkevalError):
    """Embedding CSV rows disagree with the header dimensionality."""


class ManifestInvalid(TalkevalError):
    """Manifest fails structural validation (ids, files, JSON shape)."""


# --- audio-visual pipeline ---

class NonIntegerStride(TalkevalError):
    """sample_rate / fps is not an integer; caller must resample."""


class VideoTooShort(TalkevalError):
    """Video is shorter than one snippet window."""


class MissingPose(TalkevalError):
    """Pose series unavailable for a manifest entry."""


# --- metrics ---

class TooSmall(TalkevalError):
    """Raster smaller than the metric's minimum support."""


class LengthMismatch(TalkevalError):
    """Two sequences have different frame counts."""


class NoEdges(TalkevalError):
    """No edge blocks found (e.g. constant image); CPBD undefined."""


class EmptySeries(TalkevalError):
    """Embedding series contains no vectors."""


class EmptyReference(TalkevalError):
    """Reference transcript is empty after normalization."""


class SeriesTooShort(TalkevalError):
    """Embedding series shorter than the requested window/offset."""


class DegenerateEye(TalkevalError):
    """Eye corner landmarks coincide; EAR undefined."""


class SignalTooShort(TalkevalError):
    """EAR signal too short for blink detection."""


class EmptyBatch(TalkevalError):
    """Discriminator score batch is empty."""


class EmptySet(TalkevalError):
    """Video set for heatmap averaging is empty."""


# --- reporting ---

class NoMatchingIds(TalkevalError):
    """Reference manifest shares no ids with the candidate manifest."""


class MissingLandmarks(TalkevalError):
    """Blink evaluation requested but entry has no landmarks."""
