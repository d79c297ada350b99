"""Pydantic models for structured data across the pipeline."""

from repsense.models.imu_models import (
    CHANNELS,
    SAMPLING_RATE,
    STD_FLOOR,
    AxisScaler,
    Exercise,
    FilterConfig,
    ImuRecording,
    ImuSample,
)
from repsense.models.network_models import ModelConfig
from repsense.models.quality_models import (
    HAS_DEGREES,
    HHAS_DEGREES,
    STABILITY_BINS,
    MetricConfig,
    MetricKind,
    QualityLabel,
    RomClass,
    legal_degrees,
    stability_bin,
)
from repsense.models.segment_models import (
    CutSet,
    EnergySeries,
    Segment,
    SegmentationConfig,
    SimilarityPair,
)
from repsense.models.synth_models import (
    CorpusEntry,
    CorpusManifest,
    SubjectProfile,
    SynthConfig,
    SynthSpec,
)
from repsense.models.train_models import (
    EvalReport,
    Fold,
    FoldReport,
    MetricScores,
    SplitPlan,
    TrainConfig,
)

__all__ = [
    # IMU models
    "CHANNELS",
    "SAMPLING_RATE",
    "STD_FLOOR",
    "AxisScaler",
    "Exercise",
    "FilterConfig",
    "ImuRecording",
    "ImuSample",
    # Quality models
    "HAS_DEGREES",
    "HHAS_DEGREES",
    "STABILITY_BINS",
    "MetricConfig",
    "MetricKind",
    "QualityLabel",
    "RomClass",
    "legal_degrees",
    "stability_bin",
    # Segmentation models
    "CutSet",
    "EnergySeries",
    "Segment",
    "SegmentationConfig",
    "SimilarityPair",
    # Synthetic data models
    "CorpusEntry",
    "CorpusManifest",
    "SubjectProfile",
    "SynthConfig",
    "SynthSpec",
    # Network / training models
    "ModelConfig",
    "EvalReport",
    "Fold",
    "FoldReport",
    "MetricScores",
    "SplitPlan",
    "TrainConfig",
]
