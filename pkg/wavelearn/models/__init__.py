"""
wavelearn 数据模型
"""

from .analysis import FilterAlignment, SampledFunction, WaveletMatch
from .coefficients import FlatCoefficients, LevelSlice, Signal, WaveletDecomposition
from .datagen import BaseWave, SynthConfig
from .filters import (
    ClassicalWaveletId,
    ConstraintReport,
    FilterPair,
    OrthonormalityReport,
    ScalingFilter,
    WaveletFamily,
)
from .run import RunManifest
from .training import (
    AdamState,
    FdReport,
    GradResult,
    LossParts,
    StepRecord,
    TrainingConfig,
    TrainingHistory,
)

__all__ = [
    "ScalingFilter",
    "FilterPair",
    "ConstraintReport",
    "OrthonormalityReport",
    "ClassicalWaveletId",
    "WaveletFamily",
    "WaveletDecomposition",
    "FlatCoefficients",
    "LevelSlice",
    "Signal",
    "TrainingConfig",
    "AdamState",
    "LossParts",
    "GradResult",
    "FdReport",
    "StepRecord",
    "TrainingHistory",
    "SynthConfig",
    "BaseWave",
    "SampledFunction",
    "WaveletMatch",
    "FilterAlignment",
    "RunManifest",
]
