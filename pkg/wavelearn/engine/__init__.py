"""
wavelearn 计算引擎
"""

from .analysis import (
    align_filters,
    cascade,
    closest_wavelet,
    convergence_delta,
    filter_distance,
    sample_coefficients,
    sample_signal,
)
from .datagen import (
    base_wave,
    load_wav_segments,
    make_dataset,
    random_wavelet,
    synth_harmonic,
    synth_windowed,
)
from .filterbank import (
    classical_filter,
    classical_ids,
    derive_qmf,
    validate_orthonormal,
    wavelet_loss,
)
from .grad import constraint_gradient, evaluate_loss, fd_check, loss_and_grad
from .training import adam_step, fit_constraints, init_filter, train
from .transform import dwt, dwt_step, flatten, idwt, idwt_step, level_energies, unflatten

__all__ = [
    "derive_qmf",
    "wavelet_loss",
    "classical_filter",
    "classical_ids",
    "validate_orthonormal",
    "dwt_step",
    "idwt_step",
    "dwt",
    "idwt",
    "flatten",
    "unflatten",
    "level_energies",
    "loss_and_grad",
    "evaluate_loss",
    "constraint_gradient",
    "fd_check",
    "init_filter",
    "adam_step",
    "fit_constraints",
    "train",
    "base_wave",
    "synth_harmonic",
    "synth_windowed",
    "make_dataset",
    "load_wav_segments",
    "random_wavelet",
    "cascade",
    "convergence_delta",
    "filter_distance",
    "align_filters",
    "closest_wavelet",
    "sample_coefficients",
    "sample_signal",
]
