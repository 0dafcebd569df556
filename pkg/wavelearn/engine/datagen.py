"""
数据生成：合成谐波信号、高斯窗谐波信号、WAV 片段切分与随机约束小波
"""

import logging
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np
import numpy.typing as npt
from numpy.lib.stride_tricks import sliding_window_view
from scipy import signal as sps
from tqdm import tqdm

from ..core.constants import RANDOM_WAVELET_MAX_STEPS, RANDOM_WAVELET_TOL
from ..core.errors import ConvergenceError, InvalidArgumentError
from ..core.file_io import read_wav
from ..core.initialization import check_synth_config
from ..models.coefficients import Signal
from ..models.datagen import BaseWave, SynthConfig
from ..models.filters import ScalingFilter
from ..models.training import TrainingConfig
from .training import fit_constraints, init_filter
from .transform import is_power_of_two

logger = logging.getLogger(__name__)


def base_wave(kind: BaseWave | str, t: npt.ArrayLike) -> npt.NDArray[np.float64] | float:
    """
    周期为 2π 的基波

    - sine: sin t
    - square: sin t ≥ 0 时为 1，否则为 -1
    - sawtooth: 每个周期内从 -1 线性上升到 1
    """
    kind = BaseWave(kind)
    phase = np.asarray(t, dtype=np.float64)
    if kind is BaseWave.SINE:
        values = np.sin(phase)
    elif kind is BaseWave.SQUARE:
        values = np.where(np.sin(phase) >= 0, 1.0, -1.0)
    else:
        values = sps.sawtooth(phase)
    return float(values) if values.ndim == 0 else values


def _sample_phase(config: SynthConfig) -> npt.NDArray[np.float64]:
    """θₙ = 2π · cycles · n / N"""
    return 2.0 * np.pi * config.cycles * np.arange(config.length) / config.length


def _bound_amplitude(x: npt.NDArray[np.float64]) -> Signal:
    return x / max(1.0, float(np.max(np.abs(x))))


def harmonic_components(
    config: SynthConfig, index: int
) -> tuple[npt.NDArray[np.float64], npt.NDArray[np.float64], np.random.Generator]:
    """
    抽取第 index 个信号的谐波指示 aₖ 与相位 φₖ

    Returns:
        (amplitudes, phases, rng)，rng 已消耗上述抽样，可继续用于窗口抽样
    """
    rng = np.random.default_rng([config.seed, index])
    phases = rng.uniform(0.0, 2.0 * np.pi, config.harmonics)
    amplitudes = (rng.random(config.harmonics) < config.harmonic_prob).astype(np.float64)
    return amplitudes, phases, rng


def gaussian_envelope(length: int, centers: npt.ArrayLike, std: float) -> npt.NDArray[np.float64]:
    """Σ_c exp(-(n - c)² / (2·std²))，不做循环延拓"""
    n = np.arange(length, dtype=np.float64)
    centers = np.atleast_1d(np.asarray(centers, dtype=np.float64))
    return np.exp(-((n[None, :] - centers[:, None]) ** 2) / (2.0 * std**2)).sum(axis=0)


def render_harmonic(
    config: SynthConfig,
    amplitudes: npt.ArrayLike,
    phases: npt.ArrayLike,
    envelopes: list[npt.NDArray[np.float64] | None] | None = None,
) -> Signal:
    """
    按给定的 aₖ、φₖ（以及可选的每尺度包络）合成信号并限制幅度

        x[n] = Σₖ aₖ · envₖ[n] · s(2ᵏ θₙ + φₖ)
    """
    amplitudes = np.asarray(amplitudes, dtype=np.float64)
    phases = np.asarray(phases, dtype=np.float64)
    theta = _sample_phase(config)
    x = np.zeros(config.length)
    for k, (amplitude, phase) in enumerate(zip(amplitudes, phases, strict=True)):
        if amplitude == 0:
            continue
        component = amplitude * base_wave(config.base, 2.0**k * theta + phase)
        if envelopes is not None and envelopes[k] is not None:
            component = component * envelopes[k]
        x += component
    return _bound_amplitude(x)


def synth_harmonic(config: SynthConfig, index: int) -> Signal:
    """第 index 个谐波信号，由 (seed, index) 唯一确定"""
    amplitudes, phases, _ = harmonic_components(config, index)
    return render_harmonic(config, amplitudes, phases)


def synth_windowed(config: SynthConfig, index: int) -> Signal:
    """
    第 index 个高斯窗谐波信号

    谐波指示与相位的抽样和 synth_harmonic 相同；每个出现的尺度再抽取
    window_count_range 内的窗口个数以及 [0, N) 内均匀分布的窗口中心。
    """
    amplitudes, phases, rng = harmonic_components(config, index)
    low, high = config.window_count_range
    std = config.window_std_fraction * config.length
    envelopes: list[npt.NDArray[np.float64] | None] = []
    for amplitude in amplitudes:
        if amplitude == 0:
            envelopes.append(None)
            continue
        count = int(rng.integers(low, high + 1))
        centers = rng.uniform(0.0, config.length, count)
        envelopes.append(gaussian_envelope(config.length, centers, std))
    return render_harmonic(config, amplitudes, phases, envelopes)


def make_dataset(config: SynthConfig, progress: bool = False) -> list[Signal]:
    """按配置生成 M 个信号"""
    check_synth_config(config)
    generate = synth_windowed if config.windowed else synth_harmonic
    logger.info(
        f"生成数据集: base={config.base.value}, M={config.count}, N={config.length}, "
        f"K={config.harmonics}, p={config.harmonic_prob}, windowed={config.windowed}"
    )
    indices = tqdm(range(config.count), disable=not progress, file=sys.stderr, desc="synth")
    return [generate(config, index) for index in indices]


def load_wav_segments(path: str | Path, length: int, hop: int) -> list[Signal]:
    """
    读取 16 位 PCM WAV（单声道或立体声）并切分为长度 N 的片段

    立体声按声道取平均；样本除以 32768 归一化到 [-1, 1]；丢弃末尾不足 N 的部分。

    Raises:
        InvalidArgumentError: N 不是 2 的幂或 hop < 1
        FileFormatError: 文件无法读取或不是 16 位 PCM
    """
    if not is_power_of_two(length):
        raise InvalidArgumentError(f"片段长度必须为 2 的幂，当前 N={length}")
    if hop < 1:
        raise InvalidArgumentError(f"hop 必须 ≥ 1，当前 {hop}")
    rate, samples = read_wav(path)
    if samples.shape[0] < length:
        logger.warning(f"{path} 只有 {samples.shape[0]} 个样本，不足一个长度 {length} 的片段")
        return []
    windows = sliding_window_view(samples, length)[::hop]
    logger.info(f"{path}: 采样率 {rate} Hz，切分出 {windows.shape[0]} 个片段（N={length}, hop={hop}）")
    return [window.copy() for window in windows]


def random_wavelet(
    k: int,
    seed: int,
    config: TrainingConfig | None = None,
    max_steps: int = RANDOM_WAVELET_MAX_STEPS,
    tol: float = RANDOM_WAVELET_TOL,
) -> ScalingFilter:
    """
    随机约束小波：从 init_filter(k, seed) 出发，只对 L_w 做 Adam 最小化

    Raises:
        InvalidArgumentError: k 不是偶数
        ConvergenceError: max_steps 步内 L_w 仍未低于 tol
    """
    start = init_filter(k, seed)
    h, residual, steps = fit_constraints(start, config, max_steps=max_steps, tol=tol)
    if residual >= tol:
        logger.warning(f"随机小波 k={k}, seed={seed} 未收敛: L_w={residual:.3e}")
        raise ConvergenceError(f"随机小波 k={k}, seed={seed} 未达到容差 {tol:g}", residual, steps)
    return replace(h, name=f"random_k{k}_s{seed}")
