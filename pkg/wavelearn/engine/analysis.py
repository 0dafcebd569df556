"""
分析工具：级联算法、滤波器距离、最近经典小波与稀疏系数信号生成
"""

import logging

import numpy as np
import numpy.typing as npt

from ..core.constants import (
    DEFAULT_CASCADE_ITERATIONS,
    DEFAULT_SAMPLE_DENSITY,
    DEFAULT_ZERO_TOP_SCALES,
    RANKING_DECIMALS,
    SQRT2,
)
from ..core.errors import InvalidArgumentError
from ..models.analysis import FilterAlignment, SampledFunction, WaveletMatch
from ..models.coefficients import Signal, WaveletDecomposition
from ..models.filters import FilterPair, ScalingFilter
from .filterbank import FilterLike, as_coeffs, classical_filter, classical_ids, derive_qmf
from .transform import as_pair, check_depth, idwt, is_power_of_two, unflatten

logger = logging.getLogger(__name__)


def _dilate(taps: npt.NDArray[np.float64], factor: int) -> npt.NDArray[np.float64]:
    """在抽头之间插入 factor-1 个零"""
    out = np.zeros((taps.shape[0] - 1) * factor + 1)
    out[::factor] = taps
    return out


def cascade(
    h: FilterLike, iterations: int = DEFAULT_CASCADE_ITERATIONS
) -> tuple[SampledFunction, SampledFunction]:
    """
    级联算法

    从补零到长度 k 的单位脉冲出发，迭代
        φ⁽ⁱ⁺¹⁾ = √2 · φ⁽ⁱ⁾ ⊛ (h 以 2ⁱ 间隔插零)
    得到网格 2^{-i} 上的 φ 采样；ψ 由最后一步把 h 换成 g 得到。
    每步的 √2 因子累计即为 2^{i/2} 归一化，Σφ·2^{-i} 恒为 1（当 Σh = √2）。

    Args:
        h: 尺度滤波器
        iterations: 迭代次数 i（≥ 1）

    Returns:
        (phi, psi)，长度均为 (k-1)·2^i + 1，支撑从 0 开始
    """
    if iterations < 1:
        raise InvalidArgumentError(f"级联迭代次数必须 ≥ 1，当前 {iterations}")
    coeffs = as_coeffs(h)
    k = coeffs.shape[0]
    g = derive_qmf(coeffs)

    phi = np.zeros(k)
    phi[0] = 1.0
    previous = phi
    for i in range(iterations):
        previous = phi
        phi = SQRT2 * np.convolve(phi, _dilate(coeffs, 2**i))
    psi = SQRT2 * np.convolve(previous, _dilate(g, 2 ** (iterations - 1)))

    delta = float(np.max(np.abs(phi[::2] - previous))) if iterations > 1 else None
    if delta is not None:
        logger.debug(f"级联算法第 {iterations} 次迭代与上一次的最大差: {delta:.3e}")
    grid_step = 2.0**-iterations
    return (
        SampledFunction(phi, grid_step, 0, iterations, delta),
        SampledFunction(psi, grid_step, 0, iterations, None),
    )


def convergence_delta(h: FilterLike, iterations: int) -> float:
    """第 iterations 次与第 iterations-1 次级联结果在粗网格上的最大差"""
    if iterations < 2:
        raise InvalidArgumentError(f"收敛诊断至少需要 2 次迭代，当前 {iterations}")
    phi, _ = cascade(h, iterations)
    return float(phi.convergence_delta)


def align_filters(h1: FilterLike, h2: FilterLike) -> FilterAlignment:
    """
    在所有循环移位下对齐两个滤波器（较短的先尾部补零）

    距离为 min_i 1 - ⟨h₁, shift(h₂, i)⟩ / (‖h₁‖‖h₂‖)，截断到 [0, 2]；
    并列时取最小的移位量。

    Raises:
        InvalidArgumentError: 任一滤波器范数为零
    """
    a = np.asarray(h1.coeffs if isinstance(h1, ScalingFilter) else h1, dtype=np.float64).reshape(-1)
    b = np.asarray(h2.coeffs if isinstance(h2, ScalingFilter) else h2, dtype=np.float64).reshape(-1)
    norm_a, norm_b = float(np.linalg.norm(a)), float(np.linalg.norm(b))
    if norm_a == 0 or norm_b == 0:
        raise InvalidArgumentError("滤波器距离要求两个滤波器均非零")
    k = max(a.shape[0], b.shape[0])
    a = np.pad(a, (0, k - a.shape[0]))
    b = np.pad(b, (0, k - b.shape[0]))
    shifts = np.stack([np.roll(b, i) for i in range(k)])
    cosines = shifts @ a / (norm_a * norm_b)
    best = int(np.argmax(cosines))
    distance = float(np.clip(1.0 - cosines[best], 0.0, 2.0))
    return FilterAlignment(distance=distance, shift=best, reference=a, aligned=shifts[best])


def filter_distance(h1: FilterLike, h2: FilterLike) -> float:
    """循环移位下的最小余弦距离，取值 [0, 2]"""
    return align_filters(h1, h2).distance


def closest_wavelet(h: FilterLike) -> list[WaveletMatch]:
    """
    与全部 24 个经典小波比较，按距离升序排列

    距离在 12 位小数内相同视为并列，并列时按族（Haar, Daubechies, Symlet, Coiflet）
    再按阶数排序。
    """
    coeffs = as_coeffs(h)
    matches = [
        WaveletMatch(wavelet_id, filter_distance(coeffs, classical_filter(wavelet_id)))
        for wavelet_id in classical_ids()
    ]
    matches.sort(key=lambda m: (round(m.distance, RANKING_DECIMALS), *m.sort_key))
    logger.debug(f"最近的经典小波: {matches[0].id}，距离 {matches[0].distance:.6f}")
    return matches


def sample_coefficients(
    length: int,
    levels: int,
    density: float = DEFAULT_SAMPLE_DENSITY,
    zero_top_scales: int = DEFAULT_ZERO_TOP_SCALES,
    seed: int = 0,
) -> WaveletDecomposition:
    """
    稀疏随机系数：每个系数以概率 density 非零，非零值 ~ Uniform[-1, 1]，
    然后把 d₁..d_{zero_top_scales} 置零
    """
    if not 0 < density <= 1:
        raise InvalidArgumentError(f"density 必须位于 (0, 1]，当前 {density}")
    if not is_power_of_two(length):
        raise InvalidArgumentError(f"信号长度必须为 2 的幂，当前 N={length}")
    check_depth(length, levels)
    if not 0 <= zero_top_scales <= levels:
        raise InvalidArgumentError(
            f"zero_top_scales 必须位于 [0, J]，当前 {zero_top_scales}（J={levels}）"
        )
    rng = np.random.default_rng(seed)
    active = rng.random(length) < density
    values = np.where(active, rng.uniform(-1.0, 1.0, length), 0.0)
    decomp = unflatten(values, levels)
    for detail in decomp.details[:zero_top_scales]:
        detail[...] = 0.0
    return decomp


def sample_signal(
    pair: FilterPair | FilterLike,
    length: int,
    levels: int,
    density: float = DEFAULT_SAMPLE_DENSITY,
    zero_top_scales: int = DEFAULT_ZERO_TOP_SCALES,
    seed: int = 0,
) -> Signal:
    """由稀疏随机系数经逆变换生成信号"""
    decomp = sample_coefficients(length, levels, density, zero_top_scales, seed)
    return idwt(decomp, as_pair(pair))
