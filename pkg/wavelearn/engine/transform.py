"""
离散小波变换（展开网络形式），周期边界

分解（相关形式、步长 2）:
    a_next[p] = Σ_m h[m] · a[(m + 2p) mod n]
    d_next[p] = Σ_m g[m] · a[(m + 2p) mod n]
重构为其转置：上采样后做循环卷积。
"""

import logging
from collections.abc import Sequence

import numpy as np
import numpy.typing as npt

from ..core.errors import InvalidArgumentError, InvalidLengthError
from ..models.coefficients import (
    FlatCoefficients,
    LevelSlice,
    Signal,
    WaveletDecomposition,
)
from ..models.filters import FilterPair, ScalingFilter

logger = logging.getLogger(__name__)

# 已经提示过的 (层长度, k) 组合，避免训练循环中刷屏
_warned_short_levels: set[tuple[int, int]] = set()


def as_pair(pair: FilterPair | ScalingFilter | npt.ArrayLike) -> FilterPair:
    """接受 FilterPair、ScalingFilter 或一维系数序列"""
    if isinstance(pair, FilterPair):
        return pair
    if isinstance(pair, ScalingFilter):
        return FilterPair(pair)
    coeffs = np.asarray(pair, dtype=np.float64)
    if coeffs.ndim != 1:
        raise InvalidArgumentError(f"滤波器系数必须是一维序列，当前形状 {coeffs.shape}")
    return FilterPair(ScalingFilter(coeffs))


def is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


def as_signal(x: npt.ArrayLike) -> Signal:
    """校验并转换单个信号：一维、有限、长度为 2 的幂"""
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim != 1:
        raise InvalidArgumentError(f"信号必须是一维序列，当前维度 {arr.ndim}")
    if not is_power_of_two(arr.shape[0]):
        raise InvalidArgumentError(f"信号长度必须为 2 的幂，当前 N={arr.shape[0]}")
    if not np.all(np.isfinite(arr)):
        raise InvalidArgumentError("信号包含非有限值")
    return arr


def as_batch(batch: Sequence[npt.ArrayLike] | npt.NDArray) -> npt.NDArray[np.float64]:
    """把信号列表整理为 (M, N) 数组，要求非空且长度一致"""
    if isinstance(batch, np.ndarray) and batch.ndim == 2:
        if batch.shape[0] == 0:
            raise InvalidArgumentError("批次不能为空")
        return _check_batch(batch.astype(np.float64, copy=False))
    if len(batch) == 0:
        raise InvalidArgumentError("批次不能为空")
    lengths = {np.shape(x)[-1] if np.ndim(x) else 0 for x in batch}
    if len(lengths) != 1:
        raise InvalidArgumentError(f"批次中信号长度不一致: {sorted(lengths)}")
    return _check_batch(np.stack([np.asarray(x, dtype=np.float64) for x in batch]))


def _check_batch(arr: npt.NDArray[np.float64]) -> npt.NDArray[np.float64]:
    if arr.ndim != 2:
        raise InvalidArgumentError(f"批次必须是 (M, N) 形状，当前 {arr.shape}")
    if not is_power_of_two(arr.shape[1]):
        raise InvalidArgumentError(f"信号长度必须为 2 的幂，当前 N={arr.shape[1]}")
    if not np.all(np.isfinite(arr)):
        raise InvalidArgumentError("批次中存在非有限值")
    return arr


def strided_correlate(a: npt.NDArray[np.float64], taps: npt.NDArray[np.float64]) -> npt.NDArray[np.float64]:
    """
    步长 2 的循环相关：out[p] = Σ_m taps[m] · a[(m + 2p) mod n]

    按抽头下标升序累加，结果与批次划分无关。
    """
    n = a.shape[-1]
    half = n // 2
    base = 2 * np.arange(half)
    out = np.zeros(a.shape[:-1] + (half,))
    for m, tap in enumerate(taps):
        out += tap * a[..., (base + m) % n]
    return out


def upsampled_convolve(c: npt.NDArray[np.float64], taps: npt.NDArray[np.float64]) -> npt.NDArray[np.float64]:
    """strided_correlate 的转置：out[(m + 2p) mod n] += taps[m] · c[p]，n = 2·len(c)"""
    half = c.shape[-1]
    n = 2 * half
    base = 2 * np.arange(half)
    out = np.zeros(c.shape[:-1] + (n,))
    for m, tap in enumerate(taps):
        # 固定 m 时下标互不相同，可以直接花式索引累加
        out[..., (base + m) % n] += tap * c
    return out


def warn_short_level(n: int, k: int) -> None:
    """层长度小于 k 时提示一次（按 (n, k) 去重）"""
    if n < k and (n, k) not in _warned_short_levels:
        _warned_short_levels.add((n, k))
        logger.warning(
            f"当前层长度 {n} 小于滤波器长度 {k}，循环边界将主导该层系数"
        )


def dwt_step(
    a: npt.ArrayLike, pair: FilterPair | ScalingFilter
) -> tuple[npt.NDArray[np.float64], npt.NDArray[np.float64]]:
    """
    单层分解

    Args:
        a: 上一层近似系数（最后一维长度 n 为偶数，前面的维度视为批次）
        pair: 滤波器对

    Returns:
        (a_next, d_next)，长度均为 n/2

    Raises:
        InvalidLengthError: n 为奇数或小于 2
    """
    pair = as_pair(pair)
    arr = np.asarray(a, dtype=np.float64)
    n = arr.shape[-1] if arr.ndim else 0
    if n < 2 or n % 2 != 0:
        raise InvalidLengthError(f"单层分解要求输入长度为不小于 2 的偶数，当前 n={n}")
    return strided_correlate(arr, pair.h.coeffs), strided_correlate(arr, pair.g)


def idwt_step(
    a_next: npt.ArrayLike, d_next: npt.ArrayLike, pair: FilterPair | ScalingFilter
) -> npt.NDArray[np.float64]:
    """
    单层重构（dwt_step 线性映射的转置）

    Args:
        a_next: 近似系数，长度 m
        d_next: 细节系数，长度 m

    Returns:
        长度 2m 的上一层近似系数
    """
    pair = as_pair(pair)
    approx = np.asarray(a_next, dtype=np.float64)
    detail = np.asarray(d_next, dtype=np.float64)
    if approx.shape != detail.shape:
        raise InvalidArgumentError(
            f"近似系数与细节系数形状不一致: {approx.shape} vs {detail.shape}"
        )
    if approx.ndim == 0 or approx.shape[-1] < 1:
        raise InvalidArgumentError("重构输入长度必须至少为 1")
    return upsampled_convolve(approx, pair.h.coeffs) + upsampled_convolve(detail, pair.g)


def check_depth(n: int, levels: int) -> None:
    """检查长度 n 的信号能否做 levels 层分解"""
    if not isinstance(levels, (int, np.integer)) or levels < 1:
        raise InvalidArgumentError(f"分解层数 J 必须为正整数，当前 {levels}")
    if n < 2**levels or n % (2**levels) != 0:
        raise InvalidArgumentError(f"信号长度 N={n} 无法进行 J={levels} 层分解（需被 2^J 整除）")


def dwt(x: npt.ArrayLike, pair: FilterPair | ScalingFilter | npt.ArrayLike, levels: int) -> WaveletDecomposition:
    """
    J 层离散小波变换，a₀ 初始化为信号本身

    Args:
        x: 信号 (N,) 或批次 (M, N)
        pair: 滤波器对
        levels: 分解层数 J

    Returns:
        WaveletDecomposition
    """
    pair = as_pair(pair)
    approx = np.asarray(x, dtype=np.float64)
    approx = as_signal(approx) if approx.ndim == 1 else _check_batch(approx)
    check_depth(approx.shape[-1], levels)
    details = []
    for _ in range(levels):
        warn_short_level(approx.shape[-1], pair.k)
        approx, detail = dwt_step(approx, pair)
        details.append(detail)
    return WaveletDecomposition(details=details, approx=approx)


def idwt(decomp: WaveletDecomposition, pair: FilterPair | ScalingFilter | npt.ArrayLike) -> Signal:
    """
    逆变换：从第 J 层逐层重构到第 1 层

    对正交归一滤波器，idwt(dwt(x)) = x（数值精度内）。
    """
    pair = as_pair(pair)
    approx = decomp.approx
    for detail in reversed(decomp.details):
        approx = idwt_step(approx, detail, pair)
    return approx


def band_layout(n: int, levels: int) -> list[LevelSlice]:
    """长度 N、J 层分解的扁平布局：d₁, ..., d_J, a_J"""
    check_depth(n, levels)
    layout = []
    offset = 0
    for j in range(1, levels + 1):
        length = n >> j
        layout.append(LevelSlice(f"d{j}", offset, length))
        offset += length
    layout.append(LevelSlice(f"a{levels}", offset, n >> levels))
    return layout


def flatten(decomp: WaveletDecomposition) -> FlatCoefficients:
    """拼接为 W(x)"""
    values = np.concatenate(decomp.bands, axis=-1)
    return FlatCoefficients(values=values, layout=band_layout(decomp.signal_length, decomp.levels))


def unflatten(flat: FlatCoefficients | npt.ArrayLike, levels: int) -> WaveletDecomposition:
    """flatten 的逆映射"""
    if isinstance(flat, FlatCoefficients):
        if flat.levels != levels:
            raise InvalidArgumentError(f"布局层数 {flat.levels} 与请求的 J={levels} 不一致")
        values = flat.values
    else:
        values = np.asarray(flat, dtype=np.float64)
    n = values.shape[-1]
    layout = band_layout(n, levels)
    if isinstance(flat, FlatCoefficients) and flat.layout != layout:
        raise InvalidArgumentError("扁平系数的布局与长度不匹配")
    bands = [values[..., item.offset : item.stop].copy() for item in layout]
    return WaveletDecomposition(details=bands[:-1], approx=bands[-1])


def level_energies(decomp: WaveletDecomposition) -> dict[str, float]:
    """各频带能量 Σ c²（批次求和）"""
    layout = band_layout(decomp.signal_length, decomp.levels)
    return {
        item.level_id: float(np.sum(band**2))
        for item, band in zip(layout, decomp.bands, strict=True)
    }
