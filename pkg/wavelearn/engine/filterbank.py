"""
滤波器组：QMF 推导、小波约束损失与经典小波滤波器库
"""

import logging
from functools import lru_cache

import numpy as np
import numpy.typing as npt
import pywt

from ..core.constants import SQRT2
from ..core.errors import InvalidArgumentError, UnknownWaveletError
from ..models.filters import (
    FAMILY_ORDERS,
    ClassicalWaveletId,
    ConstraintReport,
    OrthonormalityReport,
    ScalingFilter,
    WaveletFamily,
)

logger = logging.getLogger(__name__)

FilterLike = ScalingFilter | npt.ArrayLike


def as_coeffs(h: FilterLike) -> npt.NDArray[np.float64]:
    """取出滤波器系数数组（接受 ScalingFilter 或任意一维序列）"""
    if isinstance(h, ScalingFilter):
        return h.coeffs
    coeffs = np.asarray(h, dtype=np.float64).reshape(-1)
    if coeffs.shape[0] < 2 or coeffs.shape[0] % 2 != 0:
        raise InvalidArgumentError(
            f"滤波器长度必须为不小于 2 的偶数，当前 k={coeffs.shape[0]}"
        )
    return coeffs


def alternating_signs(k: int) -> npt.NDArray[np.float64]:
    """(-1)^n，n = 0..k-1"""
    signs = np.ones(k)
    signs[1::2] = -1.0
    return signs


def derive_qmf(h: FilterLike) -> npt.NDArray[np.float64]:
    """
    由尺度滤波器推导小波滤波器（交替翻转）：g[n] = (-1)^n · h[k-1-n]

    Args:
        h: 尺度滤波器

    Returns:
        长度为 k 的小波滤波器 g
    """
    coeffs = as_coeffs(h)
    return alternating_signs(coeffs.shape[0]) * coeffs[::-1]


def qmf_adjoint(grad_g: npt.NDArray[np.float64]) -> npt.NDArray[np.float64]:
    """derive_qmf 的转置：把对 g 的梯度映射为对 h 的梯度"""
    k = grad_g.shape[0]
    return (alternating_signs(k) * grad_g)[::-1]


def wavelet_loss(h: FilterLike) -> ConstraintReport:
    """
    小波约束 L_w(h, g) = (‖h‖₂ - 1)² + (μ_h - √2/k)² + μ_g²

    Args:
        h: 尺度滤波器

    Returns:
        各项残差与总和
    """
    coeffs = as_coeffs(h)
    k = coeffs.shape[0]
    g = derive_qmf(coeffs)
    l2_residual = float((np.linalg.norm(coeffs) - 1.0) ** 2)
    mean_h_residual = float((coeffs.mean() - SQRT2 / k) ** 2)
    mean_g_residual = float(g.mean() ** 2)
    return ConstraintReport(
        l2_residual=l2_residual,
        mean_h_residual=mean_h_residual,
        mean_g_residual=mean_g_residual,
        total=l2_residual + mean_h_residual + mean_g_residual,
    )


def classical_ids() -> list[ClassicalWaveletId]:
    """小波库中的全部 24 个经典小波，按族顺序、阶数升序排列"""
    ids = []
    for family in WaveletFamily:
        low, high = FAMILY_ORDERS[family]
        ids.extend(ClassicalWaveletId(family, order) for order in range(low, high + 1))
    return ids


@lru_cache(maxsize=None)
def _load_classical(name: str) -> tuple[float, ...]:
    try:
        rec_lo = pywt.Wavelet(name).rec_lo
    except ValueError as e:
        raise UnknownWaveletError(f"PyWavelets 中不存在小波 {name}: {e}") from e
    return tuple(float(v) for v in rec_lo)


def classical_filter(wavelet_id: ClassicalWaveletId | str) -> ScalingFilter:
    """
    查询经典小波的尺度滤波器（‖h‖₂ = 1，Σh = √2）

    系数取自 PyWavelets 的重构低通滤波器 rec_lo，
    该方向正好对应分解公式中的相关形式。

    Args:
        wavelet_id: 小波标识或名称（如 "db4"）

    Returns:
        ScalingFilter

    Raises:
        UnknownWaveletError: 族或阶数不在小波库中
    """
    if isinstance(wavelet_id, str):
        wavelet_id = ClassicalWaveletId.parse(wavelet_id)
    coeffs = _load_classical(wavelet_id.name)
    return ScalingFilter(np.array(coeffs), name=wavelet_id.name)


def validate_orthonormal(h: FilterLike, tol: float = 1e-8) -> OrthonormalityReport:
    """
    检查滤波器是否正交归一：
    |Σh - √2| ≤ tol，|‖h‖₂ - 1| ≤ tol，且所有偶数非零位移的自相关 ≤ tol

    Args:
        h: 尺度滤波器
        tol: 容差（> 0）

    Returns:
        OrthonormalityReport，可直接作为布尔值使用
    """
    if tol <= 0:
        raise InvalidArgumentError(f"tol 必须为正数，当前 {tol}")
    coeffs = as_coeffs(h)
    k = coeffs.shape[0]
    sum_residual = abs(float(coeffs.sum()) - SQRT2)
    norm_residual = abs(float(np.linalg.norm(coeffs)) - 1.0)
    # full 模式下下标 k-1 对应零位移
    autocorr = np.correlate(coeffs, coeffs, mode="full")
    shift_correlations = {
        m: float(autocorr[k - 1 + 2 * m]) for m in range(1, k // 2)
    }
    max_shift = max((abs(v) for v in shift_correlations.values()), default=0.0)
    passed = sum_residual <= tol and norm_residual <= tol and max_shift <= tol
    if not passed:
        logger.debug(
            f"正交归一检查未通过: |Σh-√2|={sum_residual:.3e}, "
            f"|‖h‖-1|={norm_residual:.3e}, max|自相关|={max_shift:.3e}"
        )
    return OrthonormalityReport(
        passed=passed,
        sum_residual=sum_residual,
        norm_residual=norm_residual,
        max_shift_correlation=max_shift,
        tol=tol,
        shift_correlations=shift_correlations,
    )
