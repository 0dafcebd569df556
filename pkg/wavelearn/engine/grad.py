"""
自编码器损失及其对尺度滤波器 h 的反向模式梯度

    L = (1/M) Σ ‖xᵢ - x̂ᵢ‖² + λ₁ (1/M) Σ ‖W(xᵢ)‖₁ + λ₂ L_w(h, g)

x̂ = idwt(dwt(x))，分解与重构共用同一个 h（权重共享），
因此梯度同时累加两条路径上的贡献，最后经 QMF 的转置把 g 的梯度并入 h。
"""

import logging
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from ..core.constants import DEFAULT_FD_STEP, FD_RELATIVE_FLOOR, SQRT2
from ..core.errors import InvalidArgumentError
from ..models.filters import FilterPair, ScalingFilter
from ..models.training import FdReport, GradResult, LossParts
from .filterbank import FilterLike, as_coeffs, derive_qmf, qmf_adjoint, wavelet_loss
from .transform import (
    as_batch,
    check_depth,
    idwt_step,
    strided_correlate,
    upsampled_convolve,
    warn_short_level,
)

logger = logging.getLogger(__name__)

BatchLike = Sequence[npt.ArrayLike] | npt.NDArray


@dataclass
class _ForwardPass:
    """前向计算中反向传播需要保存的中间量"""

    level_inputs: list[npt.NDArray[np.float64]]  # a₀..a_{J-1}
    details: list[npt.NDArray[np.float64]]  # d₁..d_J
    approx: npt.NDArray[np.float64]  # a_J
    synth_inputs: list[npt.NDArray[np.float64]]  # r₁..r_J，r_J = a_J
    reconstruction: npt.NDArray[np.float64]  # x̂ = r₀


def _to_filter(h: FilterLike) -> ScalingFilter:
    return h if isinstance(h, ScalingFilter) else ScalingFilter(as_coeffs(h))


def _check_weights(lambda1: float, lambda2: float) -> None:
    if lambda1 < 0 or lambda2 < 0:
        raise InvalidArgumentError(f"λ₁、λ₂ 不能为负（当前 {lambda1}, {lambda2}）")


def _forward(x: npt.NDArray[np.float64], pair: FilterPair, levels: int) -> _ForwardPass:
    check_depth(x.shape[-1], levels)
    h, g = pair.h.coeffs, pair.g
    level_inputs, details = [], []
    approx = x
    for _ in range(levels):
        warn_short_level(approx.shape[-1], pair.k)
        level_inputs.append(approx)
        detail = strided_correlate(approx, g)
        approx = strided_correlate(approx, h)
        details.append(detail)

    synth_inputs = [approx]
    recon = approx
    for detail in reversed(details):
        recon = idwt_step(recon, detail, pair)
        synth_inputs.append(recon)
    # synth_inputs 目前为 r_J, r_{J-1}, ..., r₀
    synth_inputs.reverse()
    return _ForwardPass(
        level_inputs=level_inputs,
        details=details,
        approx=approx,
        synth_inputs=synth_inputs[1:],
        reconstruction=synth_inputs[0],
    )


def _loss_parts(
    x: npt.NDArray[np.float64],
    fwd: _ForwardPass,
    h: ScalingFilter,
    lambda1: float,
    lambda2: float,
) -> LossParts:
    m = x.shape[0]
    l1 = sum(float(np.abs(d).sum()) for d in fwd.details) + float(np.abs(fwd.approx).sum())
    return LossParts(
        reconstruction=float(np.sum((x - fwd.reconstruction) ** 2)) / m,
        sparsity=lambda1 * l1 / m,
        constraint=lambda2 * wavelet_loss(h).total,
    )


def _tap_gradient(
    full: npt.NDArray[np.float64], half: npt.NDArray[np.float64], k: int
) -> npt.NDArray[np.float64]:
    """
    步长 2 循环相关对抽头的导数：out[m] = Σ_{批次, p} full[(m + 2p) mod n] · half[p]

    分解时 full 为层输入、half 为上游梯度；重构时 full 为上游梯度、half 为层输入。
    """
    n = full.shape[-1]
    base = 2 * np.arange(n // 2)
    return np.array([np.sum(full[..., (base + m) % n] * half) for m in range(k)])


def constraint_gradient(h: FilterLike) -> npt.NDArray[np.float64]:
    """
    L_w 对 h 的梯度

    ‖h‖₂ = 0 时范数项的梯度取 0。
    """
    coeffs = as_coeffs(h)
    k = coeffs.shape[0]
    norm = float(np.linalg.norm(coeffs))
    grad = np.zeros(k)
    if norm > 0:
        grad += 2.0 * (norm - 1.0) * coeffs / norm
    grad += 2.0 * (coeffs.mean() - SQRT2 / k) / k
    mean_g = derive_qmf(coeffs).mean()
    grad += 2.0 * mean_g * qmf_adjoint(np.full(k, 1.0 / k))
    return grad


def evaluate_loss(
    batch: BatchLike, h: FilterLike, lambda1: float, lambda2: float, levels: int
) -> LossParts:
    """只做前向计算，返回加权后的损失分解"""
    _check_weights(lambda1, lambda2)
    x = as_batch(batch)
    h = _to_filter(h)
    fwd = _forward(x, FilterPair(h), levels)
    return _loss_parts(x, fwd, h, lambda1, lambda2)


def loss_and_grad(
    batch: BatchLike, h: FilterLike, lambda1: float, lambda2: float, levels: int
) -> GradResult:
    """
    计算损失与对 h 的精确梯度

    Args:
        batch: M 个长度为 N 的信号
        h: 尺度滤波器
        lambda1: 稀疏项权重 λ₁
        lambda2: 约束项权重 λ₂
        levels: 分解层数 J

    Returns:
        GradResult（parts 中各项已乘权重，之和等于 loss）

    Raises:
        InvalidArgumentError: 空批次、长度不一致、权重为负或层数过深
    """
    _check_weights(lambda1, lambda2)
    x = as_batch(batch)
    h = _to_filter(h)
    pair = FilterPair(h)
    k = h.k
    h_taps, g_taps = h.coeffs, pair.g
    m = x.shape[0]

    fwd = _forward(x, pair, levels)
    parts = _loss_parts(x, fwd, h, lambda1, lambda2)

    grad_h = np.zeros(k)
    grad_g = np.zeros(k)

    # 重构路径：r_{j-1} = U_h(r_j) + U_g(d_j)，从 r₀ 向上传播
    upstream = 2.0 / m * (fwd.reconstruction - x)
    detail_grads = []
    for j in range(levels):
        grad_h += _tap_gradient(upstream, fwd.synth_inputs[j], k)
        grad_g += _tap_gradient(upstream, fwd.details[j], k)
        detail_grads.append(strided_correlate(upstream, g_taps))
        upstream = strided_correlate(upstream, h_taps)

    # 稀疏项，|·| 在 0 处的次梯度取 0
    scale = lambda1 / m
    approx_grad = upstream + scale * np.sign(fwd.approx)
    detail_grads = [dg + scale * np.sign(d) for dg, d in zip(detail_grads, fwd.details, strict=True)]

    # 分解路径：(a_j, d_j) = S(a_{j-1})，从第 J 层向下传播
    for j in reversed(range(levels)):
        level_input = fwd.level_inputs[j]
        grad_h += _tap_gradient(level_input, approx_grad, k)
        grad_g += _tap_gradient(level_input, detail_grads[j], k)
        if j > 0:
            approx_grad = upsampled_convolve(approx_grad, h_taps) + upsampled_convolve(
                detail_grads[j], g_taps
            )

    grad_h += qmf_adjoint(grad_g)
    grad_h += lambda2 * constraint_gradient(h)
    return GradResult(loss=parts.total, grad_h=grad_h, parts=parts)


def fd_check(
    batch: BatchLike,
    h: FilterLike,
    lambda1: float,
    lambda2: float,
    levels: int,
    step: float = DEFAULT_FD_STEP,
) -> FdReport:
    """
    用中心差分校验解析梯度

    numeric[i] = (L(h + step·eᵢ) - L(h - step·eᵢ)) / (2·step)
    相对误差 |aᵢ - nᵢ| / max(1e-8, |aᵢ| + |nᵢ|)
    """
    if not step > 0:
        raise InvalidArgumentError(f"差分步长必须为正数，当前 {step}")
    x = as_batch(batch)
    coeffs = as_coeffs(h)
    analytic = loss_and_grad(x, coeffs, lambda1, lambda2, levels).grad_h
    numeric = np.zeros_like(analytic)
    for i in range(coeffs.shape[0]):
        bump = np.zeros_like(coeffs)
        bump[i] = step
        upper = evaluate_loss(x, coeffs + bump, lambda1, lambda2, levels).total
        lower = evaluate_loss(x, coeffs - bump, lambda1, lambda2, levels).total
        numeric[i] = (upper - lower) / (2.0 * step)
    denom = np.maximum(FD_RELATIVE_FLOOR, np.abs(analytic) + np.abs(numeric))
    max_rel_error = float(np.max(np.abs(analytic - numeric) / denom))
    logger.debug(f"梯度校验: max_rel_error={max_rel_error:.3e}")
    return FdReport(analytic=analytic, numeric=numeric, max_rel_error=max_rel_error)
