"""
训练：用 Adam 最小化自编码器损失
"""

import logging
import sys
from dataclasses import replace

import numpy as np
import numpy.typing as npt
from tqdm import tqdm

from ..core.constants import RANDOM_WAVELET_MAX_STEPS, RANDOM_WAVELET_TOL
from ..core.errors import InvalidArgumentError
from ..core.initialization import check_training_config
from ..models.filters import ScalingFilter
from ..models.training import AdamState, StepRecord, TrainingConfig, TrainingHistory
from .filterbank import FilterLike, as_coeffs, wavelet_loss
from .grad import BatchLike, constraint_gradient, loss_and_grad
from .transform import as_batch, check_depth

logger = logging.getLogger(__name__)


def init_filter(k: int, seed: int) -> ScalingFilter:
    """
    随机初始化尺度滤波器：标准正态采样后归一化到 ‖h‖₂ = 1

    Raises:
        InvalidArgumentError: k 不是不小于 2 的偶数
    """
    if k < 2 or k % 2 != 0:
        raise InvalidArgumentError(f"滤波器长度必须为不小于 2 的偶数，当前 k={k}")
    rng = np.random.default_rng(seed)
    coeffs = rng.standard_normal(k)
    norm = np.linalg.norm(coeffs)
    while norm == 0:  # 概率为零，仅防止除零
        coeffs = rng.standard_normal(k)
        norm = np.linalg.norm(coeffs)
    return ScalingFilter(coeffs / norm, name="init")


def adam_step(
    h: FilterLike,
    grad: npt.ArrayLike,
    state: AdamState,
    config: TrainingConfig | None = None,
) -> tuple[ScalingFilter, AdamState]:
    """
    带偏差修正的 Adam 更新：h_next = h - lr · m̂ / (√v̂ + ε)

    Args:
        h: 当前滤波器
        grad: 对 h 的梯度
        state: 优化器状态（不会被修改）
        config: 提供学习率与 Adam 超参数，缺省使用默认值

    Returns:
        (h_next, state_next)
    """
    config = config or TrainingConfig()
    coeffs = as_coeffs(h)
    grad = np.asarray(grad, dtype=np.float64)
    if grad.shape != coeffs.shape:
        raise InvalidArgumentError(f"梯度形状 {grad.shape} 与滤波器形状 {coeffs.shape} 不一致")
    beta1, beta2 = config.adam_beta1, config.adam_beta2
    t = state.t + 1
    m = beta1 * state.m + (1.0 - beta1) * grad
    v = beta2 * state.v + (1.0 - beta2) * grad**2
    m_hat = m / (1.0 - beta1**t)
    v_hat = v / (1.0 - beta2**t)
    updated = coeffs - config.learning_rate * m_hat / (np.sqrt(v_hat) + config.adam_eps)
    name = h.name if isinstance(h, ScalingFilter) else "filter"
    return ScalingFilter(updated, name=name), AdamState(m=m, v=v, t=t)


def fit_constraints(
    h: FilterLike,
    config: TrainingConfig | None = None,
    max_steps: int = RANDOM_WAVELET_MAX_STEPS,
    tol: float = RANDOM_WAVELET_TOL,
) -> tuple[ScalingFilter, float, int]:
    """
    只对小波约束 L_w 做 Adam 最小化，直到 L_w < tol 或达到 max_steps

    Returns:
        (滤波器, 最终 L_w, 实际步数)
    """
    config = config or TrainingConfig()
    current = h if isinstance(h, ScalingFilter) else ScalingFilter(as_coeffs(h))
    state = AdamState.zeros(current.k)
    residual = wavelet_loss(current).total
    steps = 0
    while residual >= tol and steps < max_steps:
        current, state = adam_step(current, constraint_gradient(current), state, config)
        residual = wavelet_loss(current).total
        steps += 1
    logger.debug(f"约束拟合结束: k={current.k}, 步数={steps}, L_w={residual:.3e}")
    return current, residual, steps


def _initial_filter(config: TrainingConfig, init: ScalingFilter | None) -> ScalingFilter:
    if init is None:
        return init_filter(config.k, config.seed)
    if init.k > config.k:
        raise InvalidArgumentError(f"初始滤波器长度 {init.k} 超过 k={config.k}")
    if init.k < config.k:
        logger.info(f"初始滤波器 {init.name} 从长度 {init.k} 补零到 {config.k}")
    return init.padded(config.k)


def _window_improvement(totals: list[float], window: int) -> float:
    """最近两个不重叠窗口的平均损失的相对改善"""
    previous = float(np.mean(totals[-2 * window : -window]))
    current = float(np.mean(totals[-window:]))
    if previous == 0.0:
        return 0.0
    return (previous - current) / abs(previous)


def train(
    dataset: BatchLike,
    config: TrainingConfig,
    init: ScalingFilter | None = None,
    progress: bool = False,
) -> TrainingHistory:
    """
    小批量 Adam 训练

    每轮用 (seed, epoch) 派生的生成器打乱数据，最后一个不完整的小批量保留。
    每到一个窗口边界比较最近两个窗口的平均总损失，
    相对改善低于 convergence_tol 即视为收敛。

    Args:
        dataset: M 个长度为 N 的信号
        config: 训练配置
        init: 可选的初始滤波器（短于 k 时尾部补零），缺省为 init_filter(k, seed)
        progress: 是否在 stderr 显示进度条

    Returns:
        TrainingHistory，每步一条记录（记录的是更新前的损失）
    """
    check_training_config(config)
    x = as_batch(dataset)
    count, length = x.shape
    check_depth(length, config.levels)

    h = _initial_filter(config, init)
    initial_h = replace(h, name="init")
    state = AdamState.zeros(config.k)
    logger.info(
        f"开始训练: M={count}, N={length}, k={config.k}, J={config.levels}, "
        f"λ₁={config.lambda1}, λ₂={config.lambda2}, batch={config.batch_size}"
    )

    epoch = 0
    order = np.random.default_rng([config.seed, epoch]).permutation(count)
    position = 0
    records: list[StepRecord] = []
    totals: list[float] = []
    converged = False
    stop_reason = "max_steps"
    window = config.convergence_window

    with tqdm(total=config.max_steps, disable=not progress, file=sys.stderr, desc="train") as bar:
        for step in range(1, config.max_steps + 1):
            indices = order[position : position + config.batch_size]
            position += indices.shape[0]
            if position >= count:
                epoch += 1
                order = np.random.default_rng([config.seed, epoch]).permutation(count)
                position = 0

            result = loss_and_grad(x[indices], h, config.lambda1, config.lambda2, config.levels)
            records.append(StepRecord.from_parts(step, result.parts))
            totals.append(result.loss)
            h, state = adam_step(h, result.grad_h, state, config)
            bar.update(1)

            if step % window == 0 and step >= 2 * window:
                improvement = _window_improvement(totals, window)
                logger.debug(f"步 {step}: 窗口平均损失相对改善 {improvement:.3e}")
                if improvement < config.convergence_tol:
                    converged = True
                    stop_reason = "converged"
                    break

    final_h = replace(h, name="learned")
    logger.info(
        f"训练结束（{stop_reason}）: 步数={len(records)}, "
        f"最终损失={records[-1].total:.6g}, L_w={wavelet_loss(final_h).total:.3e}"
    )
    return TrainingHistory(
        records=records,
        final_h=final_h,
        converged=converged,
        stop_reason=stop_reason,
        initial_h=initial_h,
    )
