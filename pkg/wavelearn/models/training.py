"""
训练相关数据模型
"""

from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from ..core.constants import (
    DEFAULT_ADAM_BETA1,
    DEFAULT_ADAM_BETA2,
    DEFAULT_ADAM_EPS,
    DEFAULT_BATCH_SIZE,
    DEFAULT_CONVERGENCE_TOL,
    DEFAULT_CONVERGENCE_WINDOW,
    DEFAULT_FILTER_LENGTH,
    DEFAULT_LAMBDA1,
    DEFAULT_LAMBDA2,
    DEFAULT_LEARNING_RATE,
    DEFAULT_LEVELS,
    DEFAULT_MAX_STEPS,
    DEFAULT_SEED,
)
from .config_base import DictConfigMixin
from .filters import ScalingFilter


@dataclass(frozen=True)
class TrainingConfig(DictConfigMixin):
    """
    训练超参数

    Attributes:
        k: 滤波器长度（偶数）
        levels: 分解层数 J
        lambda1: 稀疏项权重 λ₁
        lambda2: 小波约束项权重 λ₂
        batch_size: 小批量大小
        learning_rate: Adam 学习率
        adam_beta1 / adam_beta2 / adam_eps: Adam 超参数
        max_steps: 最大步数
        convergence_tol: 滑动窗口平均损失的相对改善阈值
        convergence_window: 滑动窗口长度（步）
        seed: 随机种子（初始化与每轮打乱）
    """

    k: int = DEFAULT_FILTER_LENGTH
    levels: int = DEFAULT_LEVELS
    lambda1: float = DEFAULT_LAMBDA1
    lambda2: float = DEFAULT_LAMBDA2
    batch_size: int = DEFAULT_BATCH_SIZE
    learning_rate: float = DEFAULT_LEARNING_RATE
    adam_beta1: float = DEFAULT_ADAM_BETA1
    adam_beta2: float = DEFAULT_ADAM_BETA2
    adam_eps: float = DEFAULT_ADAM_EPS
    max_steps: int = DEFAULT_MAX_STEPS
    convergence_tol: float = DEFAULT_CONVERGENCE_TOL
    convergence_window: int = DEFAULT_CONVERGENCE_WINDOW
    seed: int = DEFAULT_SEED

    def problems(self) -> list[str]:
        """返回所有不满足约束的配置项说明，空列表表示合法"""
        issues = []
        if self.k < 2 or self.k % 2 != 0:
            issues.append(f"k 必须为不小于 2 的偶数（当前 {self.k}）")
        if self.levels < 1:
            issues.append(f"levels 必须 ≥ 1（当前 {self.levels}）")
        if self.lambda1 < 0 or self.lambda2 < 0:
            issues.append(f"lambda1/lambda2 不能为负（当前 {self.lambda1}, {self.lambda2}）")
        if self.batch_size < 1:
            issues.append(f"batch_size 必须 ≥ 1（当前 {self.batch_size}）")
        if self.max_steps < 1:
            issues.append(f"max_steps 必须 ≥ 1（当前 {self.max_steps}）")
        if self.convergence_window < 1:
            issues.append(f"convergence_window 必须 ≥ 1（当前 {self.convergence_window}）")
        for name in ("learning_rate", "adam_eps", "convergence_tol"):
            if not getattr(self, name) > 0:
                issues.append(f"{name} 必须为正数（当前 {getattr(self, name)}）")
        for name in ("adam_beta1", "adam_beta2"):
            if not 0 <= getattr(self, name) < 1:
                issues.append(f"{name} 必须位于 [0, 1)（当前 {getattr(self, name)}）")
        return issues


@dataclass(frozen=True, eq=False)
class AdamState:
    """Adam 优化器状态：一阶矩 m、二阶矩 v 与已执行步数 t"""

    m: npt.NDArray[np.float64]
    v: npt.NDArray[np.float64]
    t: int = 0

    @classmethod
    def zeros(cls, k: int) -> "AdamState":
        return cls(m=np.zeros(k), v=np.zeros(k), t=0)


@dataclass(frozen=True)
class LossParts:
    """损失分解，各项已乘以对应权重"""

    reconstruction: float
    sparsity: float
    constraint: float

    @property
    def total(self) -> float:
        return self.reconstruction + self.sparsity + self.constraint


@dataclass(frozen=True, eq=False)
class GradResult:
    """损失值与对 h 的梯度"""

    loss: float
    grad_h: npt.NDArray[np.float64]
    parts: LossParts


@dataclass(frozen=True, eq=False)
class FdReport:
    """解析梯度与中心差分梯度的对比"""

    analytic: npt.NDArray[np.float64]
    numeric: npt.NDArray[np.float64]
    max_rel_error: float


@dataclass(frozen=True)
class StepRecord:
    """单步训练记录（history.csv 的一行）"""

    step: int
    total: float
    reconstruction: float
    sparsity: float
    constraint: float

    CSV_HEADER = ("step", "total", "recon", "sparsity", "constraint")

    def to_row(self) -> list:
        return [self.step, self.total, self.reconstruction, self.sparsity, self.constraint]

    @classmethod
    def from_parts(cls, step: int, parts: LossParts) -> "StepRecord":
        return cls(
            step=step,
            total=parts.total,
            reconstruction=parts.reconstruction,
            sparsity=parts.sparsity,
            constraint=parts.constraint,
        )


@dataclass
class TrainingHistory:
    """训练过程记录"""

    records: list[StepRecord]
    final_h: ScalingFilter
    converged: bool = False
    stop_reason: str = ""
    initial_h: ScalingFilter | None = None

    @property
    def steps(self) -> int:
        return len(self.records)

    def totals(self) -> npt.NDArray[np.float64]:
        return np.array([r.total for r in self.records])

    def window_mean(self, window: int, from_end: bool = True) -> float:
        """开头或末尾 window 步的平均总损失"""
        totals = self.totals()
        if totals.size == 0:
            return float("nan")
        chunk = totals[-window:] if from_end else totals[:window]
        return float(chunk.mean())
