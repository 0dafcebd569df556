"""
滤波器相关数据模型
"""

import re
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
import numpy.typing as npt

from ..core.errors import InvalidArgumentError, UnknownWaveletError


class WaveletFamily(str, Enum):
    """经典小波族，定义顺序即排名时的并列顺序"""

    HAAR = "haar"
    DAUBECHIES = "db"
    SYMLET = "sym"
    COIFLET = "coif"

    @property
    def rank(self) -> int:
        return list(WaveletFamily).index(self)

    @property
    def display_name(self) -> str:
        return _FAMILY_DISPLAY[self]


_FAMILY_DISPLAY = {
    WaveletFamily.HAAR: "Haar",
    WaveletFamily.DAUBECHIES: "Daubechies",
    WaveletFamily.SYMLET: "Symlet",
    WaveletFamily.COIFLET: "Coiflet",
}

# 每个族允许的阶数（闭区间）
FAMILY_ORDERS: dict[WaveletFamily, tuple[int, int]] = {
    WaveletFamily.HAAR: (1, 1),
    WaveletFamily.DAUBECHIES: (2, 10),
    WaveletFamily.SYMLET: (2, 10),
    WaveletFamily.COIFLET: (1, 5),
}

_NAME_PATTERN = re.compile(r"^(haar|db|sym|coif)(\d*)$")


@dataclass(frozen=True)
class ClassicalWaveletId:
    """经典小波标识（族 + 阶数）"""

    family: WaveletFamily
    order: int = 1

    def __post_init__(self):
        family = WaveletFamily(self.family)
        object.__setattr__(self, "family", family)
        low, high = FAMILY_ORDERS[family]
        if not low <= self.order <= high:
            raise UnknownWaveletError(
                f"小波库中没有 {family.display_name}({self.order})，"
                f"允许的阶数为 {low}..{high}"
            )

    @property
    def name(self) -> str:
        """PyWavelets 风格的名称，如 haar / db4 / sym5 / coif3"""
        if self.family is WaveletFamily.HAAR:
            return "haar"
        return f"{self.family.value}{self.order}"

    @property
    def sort_key(self) -> tuple[int, int]:
        return (self.family.rank, self.order)

    @classmethod
    def parse(cls, name: str) -> "ClassicalWaveletId":
        """从名称解析，如 "db4"、"Haar"、"coif5" """
        match = _NAME_PATTERN.match(name.strip().lower())
        if not match:
            raise UnknownWaveletError(f"无法识别的小波名称: {name}")
        family = WaveletFamily(match.group(1))
        if family is WaveletFamily.HAAR:
            order = int(match.group(2) or 1)
        elif match.group(2):
            order = int(match.group(2))
        else:
            raise UnknownWaveletError(f"小波名称缺少阶数: {name}")
        return cls(family, order)

    def __str__(self) -> str:
        return f"{self.family.display_name}({self.order})"


def _frozen_array(values: npt.ArrayLike) -> npt.NDArray[np.float64]:
    arr = np.array(values, dtype=np.float64).reshape(-1)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class ScalingFilter:
    """
    尺度滤波器 h，模型唯一的可学习参数。

    Attributes:
        coeffs: 长度为 k 的滤波器抽头（只读数组）
        name: 可选名称，用于文件导出和报告
    """

    coeffs: npt.NDArray[np.float64]
    name: str = "filter"

    def __post_init__(self):
        coeffs = _frozen_array(self.coeffs)
        k = coeffs.shape[0]
        if k < 2 or k % 2 != 0:
            raise InvalidArgumentError(f"滤波器长度必须为不小于 2 的偶数，当前 k={k}")
        if not np.all(np.isfinite(coeffs)):
            raise InvalidArgumentError("滤波器系数包含非有限值")
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def k(self) -> int:
        return int(self.coeffs.shape[0])

    def __len__(self) -> int:
        return self.k

    def padded(self, k: int) -> "ScalingFilter":
        """尾部补零到长度 k"""
        if k < self.k:
            raise InvalidArgumentError(f"无法将长度 {self.k} 的滤波器截断为 {k}")
        return ScalingFilter(np.pad(self.coeffs, (0, k - self.k)), name=self.name)

    def to_dict(self) -> dict:
        """转换为字典（滤波器文件格式）"""
        return {
            "name": self.name,
            "k": self.k,
            "h": [float(v) for v in self.coeffs],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ScalingFilter":
        """从字典创建实例"""
        coeffs = data.get("h")
        if coeffs is None:
            raise InvalidArgumentError("滤波器记录缺少字段 h")
        h = cls(np.asarray(coeffs, dtype=np.float64), name=str(data.get("name", "filter")))
        declared_k = data.get("k")
        if declared_k is not None and int(declared_k) != h.k:
            raise InvalidArgumentError(
                f"滤波器记录中的 k={declared_k} 与系数个数 {h.k} 不一致"
            )
        return h


@dataclass(frozen=True)
class FilterPair:
    """
    滤波器对 (h, g)。g 始终由 h 经 QMF 关系导出，不单独存储。
    """

    h: ScalingFilter

    @property
    def g(self) -> npt.NDArray[np.float64]:
        from ..engine.filterbank import derive_qmf

        return derive_qmf(self.h)

    @property
    def k(self) -> int:
        return self.h.k

    @property
    def name(self) -> str:
        return self.h.name


@dataclass(frozen=True)
class ConstraintReport:
    """小波约束 L_w 的各项残差"""

    l2_residual: float
    mean_h_residual: float
    mean_g_residual: float
    total: float

    def to_dict(self) -> dict:
        return {
            "l2_residual": self.l2_residual,
            "mean_h_residual": self.mean_h_residual,
            "mean_g_residual": self.mean_g_residual,
            "total": self.total,
        }


@dataclass(frozen=True)
class OrthonormalityReport:
    """正交归一性检查结果"""

    passed: bool
    sum_residual: float  # |Σh - √2|
    norm_residual: float  # |‖h‖₂ - 1|
    max_shift_correlation: float  # max_{m≠0} |Σ h[n]h[n-2m]|
    tol: float
    shift_correlations: dict[int, float] = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.passed
