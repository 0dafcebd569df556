"""
分析结果数据模型
"""

from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from .filters import ClassicalWaveletId


@dataclass(frozen=True, eq=False)
class SampledFunction:
    """
    级联算法得到的 φ 或 ψ 采样

    Attributes:
        values: 采样值，长度 (k-1)·2^i + 1
        grid_step: 网格间距 2^{-i}
        support_start: 支撑起点（抽头下标原点）
        iterations: 迭代次数 i
        convergence_delta: 与上一次迭代结果在粗网格上的最大差，仅 φ 有意义
    """

    values: npt.NDArray[np.float64]
    grid_step: float
    support_start: int = 0
    iterations: int = 0
    convergence_delta: float | None = None

    @property
    def grid(self) -> npt.NDArray[np.float64]:
        """采样点 t = support_start + index·grid_step"""
        return self.support_start + np.arange(self.values.shape[0]) * self.grid_step

    def integral(self) -> float:
        """黎曼和 Σ values · grid_step"""
        return float(self.values.sum() * self.grid_step)


@dataclass(frozen=True)
class WaveletMatch:
    """与某个经典小波的距离"""

    id: ClassicalWaveletId
    distance: float

    @property
    def sort_key(self) -> tuple:
        return self.id.sort_key


@dataclass(frozen=True, eq=False)
class FilterAlignment:
    """
    两个滤波器在最优循环移位下的对齐结果

    Attributes:
        distance: 最小余弦距离
        shift: 使距离最小的循环移位量
        reference: 第一个滤波器（补零后）
        aligned: 第二个滤波器补零并循环移位后的结果
    """

    distance: float
    shift: int
    reference: npt.NDArray[np.float64]
    aligned: npt.NDArray[np.float64]
