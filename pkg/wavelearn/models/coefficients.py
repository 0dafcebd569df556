"""
小波系数相关数据模型
"""

from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from ..core.errors import InvalidArgumentError


@dataclass(frozen=True, eq=False)
class WaveletDecomposition:
    """
    多层分解结果。

    所有数组沿最后一维排列系数，前面的维度可作为批次维。

    Attributes:
        details: [d₁, d₂, ..., d_J]，d_j 长度为 N/2^j
        approx: a_J，长度为 N/2^J
    """

    details: list[npt.NDArray[np.float64]]
    approx: npt.NDArray[np.float64]

    def __post_init__(self):
        if not self.details:
            raise InvalidArgumentError("分解结果至少需要一层细节系数")
        n = 2 * self.details[0].shape[-1]
        batch_shape = self.approx.shape[:-1]
        for j, detail in enumerate(self.details):
            expected = n >> (j + 1)
            if detail.shape[-1] != expected or detail.shape[:-1] != batch_shape:
                raise InvalidArgumentError(
                    f"第 {j + 1} 层细节系数形状 {detail.shape} 不一致，"
                    f"期望最后一维长度 {expected}"
                )
        if self.approx.shape[-1] != n >> self.levels or self.approx.shape[-1] < 1:
            raise InvalidArgumentError(
                f"近似系数长度 {self.approx.shape[-1]} 与层数 {self.levels} 不一致"
            )

    @property
    def levels(self) -> int:
        return len(self.details)

    @property
    def signal_length(self) -> int:
        return 2 * self.details[0].shape[-1]

    @property
    def bands(self) -> list[npt.NDArray[np.float64]]:
        """按 d₁..d_J, a_J 顺序排列的全部频带"""
        return [*self.details, self.approx]


@dataclass(frozen=True)
class LevelSlice:
    """扁平系数向量中一个频带的位置"""

    level_id: str  # "d1".."dJ" 或 "aJ"
    offset: int
    length: int

    @property
    def stop(self) -> int:
        return self.offset + self.length


@dataclass(frozen=True, eq=False)
class FlatCoefficients:
    """扁平化系数 W(x)：d₁, ..., d_J, a_J 顺序拼接"""

    values: npt.NDArray[np.float64]
    layout: list[LevelSlice]

    @property
    def levels(self) -> int:
        return len(self.layout) - 1

    def band(self, level_id: str) -> npt.NDArray[np.float64]:
        for item in self.layout:
            if item.level_id == level_id:
                return self.values[..., item.offset : item.stop]
        raise InvalidArgumentError(f"布局中不存在频带 {level_id}")


# 定长实信号（一维 float64 数组，长度为 2 的幂）；批次为二维数组 (M, N)
Signal = npt.NDArray[np.float64]
