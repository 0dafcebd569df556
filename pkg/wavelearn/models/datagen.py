"""
合成数据相关数据模型
"""

from dataclasses import dataclass
from enum import Enum

from ..core.constants import (
    DEFAULT_CYCLES,
    DEFAULT_DATASET_SIZE,
    DEFAULT_HARMONIC_PROB,
    DEFAULT_HARMONICS,
    DEFAULT_SEED,
    DEFAULT_SIGNAL_LENGTH,
    DEFAULT_WINDOW_COUNT_RANGE,
    DEFAULT_WINDOW_STD_FRACTION,
)
from .config_base import DictConfigMixin


class BaseWave(str, Enum):
    """基波类型（周期 2π）"""

    SINE = "sine"
    SAWTOOTH = "sawtooth"
    SQUARE = "square"


@dataclass(frozen=True)
class SynthConfig(DictConfigMixin):
    """
    合成谐波数据集配置

    Attributes:
        base: 基波类型
        harmonics: 谐波个数 K（尺度 2⁰..2^{K-1}）
        harmonic_prob: 每个谐波出现的概率 p
        length: 信号长度 N（2 的幂）
        count: 数据集大小 M
        cycles: 每个信号包含的基波周期数
        windowed: 是否对每个尺度加随机高斯窗
        window_count_range: 每个尺度的窗口数量范围（闭区间）
        window_std_fraction: 窗口标准差占 N 的比例
        seed: 随机种子
    """

    base: BaseWave = BaseWave.SINE
    harmonics: int = DEFAULT_HARMONICS
    harmonic_prob: float = DEFAULT_HARMONIC_PROB
    length: int = DEFAULT_SIGNAL_LENGTH
    count: int = DEFAULT_DATASET_SIZE
    cycles: int = DEFAULT_CYCLES
    windowed: bool = False
    window_count_range: tuple[int, int] = DEFAULT_WINDOW_COUNT_RANGE
    window_std_fraction: float = DEFAULT_WINDOW_STD_FRACTION
    seed: int = DEFAULT_SEED

    def __post_init__(self):
        object.__setattr__(self, "base", BaseWave(self.base))
        object.__setattr__(self, "window_count_range", tuple(self.window_count_range))

    def problems(self) -> list[str]:
        """返回所有不满足约束的配置项说明，空列表表示合法"""
        issues = []
        if self.harmonics < 1:
            issues.append(f"harmonics 必须 ≥ 1（当前 {self.harmonics}）")
        if not 0 <= self.harmonic_prob <= 1:
            issues.append(f"harmonic_prob 必须位于 [0, 1]（当前 {self.harmonic_prob}）")
        if self.length < 1 or self.length & (self.length - 1):
            issues.append(f"length 必须为 2 的幂（当前 {self.length}）")
        if self.count < 1:
            issues.append(f"count 必须 ≥ 1（当前 {self.count}）")
        if self.cycles < 1:
            issues.append(f"cycles 必须 ≥ 1（当前 {self.cycles}）")
        if len(self.window_count_range) != 2:
            issues.append(f"window_count_range 必须是两个整数（当前 {self.window_count_range}）")
        else:
            low, high = self.window_count_range
            if not 1 <= low <= high:
                issues.append(f"window_count_range 必须满足 1 ≤ 下限 ≤ 上限（当前 {low}..{high}）")
        if not self.window_std_fraction > 0:
            issues.append(f"window_std_fraction 必须为正数（当前 {self.window_std_fraction}）")
        return issues
