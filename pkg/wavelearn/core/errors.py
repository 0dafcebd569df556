"""
wavelearn 异常定义
每个异常同时继承对应的内置异常，调用方可以直接按内置类型捕获。
"""


class WaveLearnError(Exception):
    """wavelearn 所有异常的基类"""


class InvalidArgumentError(WaveLearnError, ValueError):
    """参数不合法（空批次、长度不一致、层数过深、零范数滤波器等）"""


class InvalidLengthError(InvalidArgumentError):
    """输入长度不满足要求（例如单层分解的输入长度为奇数）"""


class UnknownWaveletError(WaveLearnError, LookupError):
    """经典小波库中不存在的族或阶数"""


class FileFormatError(WaveLearnError, OSError):
    """文件无法读取或格式错误，附带路径与行号"""

    def __init__(self, message: str, path: str | None = None, line: int | None = None):
        self.path = path
        self.line = line
        location = ""
        if path is not None:
            location = f"{path}"
            if line is not None:
                location += f":{line}"
            location += ": "
        super().__init__(f"{location}{message}")


class ConvergenceError(WaveLearnError, RuntimeError):
    """约束优化在最大步数内未达到容差"""

    def __init__(self, message: str, residual: float, steps: int):
        self.residual = residual
        self.steps = steps
        super().__init__(f"{message}（步数 {steps}，残差 {residual:.3e}）")
