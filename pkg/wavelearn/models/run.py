"""
命令运行清单
"""

from dataclasses import dataclass, field
from typing import Any


@dataclass
class RunManifest:
    """
    单次命令执行的完整记录，写入输出目录的 manifest.json。

    arguments 中保存全部已解析的参数（默认值已展开），
    据此重新执行可以逐字节复现数据文件。
    """

    command: str
    arguments: dict[str, Any]
    seed: int | None
    version: str
    inputs: list[str] = field(default_factory=list)
    outputs: list[str] = field(default_factory=list)
    duration_seconds: float = 0.0
    created_at: str = ""
    extra: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict:
        """转换为字典"""
        return {
            "command": self.command,
            "arguments": self.arguments,
            "seed": self.seed,
            "version": self.version,
            "inputs": self.inputs,
            "outputs": self.outputs,
            "duration_seconds": self.duration_seconds,
            "created_at": self.created_at,
            "extra": self.extra,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "RunManifest":
        """从字典创建实例"""
        return cls(
            command=data.get("command", ""),
            arguments=data.get("arguments", {}),
            seed=data.get("seed"),
            version=data.get("version", ""),
            inputs=data.get("inputs", []),
            outputs=data.get("outputs", []),
            duration_seconds=float(data.get("duration_seconds", 0.0)),
            created_at=data.get("created_at", ""),
            extra=data.get("extra", {}),
        )
