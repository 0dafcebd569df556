"""
配置数据类的字典转换
"""

from dataclasses import MISSING, fields
from enum import Enum
from typing import Any, TypeVar

from ..core.errors import InvalidArgumentError

T = TypeVar("T")


def _coerce(name: str, value: Any, default: Any) -> Any:
    """按字段默认值的类型转换来自 JSON / 命令行 / config.txt 的取值"""
    try:
        if isinstance(default, Enum):
            return type(default)(value)
        if isinstance(default, bool):
            if isinstance(value, str):
                lowered = value.strip().lower()
                if lowered in ("true", "1", "yes"):
                    return True
                if lowered in ("false", "0", "no"):
                    return False
                raise ValueError(value)
            return bool(value)
        if isinstance(default, int):
            number = float(value)
            if not number.is_integer():
                raise ValueError(value)
            return int(number)
        if isinstance(default, float):
            return float(value)
        if isinstance(default, tuple):
            if isinstance(value, str):
                value = value.replace("..", ",").strip("()[] ").split(",")
            return tuple(int(v) for v in value)
        return value
    except (TypeError, ValueError) as e:
        raise InvalidArgumentError(f"配置项 {name} 的取值 {value!r} 无法解析") from e


class DictConfigMixin:
    """为冻结配置数据类提供 to_dict / from_dict"""

    def to_dict(self) -> dict:
        """转换为字典（枚举取值、元组转列表，便于 JSON 序列化）"""
        result = {}
        for f in fields(self):
            value = getattr(self, f.name)
            if isinstance(value, Enum):
                value = value.value
            elif isinstance(value, tuple):
                value = list(value)
            result[f.name] = value
        return result

    @classmethod
    def from_dict(cls: type[T], data: dict) -> T:
        """从字典创建实例，缺失字段取默认值，未知字段报错"""
        known = {f.name: f for f in fields(cls)}
        unknown = sorted(set(data) - set(known))
        if unknown:
            raise InvalidArgumentError(f"{cls.__name__} 不支持的配置项: {', '.join(unknown)}")
        kwargs = {}
        for name, value in data.items():
            default = known[name].default
            kwargs[name] = value if default is MISSING else _coerce(name, value, default)
        return cls(**kwargs)
