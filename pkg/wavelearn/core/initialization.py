"""
wavelearn 配置初始化
包含配置 Schema 加载、用户配置合并以及各配置的合法性检查。

优先级：Schema 默认值 < --config 指定的 JSON 文件 < 命令行显式参数
"""

import json
import logging
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Any

from ..models.datagen import SynthConfig
from ..models.training import TrainingConfig
from .errors import FileFormatError, InvalidArgumentError

# 获取初始化专用的日志记录器
init_logger = logging.getLogger(__name__)

SCHEMA_FILE_NAME = "_conf_schema.json"


@lru_cache(maxsize=1)
def load_schema() -> dict[str, Any]:
    """读取包内的 _conf_schema.json"""
    text = resources.files("wavelearn").joinpath(SCHEMA_FILE_NAME).read_text(encoding="utf-8")
    return json.loads(text)


def schema_items(section: str) -> dict[str, dict[str, Any]]:
    """某个配置段的全部配置项描述"""
    schema = load_schema()
    if section not in schema:
        raise InvalidArgumentError(f"未知的配置段: {section}")
    return schema[section]["items"]


def schema_defaults(section: str) -> dict[str, Any]:
    """某个配置段的默认值"""
    return {name: item.get("default") for name, item in schema_items(section).items()}


def load_user_config(path: str | Path | None) -> dict[str, Any]:
    """
    读取用户配置文件（JSON，按配置段组织）

    Returns:
        配置字典；path 为空时返回空字典

    Raises:
        FileFormatError: 文件无法读取、不是合法 JSON 或顶层不是对象
    """
    if not path:
        return {}
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except OSError as e:
        raise FileFormatError(f"无法读取配置文件: {e}", path=str(path)) from e
    except json.JSONDecodeError as e:
        raise FileFormatError(f"配置文件不是合法的 JSON: {e.msg}", path=str(path), line=e.lineno) from e
    if not isinstance(data, dict):
        raise FileFormatError("配置文件顶层必须是对象", path=str(path))
    unknown = sorted(set(data) - set(load_schema()))
    if unknown:
        init_logger.warning(f"配置文件 {path} 中存在未知配置段，已忽略: {', '.join(unknown)}")
    init_logger.debug(f"已加载用户配置: {path}")
    return data


def resolve_section(
    section: str,
    user_config: dict[str, Any] | None = None,
    overrides: dict[str, Any] | None = None,
) -> dict[str, Any]:
    """
    合并某个配置段：默认值、用户配置文件、命令行覆盖（None 表示未指定）
    """
    merged = schema_defaults(section)
    from_file = (user_config or {}).get(section, {})
    if not isinstance(from_file, dict):
        raise InvalidArgumentError(f"配置段 {section} 必须是对象")
    for name, value in from_file.items():
        if name not in merged:
            raise InvalidArgumentError(f"配置段 {section} 中不存在配置项 {name}")
        merged[name] = value
    for name, value in (overrides or {}).items():
        if value is not None:
            merged[name] = value
    return merged


def _raise_on_problems(kind: str, problems: list[str]) -> None:
    if not problems:
        return
    for problem in problems:
        init_logger.error(f"{kind}配置错误: {problem}")
    raise InvalidArgumentError(f"{kind}配置错误：" + "；".join(problems))


def check_training_config(config: TrainingConfig) -> TrainingConfig:
    """
    检查训练配置

    Raises:
        InvalidArgumentError: 任一配置项不合法
    """
    _raise_on_problems("训练", config.problems())
    return config


def check_synth_config(config: SynthConfig) -> SynthConfig:
    """
    检查合成数据配置

    Raises:
        InvalidArgumentError: 任一配置项不合法
    """
    _raise_on_problems("合成数据", config.problems())
    return config


def build_training_config(
    user_config: dict[str, Any] | None = None,
    overrides: dict[str, Any] | None = None,
    seed: int | None = None,
) -> TrainingConfig:
    """合并配置并构造经过检查的 TrainingConfig"""
    values = resolve_section("training", user_config, overrides)
    if seed is not None:
        values["seed"] = seed
    return check_training_config(TrainingConfig.from_dict(values))


def build_synth_config(
    user_config: dict[str, Any] | None = None,
    overrides: dict[str, Any] | None = None,
    seed: int | None = None,
) -> SynthConfig:
    """合并配置并构造经过检查的 SynthConfig"""
    values = resolve_section("synth", user_config, overrides)
    if seed is not None:
        values["seed"] = seed
    return check_synth_config(SynthConfig.from_dict(values))
