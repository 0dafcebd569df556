"""
wavelearn 文件格式读写
所有数值均以全精度十进制文本写出；读取失败统一抛出带路径与行号的 FileFormatError。
"""

import csv
import json
import logging
import math
import os
import tempfile
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import numpy as np
import numpy.typing as npt
from scipy.io import wavfile

from ..models.analysis import SampledFunction
from ..models.coefficients import FlatCoefficients, LevelSlice, WaveletDecomposition
from ..models.filters import ClassicalWaveletId, ScalingFilter
from ..models.run import RunManifest
from ..models.training import StepRecord
from .constants import (
    DATASET_FILE_NAME,
    DEFAULT_SAMPLE_RATE,
    PCM16_SCALE,
    SIGNAL_FILE_GLOB,
    SIGNAL_FILE_PATTERN,
)
from .errors import FileFormatError, InvalidArgumentError, UnknownWaveletError

logger = logging.getLogger(__name__)

PathLike = str | Path


def _fmt(value: float) -> str:
    """17 位有效数字，保证十进制往返无损"""
    return "%.17g" % value


# ------ 原子写入 ------
def atomic_write_text(path: PathLike, text: str) -> Path:
    """先写同目录下的临时文件再替换，避免留下半截文件"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as f:
            f.write(text)
        os.replace(tmp_name, path)
    except BaseException:
        if os.path.exists(tmp_name):
            os.unlink(tmp_name)
        raise
    return path


def write_json(path: PathLike, data: Any) -> Path:
    return atomic_write_text(path, json.dumps(data, ensure_ascii=False, indent=2) + "\n")


def read_json(path: PathLike) -> Any:
    path = Path(path)
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except OSError as e:
        raise FileFormatError(f"无法读取文件: {e}", path=str(path)) from e
    except json.JSONDecodeError as e:
        raise FileFormatError(f"不是合法的 JSON: {e.msg}", path=str(path), line=e.lineno) from e


def _read_lines(path: PathLike) -> list[str]:
    try:
        return Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as e:
        raise FileFormatError(f"无法读取文件: {e}", path=str(path)) from e
    except UnicodeDecodeError as e:
        raise FileFormatError(f"不是文本文件: {e}", path=str(path)) from e


def _parse_float(text: str, path: PathLike, line: int) -> float:
    try:
        value = float(text)
    except ValueError as e:
        raise FileFormatError(f"无法解析数值 {text!r}", path=str(path), line=line) from e
    if not math.isfinite(value):
        raise FileFormatError(f"数值必须有限，读到 {text!r}", path=str(path), line=line)
    return value


# ------ 滤波器文件 ------
def save_filter(h: ScalingFilter, path: PathLike) -> Path:
    """写出滤波器文件 {name, k, h}"""
    return write_json(path, h.to_dict())


def load_filter(path: PathLike) -> ScalingFilter:
    """读取滤波器文件"""
    data = read_json(path)
    if not isinstance(data, dict):
        raise FileFormatError("滤波器文件顶层必须是对象", path=str(path))
    try:
        return ScalingFilter.from_dict(data)
    except (InvalidArgumentError, TypeError, ValueError) as e:
        raise FileFormatError(f"滤波器记录不合法: {e}", path=str(path)) from e


def resolve_filter(source: str) -> ScalingFilter:
    """
    按文件路径或经典小波名称取得滤波器

    Raises:
        UnknownWaveletError: 既不是存在的文件，也不是小波库中的名称
    """
    from ..engine.filterbank import classical_filter

    if Path(source).is_file():
        return load_filter(source)
    try:
        return classical_filter(ClassicalWaveletId.parse(source))
    except UnknownWaveletError as e:
        raise UnknownWaveletError(f"{source} 既不是滤波器文件也不是经典小波名称（{e}）") from e


# ------ 系数文件 ------
@dataclass(frozen=True)
class CoefficientHeader:
    """系数文件首行: N J k filter-name"""

    length: int
    levels: int
    k: int
    filter_name: str

    def to_line(self) -> str:
        name = self.filter_name.replace(" ", "_") or "filter"
        return f"{self.length} {self.levels} {self.k} {name}"


def write_coefficients(path: PathLike, flat: FlatCoefficients, k: int, filter_name: str) -> Path:
    """写出扁平系数（d₁..d_J, a_J），每行一个数"""
    values = np.asarray(flat.values).reshape(-1)
    header = CoefficientHeader(values.shape[0], flat.levels, k, filter_name)
    lines = [header.to_line(), *(_fmt(v) for v in values)]
    return atomic_write_text(path, "\n".join(lines) + "\n")


def read_coefficients(path: PathLike) -> tuple[FlatCoefficients, CoefficientHeader]:
    """读取系数文件，返回扁平系数与文件头"""
    from ..engine.transform import band_layout

    lines = _read_lines(path)
    if not lines:
        raise FileFormatError("系数文件为空", path=str(path))
    fields = lines[0].split()
    if len(fields) != 4:
        raise FileFormatError(
            f"文件头应为 'N J k filter-name'，实际为 {lines[0]!r}", path=str(path), line=1
        )
    try:
        header = CoefficientHeader(int(fields[0]), int(fields[1]), int(fields[2]), fields[3])
    except ValueError as e:
        raise FileFormatError(f"文件头中的 N/J/k 必须为整数: {lines[0]!r}", path=str(path), line=1) from e
    try:
        layout: list[LevelSlice] = band_layout(header.length, header.levels)
    except InvalidArgumentError as e:
        raise FileFormatError(str(e), path=str(path), line=1) from e

    values = []
    for number, text in enumerate(lines[1:], start=2):
        text = text.strip()
        if not text:
            continue
        values.append(_parse_float(text, path, number))
    if len(values) != header.length:
        raise FileFormatError(
            f"文件头声明 N={header.length}，实际读到 {len(values)} 个系数",
            path=str(path),
            line=len(lines),
        )
    return FlatCoefficients(values=np.array(values), layout=layout), header


# ------ 信号文件 ------
def read_wav(path: PathLike) -> tuple[int, npt.NDArray[np.float64]]:
    """
    读取 16 位 PCM WAV，立体声取声道平均，样本除以 32768

    Returns:
        (采样率, 单声道样本)
    """
    try:
        rate, data = wavfile.read(str(path))
    except (OSError, ValueError) as e:
        raise FileFormatError(f"无法读取 WAV 文件: {e}", path=str(path)) from e
    if data.dtype != np.int16:
        raise FileFormatError(f"仅支持 16 位 PCM WAV，当前采样格式为 {data.dtype}", path=str(path))
    samples = data.astype(np.float64) / PCM16_SCALE
    if samples.ndim == 2:
        samples = samples.mean(axis=1)
    return int(rate), samples


def write_wav(path: PathLike, x: npt.ArrayLike, rate: int = DEFAULT_SAMPLE_RATE) -> Path:
    """写出 16 位单声道 PCM，超出 [-1, 1) 的样本会被截断"""
    samples = np.asarray(x, dtype=np.float64)
    scaled = np.round(samples * PCM16_SCALE)
    clipped = np.clip(scaled, -PCM16_SCALE, PCM16_SCALE - 1)
    count = int(np.count_nonzero(clipped != scaled))
    if count:
        logger.warning(f"写出 {path} 时有 {count} 个样本超出 16 位 PCM 范围，已截断")
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    wavfile.write(str(path), rate, clipped.astype(np.int16))
    return path


def write_signal(path: PathLike, x: npt.ArrayLike) -> Path:
    """写出信号：.wav 为 16 位 PCM，其余为单列 CSV"""
    if Path(path).suffix.lower() == ".wav":
        return write_wav(path, x)
    values = np.asarray(x, dtype=np.float64).reshape(-1)
    return atomic_write_text(path, "".join(f"{_fmt(v)}\n" for v in values))


def read_signal(path: PathLike) -> npt.NDArray[np.float64]:
    """读取单列 CSV（首行可为表头）或 WAV 信号"""
    if Path(path).suffix.lower() == ".wav":
        return read_wav(path)[1]
    lines = _read_lines(path)
    values = []
    for number, text in enumerate(lines, start=1):
        text = text.strip()
        if not text:
            continue
        if "," in text:
            raise FileFormatError(f"信号文件必须为单列，读到 {text!r}", path=str(path), line=number)
        if number == 1 and not values:
            try:
                float(text)
            except ValueError:
                continue  # 表头
        values.append(_parse_float(text, path, number))
    if not values:
        raise FileFormatError("信号文件中没有数据", path=str(path))
    return np.array(values)


# ------ 数据集目录 ------
def write_dataset(
    directory: PathLike, signals: list[npt.NDArray[np.float64]], metadata: dict[str, Any]
) -> list[Path]:
    """写出 signal_00000.csv ... 以及 dataset.json（配置、数量、长度）"""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    paths = [
        write_signal(directory / SIGNAL_FILE_PATTERN.format(index=index), x)
        for index, x in enumerate(signals)
    ]
    length = int(np.shape(signals[0])[-1]) if signals else 0
    write_json(
        directory / DATASET_FILE_NAME,
        {"config": metadata, "count": len(signals), "length": length},
    )
    logger.info(f"数据集已写入 {directory}: {len(signals)} 个信号，N={length}")
    return paths


def read_dataset(directory: PathLike) -> list[npt.NDArray[np.float64]]:
    """读取数据集目录中的全部信号（按文件名排序）"""
    directory = Path(directory)
    if not directory.is_dir():
        raise FileFormatError("数据集路径不是目录", path=str(directory))
    paths = sorted(directory.glob(SIGNAL_FILE_GLOB))
    if not paths:
        raise FileFormatError("数据集目录中没有信号文件", path=str(directory))
    signals = [read_signal(p) for p in paths]
    info_path = directory / DATASET_FILE_NAME
    if info_path.exists():
        info = read_json(info_path)
        if isinstance(info, dict) and info.get("count") not in (None, len(signals)):
            raise FileFormatError(
                f"dataset.json 记录 {info['count']} 个信号，目录中实际有 {len(signals)} 个",
                path=str(info_path),
            )
    lengths = {s.shape[0] for s in signals}
    if len(lengths) != 1:
        raise FileFormatError(f"数据集中信号长度不一致: {sorted(lengths)}", path=str(directory))
    return signals


# ------ 训练运行目录 ------
def write_history(path: PathLike, records: list[StepRecord]) -> Path:
    """写出 history.csv（step,total,recon,sparsity,constraint）"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(StepRecord.CSV_HEADER)
        for record in records:
            writer.writerow([record.step, *(_fmt(v) for v in record.to_row()[1:])])
    return path


def read_history(path: PathLike) -> list[StepRecord]:
    lines = _read_lines(path)
    if not lines or tuple(lines[0].split(",")) != StepRecord.CSV_HEADER:
        raise FileFormatError("history.csv 表头不正确", path=str(path), line=1)
    records = []
    for number, line in enumerate(lines[1:], start=2):
        cells = line.split(",")
        if len(cells) != 5:
            raise FileFormatError(f"应有 5 列，实际 {len(cells)} 列", path=str(path), line=number)
        try:
            step = int(cells[0])
        except ValueError as e:
            raise FileFormatError(f"步数必须为整数: {cells[0]!r}", path=str(path), line=number) from e
        values = [_parse_float(c, path, number) for c in cells[1:]]
        records.append(StepRecord(step, *values))
    return records


def write_key_values(path: PathLike, values: dict[str, Any]) -> Path:
    """写出 key = value 文本（训练目录中的 config.txt）"""
    lines = []
    for key, value in values.items():
        if isinstance(value, (list, tuple)):
            value = ",".join(str(v) for v in value)
        lines.append(f"{key} = {value}")
    return atomic_write_text(path, "\n".join(lines) + "\n")


def read_key_values(path: PathLike) -> dict[str, str]:
    result = {}
    for number, line in enumerate(_read_lines(path), start=1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        if "=" not in line:
            raise FileFormatError(f"应为 key = value，读到 {line!r}", path=str(path), line=number)
        key, value = line.split("=", 1)
        result[key.strip()] = value.strip()
    return result


# ------ 函数采样与曲线 ------
def write_sampled_function(path: PathLike, function: SampledFunction) -> Path:
    """两列 CSV：t, value"""
    rows = ["t,value"]
    rows.extend(f"{_fmt(t)},{_fmt(v)}" for t, v in zip(function.grid, function.values, strict=True))
    return atomic_write_text(path, "\n".join(rows) + "\n")


def write_columns(path: PathLike, header: list[str], columns: list[npt.ArrayLike]) -> Path:
    """多列 CSV，第一列按整数写出"""
    arrays = [np.asarray(c) for c in columns]
    rows = [",".join(header)]
    for i in range(arrays[0].shape[0]):
        cells = [str(int(arrays[0][i]))] + [_fmt(float(a[i])) for a in arrays[1:]]
        rows.append(",".join(cells))
    return atomic_write_text(path, "\n".join(rows) + "\n")


def read_series(path: PathLike) -> tuple[npt.NDArray[np.float64], npt.NDArray[np.float64]]:
    """
    读取绘图用的曲线

    单列文件以行号为横轴；两列及以上取前两列为 (x, y)。首行可为表头。
    """
    lines = _read_lines(path)
    xs, ys = [], []
    for number, line in enumerate(lines, start=1):
        text = line.strip()
        if not text:
            continue
        cells = [c.strip() for c in text.split(",")]
        if number == 1:
            try:
                float(cells[0])
            except ValueError:
                continue  # 表头
        if len(cells) == 1:
            xs.append(float(len(ys)))
            ys.append(_parse_float(cells[0], path, number))
        else:
            xs.append(_parse_float(cells[0], path, number))
            ys.append(_parse_float(cells[1], path, number))
    if not ys:
        raise FileFormatError("曲线文件中没有数据", path=str(path))
    return np.array(xs), np.array(ys)


# ------ 运行清单 ------
def write_manifest(path: PathLike, manifest: RunManifest) -> Path:
    return write_json(path, manifest.to_dict())


def read_manifest(path: PathLike) -> RunManifest:
    data = read_json(path)
    if not isinstance(data, dict) or "command" not in data or "arguments" not in data:
        raise FileFormatError("运行清单缺少 command 或 arguments 字段", path=str(path))
    return RunManifest.from_dict(data)
