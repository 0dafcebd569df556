"""
SVG 折线图渲染（jinja2 模板）
输出为确定性的文本：相同输入得到逐字节相同的文件。
"""

import logging
import os
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import numpy.typing as npt
from jinja2 import Environment, FileSystemLoader, select_autoescape

from .errors import InvalidArgumentError
from .file_io import PathLike, atomic_write_text, read_series

logger = logging.getLogger(__name__)

PLOT_TEMPLATE = "plot.svg.j2"
DEFAULT_WIDTH = 800
DEFAULT_HEIGHT = 400
TICK_COUNT = 5
PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf")

# 左、右、上、下边距
MARGINS = (60, 20, 30, 30)


@dataclass(frozen=True, eq=False)
class Series:
    """一条曲线"""

    label: str
    x: npt.NDArray[np.float64]
    y: npt.NDArray[np.float64]


@dataclass(frozen=True)
class _PlotArea:
    left: float
    top: float
    right: float
    bottom: float

    @property
    def width(self) -> float:
        return self.right - self.left

    @property
    def height(self) -> float:
        return self.bottom - self.top


def _environment() -> Environment:
    templates_dir = os.path.join(os.path.dirname(os.path.dirname(__file__)), "templates")
    return Environment(
        loader=FileSystemLoader(templates_dir),
        autoescape=select_autoescape(enabled_extensions=("j2", "svg")),
        keep_trailing_newline=True,
    )


def format_number(value: float) -> str:
    """刻度标签：4 位有效数字，不输出 -0"""
    text = f"{value:.4g}"
    return "0" if text in ("-0", "0") else text


def _bounds(values: npt.NDArray[np.float64]) -> tuple[float, float]:
    low, high = float(values.min()), float(values.max())
    if low == high:
        return low - 1.0, high + 1.0
    return low, high


def render_svg(
    series: list[Series],
    title: str = "",
    width: int = DEFAULT_WIDTH,
    height: int = DEFAULT_HEIGHT,
) -> str:
    """
    把若干曲线渲染为独立的 SVG 文本

    Args:
        series: 曲线列表（至少一条）
        title: 可选标题
        width / height: 画布尺寸（像素）
    """
    if not series:
        raise InvalidArgumentError("至少需要一条曲线")
    left, right, top, bottom = MARGINS
    area = _PlotArea(left, top, width - right, height - bottom)
    x_low, x_high = _bounds(np.concatenate([s.x for s in series]))
    y_low, y_high = _bounds(np.concatenate([s.y for s in series]))

    def to_px(x, y):
        px = area.left + (x - x_low) / (x_high - x_low) * area.width
        py = area.bottom - (y - y_low) / (y_high - y_low) * area.height
        return px, py

    rendered = []
    for index, s in enumerate(series):
        px, py = to_px(s.x, s.y)
        points = " ".join(f"{a:.2f},{b:.2f}" for a, b in zip(px, py, strict=True))
        rendered.append({"label": s.label, "color": PALETTE[index % len(PALETTE)], "points": points})

    x_ticks = [
        {"pos": f"{to_px(v, y_low)[0]:.2f}", "label": format_number(v)}
        for v in np.linspace(x_low, x_high, TICK_COUNT)
    ]
    y_ticks = [
        {"pos": f"{to_px(x_low, v)[1]:.2f}", "label": format_number(v)}
        for v in np.linspace(y_low, y_high, TICK_COUNT)
    ]
    template = _environment().get_template(PLOT_TEMPLATE)
    return template.render(
        width=width,
        height=height,
        title=title,
        plot=area,
        x_ticks=x_ticks,
        y_ticks=y_ticks,
        series=rendered,
    )


def plot_files(paths: list[PathLike], out: PathLike, title: str = "") -> Path:
    """读取一个或多个 CSV 曲线文件，图例取文件名"""
    series = []
    for path in paths:
        x, y = read_series(path)
        series.append(Series(label=Path(path).stem, x=x, y=y))
    logger.debug(f"绘制 {len(series)} 条曲线到 {out}")
    return atomic_write_text(out, render_svg(series, title=title))
