"""
wavelearn 命令行入口
负责参数注册（选项的默认值与说明来自 _conf_schema.json）、日志配置和退出码。
各子命令的实现位于 core/commands.py。
"""

import argparse
import logging
import sys
from collections.abc import Sequence

from . import __version__
from .core import commands
from .core.errors import ConvergenceError, WaveLearnError
from .core.initialization import schema_items

logger = logging.getLogger("wavelearn")

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_USAGE = 2

# 视为用户输入问题的异常，退出码 2；ConvergenceError 须在其前单独捕获
USAGE_ERRORS = (WaveLearnError, OSError)

_SCHEMA_TYPES = {"int": int, "float": float, "string": str}

# 由 main() 安装在 wavelearn 日志记录器上的处理器
_installed_handler: logging.Handler | None = None


def _add_schema_options(
    parser: argparse.ArgumentParser, section: str, only: list[str] | None = None
) -> None:
    """按配置 Schema 注册选项；默认值为 None，实际默认值在解析后合并"""
    group = parser.add_argument_group(f"{section} 参数")
    for name, item in schema_items(section).items():
        if only is not None and name not in only:
            continue
        flags = item.get("flags", [f"--{name.replace('_', '-')}"])
        help_text = f"{item['description']}（默认 {item.get('default')}）"
        if item.get("hint"):
            help_text += f"；{item['hint']}"
        kwargs = {"dest": name, "default": None, "help": help_text}
        kind = item.get("type")
        if kind == "bool":
            kwargs["action"] = argparse.BooleanOptionalAction
        elif kind == "list":
            kwargs.update(nargs=2, type=int, metavar=("LOW", "HIGH"))
        else:
            kwargs["type"] = _SCHEMA_TYPES[kind]
            if "options" in item:
                kwargs["choices"] = item["options"]
        group.add_argument(*flags, **kwargs)


def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="随机种子（默认 0）")
    common.add_argument("--config", default=None, help="JSON 配置文件，按配置段组织")
    common.add_argument("--progress", action="store_true", help="在 stderr 显示进度条")
    verbosity = common.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", action="store_true", help="输出调试日志")
    verbosity.add_argument("-q", "--quiet", action="store_true", help="只输出警告和错误")
    return common


def build_parser() -> argparse.ArgumentParser:
    """构建完整的命令行解析器"""
    parser = argparse.ArgumentParser(prog="wavelearn", description="从原始信号中学习小波滤波器")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = _common_parser()
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(name: str, help_text: str, default_out: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, parents=[common], help=help_text, description=help_text)
        p.add_argument("--out", default=default_out, help=f"输出位置（默认 {default_out}）")
        p.set_defaults(handler=commands.COMMAND_HANDLERS[name])
        return p

    p = add("synth", "生成合成谐波数据集", "dataset")
    _add_schema_options(p, "synth")

    p = add("train", "在数据集上训练尺度滤波器", "run")
    p.add_argument("dataset", help="数据集目录（synth 或 wav-ingest 的输出）")
    p.add_argument("--init-filter", default=None, help="初始滤波器：滤波器文件或经典小波名称（如 haar）")
    _add_schema_options(p, "training")

    p = add("transform", "对信号做离散小波变换，输出系数文件", "coefficients.txt")
    p.add_argument("signal", help="信号文件（单列 CSV 或 16 位 PCM WAV）")
    p.add_argument("filter", help="滤波器文件或经典小波名称")
    _add_schema_options(p, "transform")

    p = add("reconstruct", "由系数文件重构信号", "reconstructed.csv")
    p.add_argument("coefficients", help="系数文件")
    p.add_argument("filter", help="滤波器文件或经典小波名称")

    p = add("cascade", "用级联算法生成尺度函数与小波函数", "cascade")
    p.add_argument("filter", help="滤波器文件或经典小波名称")
    _add_schema_options(p, "analysis", ["iterations"])

    p = add("compare", "与经典小波库比较并排名", "compare.txt")
    p.add_argument("filter", help="滤波器文件或经典小波名称")
    p.add_argument("--aligned-out", default=None, help="写出与最近经典小波对齐后的滤波器（CSV）")
    p.add_argument("--cascade-dir", default=None, help="写出最近经典小波的 φ / ψ 采样")
    _add_schema_options(p, "analysis", ["iterations"])

    p = add("sample", "由稀疏随机系数生成信号", "sample.csv")
    p.add_argument("filter", help="滤波器文件或经典小波名称")
    _add_schema_options(p, "analysis", ["length", "levels", "density", "zero_top_scales"])

    p = add("plot", "把 CSV 曲线绘制为 SVG", "plot.svg")
    p.add_argument("inputs", nargs="+", help="CSV 曲线文件（单列或 t,value 两列）")
    p.add_argument("--title", default=None, help="图标题")

    p = add("wav-ingest", "把 WAV 文件切分为数据集目录", "segments")
    p.add_argument("wav", help="16 位 PCM WAV 文件")
    _add_schema_options(p, "ingest")

    p = add("random", "生成满足小波约束的随机滤波器", "random_filter.json")
    _add_schema_options(p, "training", ["k"])

    p = sub.add_parser("rerun", parents=[common], help="按运行清单重新执行命令")
    p.add_argument("manifest", help="manifest.json 路径")
    p.add_argument("--out", default=None, help="改写输出位置（默认沿用清单中的位置）")
    p.set_defaults(handler=None)
    return parser


def setup_logging(verbose: bool = False, quiet: bool = False) -> None:
    """在 wavelearn 日志记录器上安装 stderr 处理器（重复调用会替换旧处理器）"""
    global _installed_handler
    if _installed_handler is not None:
        logger.removeHandler(_installed_handler)
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(asctime)s [%(levelname)s] %(name)s: %(message)s"))
    logger.addHandler(handler)
    _installed_handler = handler
    logger.setLevel(logging.DEBUG if verbose else logging.WARNING if quiet else logging.INFO)


def main(argv: Sequence[str] | None = None) -> int:
    """
    命令行主函数

    Returns:
        退出码：0 成功，2 用法或输入错误，1 内部错误
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE
    setup_logging(args.verbose, args.quiet)

    try:
        if args.command == "rerun":
            commands.rerun(args)
        else:
            commands.execute(args)
    except ConvergenceError as e:
        logger.error(f"{args.command} 未收敛: {e}")
        return EXIT_INTERNAL
    except USAGE_ERRORS as e:
        logger.error(f"{args.command} 失败: {e}")
        return EXIT_USAGE
    except Exception as e:
        logger.error(f"{args.command} 发生内部错误: {e}", exc_info=True)
        return EXIT_INTERNAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
