# wavelearn 命令行各子命令的实现
# main.py 只负责参数注册与分发，这里的函数接收已解析的 argparse.Namespace

import argparse
import logging
import os
import time
from collections.abc import Callable
from dataclasses import dataclass, field
from datetime import datetime
from pathlib import Path
from typing import Any

import numpy as np

from .. import __version__
from ..engine import analysis, datagen, filterbank, training, transform
from ..models.coefficients import FlatCoefficients
from ..models.filters import FilterPair
from ..models.run import RunManifest
from . import file_io, plotting
from .constants import (
    MANIFEST_FILE_NAME,
    PHI_FILE_NAME,
    PSI_FILE_NAME,
    RUN_CONFIG_FILE,
    RUN_FILTER_FILE,
    RUN_HISTORY_FILE,
    RUN_SEED_FILE,
)
from .errors import InvalidArgumentError
from .initialization import (
    build_synth_config,
    build_training_config,
    load_user_config,
    resolve_section,
    schema_items,
)

logger = logging.getLogger(__name__)

# 不写入运行清单的参数（只影响输出方式，不影响数据）
_UNRECORDED_ARGUMENTS = {"handler", "verbose", "quiet", "progress", "config", "command"}

# 除 --out 之外的输出位置参数，rerun 改写 --out 时随之迁移
_SIDE_OUTPUT_ARGUMENTS = ("aligned_out", "cascade_dir")


@dataclass
class CommandOutcome:
    """单个命令的执行结果，用于生成运行清单"""

    manifest_path: Path
    inputs: list[str] = field(default_factory=list)
    outputs: list[str] = field(default_factory=list)
    extra: dict[str, Any] = field(default_factory=dict)


def _json_value(value: Any) -> Any:
    if isinstance(value, Path):
        return str(value)
    if isinstance(value, tuple):
        return [_json_value(v) for v in value]
    if isinstance(value, list):
        return [_json_value(v) for v in value]
    if isinstance(value, np.generic):
        return value.item()
    return value


def recorded_arguments(args: argparse.Namespace) -> dict[str, Any]:
    """运行清单中保存的参数（默认值已展开）"""
    return {
        name: _json_value(value)
        for name, value in sorted(vars(args).items())
        if name not in _UNRECORDED_ARGUMENTS
    }


def _file_manifest_path(out: str | Path) -> Path:
    out = Path(out)
    return out.with_name(out.name + "." + MANIFEST_FILE_NAME)


def _resolve(args: argparse.Namespace, section: str, names: list[str] | None = None) -> dict[str, Any]:
    """把某个配置段的最终取值写回 args，使运行清单包含全部已展开的参数"""
    items = resolve_section(section, load_user_config(getattr(args, "config", None)))
    values = {}
    for name, default in items.items():
        if names is not None and name not in names:
            continue
        given = getattr(args, name, None)
        values[name] = default if given is None else given
        setattr(args, name, _json_value(values[name]))
    return values


def _resolve_seed(args: argparse.Namespace) -> int:
    if args.seed is None:
        args.seed = 0
    return args.seed


def execute(args: argparse.Namespace) -> RunManifest:
    """执行命令并原子写出运行清单"""
    started = time.perf_counter()
    outcome: CommandOutcome = args.handler(args)
    manifest = RunManifest(
        command=args.command,
        arguments=recorded_arguments(args),
        seed=args.seed,
        version=__version__,
        inputs=outcome.inputs,
        outputs=outcome.outputs,
        duration_seconds=round(time.perf_counter() - started, 6),
        created_at=datetime.now().isoformat(timespec="seconds"),
        extra=outcome.extra,
    )
    file_io.write_manifest(outcome.manifest_path, manifest)
    logger.info(f"命令 {args.command} 完成，用时 {manifest.duration_seconds:.3f}s，清单: {outcome.manifest_path}")
    return manifest


# ------ synth ------
def synth_cmd_impl(args: argparse.Namespace) -> CommandOutcome:
    """[实现] 生成合成谐波数据集"""
    seed = _resolve_seed(args)
    config = build_synth_config(
        user_config=load_user_config(args.config),
        overrides=_overrides(args, "synth"),
        seed=seed,
    )
    for name, value in config.to_dict().items():
        setattr(args, name, value)
    signals = datagen.make_dataset(config, progress=args.progress)
    out = Path(args.out)
    paths = file_io.write_dataset(out, signals, config.to_dict())
    return CommandOutcome(
        manifest_path=out / MANIFEST_FILE_NAME,
        outputs=[str(p) for p in paths],
        extra={"count": len(signals), "length": config.length},
    )


def _overrides(args: argparse.Namespace, section: str) -> dict[str, Any]:
    return {name: getattr(args, name, None) for name in schema_items(section)}


# ------ train ------
def train_cmd_impl(args: argparse.Namespace) -> CommandOutcome:
    """[实现] 在数据集上训练滤波器"""
    seed = _resolve_seed(args)
    config = build_training_config(
        user_config=load_user_config(args.config),
        overrides=_overrides(args, "training"),
        seed=seed,
    )
    for name, value in config.to_dict().items():
        setattr(args, name, value)
    signals = file_io.read_dataset(args.dataset)
    init = file_io.resolve_filter(args.init_filter) if args.init_filter else None

    history = training.train(signals, config, init=init, progress=args.progress)

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    outputs = [
        file_io.write_key_values(out / RUN_CONFIG_FILE, config.to_dict()),
        file_io.write_history(out / RUN_HISTORY_FILE, history.records),
        file_io.save_filter(history.final_h, out / RUN_FILTER_FILE),
        file_io.atomic_write_text(out / RUN_SEED_FILE, f"{config.seed}\n"),
    ]
    last = history.records[-1]
    constraint = filterbank.wavelet_loss(history.final_h).total
    print(
        f"最终损失 total={last.total:.6g} recon={last.reconstruction:.6g} "
        f"sparsity={last.sparsity:.6g} constraint={last.constraint:.6g} "
        f"(L_w={constraint:.3e}, steps={history.steps}, {history.stop_reason})"
    )
    inputs = [str(args.dataset)] + ([str(args.init_filter)] if args.init_filter else [])
    return CommandOutcome(
        manifest_path=out / MANIFEST_FILE_NAME,
        inputs=inputs,
        outputs=[str(p) for p in outputs],
        extra={"steps": history.steps, "converged": history.converged, "final_constraint": constraint},
    )


# ------ transform / reconstruct ------
def transform_cmd_impl(args: argparse.Namespace) -> CommandOutcome:
    """[实现] 信号 → 系数文件"""
    _resolve_seed(args)
    levels = _resolve(args, "transform")["levels"]
    x = transform.as_signal(file_io.read_signal(args.signal))
    h = file_io.resolve_filter(args.filter)
    decomp = transform.dwt(x, FilterPair(h), levels)
    energies = transform.level_energies(decomp)
    logger.info("各频带能量: " + ", ".join(f"{band}={value:.6g}" for band, value in energies.items()))
    out = file_io.write_coefficients(args.out, transform.flatten(decomp), h.k, h.name)
    return CommandOutcome(
        manifest_path=_file_manifest_path(out),
        inputs=[str(args.signal), str(args.filter)],
        outputs=[str(out)],
        extra={"energies": energies},
    )


def reconstruct_cmd_impl(args: argparse.Namespace) -> CommandOutcome:
    """[实现] 系数文件 → 信号"""
    _resolve_seed(args)
    flat, header = file_io.read_coefficients(args.coefficients)
    h = file_io.resolve_filter(args.filter)
    if h.k != header.k or h.name != header.filter_name:
        logger.warning(
            f"系数文件记录的滤波器为 {header.filter_name}（k={header.k}），"
            f"当前使用 {h.name}（k={h.k}）"
        )
    decomp = transform.unflatten(flat, header.levels)
    x = transform.idwt(decomp, FilterPair(h))
    out = file_io.write_signal(args.out, x)
    return CommandOutcome(
        manifest_path=_file_manifest_path(out),
        inputs=[str(args.coefficients), str(args.filter)],
        outputs=[str(out)],
    )


# ------ cascade / compare / sample ------
def _write_cascade(h, iterations: int, directory: Path) -> tuple[list[Path], float | None]:
    phi, psi = analysis.cascade(h, iterations)
    paths = [
        file_io.write_sampled_function(directory / PHI_FILE_NAME, phi),
        file_io.write_sampled_function(directory / PSI_FILE_NAME, psi),
    ]
    if phi.convergence_delta is not None:
        logger.info(f"{h.name}: 级联算法相邻两次迭代的最大差 {phi.convergence_delta:.3e}")
    return paths, phi.convergence_delta


def cascade_cmd_impl(args: argparse.Namespace) -> CommandOutcome:
    """[实现] 级联算法生成 φ / ψ 采样"""
    _resolve_seed(args)
    iterations = _resolve(args, "analysis", ["iterations"])["iterations"]
    h = file_io.resolve_filter(args.filter)
    out = Path(args.out)
    paths, delta = _write_cascade(h, iterations, out)
    return CommandOutcome(
        manifest_path=out / MANIFEST_FILE_NAME,
        inputs=[str(args.filter)],
        outputs=[str(p) for p in paths],
        extra={"convergence_delta": delta},
    )


def format_match_table(matches) -> str:
    """排名表：rank, family, order, distance（6 位小数）"""
    lines = [f"{'rank':<6}{'family':<12}{'order':<7}distance"]
    for rank, match in enumerate(matches, start=1):
        lines.append(
            f"{rank:<6}{match.id.family.display_name:<12}{match.id.order:<7}{match.distance:.6f}"
        )
    return "\n".join(lines) + "\n"


def compare_cmd_impl(args: argparse.Namespace) -> CommandOutcome:
    """[实现] 与经典小波库比较"""
    _resolve_seed(args)
    iterations = _resolve(args, "analysis", ["iterations"])["iterations"]
    h = file_io.resolve_filter(args.filter)
    matches = analysis.closest_wavelet(h)
    table = format_match_table(matches)
    print(table, end="")
    out = file_io.atomic_write_text(args.out, table)
    outputs = [out]

    best = matches[0]
    classical = filterbank.classical_filter(best.id)
    if args.aligned_out:
        alignment = analysis.align_filters(h, classical)
        outputs.append(
            file_io.write_columns(
                args.aligned_out,
                ["index", "learned", best.id.name],
                [np.arange(alignment.reference.shape[0]), alignment.reference, alignment.aligned],
            )
        )
    if args.cascade_dir:
        paths, _ = _write_cascade(classical, iterations, Path(args.cascade_dir))
        outputs.extend(paths)
    return CommandOutcome(
        manifest_path=_file_manifest_path(out),
        inputs=[str(args.filter)],
        outputs=[str(p) for p in outputs],
        extra={"best": best.id.name, "distance": best.distance},
    )


def sample_cmd_impl(args: argparse.Namespace) -> CommandOutcome:
    """[实现] 稀疏系数生成信号"""
    seed = _resolve_seed(args)
    values = _resolve(args, "analysis", ["length", "levels", "density", "zero_top_scales"])
    h = file_io.resolve_filter(args.filter)
    x = analysis.sample_signal(
        FilterPair(h),
        values["length"],
        values["levels"],
        density=values["density"],
        zero_top_scales=values["zero_top_scales"],
        seed=seed,
    )
    out = file_io.write_signal(args.out, x)
    return CommandOutcome(
        manifest_path=_file_manifest_path(out),
        inputs=[str(args.filter)],
        outputs=[str(out)],
    )


# ------ plot ------
def plot_cmd_impl(args: argparse.Namespace) -> CommandOutcome:
    """[实现] CSV 曲线 → SVG"""
    _resolve_seed(args)
    out = plotting.plot_files(args.inputs, args.out, title=args.title or "")
    return CommandOutcome(
        manifest_path=_file_manifest_path(out),
        inputs=[str(p) for p in args.inputs],
        outputs=[str(out)],
    )


# ------ wav-ingest ------
def wav_ingest_cmd_impl(args: argparse.Namespace) -> CommandOutcome:
    """[实现] WAV 切片为数据集目录"""
    _resolve_seed(args)
    values = _resolve(args, "ingest")
    if values["hop"] is None:
        values["hop"] = values["length"]
        args.hop = values["hop"]
    segments = datagen.load_wav_segments(args.wav, values["length"], values["hop"])
    if not segments:
        raise InvalidArgumentError(f"{args.wav} 中没有完整的长度 {values['length']} 的片段")
    out = Path(args.out)
    paths = file_io.write_dataset(out, segments, {"source": str(args.wav), **values})
    return CommandOutcome(
        manifest_path=out / MANIFEST_FILE_NAME,
        inputs=[str(args.wav)],
        outputs=[str(p) for p in paths],
        extra={"count": len(segments)},
    )


# ------ random ------
def random_cmd_impl(args: argparse.Namespace) -> CommandOutcome:
    """[实现] 随机约束小波"""
    seed = _resolve_seed(args)
    k = _resolve(args, "training", ["k"])["k"]
    h = datagen.random_wavelet(k, seed)
    out = file_io.save_filter(h, args.out)
    return CommandOutcome(
        manifest_path=_file_manifest_path(out),
        outputs=[str(out)],
        extra={"constraint": filterbank.wavelet_loss(h).total},
    )


COMMAND_HANDLERS: dict[str, Callable[[argparse.Namespace], CommandOutcome]] = {
    "synth": synth_cmd_impl,
    "train": train_cmd_impl,
    "transform": transform_cmd_impl,
    "reconstruct": reconstruct_cmd_impl,
    "cascade": cascade_cmd_impl,
    "compare": compare_cmd_impl,
    "sample": sample_cmd_impl,
    "plot": plot_cmd_impl,
    "wav-ingest": wav_ingest_cmd_impl,
    "random": random_cmd_impl,
}


# ------ rerun ------
def _relocate_outputs(recorded: argparse.Namespace, new_out: str | Path) -> None:
    """
    把 --out 改写为 new_out，附属输出保持相对原 --out 所在目录的位置

    附属输出不在原 --out 目录之下时，只保留文件名放到新目录。
    """
    old_base = Path(recorded.out).parent
    new_base = Path(new_out).parent
    recorded.out = str(new_out)
    for name in _SIDE_OUTPUT_ARGUMENTS:
        old = getattr(recorded, name, None)
        if not old:
            continue
        relative = os.path.relpath(old, old_base)
        if relative.startswith(os.pardir):
            relative = Path(old).name
        setattr(recorded, name, str(new_base / relative))
        logger.info(f"附属输出 {name}: {old} -> {getattr(recorded, name)}")


def rerun(args: argparse.Namespace) -> RunManifest:
    """按运行清单中记录的参数重新执行命令，--out 可改写输出位置"""
    manifest = file_io.read_manifest(args.manifest)
    handler = COMMAND_HANDLERS.get(manifest.command)
    if handler is None:
        raise InvalidArgumentError(f"运行清单中的命令 {manifest.command!r} 无法重新执行")
    recorded = argparse.Namespace(**manifest.arguments)
    recorded.command = manifest.command
    recorded.handler = handler
    recorded.config = None
    recorded.progress = args.progress
    if args.out:
        _relocate_outputs(recorded, args.out)
    logger.info(f"按 {args.manifest} 重新执行命令 {manifest.command}")
    return execute(recorded)
