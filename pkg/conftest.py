import os
import sys

import pytest

# 让测试直接从仓库根目录导入 wavelearn
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="运行耗时较长的测试")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: 耗时较长的测试，需要 --runslow")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="需要 --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture(scope="session")
def desk_scale_history():
    """桌面规模训练：正弦谐波数据 M=2048, N=256, K=4, k=20, J=5, λ₁=λ₂=1/2, batch 32"""
    from wavelearn.engine.datagen import make_dataset
    from wavelearn.engine.training import train
    from wavelearn.models.datagen import SynthConfig
    from wavelearn.models.training import TrainingConfig

    synth = SynthConfig(harmonics=4, harmonic_prob=0.5, length=256, count=2048, cycles=4, seed=0)
    config = TrainingConfig(k=20, levels=5, lambda1=0.5, lambda2=0.5, batch_size=32, max_steps=20000)
    return config, train(make_dataset(synth), config)
