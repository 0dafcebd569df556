"""
wavelearn 常量定义
"""

import math

# --- 滤波器相关常量 ---
SQRT2 = math.sqrt(2.0)
DEFAULT_FILTER_LENGTH = 20  # 学习到的滤波器长度 k
FILTER_FILE_SUFFIX = ".json"

# --- 变换相关常量 ---
DEFAULT_LEVELS = 6  # 默认分解层数 J（N=1024 时）

# --- 训练相关常量 ---
DEFAULT_LAMBDA1 = 0.5  # 稀疏项权重
DEFAULT_LAMBDA2 = 0.5  # 小波约束项权重
DEFAULT_BATCH_SIZE = 32
DEFAULT_LEARNING_RATE = 1e-3
DEFAULT_ADAM_BETA1 = 0.9
DEFAULT_ADAM_BETA2 = 0.999
DEFAULT_ADAM_EPS = 1e-8
DEFAULT_MAX_STEPS = 50000
DEFAULT_CONVERGENCE_TOL = 1e-5
DEFAULT_CONVERGENCE_WINDOW = 500  # 收敛判断的滑动窗口（步）
DEFAULT_SEED = 0

# --- 约束搜索（随机小波）相关常量 ---
RANDOM_WAVELET_MAX_STEPS = 10000
RANDOM_WAVELET_TOL = 1e-8

# --- 梯度校验 ---
DEFAULT_FD_STEP = 1e-6
FD_RELATIVE_FLOOR = 1e-8  # 相对误差分母下限

# --- 合成数据相关常量 ---
DEFAULT_HARMONICS = 5  # K
DEFAULT_HARMONIC_PROB = 0.5  # p
DEFAULT_SIGNAL_LENGTH = 1024  # N
DEFAULT_DATASET_SIZE = 32000  # M
DEFAULT_CYCLES = 4  # 每个信号包含的基波周期数
DEFAULT_WINDOW_COUNT_RANGE = (1, 3)  # 每个尺度的高斯窗数量范围（闭区间）
DEFAULT_WINDOW_STD_FRACTION = 0.1  # 窗口标准差 / N

# --- WAV 相关常量 ---
PCM16_SCALE = 32768.0  # 16 位 PCM 归一化系数
DEFAULT_SAMPLE_RATE = 16000  # 导出 WAV 时使用的采样率（不做重采样）

# --- 分析相关常量 ---
DEFAULT_CASCADE_ITERATIONS = 8
DEFAULT_SAMPLE_DENSITY = 0.05  # 生成信号时系数非零的概率
DEFAULT_ZERO_TOP_SCALES = 3  # 生成信号时置零的最高频尺度数
RANKING_DECIMALS = 12  # 排名时视为相等的距离精度

# --- 运行清单 ---
MANIFEST_FILE_NAME = "manifest.json"
SIGNAL_FILE_PATTERN = "signal_{index:05d}.csv"
DATASET_FILE_NAME = "dataset.json"
SIGNAL_FILE_GLOB = "signal_*.csv"

# --- 训练运行目录 ---
RUN_CONFIG_FILE = "config.txt"
RUN_HISTORY_FILE = "history.csv"
RUN_FILTER_FILE = "filter.json"
RUN_SEED_FILE = "seed"

# --- 级联输出 ---
PHI_FILE_NAME = "phi.csv"
PSI_FILE_NAME = "psi.csv"
