"""
wavelearn - 从原始信号中学习小波滤波器
"""

__version__ = "0.1.0"
