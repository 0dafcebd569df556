"""
wavelearn 核心模块：常量、异常、配置、文件格式与命令实现
"""
