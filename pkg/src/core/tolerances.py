"""
数值容差
所有数值入口都以关键字参数接收这些值，此处只是默认值
"""

# 特征分解：V†V 正交性与重构误差
EIG_TOL = 1e-11
# Hermite 性校验：max |A - A†|
HERM_TOL = 1e-10
# 半正定裁剪：相对最大特征值模
PSD_CLIP_REL = 1e-10
# 迹归一化
TRACE_TOL = 1e-9
# POVM 完备性：max |Σ M†M - I|
POVM_TOL = 1e-8
# PGM 伪逆截断：相对 S 的最大特征值
PINV_CUTOFF_REL = 1e-10
# 求积质量
QUAD_TOL = 1e-8
# 内部交叉校验
CHECK_TOL = 1e-9

# Jacobi 迭代上限
JACOBI_MAX_SWEEPS = 100
