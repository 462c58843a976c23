#!/usr/bin/env python3
"""
JSON 编解码
矩阵以 {"dim": d, "entries": [re, im, re, im, ...]}（行优先、实虚交错）表示
"""

from typing import Any, Dict, List

import numpy as np

from ..core.exceptions import ValidationError
from .density import DensityOperator, Ensemble, Povm

_SQRT_HALF = np.sqrt(0.5)

# 单比特常用态的简写
KETS = {
    "0": np.array([1.0, 0.0], dtype=complex),
    "1": np.array([0.0, 1.0], dtype=complex),
    "+": np.array([_SQRT_HALF, _SQRT_HALF], dtype=complex),
    "-": np.array([_SQRT_HALF, -_SQRT_HALF], dtype=complex),
    "+i": np.array([_SQRT_HALF, 1j * _SQRT_HALF], dtype=complex),
    "-i": np.array([_SQRT_HALF, -1j * _SQRT_HALF], dtype=complex),
}


def interleave(values: np.ndarray) -> List[float]:
    flat = np.asarray(values, dtype=complex).reshape(-1)
    out = np.empty(2 * flat.size, dtype=float)
    out[0::2] = flat.real
    out[1::2] = flat.imag
    return out.tolist()


def deinterleave(values: List[float]) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 1 or arr.size % 2:
        raise ValidationError("interleaved entries must be a flat list of even length")
    return arr[0::2] + 1j * arr[1::2]


def matrix_to_dict(matrix: np.ndarray) -> Dict[str, Any]:
    return {"dim": int(matrix.shape[0]), "entries": interleave(matrix)}


def matrix_from_dict(obj: Dict[str, Any]) -> np.ndarray:
    dim = int(obj["dim"])
    flat = deinterleave(obj["entries"])
    if flat.size != dim * dim:
        raise ValidationError(f"expected {dim * dim} complex entries for dim {dim}, got {flat.size}")
    return flat.reshape(dim, dim)


def state_to_dict(rho: DensityOperator) -> Dict[str, Any]:
    return matrix_to_dict(np.asarray(rho.matrix))


def ket_vector(label: str) -> np.ndarray:
    if label not in KETS:
        raise ValidationError(f"unknown ket '{label}', expected one of {sorted(KETS)}")
    return KETS[label].copy()


def vector_from_spec(obj: Any) -> np.ndarray:
    """{"ket": "+"} 或 {"vector": [re, im, ...]}"""
    if isinstance(obj, dict) and "ket" in obj:
        return ket_vector(str(obj["ket"]))
    if isinstance(obj, dict) and "vector" in obj:
        return deinterleave(obj["vector"])
    raise ValidationError(f"cannot read a state vector from {obj!r}")


def state_from_spec(obj: Any) -> DensityOperator:
    """
    从场景 JSON 读取密度算子

    支持 {"dim", "entries"}、{"ket"}、{"vector"}、{"diag"} 四种写法。
    """
    if not isinstance(obj, dict):
        raise ValidationError(f"state must be a JSON object, got {type(obj).__name__}")
    if "entries" in obj:
        return DensityOperator.from_matrix(matrix_from_dict(obj))
    if "ket" in obj or "vector" in obj:
        return DensityOperator.pure(vector_from_spec(obj))
    if "diag" in obj:
        return DensityOperator.diagonal(obj["diag"])
    raise ValidationError(f"unrecognized state notation with keys {sorted(obj)}")


def ensemble_to_dict(ensemble: Ensemble) -> Dict[str, Any]:
    return {"members": [{"weight": p, "state": state_to_dict(s)} for p, s in ensemble.members]}


def ensemble_from_spec(obj: Any) -> Ensemble:
    if not isinstance(obj, dict) or not isinstance(obj.get("members"), list):
        raise ValidationError("ensemble must be an object with a 'members' list")
    pairs = []
    for member in obj["members"]:
        pairs.append((float(member["weight"]), state_from_spec(member["state"])))
    return Ensemble.from_pairs(pairs)


def povm_to_dict(povm: Povm) -> Dict[str, Any]:
    return {"dim": povm.dim, "operators": [interleave(m) for m in povm.operators]}


def povm_from_dict(obj: Dict[str, Any]) -> Povm:
    dim = int(obj["dim"])
    operators = [deinterleave(op) for op in obj["operators"]]
    for op in operators:
        if op.size != dim * dim:
            raise ValidationError(f"expected {dim * dim} complex entries per operator for dim {dim}, got {op.size}")
    return Povm.from_operators([op.reshape(dim, dim) for op in operators])
