# services/transform_service.py
"""
Vilenkin–Chrestenson (VC) 変換。

    順変換: a_{γ*} = m^{-n} Σ_{γ∈H_n} b_γ conj(χ(M^{-n}γ, γ*))
    逆変換: b_γ   = m^{-n} Σ_{γ*∈H*_n} a_{γ*} χ(M^{-n}γ, γ*)

係数の並びはどちらの側も m 進の添字順（k ↔ γ_[k]、α ↔ γ*_[α]）。

正規化について:
両方の式に m^{-n} が付いているため、式どおりに順変換→逆変換を行うと
入力の m^{-n} 倍が戻る（n = 1, d = 1, M = 2 で b = (1, 0) → a = (1/2, 1/2) → (1/2, 0)）。
式は書き換えず、この定数を roundtrip_constant(m, n) = m^{-n} として公開する。
変換行列 V は V V† = m^{-n} I を満たす。
"""

import logging
from functools import lru_cache
from typing import Optional

import numpy as np

from models.digits import DigitSet
from models.step_function import SIDE_FREQUENCY, SIDE_TIME, SpectrumVector
from models.errors import LengthMismatch
from services.characters import digit_char_array, grid_exponents, root_table

FORWARD = "forward"
INVERSE = "inverse"
DIRECTIONS = (FORWARD, INVERSE)

# 素朴な変換で一度に作る核行列の要素数の上限
_NAIVE_CHUNK_ELEMENTS = 1 << 20


def roundtrip_constant(m: int, n: int) -> float:
    """式どおりの逆変換∘順変換 = c·恒等写像 となる定数 c = m^{-n}。"""
    return float(m) ** (-n)


def _check_direction(direction: str):
    if direction not in DIRECTIONS:
        raise ValueError(f"不明な変換方向 '{direction}' です（forward / inverse）。")


def _output_side(direction: str) -> str:
    return SIDE_FREQUENCY if direction == FORWARD else SIDE_TIME


# --- 素朴な変換（高速変換の検証用） ---

def vc_naive_many(values: np.ndarray, n: int, digit_set: DigitSet, dual_digit_set: DigitSet,
                  direction: str = FORWARD) -> np.ndarray:
    """
    核 χ(M^{-n}γ_[k], γ*_[α]) を直接並べた O(m^{2n}) の変換。
    values は長さ m^n のベクトル、または列ごとに m^n 個の係数を並べた行列。
    核行列は行ごとに分割して作り、メモリの使用量を抑える。

    【エラー処理】
    - 行数が m^n でない場合は LengthMismatch
    - 不明な direction は ValueError
    """
    _check_direction(direction)
    m = digit_set.m
    size = m ** n
    data = np.asarray(values, dtype=np.complex128)
    if data.shape[0] != size:
        raise LengthMismatch(f"入力の長さ {data.shape[0]} が m^n = {size} と一致しません。")
    roots = root_table(m)
    out = np.zeros_like(data)
    step = max(1, _NAIVE_CHUNK_ELEMENTS // size)
    for start in range(0, size, step):
        rows = slice(start, min(start + step, size))
        kernel = roots[grid_exponents(n, digit_set, dual_digit_set, rows)]
        if direction == FORWARD:
            # a_α += Σ_{k∈rows} b_k conj(W[k, α])
            out += kernel.conj().T @ data[rows]
        else:
            # b_k = Σ_α W[k, α] a_α
            out[rows] = kernel @ data
    return out / float(size)


def vc_forward_naive(b: SpectrumVector, digit_set: DigitSet, dual_digit_set: DigitSet) -> SpectrumVector:
    """順変換を定義どおりの二重和で計算する（高速変換の正解値）。"""
    a = vc_naive_many(b.coefficients, b.n, digit_set, dual_digit_set, FORWARD)
    return SpectrumVector(b.n, a, b.m, SIDE_FREQUENCY)


def vc_inverse_naive(a: SpectrumVector, digit_set: DigitSet, dual_digit_set: DigitSet) -> SpectrumVector:
    """逆変換を定義どおりの二重和で計算する（m^{-n} の正規化は式のまま）。"""
    b = vc_naive_many(a.coefficients, a.n, digit_set, dual_digit_set, INVERSE)
    return SpectrumVector(a.n, b, a.m, SIDE_TIME)


# --- 高速変換 ---

@lru_cache(maxsize=None)
def digit_reversal_permutation(m: int, n: int) -> np.ndarray:
    """
    perm[α] = α の n 桁の m 進表現を反転した添字。
    段ごとの計算結果の並び（桁が逆順）を m 進の添字順に戻すのに使う。
    (m, n) ごとに一度だけ作る。
    """
    idx = np.arange(m ** n, dtype=np.int64)
    perm = np.zeros_like(idx)
    for i in range(n):
        perm = perm * m + (idx // m ** i) % m
    perm.flags.writeable = False
    return perm


def butterfly_matrix(digit_set: DigitSet, dual_digit_set: DigitSet, direction: str = FORWARD) -> np.ndarray:
    """m 点バタフライ F[a, b] = exp(∓2πi⟨M^{-1}s_a, s*_b⟩)（順変換は共役）。"""
    _check_direction(direction)
    kernel = root_table(digit_set.m)[digit_char_array(digit_set, dual_digit_set)]
    return kernel.conj() if direction == FORWARD else kernel


def vc_fast_array(values: np.ndarray, n: int, digit_set: DigitSet, dual_digit_set: DigitSet,
                  direction: str = FORWARD) -> np.ndarray:
    """
    基数 m の時間間引きによる高速 VC 変換。

    H_n の元は γ + M^{n-1}s（γ ∈ H_{n-1}, s ∈ D）と書けるので、核は桁ごとの
    m×m 行列の積に分解でき、各段のひねり因子 χ(M^{-n}s, γ*) は 1 になる。
    n 段それぞれで m^{n-1} 個の独立な m 点バタフライを計算し（O(n m^{n+1})）、
    最後に桁反転置換で添字順に並べ直す。

    Args:
        values: 長さ m^n の係数（m 進の添字順）。
        n (int): スケール。
        direction (str): FORWARD（共役核）または INVERSE。

    Returns:
        np.ndarray: 変換後の m^n 個の係数。naive と同じく m^{-n} の正規化を含む。

    【エラー処理】
    長さが m^n でない場合は LengthMismatch。
    """
    m = digit_set.m
    size = m ** n
    data = np.asarray(values, dtype=np.complex128).reshape(-1)
    if data.size != size:
        raise LengthMismatch(f"入力の長さ {data.size} が m^n = {size} と一致しません。")
    butterfly = butterfly_matrix(digit_set, dual_digit_set, direction)
    work = data.copy()
    for stage in range(n):
        # 中央の軸は添字の桁 k_{n-1-stage}。変換後は出力の桁 α_stage になる
        blocks = work.reshape(m ** stage, m, m ** (n - 1 - stage))
        work = np.einsum("ab,iaj->ibj", butterfly, blocks).reshape(-1)
    return work[digit_reversal_permutation(m, n)] / float(size)


def vc_fast(v: SpectrumVector, digit_set: DigitSet, dual_digit_set: DigitSet,
            direction: str = FORWARD) -> SpectrumVector:
    """高速 VC 変換。出力は素朴な変換と 1e-10 の相対誤差で一致する。"""
    _check_direction(direction)
    logging.debug("高速VC変換: n=%d, m=%d, direction=%s", v.n, v.m, direction)
    out = vc_fast_array(v.coefficients, v.n, digit_set, dual_digit_set, direction)
    return SpectrumVector(v.n, out, v.m, _output_side(direction))


def vc_matrix(n: int, digit_set: DigitSet, dual_digit_set: DigitSet, direction: str = FORWARD) -> np.ndarray:
    """変換行列（順変換なら V[α, k]、逆変換なら V[k, α]）。"""
    _check_direction(direction)
    kernel = root_table(digit_set.m)[grid_exponents(n, digit_set, dual_digit_set)]
    matrix = kernel.conj().T if direction == FORWARD else kernel
    return matrix / float(digit_set.m ** n)


def walsh_coefficients(values: np.ndarray, n: int, digit_set: DigitSet,
                       dual_digit_set: DigitSet, naive: Optional[bool] = False) -> np.ndarray:
    """
    スケール n の格子点上の値 b_k から、b_k = Σ_{α<m^n} a_α W_α(M^{-n}γ_[k]) となる
    Walsh 多項式の係数 a を求める（式どおりの順変換がそのまま係数を与える）。
    """
    if naive:
        return vc_naive_many(values, n, digit_set, dual_digit_set, FORWARD)
    return vc_fast_array(values, n, digit_set, dual_digit_set, FORWARD)
