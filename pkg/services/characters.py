# services/characters.py
"""
指標 χ(x, ω) と Walsh 関数の厳密な評価。

χ の値は常に 1 の m 乗根なので、値そのものではなく指数 e ∈ Z/m（CharValue）で扱う。
⟨M^{-1}s, t⟩ = ⟨adj(M) s, t⟩ / det(M) であり、det = σm（σ = ±1）だから
exp(2πi ⟨M^{-1}s, t⟩) = exp(2πi (σ⟨adj(M) s, t⟩ mod m) / m) となる。
"""

import logging
from functools import lru_cache
from typing import Dict, List, Sequence, Tuple, Union

import numpy as np

import config
from models.digits import DigitSet, GridPoint, MPoint
from models.errors import ScaleTooCoarse, SpaceMismatch
from models.intlinalg import DilationMatrix
from utils import dot, mat_vec, to_base_m


@lru_cache(maxsize=None)
def root_table(m: int) -> np.ndarray:
    """exp(2πi e/m)（e = 0..m-1）の表。一度だけ計算する。"""
    table = np.exp(2j * np.pi * np.arange(m) / m)
    table.flags.writeable = False
    return table


class CharValue:
    """1 の m 乗根 exp(2πi e/m) を指数 e で表したもの。積は指数の和になる。"""

    __slots__ = ("exponent", "m")

    def __init__(self, exponent: int, m: int):
        self.m = int(m)
        self.exponent = int(exponent) % self.m

    def __mul__(self, other: "CharValue") -> "CharValue":
        if self.m != other.m:
            raise ValueError(f"異なる位数 {self.m}, {other.m} の指標値は掛けられません。")
        return CharValue(self.exponent + other.exponent, self.m)

    def conjugate(self) -> "CharValue":
        return CharValue(-self.exponent, self.m)

    def to_complex(self) -> complex:
        return complex(root_table(self.m)[self.exponent])

    def __eq__(self, other) -> bool:
        return isinstance(other, CharValue) and (self.m, self.exponent) == (other.m, other.exponent)

    def __hash__(self) -> int:
        return hash((self.m, self.exponent))

    def __repr__(self) -> str:
        return f"CharValue({self.exponent}/{self.m})"


# --- 数字どうしの指標 ---

def digit_char(s: Sequence[int], t: Sequence[int], matrix: DilationMatrix) -> CharValue:
    """exp(2πi ⟨M^{-1}s, t⟩) の指数 σ⟨adj(M)s, t⟩ mod m。"""
    return CharValue(matrix.sign * dot(mat_vec(matrix.adjugate, s), t), matrix.m)


def _check_dual_pair(digit_set: DigitSet, dual_digit_set: DigitSet):
    if not dual_digit_set.matrix.is_transpose_of(digit_set.matrix):
        raise SpaceMismatch("双対側の数字集合が M* の数字集合ではありません。")


@lru_cache(maxsize=None)
def digit_char_matrix(digit_set: DigitSet, dual_digit_set: DigitSet) -> Tuple[Tuple[int, ...], ...]:
    """m×m の指数表 T[i][j] = digit_char(s_i, s*_j) の指数。"""
    _check_dual_pair(digit_set, dual_digit_set)
    matrix = digit_set.matrix
    return tuple(tuple(digit_char(s, t, matrix).exponent for t in dual_digit_set) for s in digit_set)


def digit_char_array(digit_set: DigitSet, dual_digit_set: DigitSet) -> np.ndarray:
    table = np.array(digit_char_matrix(digit_set, dual_digit_set), dtype=np.int64)
    return table.reshape(digit_set.m, dual_digit_set.m)


# --- 1 の冪根の和 ---

def _prime_factors(m: int) -> List[int]:
    factors, q = [], 2
    while q * q <= m:
        if m % q == 0:
            factors.append(q)
            while m % q == 0:
                m //= q
        q += 1
    if m > 1:
        factors.append(m)
    return factors


def exact_root_sum(histogram: Sequence[int], m: int) -> complex:
    """
    指数のヒストグラム h[e] に対して Σ h[e]·exp(2πi e/m) を返す。

    全て指数 0 なら個数そのもの、h が Z/m の非自明な部分群の剰余類の和集合なら
    ちょうど 0 を返す。それ以外は浮動小数点で計算した値をそのまま返し、丸めない。
    """
    hist = [int(h) for h in histogram]
    total = sum(hist)
    if hist[0] == total:
        return complex(total)
    for q in _prime_factors(m):
        step = m // q
        if all(hist[e] == hist[(e + step) % m] for e in range(m)):
            return 0j
    value = complex(np.dot(np.array(hist, dtype=float), root_table(m)))
    logging.debug("1 の冪根の和が厳密に決まりませんでした: %s", value)
    return value


def char_sum(l: Sequence[int], dual_digit_set: DigitSet) -> complex:
    """
    Σ_{s*∈D*} exp(2πi ⟨M^{-1} l, s*⟩)。
    l ≡ 0 (mod M) なら m、そうでなければ 0 になる（正しい数字集合の場合）。
    """
    matrix = dual_digit_set.matrix.transpose()
    m = matrix.m
    adj_l = mat_vec(matrix.adjugate, l)
    hist = [0] * m
    for t in dual_digit_set:
        hist[(matrix.sign * dot(adj_l, t)) % m] += 1
    return exact_root_sum(hist, m)


def unitary_gram(digit_set: DigitSet, dual_digit_set: DigitSet) -> np.ndarray:
    """
    行列 (exp(2πi⟨M^{-1}s_i, s*_j⟩)/√m) のグラム行列。
    成分は char_sum(s_i - s_k)/m なので厳密に単位行列になるはず。
    """
    m = digit_set.m
    gram = np.zeros((m, m), dtype=np.complex128)
    for i, s in enumerate(digit_set):
        for k, t in enumerate(digit_set):
            gram[i, k] = char_sum(tuple(a - b for a, b in zip(s, t)), dual_digit_set) / m
    return gram


# --- 点どうしの指標 ---

def chi(x: MPoint, omega: MPoint) -> CharValue:
    """
    χ(x, ω) = exp(2πi Σ_j ⟨M^{-1} x_j, ω_{1-j}⟩)。
    位置 j の x の桁と位置 1-j の ω の桁を組にする。
    """
    if x.space != config.STEP_SPACE_PRIMAL or omega.space != config.STEP_SPACE_DUAL:
        raise SpaceMismatch(f"χ は X × X* 上で定義されます（{x.space}, {omega.space} が渡されました）。")
    table = digit_char_matrix(x.digit_set, omega.digit_set)
    w: Dict[int, int] = omega.as_dict()
    exponent = 0
    for j, d in x.digits:
        t = w.get(1 - j)
        if t:
            exponent += table[d][t]
    return CharValue(exponent, x.digit_set.m)


def dual_gamma_point(alpha: int, dual_digit_set: DigitSet) -> MPoint:
    """γ*_[α] を双対側の点として返す（α の桁 α_i を位置 -i に置く）。"""
    return GridPoint(0, alpha).to_point(dual_digit_set, config.STEP_SPACE_DUAL)


def walsh_eval(alpha: int, x: MPoint, dual_digit_set: DigitSet) -> CharValue:
    """W_α(x) = χ(x, γ*_[α])。"""
    if alpha < 0:
        raise ValueError(f"Walsh 関数の番号 {alpha} は非負である必要があります。")
    return chi(x, dual_gamma_point(alpha, dual_digit_set))


def walsh_polynomial(coefficients: Sequence[complex], x: MPoint, dual_digit_set: DigitSet) -> complex:
    """Walsh 多項式 Σ a_α W_α(x) の値。"""
    return complex(sum(a * walsh_eval(alpha, x, dual_digit_set).to_complex()
                       for alpha, a in enumerate(coefficients) if a != 0))


def walsh_polynomial_order(coefficients: Sequence[complex], m: int) -> int:
    """
    Walsh 多項式の次数 n（a_j ≠ 0 となる j が [m^{n-1}, m^n) にある最大の n）。
    定数（a_0 のみ）なら 0。
    """
    order = 0
    for j, a in enumerate(coefficients):
        if a != 0 and j > 0:
            order = max(order, len(to_base_m(j, m)))
    return order


# --- 格子点上の指数行列 ---

def _digits_of(indices: np.ndarray, m: int, n: int) -> np.ndarray:
    """添字の配列を m 進の桁（下位から n 桁）の列に分解する。"""
    if n == 0:
        return np.zeros((indices.size, 0), dtype=np.int64)
    return np.stack([(indices // m ** i) % m for i in range(n)], axis=1)


def grid_exponents(n: int, digit_set: DigitSet, dual_digit_set: DigitSet,
                   rows: Union[slice, None] = None) -> np.ndarray:
    """
    E[k, α] = χ(M^{-n}γ_[k], γ*_[α]) の指数（0 ≤ k, α < m^n）。

    M^{-n}γ_[k] の桁 k_i は位置 n-i、γ*_[α] の桁 α_i' は位置 -i' にあり、
    j ↔ 1-j の組み合わせから i' = n-1-i となる。
    rows を指定すると k の範囲を絞った部分行列を返す。
    """
    m = digit_set.m
    size = m ** n
    table = digit_char_array(digit_set, dual_digit_set)
    k_range = np.arange(size, dtype=np.int64)
    if rows is not None:
        k_range = k_range[rows]
    k_digits = _digits_of(k_range, m, n)
    a_digits = _digits_of(np.arange(size, dtype=np.int64), m, n)
    exponents = np.zeros((k_range.size, size), dtype=np.int64)
    for i in range(n):
        exponents += table[k_digits[:, i][:, None], a_digits[:, n - 1 - i][None, :]]
    return exponents % m


def walsh_gram(n: int, digit_set: DigitSet, dual_digit_set: DigitSet) -> np.ndarray:
    """
    格子上の Walsh 系のグラム行列 m^{-n} Σ_k W_α(x_k) conj(W_β(x_k))（x_k = M^{-n}γ_[k]）。
    指数の差のヒストグラムから厳密に計算する。
    """
    m = digit_set.m
    size = m ** n
    exponents = grid_exponents(n, digit_set, dual_digit_set)
    gram = np.zeros((size, size), dtype=np.complex128)
    for alpha in range(size):
        diffs = (exponents[:, alpha][:, None] - exponents) % m
        for beta in range(size):
            hist = np.bincount(diffs[:, beta], minlength=m)
            gram[alpha, beta] = exact_root_sum(hist, m) / size
    return gram


# --- 核の和 ---

def kernel_partition_sum(x: MPoint, n: int, dual_digit_set: DigitSet, k: int = 0) -> Union[int, complex]:
    """
    m^{-n} Σ_{γ*∈H*_n} conj(c_k(γ*)) χ(x, γ*)、c_k(γ*) = χ(M^{-n}γ_[k], γ*)。

    k = 0 では c_k ≡ 1 となり、x ∈ U_n なら 1、x ∈ U \\ U_n なら 0。
    一般の k では x ∈ U_{n,k} の指示関数になる。

    【エラー処理】
    x が U に属さない（位置 0 以下の桁を持つ）場合は ScaleTooCoarse。
    """
    if not x.in_tile():
        raise ScaleTooCoarse(f"点 {x} は U に属しません（位置 {x.min_position} に桁があります）。")
    m = dual_digit_set.m
    anchor = GridPoint(n, k).to_point(x.digit_set)
    hist = [0] * m
    for alpha in range(m ** n):
        omega = dual_gamma_point(alpha, dual_digit_set)
        exponent = chi(x, omega).exponent - chi(anchor, omega).exponent
        hist[exponent % m] += 1
    value = exact_root_sum(hist, m) / m ** n
    if value.imag == 0 and value.real in (0.0, 1.0):
        return int(value.real)
    return value


def cell_indicator(x: MPoint, n: int, k: int, dual_digit_set: DigitSet) -> Union[int, complex]:
    """1_{U_{n,k}}(x) を指標の和として評価する（kernel_partition_sum の k 指定版）。"""
    return kernel_partition_sum(x, n, dual_digit_set, k)
