# services/fourier_service.py
"""
コンパクトな台を持つ階段関数上のフーリエ変換と、その恒等式（Poisson 和公式・
Plancherel・シフト定理）。

f ∈ S_n^{(p)}(X) に対して
    f̂(ω) = m^{-n} Σ_k f_{n,k} conj(χ(M^{-n}γ_[k], ω))   （ω ∈ (M*)^n U*、それ以外は 0）
であり、f̂ ∈ S_p^{(n)}(X*) となる。タイルの測度 μ(U) はセルの測度 m^{-n}μ(U) と
打ち消し合うので使わない。

双対側のセルの代表点 (M*)^{-p}γ*_[j] での値は、スケール N = n + p の核
χ(M^{-N}γ_[k], γ*_[j]) と同じ指数を持つので、VC 順変換に帰着する:
    f̂_j = m^{p} · vc_forward(f)_j
逆変換（g ∈ S_a^{(b)}(X*) → S_b^{(a)}(X)）も同様に
    ǧ_k = m^{b} · vc_inverse(g)_k
となり、この二つは互いにちょうど逆写像になる。
"""

import logging
from typing import Sequence, Tuple

import numpy as np

import config
from models.digits import DigitSet, GridPoint, MPoint, cell_of_point, h_point, oplus_index
from models.errors import ScaleContract, SpaceMismatch
from models.step_function import StepFunction, refine
from models.system import SystemConfig
from services.characters import chi
from services.transform_service import FORWARD, INVERSE, vc_fast_array, vc_naive_many
from utils import num_digits


def _transform(values: np.ndarray, scale: int, system: SystemConfig, direction: str, naive: bool) -> np.ndarray:
    if naive:
        return vc_naive_many(values, scale, system.digit_set, system.dual_digit_set, direction)
    return vc_fast_array(values, scale, system.digit_set, system.dual_digit_set, direction)


def _check_space(f: StepFunction, space: str):
    if f.space != space:
        raise SpaceMismatch(f"{space} 上の階段関数が必要です（{f.space} が渡されました）。")


def fourier_step(f: StepFunction, system: SystemConfig, naive: bool = False) -> StepFunction:
    """
    f ∈ S_n^{(p)}(X) のフーリエ変換 f̂ ∈ S_p^{(n)}(X*)。

    Args:
        f (StepFunction): X 上の階段関数。
        system (SystemConfig): 系 (M, D, D*)。
        naive (bool): True なら素朴な VC 変換を使う（検証用）。

    【エラー処理】
    - f が X 上の関数でない場合は SpaceMismatch
    - 出力のセル数が m^{n+p} と一致しない場合（内部の不整合）は ScaleContract
    """
    _check_space(f, config.STEP_SPACE_PRIMAL)
    scale = f.n + f.p
    logging.debug("フーリエ変換: (n, p) = (%d, %d)", f.n, f.p)
    values = _transform(np.asarray(f.coefficients), scale, system, FORWARD, naive)
    values = values * float(f.m) ** f.p
    if values.size != f.m ** scale:
        raise ScaleContract(f"出力のセル数 {values.size} が m^{scale} と一致しません。")
    return StepFunction(config.STEP_SPACE_DUAL, f.p, f.n, values, f.m)


def inverse_fourier_step(g: StepFunction, system: SystemConfig, naive: bool = False) -> StepFunction:
    """
    g ∈ S_a^{(b)}(X*) の逆フーリエ変換 ǧ ∈ S_b^{(a)}(X)。
    ǧ(x) = m^{-a} Σ_j g_j χ(x, (M*)^{-a}γ*_[j])（x ∈ M^a U、それ以外は 0）。
    """
    _check_space(g, config.STEP_SPACE_DUAL)
    scale = g.n + g.p
    values = _transform(np.asarray(g.coefficients), scale, system, INVERSE, naive)
    values = values * float(g.m) ** g.p
    if values.size != g.m ** scale:
        raise ScaleContract(f"出力のセル数 {values.size} が m^{scale} と一致しません。")
    return StepFunction(config.STEP_SPACE_PRIMAL, g.p, g.n, values, g.m)


def dual_anchor(j: int, scale: int, dual_digit_set: DigitSet) -> MPoint:
    """双対側のセル U*_{scale,j} の代表点 (M*)^{-scale}γ*_[j]。"""
    return GridPoint(scale, j).to_point(dual_digit_set, config.STEP_SPACE_DUAL)


# --- シフト ---

def shift_support_scale(f: StepFunction, gamma: Sequence[int], digit_set: DigitSet) -> Tuple[int, int]:
    """
    平行移動 γ のセル番号 idx_γ と、f(·⊕γ) の台を含む最小のスケール p′ を返す。
    p′ = max(p, idx_γ の桁数 - n)。
    """
    idx = cell_of_point(h_point(gamma, digit_set), f.n)
    return idx, max(f.p, num_digits(idx, f.m) - f.n)


def shift_step(f: StepFunction, gamma: Sequence[int], system: SystemConfig) -> StepFunction:
    """
    f(·⊕γ)（γ ∈ H）を階段関数として返す。

    x ∈ U_{n,k} なら x⊕γ ∈ U_{n,k⊕idx_γ} なので、新しい係数は g_k = f_{k⊕idx_γ}。
    k⊕idx_γ が元の台の外なら 0。台のスケールは必要な分だけ広げる。
    """
    _check_space(f, config.STEP_SPACE_PRIMAL)
    digit_set = system.digit_set
    idx, p_new = shift_support_scale(f, gamma, digit_set)
    size = f.m ** (f.n + p_new)
    source = np.asarray(f.coefficients)
    shifted = np.zeros(size, dtype=np.complex128)
    for k in range(size):
        target = oplus_index(k, idx, digit_set)
        if target < source.size:
            shifted[k] = source[target]
    logging.debug("シフト: γ=%s, idx=%d, p=%d → %d", tuple(gamma), idx, f.p, p_new)
    return StepFunction(f.space, f.n, p_new, shifted, f.m)


def shift_spectral_gap(f: StepFunction, gamma: Sequence[int], system: SystemConfig) -> float:
    """
    (f(·⊕γ))^(ω) と f̂(ω)χ(γ, ω) の差の最大値を、双対側の全てのセルの代表点で求める。
    """
    shifted_hat = fourier_step(shift_step(f, gamma, system), system)
    f_hat = refine(fourier_step(f, system), shifted_hat.n, shifted_hat.p)
    gamma_point = h_point(gamma, system.digit_set)
    gap = 0.0
    for j in range(shifted_hat.cell_count):
        omega = dual_anchor(j, shifted_hat.n, system.dual_digit_set)
        expected = f_hat.coefficients[j] * chi(gamma_point, omega).to_complex()
        gap = max(gap, abs(shifted_hat.coefficients[j] - expected))
    return gap


# --- Poisson 和公式 ---

class PoissonResult:
    """Σ_{γ∈H} f(γ) と Σ_{γ*∈H*} f̂(γ*) の両辺と、それぞれの項数。"""

    def __init__(self, lhs: complex, rhs: complex, lhs_terms: int, rhs_terms: int):
        self.lhs = lhs
        self.rhs = rhs
        self.lhs_terms = lhs_terms
        self.rhs_terms = rhs_terms

    @property
    def gap(self) -> float:
        return abs(self.lhs - self.rhs)

    def __iter__(self):
        return iter((self.lhs, self.rhs))

    def __repr__(self) -> str:
        return (f"PoissonResult(lhs={self.lhs}, rhs={self.rhs}, "
                f"terms=({self.lhs_terms}, {self.rhs_terms}))")


def _lattice_sum(f: StepFunction, digit_set: DigitSet) -> Tuple[complex, int]:
    # f の空間に合わせた数字集合（X なら D、X* なら D*）を渡す
    """
    台 M^p(U) に入る H（双対側では H*）の点 γ_[h]（h < m^{max(p,0)}）での f の値の和。
    """
    total = 0j
    count = 0
    for h in range(f.m ** max(f.p, 0)):
        # γ_[h] の桁 h_i は位置 -i
        point = GridPoint(0, h).to_point(digit_set, f.space)
        k = cell_of_point(point, f.n)
        if k < f.cell_count:
            total += complex(f.coefficients[k])
            count += 1
    return total, count


def poisson_check(f: StepFunction, system: SystemConfig) -> PoissonResult:
    """
    Poisson 和公式 Σ_{γ∈H} f(γ) = Σ_{γ*∈H*} f̂(γ*) の両辺を計算する。
    台がコンパクトなので左辺は高々 m^p 項、右辺は高々 m^n 項の有限和になる。
    """
    _check_space(f, config.STEP_SPACE_PRIMAL)
    lhs, lhs_terms = _lattice_sum(f, system.digit_set)
    rhs, rhs_terms = _lattice_sum(fourier_step(f, system), system.dual_digit_set)
    return PoissonResult(lhs, rhs, lhs_terms, rhs_terms)


# --- Plancherel ---

def energy(f: StepFunction) -> float:
    """
    μ で正規化したエネルギー ∫|f|² dμ = m^{-n} Σ_k |f_{n,k}|²（セル U_{n,k} の測度は m^{-n}）。
    Plancherel の等式により energy(f) = energy(fourier_step(f)) が成り立つ。
    """
    return float(np.sum(np.abs(np.asarray(f.coefficients)) ** 2)) * float(f.m) ** (-f.n)


def inner_product(f: StepFunction, g: StepFunction) -> complex:
    """
    正規化した内積 (1/μ(U)) ∫ f conj(g) dμ。
    両方を共通のクラス S_{max n}^{(max p)} に細分してから計算する。
    """
    if f.space != g.space:
        raise SpaceMismatch(f"異なる空間の関数の内積は取れません: {f.space} と {g.space}")
    n, p = max(f.n, g.n), max(f.p, g.p)
    a, b = refine(f, n, p), refine(g, n, p)
    value = np.vdot(np.asarray(b.coefficients), np.asarray(a.coefficients))
    return complex(value) * float(f.m) ** (-n)
