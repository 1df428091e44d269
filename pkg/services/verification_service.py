# services/verification_service.py
"""
恒等式の検証スイート。

系 (M, D, D*) に対して指標和・VC 変換の正規化・高速変換・直交性・核の和・
フーリエ変換の往復と双対性・Poisson 和公式・Plancherel・シフト定理・タイルの自己相似性を
順に確かめ、恒等式ごとの合否を返す。

【エラー処理】
個々の検証で MposError が送出された場合（壊れた数字集合で ⊕ が計算できない等）は、
その恒等式の失敗として記録し、残りの検証を続ける。
"""

import logging
from typing import Callable, List, Optional

import numpy as np

import config
from models.digits import GridPoint, cell_of_point, check_h_decomposition, gamma_of_index, h_set
from models.errors import MposError
from models.step_function import StepFunction
from models.system import SystemConfig
from services import fourier_service, tile_service
from services.characters import cell_indicator, char_sum, unitary_gram, walsh_gram
from services.transform_service import (FORWARD, INVERSE, roundtrip_constant, vc_fast_array, vc_matrix,
                                        vc_naive_many)

# 素朴な変換と比べる最大の大きさ m^n
_NAIVE_LIMIT = 4096
# グラム行列を厳密に作る最大の大きさ m^n
_GRAM_LIMIT = 64
# 核の和の検証で許す m^{3n+2}（格子点 × 目標のセル × 双対の添字）の上限
_KERNEL_LIMIT = 2 ** 16


class IdentityResult:
    """恒等式 1 件分の検証結果。"""

    def __init__(self, name: str, passed: bool, gap: Optional[float] = None, detail: str = ""):
        self.name = name
        self.passed = passed
        self.gap = gap
        self.detail = detail

    def as_row(self) -> list:
        return [self.name, "PASS" if self.passed else "FAIL",
                "" if self.gap is None else self.gap, self.detail]

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        gap = "" if self.gap is None else f" gap={self.gap:.3e}"
        detail = f" ({self.detail})" if self.detail else ""
        return f"{status} {self.name}{gap}{detail}"

    def __repr__(self) -> str:
        return f"IdentityResult({self.name}, passed={self.passed})"


class SuiteReport:
    """検証スイート全体の結果。"""

    def __init__(self, label: str, level: int, results: List[IdentityResult]):
        self.label = label
        self.level = level
        self.results = results

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    @property
    def first_failure(self) -> Optional[IdentityResult]:
        return next((r for r in self.results if not r.passed), None)

    def lines(self) -> List[str]:
        return [r.line() for r in self.results]


# --- 個々の恒等式 ---

def check_char_sums(system: SystemConfig) -> IdentityResult:
    """l ∈ H_2 ∪ M·H_2 について char_sum(l) が l ≡ 0 (mod M) なら m、それ以外は 0 にちょうど一致するか。"""
    matrix, m = system.matrix, system.m
    candidates = h_set(system.digit_set, 2)
    candidates |= {matrix.apply(g) for g in list(candidates)}
    failures = 0
    for l in sorted(candidates):
        expected = m if matrix.is_congruent_zero(l) else 0
        if char_sum(l, system.dual_digit_set) != expected:
            failures += 1
    return IdentityResult("char_sum", failures == 0, None, f"{len(candidates)} 個中 {failures} 個が不一致")


def check_digit_unitarity(system: SystemConfig) -> IdentityResult:
    gram = unitary_gram(system.digit_set, system.dual_digit_set)
    return IdentityResult("digit_unitarity", bool(np.array_equal(gram, np.eye(system.m))))


def check_vc_normalization(system: SystemConfig, rng: np.random.Generator) -> IdentityResult:
    """式どおりの逆変換∘順変換が n = 1, 2 で m^{-n} 倍になるか。"""
    D, Ds = system.digit_set, system.dual_digit_set
    gap = 0.0
    for n in (1, 2):
        size = system.m ** n
        if size > _NAIVE_LIMIT:
            break
        c = roundtrip_constant(system.m, n)
        inputs = np.concatenate([np.eye(size), rng.standard_normal((size, 2)) + 1j * rng.standard_normal((size, 2))],
                                axis=1)
        back = vc_naive_many(vc_naive_many(inputs, n, D, Ds, FORWARD), n, D, Ds, INVERSE)
        gap = max(gap, float(np.max(np.abs(back - c * inputs))))
    return IdentityResult("vc_normalization", gap < config.TOL_ROUNDTRIP, gap)


def check_fast_vs_naive(system: SystemConfig, depth: int, rng: np.random.Generator) -> IdentityResult:
    D, Ds = system.digit_set, system.dual_digit_set
    gap = 0.0
    for n in range(0, depth + 1):
        size = system.m ** n
        if size > _NAIVE_LIMIT:
            break
        batch = rng.standard_normal((size, config.VERIFY_RANDOM_CASES)) \
            + 1j * rng.standard_normal((size, config.VERIFY_RANDOM_CASES))
        for direction in (FORWARD, INVERSE):
            naive = vc_naive_many(batch, n, D, Ds, direction)
            for col in range(batch.shape[1]):
                fast = vc_fast_array(batch[:, col], n, D, Ds, direction)
                scale = max(1.0, float(np.max(np.abs(naive[:, col]))))
                gap = max(gap, float(np.max(np.abs(fast - naive[:, col]))) / scale)
    return IdentityResult("vc_fast_vs_naive", gap < config.TOL_FAST_VS_NAIVE, gap)


def check_vc_unitarity(system: SystemConfig, depth: int) -> IdentityResult:
    """V V† = m^{-n} I。"""
    gap = 0.0
    for n in range(0, min(depth, 5) + 1):
        size = system.m ** n
        if size > _NAIVE_LIMIT // 4:
            break
        V = vc_matrix(n, system.digit_set, system.dual_digit_set)
        gap = max(gap, float(np.max(np.abs(V @ V.conj().T - roundtrip_constant(system.m, n) * np.eye(size)))))
    return IdentityResult("vc_unitarity", gap < config.TOL_ROUNDTRIP, gap)


def check_walsh_orthogonality(system: SystemConfig, depth: int) -> IdentityResult:
    ok = True
    for n in range(0, min(depth, 3) + 1):
        if system.m ** n > _GRAM_LIMIT:
            break
        gram = walsh_gram(n, system.digit_set, system.dual_digit_set)
        ok = ok and bool(np.array_equal(gram, np.eye(system.m ** n)))
    return IdentityResult("walsh_orthogonality", ok)


def check_kernel_partition(system: SystemConfig, depth: int) -> IdentityResult:
    """
    スケール n+2 の U の全格子点 x で、すべての k < m^n について
    1_{U_{n,k}}(x) を核の和として評価し、x 自身のセルだけが 1 になるか。
    """
    m = system.m
    D, Ds = system.digit_set, system.dual_digit_set
    failures = checked = 0
    for n in range(0, min(depth, 3) + 1):
        if m ** (3 * n + 2) > _KERNEL_LIMIT:
            break
        for k in range(m ** (n + 2)):
            x = GridPoint(n + 2, k).to_point(D)
            own = cell_of_point(x, n)
            values = [cell_indicator(x, n, target, Ds) for target in range(m ** n)]
            checked += 1
            if values != [1 if target == own else 0 for target in range(m ** n)]:
                failures += 1
    return IdentityResult("kernel_partition", failures == 0, None, f"{checked} 点中 {failures} 点が不一致")


def check_h_decomposition_all(system: SystemConfig, depth: int) -> IdentityResult:
    ok = all(check_h_decomposition(system.digit_set, n) for n in range(1, depth + 1)
             if system.m ** n <= _NAIVE_LIMIT)
    return IdentityResult("h_decomposition", ok)


def random_step_functions(system: SystemConfig, depth: int, count: int,
                          rng: np.random.Generator) -> List[StepFunction]:
    """n, p ≤ depth（n + p ≥ 0）の階段関数をランダムに作る。"""
    m = system.m
    shapes = [(n, p) for n in range(0, depth + 1) for p in range(-n, depth + 1)
              if m ** (n + p) <= _NAIVE_LIMIT]
    functions = []
    for _ in range(count):
        n, p = shapes[int(rng.integers(len(shapes)))]
        size = m ** (n + p)
        values = rng.standard_normal(size) + 1j * rng.standard_normal(size)
        functions.append(StepFunction(config.STEP_SPACE_PRIMAL, n, p, values, m))
    return functions


def check_fourier(system: SystemConfig, functions: List[StepFunction]) -> List[IdentityResult]:
    """往復・形の双対性・Plancherel・Poisson をまとめて確かめる。"""
    roundtrip = plancherel = poisson = 0.0
    shapes_ok = True
    for f in functions:
        f_hat = fourier_service.fourier_step(f, system)
        shapes_ok = shapes_ok and f_hat.shape == (f.p, f.n)
        back = fourier_service.inverse_fourier_step(f_hat, system)
        again = fourier_service.fourier_step(back, system)
        roundtrip = max(roundtrip,
                        float(np.max(np.abs(np.asarray(back.coefficients) - np.asarray(f.coefficients)))),
                        float(np.max(np.abs(np.asarray(again.coefficients) - np.asarray(f_hat.coefficients)))))
        plancherel = max(plancherel, abs(fourier_service.energy(f) - fourier_service.energy(f_hat)))
        poisson = max(poisson, fourier_service.poisson_check(f, system).gap)
    return [
        IdentityResult("fourier_duality", shapes_ok),
        IdentityResult("fourier_roundtrip", roundtrip < config.TOL_ROUNDTRIP, roundtrip),
        IdentityResult("plancherel", plancherel < config.TOL_PLANCHEREL, plancherel),
        IdentityResult("poisson", poisson < config.TOL_POISSON, poisson),
    ]


def check_shift(system: SystemConfig, functions: List[StepFunction], rng: np.random.Generator) -> IdentityResult:
    gap = 0.0
    for f in functions:
        gamma = gamma_of_index(int(rng.integers(system.m ** 2)), system.digit_set)
        if system.m ** (f.n + fourier_service.shift_support_scale(f, gamma, system.digit_set)[1]) > _NAIVE_LIMIT:
            continue
        gap = max(gap, fourier_service.shift_spectral_gap(f, gamma, system))
    return IdentityResult("shift", gap < config.TOL_SHIFT, gap)


def check_tile_self_similarity(system: SystemConfig, depth: int) -> IdentityResult:
    failed = [n for n in range(1, depth + 1)
              if system.m ** n <= _NAIVE_LIMIT
              and not tile_service.self_similarity_check(system.digit_set, n).passed]
    return IdentityResult("tile_self_similarity", not failed, None,
                          f"深さ {failed} で不成立" if failed else "")


# --- スイート全体 ---

def _guarded(name: str, check: Callable[[], object]) -> List[IdentityResult]:
    try:
        result = check()
    except MposError as e:
        logging.warning("検証 '%s' の途中でエラーが発生しました: %s", name, e)
        return [IdentityResult(name, False, None, e.name)]
    return result if isinstance(result, list) else [result]


def run_suite(system: SystemConfig, level: int = 1, seed: int = config.DEFAULT_SEED) -> SuiteReport:
    """
    検証スイートを実行する。level 1 は n ≤ 3、level 2 は n ≤ 6。

    Args:
        system (SystemConfig): 検証する系。
        level (int): 検証の深さ。
        seed (int): 乱数の種。同じ種なら同じ結果になる。

    Returns:
        SuiteReport: 恒等式ごとの合否。
    """
    if level not in config.VERIFY_LEVEL_DEPTH:
        raise ValueError(f"検証レベル {level} は {sorted(config.VERIFY_LEVEL_DEPTH)} のいずれかです。")
    depth = config.VERIFY_LEVEL_DEPTH[level]
    rng = np.random.default_rng(seed)
    logging.info("検証スイート開始: %s, level=%d, seed=%d", system, level, seed)

    results: List[IdentityResult] = []
    results += _guarded("char_sum", lambda: check_char_sums(system))
    results += _guarded("digit_unitarity", lambda: check_digit_unitarity(system))
    results += _guarded("vc_normalization", lambda: check_vc_normalization(system, rng))
    results += _guarded("vc_fast_vs_naive", lambda: check_fast_vs_naive(system, depth, rng))
    results += _guarded("vc_unitarity", lambda: check_vc_unitarity(system, depth))
    results += _guarded("walsh_orthogonality", lambda: check_walsh_orthogonality(system, depth))
    results += _guarded("kernel_partition", lambda: check_kernel_partition(system, depth))
    results += _guarded("h_decomposition", lambda: check_h_decomposition_all(system, depth))

    functions: List[StepFunction] = []

    def build_functions():
        functions.extend(random_step_functions(system, depth, config.VERIFY_RANDOM_CASES, rng))
        return check_fourier(system, functions)

    results += _guarded("fourier_roundtrip", build_functions)
    results += _guarded("shift", lambda: check_shift(system, functions, rng))
    results += _guarded("tile_self_similarity", lambda: check_tile_self_similarity(system, depth))

    report = SuiteReport(system.label, level, results)
    for r in results:
        logging.info("検証結果: %s", r.line())
    return report
