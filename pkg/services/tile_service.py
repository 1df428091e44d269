# services/tile_service.py
"""
タイル U の幾何的な近似。

深さ n の点群 {M^{-n}γ_[k] : 0 ≤ k < m^n} を整数の分子と共通の分母 det^n で厳密に持ち、
浮動小数点への変換は描画・測度推定のときだけ行う。
"""

import logging
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.spatial import cKDTree

import config
from models.digits import DigitSet, ancestor_cell
from models.errors import DepthTooLarge, DimensionUnsupported
from models.intlinalg import DilationMatrix, det_adjugate
from utils import mat_vec, max_norm, vec_add


class TileCloud:
    """
    深さ n の格子点群。k 番目の点は M^{-n}γ_[k] = numerators[k] / denominator。
    """

    def __init__(self, depth: int, digit_set: DigitSet, numerators: np.ndarray, denominator: int):
        self.depth = depth
        self.digit_set = digit_set
        self.numerators = numerators
        self.denominator = denominator
        self.points: np.ndarray = numerators.astype(float) / float(denominator)
        self.bbox: Tuple[np.ndarray, np.ndarray] = (self.points.min(axis=0), self.points.max(axis=0))

    @property
    def matrix(self) -> DilationMatrix:
        return self.digit_set.matrix

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def __len__(self) -> int:
        return self.points.shape[0]

    def exact_points(self) -> List[Tuple[Fraction, ...]]:
        return [tuple(Fraction(int(v), self.denominator) for v in row) for row in self.numerators]

    def numerator_set(self) -> set:
        return {tuple(int(v) for v in row) for row in self.numerators}

    @property
    def hausdorff_bound(self) -> float:
        """真のタイルとのハウスドルフ距離の上限の目安 ||M^{-n}||·Σ_j ||M^{-j}||·max|s|（表示用）。"""
        return self.matrix.inverse_norm(self.depth) * tail_constant(self.matrix) * digit_radius(self.digit_set)

    def __repr__(self) -> str:
        return f"TileCloud(depth={self.depth}, points={len(self)}, dim={self.dim})"


def digit_radius(digit_set: DigitSet) -> float:
    return float(max(np.linalg.norm(np.array(s, dtype=float)) for s in digit_set))


def digit_diameter(digit_set: DigitSet) -> float:
    """数字の凸包の直径（= 数字どうしの距離の最大値）。"""
    vectors = np.array(digit_set.vectors, dtype=float)
    diffs = vectors[:, None, :] - vectors[None, :, :]
    return float(np.sqrt((diffs ** 2).sum(axis=2)).max())


def tail_constant(matrix: DilationMatrix, terms: int = config.DILATION_POWER_CHECK) -> float:
    """Σ_{j=1}^{terms} ||M^{-j}||_2。"""
    return sum(matrix.inverse_norm(j) for j in range(1, terms + 1))


def _check_budget(m: int, depth: int):
    budget = config.point_budget()
    if m ** depth > budget:
        raise DepthTooLarge(f"m^n = {m}^{depth} が点数の上限 {budget} を超えます"
                            f"（環境変数 {config.POINT_BUDGET_ENV} で変更できます）。")


# int64 で厳密に扱える絶対値の上限（これを超えるなら Python の整数で持つ）
_INT64_SAFE = 2 ** 62


def _row_sum_norm(rows: Sequence[Sequence[int]]) -> int:
    return max(sum(abs(a) for a in row) for row in rows)


def _exact_dtype(bound: int):
    return np.int64 if bound < _INT64_SAFE else object


def _h_bound(digit_set: DigitSet, depth: int) -> int:
    """|γ_[k]| の成分の上限 Σ_{i<depth} ||M^i||_∞·max|s|（k < m^depth）。"""
    powers = sum(_row_sum_norm(digit_set.matrix.power(i)) for i in range(depth))
    return powers * max(max_norm(s) for s in digit_set)


def h_vectors(digit_set: DigitSet, depth: int) -> np.ndarray:
    """
    γ_[k]（0 ≤ k < m^depth）を添字順に並べた整数配列。
    γ_[k + j m^i] = γ_[k] + M^i s_j（k < m^i）を使って桁ごとに広げる。

    成分の上限 _h_bound が int64 に収まらない場合は
    dtype=object（Python の任意精度整数）で計算する。
    """
    matrix = digit_set.matrix
    dtype = _exact_dtype(_h_bound(digit_set, depth))
    gammas = np.zeros((1, matrix.dim), dtype=dtype)
    for i in range(depth):
        power = matrix.power(i)
        blocks = [gammas + np.array(mat_vec(power, s), dtype=dtype) for s in digit_set]
        gammas = np.concatenate(blocks, axis=0)
    return gammas


def tile_points(digit_set: DigitSet, depth: int) -> TileCloud:
    """
    深さ n の点群 {M^{-n}γ_[k]} を作る。

    【エラー処理】
    - n < 0 は ValueError
    - m^n が config.point_budget() を超える場合は DepthTooLarge
    """
    if depth < 0:
        raise ValueError(f"深さ {depth} は 0 以上である必要があります。")
    _check_budget(digit_set.m, depth)
    numer_matrix, denominator = digit_set.matrix.inverse_power(depth)
    if abs(denominator) >= 2 ** 53:
        raise DepthTooLarge(f"深さ {depth} では分母 det^n が厳密に扱える範囲を超えます。")
    gammas = h_vectors(digit_set, depth)
    dtype = _exact_dtype(_h_bound(digit_set, depth) * _row_sum_norm(numer_matrix))
    numerators = gammas.astype(dtype) @ np.array(numer_matrix, dtype=dtype).T
    logging.info("タイル点群を生成しました: depth=%d, points=%d", depth, len(gammas))
    return TileCloud(depth, digit_set, numerators, denominator)


def cloud_coincidences(cloud: TileCloud) -> List[Tuple[int, ...]]:
    """幾何的に一致する点の添字の組（正しい数字集合なら空）。"""
    groups: Dict[Tuple[int, ...], List[int]] = {}
    for k, row in enumerate(cloud.numerators):
        groups.setdefault(tuple(int(v) for v in row), []).append(k)
    return [tuple(ks) for ks in groups.values() if len(ks) > 1]


def cell_labels(cloud: TileCloud, scale: int) -> np.ndarray:
    """各点が属するスケール scale（≤ depth）のセル番号 k // m^{n-scale}。"""
    if not 0 <= scale <= cloud.depth:
        raise ValueError(f"セルのスケール {scale} は 0 以上 {cloud.depth} 以下である必要があります。")
    return ancestor_cell(np.arange(len(cloud), dtype=np.int64), cloud.digit_set.m, cloud.depth, scale)


# --- 自己相似性 ---

class SimilarityResult:
    """自己相似性の判定結果。set_identity と non_congruent の両方が真なら合格。"""

    def __init__(self, depth: int, set_identity: bool, non_congruent: bool):
        self.depth = depth
        self.set_identity = set_identity
        self.non_congruent = non_congruent

    @property
    def passed(self) -> bool:
        return self.set_identity and self.non_congruent

    def __bool__(self) -> bool:
        return self.passed

    def __repr__(self) -> str:
        return (f"SimilarityResult(depth={self.depth}, set_identity={self.set_identity}, "
                f"non_congruent={self.non_congruent})")


def self_similarity_check(digit_set: DigitSet, depth: int) -> SimilarityResult:
    """
    深さ n の点群が A_n = ⋃_{s∈D} M^{-1}(A_{n-1} + s) を有理数の集合として満たし、
    かつ M^n A_n = H_n の元が M^n を法として互いに合同でない（U_{n,k} が重ならない）かを調べる。
    数字集合は未検証のもの（DigitSet を直接作ったもの）でもよい。
    """
    if depth < 1:
        raise ValueError("自己相似性の確認には深さ 1 以上が必要です。")
    matrix = digit_set.matrix
    current = tile_points(digit_set, depth)
    previous = tile_points(digit_set, depth - 1)

    # M^{-1}(N/det^{n-1} + s) = adj·(N + det^{n-1} s) / det^n
    scale = matrix.det ** (depth - 1)
    refined = {mat_vec(matrix.adjugate, vec_add(tuple(int(v) for v in row), tuple(scale * x for x in s)))
               for row in previous.numerators for s in digit_set}
    set_identity = refined == current.numerator_set()

    # γ ≡ γ' (mod M^n) ⇔ adj(M^n)(γ - γ') ≡ 0 (mod det(M^n))
    det_n, adj_n = det_adjugate(matrix.power(depth))
    modulus = abs(det_n)
    keys = {tuple(x % modulus for x in mat_vec(adj_n, tuple(int(v) for v in row)))
            for row in h_vectors(digit_set, depth)}
    non_congruent = len(keys) == digit_set.m ** depth

    result = SimilarityResult(depth, set_identity, non_congruent)
    logging.debug("自己相似性の確認: %s", result)
    return result


# --- 数字集合の恒等式 M²s = Σ_k M^{-2k}s ---

def series_identity_check(digit_set: DigitSet, max_terms: int = 20,
                         digit: Optional[Sequence[int]] = None) -> List[float]:
    """
    K = 1..max_terms について ||M²s - Σ_{k=0}^{K} M^{-2k}s||_2 を返す。
    s は省略時 0 でない最初の数字。部分和は有理数で厳密に計算し、ノルムだけ浮動小数点にする。
    M² = 2I のとき（例: [[1,1],[1,-1]]）残差は 2^{-K}||s|| で減衰する。
    """
    matrix = digit_set.matrix
    s = tuple(digit) if digit is not None else next(v for v in digit_set if any(v))
    target = [Fraction(x) for x in mat_vec(matrix.power(2), s)]
    partial = [Fraction(0)] * matrix.dim
    residuals = []
    for k in range(max_terms + 1):
        numer, denom = matrix.inverse_power(2 * k)
        partial = [a + Fraction(b, denom) for a, b in zip(partial, mat_vec(numer, s))]
        if k >= 1:
            diff = np.array([float(t - p) for t, p in zip(target, partial)])
            residuals.append(float(np.linalg.norm(diff)))
    return residuals


# --- モンテカルロ測度推定 ---

class MeasureEstimate:
    """測度の推定値と標準誤差（診断用。近接判定による偏りがある）。"""

    def __init__(self, estimate: float, stderr: float, samples: int, depth: int, radius: float):
        self.estimate = estimate
        self.stderr = stderr
        self.samples = samples
        self.depth = depth
        self.radius = radius

    def __iter__(self):
        return iter((self.estimate, self.stderr))

    def __repr__(self) -> str:
        return f"MeasureEstimate({self.estimate:.6f} ± {self.stderr:.6f}, N={self.samples}, depth={self.depth})"


def measure_estimate(digit_set: DigitSet, samples: int = config.MEASURE_DEFAULT_SAMPLES,
                     depth: int = config.MEASURE_DEFAULT_DEPTH,
                     seed: int = config.DEFAULT_SEED) -> MeasureEstimate:
    """
    U のルベーグ測度をモンテカルロ法で推定する。

    深さ n の点群の外接箱から一様に点を取り、
    点群から半径 r = 2·||M^{-n}||·diam(D) 以内にあるものを U の点と見なす。
    推定値 = 箱の体積 × 命中率、標準誤差 = 体積 × sqrt(p(1-p)/N)。
    """
    if samples < config.MEASURE_MIN_SAMPLES:
        raise ValueError(f"サンプル数 {samples} は {config.MEASURE_MIN_SAMPLES} 以上である必要があります。")
    cloud = tile_points(digit_set, depth)
    radius = config.MEASURE_RADIUS_FACTOR * cloud.matrix.inverse_norm(depth) * digit_diameter(digit_set)
    low, high = cloud.bbox
    volume = float(np.prod(high - low))

    rng = np.random.default_rng(seed)
    trials = rng.uniform(low, high, size=(samples, cloud.dim))
    distances, _ = cKDTree(cloud.points).query(trials, k=1, distance_upper_bound=radius)
    hit = float(np.isfinite(distances).mean())

    result = MeasureEstimate(volume * hit, volume * float(np.sqrt(hit * (1.0 - hit) / samples)),
                             samples, depth, radius)
    logging.info("測度推定: %s", result)
    return result


# --- ラスタ化 ---

def raster(cloud: TileCloud, width: int, height: int, cells: Optional[int] = None) -> np.ndarray:
    """
    点群を height×width の格子（行優先、上が y の最大値）に写す。
    値は 0 が空、それ以外は占有（cells 指定時はスケール cells のセル番号 + 1）。
    外接箱を画素の格子にアフィンに合わせ、添字の昇順に書き込むので結果は決定的。

    【エラー処理】
    d ≠ 2 の場合は DimensionUnsupported。
    """
    if cloud.dim != 2:
        raise DimensionUnsupported(f"ラスタ化は 2 次元のみ対応しています（d = {cloud.dim}）。")
    if width < 1 or height < 1:
        raise ValueError(f"画像の大きさ {width}×{height} が不正です。")
    low, high = cloud.bbox
    span = np.where(high - low > 0, high - low, 1.0)
    unit = (cloud.points - low) / span
    cols = np.clip(np.rint(unit[:, 0] * (width - 1)), 0, width - 1).astype(np.int64)
    rows = np.clip(np.rint((1.0 - unit[:, 1]) * (height - 1)), 0, height - 1).astype(np.int64)
    values = cell_labels(cloud, cells) + 1 if cells is not None else np.ones(len(cloud), dtype=np.int64)
    grid = np.zeros((height, width), dtype=np.int64)
    grid[rows, cols] = values
    return grid
