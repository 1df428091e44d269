# models/digits.py
"""
数字集合 D、数字ごとの群演算 ⊕/⊖、m 進添字 γ_[k]、格子点とセル U_{n,k} の管理。

X^0（有限展開を持つ点）だけを扱う。有限展開は一意なので、点は
「位置 j → 数字の番号」の疎な対応表で表せる。位置 j の数字は
M^{-j} s_{x_j}（双対側では (M*)^{-j} s*_{ω_j}）として寄与する。
"""

from fractions import Fraction
from itertools import product
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Set, Tuple, Union

import config
from models.errors import (InvalidDigitSet, MissingZero, NotAResidueSystem, NotInH,
                           ScaleTooCoarse, SpaceMismatch)
from models.intlinalg import DilationMatrix, residue_decompose
from utils import IntVector, from_base_m, mat_vec, max_norm, to_base_m, vec_add, vec_sub

SPACES = (config.STEP_SPACE_PRIMAL, config.STEP_SPACE_DUAL)


class DigitSet:
    """
    M を法とする完全剰余系 D = {s_0, ..., s_{m-1}}（s_0 = 0）。
    加法表・符号反転表を持ち、D は ⊕ について可換群になる。

    validate_digit_set / canonical_digit_set を通して作ること。
    コンストラクタを直接呼ぶと表を持たない未検証の集合になる（タイルの検証テスト用）。
    """

    def __init__(self, matrix: DilationMatrix, vectors: Sequence[Sequence[int]],
                 add_table: Optional[Sequence[Sequence[int]]] = None,
                 neg_table: Optional[Sequence[int]] = None):
        self.matrix = matrix
        self.vectors: Tuple[IntVector, ...] = tuple(tuple(int(x) for x in v) for v in vectors)
        self.add_table: Optional[Tuple[Tuple[int, ...], ...]] = (
            tuple(tuple(row) for row in add_table) if add_table is not None else None)
        self.neg_table: Optional[Tuple[int, ...]] = tuple(neg_table) if neg_table is not None else None

    @property
    def m(self) -> int:
        return len(self.vectors)

    @property
    def dim(self) -> int:
        return self.matrix.dim

    def __len__(self) -> int:
        return len(self.vectors)

    def __getitem__(self, i: int) -> IntVector:
        return self.vectors[i]

    def __iter__(self) -> Iterator[IntVector]:
        return iter(self.vectors)

    def _require_tables(self):
        if self.add_table is None or self.neg_table is None:
            raise InvalidDigitSet("未検証の数字集合では ⊕ を計算できません。")

    def add(self, i: int, j: int) -> int:
        self._require_tables()
        return self.add_table[i][j]

    def neg(self, i: int) -> int:
        self._require_tables()
        return self.neg_table[i]

    def sub(self, i: int, j: int) -> int:
        return self.add(i, self.neg(j))

    def __eq__(self, other) -> bool:
        return (isinstance(other, DigitSet) and self.matrix == other.matrix
                and self.vectors == other.vectors)

    def __hash__(self) -> int:
        return hash((self.matrix, self.vectors))

    def __repr__(self) -> str:
        return f"DigitSet(m={self.m}, digits={[list(v) for v in self.vectors]})"


def validate_digit_set(matrix: DilationMatrix, candidates: Sequence[Sequence[int]]) -> DigitSet:
    """
    候補の数字が M を法とする完全剰余系かを検証し、加法表・符号反転表を作る。

    s_i + s_j = s_{i⊕j} + M·(繰り上がり) と分解し、繰り上がりは捨てる（商群の加法）。

    【エラー処理】
    - 個数が m でない           → InvalidDigitSet
    - 先頭が零ベクトルでない    → MissingZero
    - 合同な組 (i, j) がある    → NotAResidueSystem(i, j)
    """
    vectors = [tuple(int(x) for x in v) for v in candidates]
    if any(len(v) != matrix.dim for v in vectors):
        raise InvalidDigitSet(f"数字の次元が行列の次元 {matrix.dim} と一致しません。")
    if len(vectors) != matrix.m:
        raise InvalidDigitSet(f"数字の個数 {len(vectors)} が m = {matrix.m} と一致しません。")
    if any(vectors[0]):
        raise MissingZero(f"s_0 = {vectors[0]} は零ベクトルである必要があります。")

    for i in range(len(vectors)):
        for j in range(i + 1, len(vectors)):
            if matrix.is_congruent_zero(vec_sub(vectors[i], vectors[j])):
                raise NotAResidueSystem(i, j)

    add_table = [[residue_decompose(vec_add(a, b), matrix, vectors)[0] for b in vectors] for a in vectors]
    neg_table = [residue_decompose(tuple(-x for x in a), matrix, vectors)[0] for a in vectors]
    return DigitSet(matrix, vectors, add_table, neg_table)


def _canonical_key(v: IntVector):
    # 最大ノルム → 負の成分の個数 → L1 ノルム → 後ろの成分から比べる辞書順
    return (max_norm(v), sum(1 for x in v if x < 0), sum(abs(x) for x in v),
            tuple(abs(x) for x in reversed(v)), tuple(x < 0 for x in reversed(v)))


def canonical_digit_set(matrix: DilationMatrix) -> DigitSet:
    """
    各剰余類から最大ノルム最小の代表元を選んだ標準的な数字集合を作る。

    半径 r の箱の中の整数ベクトルを _canonical_key の順に走査し、
    新しい剰余類に属するものを採用する。m 個そろわなければ r を倍にしてやり直す。
    """
    radius = 1
    while True:
        box = sorted(product(range(-radius, radius + 1), repeat=matrix.dim), key=_canonical_key)
        accepted: List[IntVector] = []
        for v in box:
            if all(not matrix.is_congruent_zero(vec_sub(v, s)) for s in accepted):
                accepted.append(v)
                if len(accepted) == matrix.m:
                    return validate_digit_set(matrix, accepted)
        radius *= 2


# --- 点 ---

class MPoint:
    """
    X^0（または (X*)^0）の点。位置 j → 数字番号 の疎な表を位置の昇順で保持する。
    0 の数字は保持しない（標準形）。
    """

    __slots__ = ("digit_set", "space", "digits")

    def __init__(self, digit_set: DigitSet, digits: Union[Mapping[int, int], Iterable[Tuple[int, int]]] = (),
                 space: str = config.STEP_SPACE_PRIMAL):
        if space not in SPACES:
            raise SpaceMismatch(f"不明な空間 '{space}' です。")
        items = digits.items() if isinstance(digits, Mapping) else digits
        cleaned: Dict[int, int] = {}
        for j, d in items:
            if not 0 <= d < digit_set.m:
                raise ValueError(f"数字番号 {d} が範囲外です（m = {digit_set.m}）。")
            if d:
                cleaned[int(j)] = int(d)
        self.digit_set = digit_set
        self.space = space
        self.digits: Tuple[Tuple[int, int], ...] = tuple(sorted(cleaned.items()))

    def digit(self, j: int) -> int:
        for pos, d in self.digits:
            if pos == j:
                return d
        return 0

    def as_dict(self) -> Dict[int, int]:
        return dict(self.digits)

    @property
    def is_zero(self) -> bool:
        return not self.digits

    @property
    def max_position(self) -> Optional[int]:
        return self.digits[-1][0] if self.digits else None

    @property
    def min_position(self) -> Optional[int]:
        return self.digits[0][0] if self.digits else None

    def in_tile(self) -> bool:
        """U に属するか（全ての桁が位置 1 以上）。"""
        return not self.digits or self.digits[0][0] >= 1

    def in_h(self) -> bool:
        """H に属するか（全ての桁が位置 0 以下）。"""
        return not self.digits or self.digits[-1][0] <= 0

    def __eq__(self, other) -> bool:
        return (isinstance(other, MPoint) and self.space == other.space
                and self.digit_set == other.digit_set and self.digits == other.digits)

    def __hash__(self) -> int:
        return hash((self.space, self.digits))

    def __repr__(self) -> str:
        return f"MPoint({self.space}, {dict(self.digits)})"


def _check_same_space(x: MPoint, y: MPoint):
    if x.space != y.space or x.digit_set != y.digit_set:
        raise SpaceMismatch(f"異なる空間の点は演算できません: {x.space} と {y.space}")


def oplus(x: MPoint, y: MPoint) -> MPoint:
    """
    桁ごとの群加法 x ⊕ y（繰り上がりなし）。
    位置ごとに数字集合の加法表を引くだけなので、結果の桁は x と y の桁の位置の和集合に収まる。

    【エラー処理】
    - 空間（X と X*）や数字集合が異なる点どうしは SpaceMismatch
    - 加法表を持たない未検証の数字集合では InvalidDigitSet
    """
    _check_same_space(x, y)
    table = x.digit_set
    result = x.as_dict()
    for j, d in y.digits:
        result[j] = table.add(result.get(j, 0), d)
    return MPoint(table, result, x.space)


def ominus(x: MPoint, y: MPoint) -> MPoint:
    """z = x ⊖ y（z ⊕ y = x となる z）。"""
    _check_same_space(x, y)
    table = x.digit_set
    result = x.as_dict()
    for j, d in y.digits:
        result[j] = table.sub(result.get(j, 0), d)
    return MPoint(table, result, x.space)


def scale_point(x: MPoint, p: int) -> MPoint:
    """M^p x（双対側では (M*)^p ω）。桁の位置を -p だけずらす。"""
    return MPoint(x.digit_set, ((j - p, d) for j, d in x.digits), x.space)


def split_point(x: MPoint) -> Tuple[MPoint, MPoint]:
    """x = u ⊕ h（u ∈ U, h ∈ H）に分ける。このとき u + h = u ⊕ h が成り立つ。"""
    u = MPoint(x.digit_set, ((j, d) for j, d in x.digits if j >= 1), x.space)
    h = MPoint(x.digit_set, ((j, d) for j, d in x.digits if j <= 0), x.space)
    return u, h


def point_to_vector(x: MPoint) -> Tuple[Fraction, ...]:
    """Σ M^{-j} s_{x_j} を有理数ベクトルとして厳密に評価する。"""
    digit_set = x.digit_set
    matrix = digit_set.matrix
    depth = max(x.max_position or 0, 0)
    # M^depth x = Σ M^{depth-j} s_{x_j} は整数ベクトル
    acc: IntVector = (0,) * matrix.dim
    for j, d in x.digits:
        acc = vec_add(acc, mat_vec(matrix.power(depth - j), digit_set[d]))
    numer, denom = matrix.inverse_power(depth)
    return tuple(Fraction(v, denom) for v in mat_vec(numer, acc))


# --- H の添字付け ---

def gamma_of_index(k: int, digit_set: DigitSet) -> IntVector:
    """γ_[k] = Σ M^j s_{k_j}（k = Σ k_j m^j）。ホーナー法で計算する。"""
    matrix = digit_set.matrix
    gamma: IntVector = (0,) * matrix.dim
    for kj in reversed(to_base_m(k, digit_set.m)):
        gamma = vec_add(matrix.apply(gamma), digit_set[kj])
    return gamma


def index_digits_of_gamma(gamma: Sequence[int], digit_set: DigitSet) -> List[int]:
    """
    γ ∈ H の m 進の桁 [k_0, k_1, ...] を剰余分解の繰り返しで取り出す。

    【エラー処理】
    抽出が 0 でない周期に入った場合、γ は H に属さないので NotInH。
    """
    current: IntVector = tuple(int(x) for x in gamma)
    seen: Set[IntVector] = set()
    digits: List[int] = []
    while any(current):
        if current in seen:
            raise NotInH(f"ベクトル {tuple(gamma)} は H に属しません（0 でない周期に入りました）。")
        seen.add(current)
        i, current = residue_decompose(current, digit_set.matrix, digit_set)
        digits.append(i)
    return digits


def index_of_gamma(gamma: Sequence[int], digit_set: DigitSet) -> int:
    """
    gamma_of_index の逆写像。γ = Σ M^j s_{k_j} から k = Σ k_j m^j を復元する。

    【エラー処理】
    γ が H に属さない（例: d = 1, D = {0, 1} の γ = -1）場合は NotInH。
    """
    return from_base_m(index_digits_of_gamma(gamma, digit_set), digit_set.m)


def h_point(gamma: Sequence[int], digit_set: DigitSet, space: str = config.STEP_SPACE_PRIMAL) -> MPoint:
    """H のベクトルを MPoint（位置 0 以下の桁）に変換する。"""
    digits = index_digits_of_gamma(gamma, digit_set)
    return MPoint(digit_set, ((-i, d) for i, d in enumerate(digits)), space)


def h_set(digit_set: DigitSet, n: int) -> Set[IntVector]:
    """H_n = {γ_[k] : 0 ≤ k < m^n}。"""
    return {gamma_of_index(k, digit_set) for k in range(digit_set.m ** n)}


def check_h_decomposition(digit_set: DigitSet, n: int) -> bool:
    """{s + Mγ : s ∈ D, γ ∈ H_{n-1}} = H_n が集合として成り立つか。"""
    matrix = digit_set.matrix
    lower = h_set(digit_set, n - 1)
    combined = {vec_add(s, matrix.apply(g)) for s in digit_set for g in lower}
    return combined == h_set(digit_set, n)


# --- 格子点とセル ---

class GridPoint:
    """格子点 M^{-n} γ_[k]（セル U_{n,k} の代表点）。スケール 0 の代表点が H。"""

    __slots__ = ("n", "k")

    def __init__(self, n: int, k: int):
        if k < 0:
            raise ValueError(f"セル番号 {k} は非負である必要があります。")
        self.n = int(n)
        self.k = int(k)

    def to_point(self, digit_set: DigitSet, space: str = config.STEP_SPACE_PRIMAL) -> MPoint:
        """k の m 進の桁 k_i を位置 n - i に置いた点。"""
        digits = to_base_m(self.k, digit_set.m)
        return MPoint(digit_set, ((self.n - i, d) for i, d in enumerate(digits)), space)

    @classmethod
    def from_point(cls, x: MPoint, n: int) -> "GridPoint":
        """位置 n 以下の桁だけを持つ点を格子点に戻す。"""
        return cls(n, cell_of_point(x, n, strict=True))

    def __eq__(self, other) -> bool:
        return isinstance(other, GridPoint) and (self.n, self.k) == (other.n, other.k)

    def __hash__(self) -> int:
        return hash((self.n, self.k))

    def __repr__(self) -> str:
        return f"GridPoint(n={self.n}, k={self.k})"


def cell_of_point(x: MPoint, n: int, strict: bool = False) -> int:
    """
    x ∈ U_{n,k} となる k を返す。k = Σ_{j≤n} x_j m^{n-j}。

    位置 n より細かい桁は M^{-n}U の中に収まるので捨てる。
    strict=True の場合はそのような桁があると ScaleTooCoarse を送出する。
    """
    m = x.digit_set.m
    k = 0
    for j, d in x.digits:
        if j > n:
            if strict:
                raise ScaleTooCoarse(f"点 {x} は位置 {j} > {n} に桁を持ちます。")
            continue
        k += d * m ** (n - j)
    return k


def ancestor_cell(k, m: int, n: int, coarser: int):
    """
    スケール n のセル k を含む、スケール coarser (≤ n) のセルの番号。
    k には整数のほか numpy の整数配列も渡せる。
    """
    if coarser > n:
        raise ValueError("粗いスケールは n 以下である必要があります。")
    return k // m ** (n - coarser)


def oplus_index(a: int, b: int, digit_set: DigitSet) -> int:
    """同じスケールの格子点の番号どうしの ⊕（m 進の桁ごと）。"""
    m = digit_set.m
    da, db = to_base_m(a, m), to_base_m(b, m)
    width = max(len(da), len(db))
    da += [0] * (width - len(da))
    db += [0] * (width - len(db))
    return from_base_m([digit_set.add(x, y) for x, y in zip(da, db)], m)


def ominus_index(a: int, b: int, digit_set: DigitSet) -> int:
    """同じスケールの格子点の番号どうしの ⊖。"""
    m = digit_set.m
    db = to_base_m(b, m)
    negated = from_base_m([digit_set.neg(d) for d in db], m)
    return oplus_index(a, negated, digit_set)
