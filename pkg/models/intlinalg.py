# models/intlinalg.py
"""
数字展開と指標計算の土台になる、厳密な整数線形代数。

行列式と余因子行列は sympy の分数を使わない (fraction-free) Bareiss 法で求め、
⟨M^{-1}s, s*⟩ = ⟨adj(M) s, s*⟩ / det(M) を丸めなしで評価できるようにする。
"""

from functools import lru_cache
from typing import List, Optional, Sequence, Tuple

import numpy as np
import sympy

import config
from models.errors import InvalidDigitSet, NotExpanding
from utils import IntVector, mat_vec, vec_sub

IntMatrix = Tuple[Tuple[int, ...], ...]


def _as_int_matrix(entries: Sequence[Sequence[int]]) -> IntMatrix:
    rows = tuple(tuple(int(x) for x in row) for row in entries)
    if not rows or any(len(row) != len(rows) for row in rows):
        raise ValueError(f"正方行列ではありません: {entries}")
    return rows


def det_adjugate(entries: Sequence[Sequence[int]]) -> Tuple[int, IntMatrix]:
    """
    整数正方行列の行列式と余因子行列を厳密に求める。

    Args:
        entries: d×d の整数行列。

    Returns:
        (det, adjugate): entries · adjugate = det · I を満たす。
        det = 0 もそのまま返す（膨張行列かどうかの判定は呼び出し側で行う）。
    """
    rows = _as_int_matrix(entries)
    if len(rows) == 1:
        # 1×1 の余因子行列は [[1]]
        return rows[0][0], ((1,),)
    mat = sympy.Matrix(rows)
    det = int(mat.det(method="bareiss"))
    adj = mat.adjugate(method="bareiss")
    adjugate = tuple(tuple(int(adj[i, j]) for j in range(adj.cols)) for i in range(adj.rows))
    return det, adjugate


@lru_cache(maxsize=None)
def _integer_power(rows: IntMatrix, n: int) -> IntMatrix:
    power = sympy.Matrix(rows) ** n
    return tuple(tuple(int(power[i, j]) for j in range(power.cols)) for i in range(power.rows))


class DilationCertificate:
    """膨張行列であることの証明書（数値的な判定結果）。"""

    def __init__(self, min_modulus: float, power_norm: float, power: int):
        self.min_modulus = min_modulus  # 固有値の絶対値の最小値
        self.power_norm = power_norm    # ||M^{-N}||_2
        self.power = power              # N

    def __repr__(self) -> str:
        return (f"DilationCertificate(min_modulus={self.min_modulus:.6g}, "
                f"norm(M^-{self.power})={self.power_norm:.3e})")


class DilationMatrix:
    """
    膨張行列 M。行列式・余因子行列・符号 σ = det/m をあわせて保持する。
    値は生成後に変更しない。転置 M* は必要になったときに作る。
    """

    def __init__(self, entries: Sequence[Sequence[int]], validate: bool = True):
        """
        Args:
            entries: d×d の整数行列。
            validate (bool): True なら check_dilation を実行し、膨張行列でなければ
                NotExpanding を送出する。
        """
        self.entries: IntMatrix = _as_int_matrix(entries)
        self.dim: int = len(self.entries)
        self.det, self.adjugate = det_adjugate(self.entries)
        self.m: int = abs(self.det)
        self.sign: int = 1 if self.det >= 0 else -1
        self.certificate: Optional[DilationCertificate] = None
        self._transposed: Optional["DilationMatrix"] = None
        if validate:
            self.certificate = check_dilation(self)

    # --- 派生する行列 ---

    def transpose(self) -> "DilationMatrix":
        """転置行列 M*（固有値は M と同じなので判定済みの証明書を引き継ぐ）。"""
        if self._transposed is None:
            dual = DilationMatrix([list(col) for col in zip(*self.entries)], validate=False)
            dual.certificate = self.certificate
            dual._transposed = self
            self._transposed = dual
        return self._transposed

    def is_transpose_of(self, other: "DilationMatrix") -> bool:
        return self.entries == tuple(zip(*other.entries))

    def power(self, n: int) -> IntMatrix:
        """M^n（n ≥ 0）の整数成分。任意精度。"""
        if n < 0:
            raise ValueError("負のべきは inverse_power を使ってください。")
        return _integer_power(self.entries, n)

    def inverse_power(self, n: int) -> Tuple[IntMatrix, int]:
        """M^{-n} = adj(M)^n / det^n を (分子の整数行列, 分母) で返す。"""
        return _integer_power(self.adjugate, n), self.det ** n

    def as_array(self) -> np.ndarray:
        return np.array(self.entries, dtype=float)

    def inverse_norm(self, n: int = 1) -> float:
        """||M^{-n}||_2（幾何的な誤差評価用の浮動小数点値）。"""
        inv = np.linalg.inv(self.as_array())
        return float(np.linalg.norm(np.linalg.matrix_power(inv, n), 2))

    # --- 厳密な演算 ---

    def apply(self, v: Sequence[int]) -> IntVector:
        return mat_vec(self.entries, v)

    def solve_integral(self, w: Sequence[int]) -> Optional[IntVector]:
        """M q = w の整数解 q を返す。整数解がなければ None。"""
        numer = mat_vec(self.adjugate, w)
        if any(x % self.det for x in numer):
            return None
        return tuple(x // self.det for x in numer)

    def is_congruent_zero(self, v: Sequence[int]) -> bool:
        """v ≡ 0 (mod M) か。"""
        return self.solve_integral(v) is not None

    def __eq__(self, other) -> bool:
        return isinstance(other, DilationMatrix) and self.entries == other.entries

    def __hash__(self) -> int:
        return hash(self.entries)

    def __repr__(self) -> str:
        return f"DilationMatrix({[list(r) for r in self.entries]}, det={self.det})"


def check_dilation(matrix: DilationMatrix) -> DilationCertificate:
    """
    全ての固有値の絶対値が 1 + τ 以上であることを数値的に確認する。
    念のため ||M^{-N}||_2 < 1 (N = config.DILATION_POWER_CHECK) もあわせて確認する。

    【エラー処理】
    判定に失敗した場合は NotExpanding を送出し、問題の固有値の絶対値を含める。
    境界上の行列は黙って扱わず、明示的に拒否する。
    """
    if matrix.det == 0:
        raise NotExpanding(0.0, "行列式が 0 です（固有値 0）。")
    moduli = np.abs(np.linalg.eigvals(matrix.as_array()))
    min_modulus = float(moduli.min())
    if min_modulus < 1.0 + config.DILATION_TOLERANCE:
        raise NotExpanding(min_modulus)
    if matrix.m < 2:
        raise NotExpanding(min_modulus, f"|det M| = {matrix.m} は 2 以上である必要があります。")

    power = config.DILATION_POWER_CHECK
    power_norm = matrix.inverse_norm(power)
    if not power_norm < 1.0:
        raise NotExpanding(min_modulus, f"||M^-{power}|| = {power_norm:.6g} が 1 未満になりません。")
    return DilationCertificate(min_modulus, power_norm, power)


def residue_decompose(v: Sequence[int], matrix: DilationMatrix, digit_set) -> Tuple[int, IntVector]:
    """
    v = s_i + M q となる数字の番号 i と整数ベクトル q を求める（行列数系の mod/div）。

    Args:
        v: 整数ベクトル。
        matrix (DilationMatrix): 膨張行列 M。
        digit_set: DigitSet、または数字ベクトルの並び。

    Returns:
        (i, q)

    【エラー処理】
    一致する数字が無い、または複数ある場合は剰余系が壊れているので InvalidDigitSet。
    """
    vectors = getattr(digit_set, "vectors", digit_set)
    found: List[Tuple[int, IntVector]] = []
    for i, s in enumerate(vectors):
        q = matrix.solve_integral(vec_sub(v, s))
        if q is not None:
            found.append((i, q))
    if len(found) != 1:
        raise InvalidDigitSet(
            f"ベクトル {tuple(v)} に一致する数字が {len(found)} 個あります（ちょうど 1 個である必要があります）。")
    return found[0]
