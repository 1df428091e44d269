# utils.py
"""
複数のモジュールから使われる小さな補助関数群。
m 進の桁変換、整数ベクトル演算、数値の文字列化など。
"""

from typing import List, Sequence, Tuple

IntVector = Tuple[int, ...]


def to_base_m(k: int, m: int, length: int = 0) -> List[int]:
    """
    非負整数 k の m 進展開を下位桁から順に返す。

    Args:
        k (int): 変換する非負整数。
        m (int): 基数（2 以上）。
        length (int): 最低限の桁数。足りない分は 0 で埋める。

    Returns:
        List[int]: [k_0, k_1, ...]（k = Σ k_j m^j）。
    """
    if k < 0:
        raise ValueError(f"負の添字 {k} は m 進展開できません。")
    digits: List[int] = []
    while k:
        k, r = divmod(k, m)
        digits.append(r)
    if len(digits) < length:
        digits.extend([0] * (length - len(digits)))
    return digits


def from_base_m(digits: Sequence[int], m: int) -> int:
    """下位桁から並んだ m 進の桁列を整数に戻す。"""
    k = 0
    for d in reversed(digits):
        k = k * m + d
    return k


def num_digits(k: int, m: int) -> int:
    """k を表すのに必要な m 進の桁数（k = 0 なら 0）。"""
    count = 0
    while k:
        k //= m
        count += 1
    return count


def reverse_digits(k: int, m: int, n: int) -> int:
    """n 桁の m 進表現の桁順を反転した添字（桁反転置換）。"""
    return from_base_m(list(reversed(to_base_m(k, m, n))), m)


# --- 整数ベクトル ---

def vec_add(a: Sequence[int], b: Sequence[int]) -> IntVector:
    return tuple(x + y for x, y in zip(a, b))


def vec_sub(a: Sequence[int], b: Sequence[int]) -> IntVector:
    return tuple(x - y for x, y in zip(a, b))


def mat_vec(rows: Sequence[Sequence[int]], v: Sequence[int]) -> IntVector:
    """整数行列と整数ベクトルの積（任意精度）。"""
    return tuple(sum(a * x for a, x in zip(row, v)) for row in rows)


def dot(a: Sequence[int], b: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(a, b))


def max_norm(v: Sequence[int]) -> int:
    return max((abs(x) for x in v), default=0)


# --- 文字列化 ---

def format_float(x: float) -> str:
    """
    往復可能な最短の10進表現を返す（repr と同じ）。
    -0.0 は 0.0 にそろえ、同じ入力から常に同じバイト列が出るようにする。
    """
    x = float(x)
    if x == 0.0:
        x = 0.0
    return repr(x)
