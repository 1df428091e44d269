# models/system.py
"""
系 (M, D, D*) をまとめて保持するデータモデル。
設定ファイル（JSON）の内容から生成し、生成時に全ての検証を済ませる。
"""

from typing import Any, Dict, List, Optional, Sequence

from models.digits import DigitSet, canonical_digit_set, validate_digit_set
from models.errors import ConfigError
from models.intlinalg import DilationMatrix


class SystemConfig:
    """
    膨張行列 M と数字集合 D、M* の数字集合 D* の組。

    digits / dual_digits を省略した場合は canonical_digit_set で生成する。
    """

    def __init__(self, matrix_rows: Sequence[Sequence[int]],
                 digits: Optional[Sequence[Sequence[int]]] = None,
                 dual_digits: Optional[Sequence[Sequence[int]]] = None,
                 label: str = ""):
        # --- 1. 膨張行列の検証（失敗すると NotExpanding） ---
        self.matrix = DilationMatrix(matrix_rows)
        self.dual_matrix = self.matrix.transpose()
        self.label = label

        # --- 2. 数字集合の検証、または標準的な数字集合の生成 ---
        self.digit_set: DigitSet = (validate_digit_set(self.matrix, digits) if digits is not None
                                    else canonical_digit_set(self.matrix))
        self.dual_digit_set: DigitSet = (validate_digit_set(self.dual_matrix, dual_digits)
                                         if dual_digits is not None
                                         else canonical_digit_set(self.dual_matrix))

    @property
    def m(self) -> int:
        return self.matrix.m

    @property
    def dim(self) -> int:
        return self.matrix.dim

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "SystemConfig":
        """
        JSON から読み込んだ辞書を検証して SystemConfig を作る。

        【エラー処理】
        必須の 'matrix' が無い、または型が不正な場合は ConfigError。
        """
        if not isinstance(data, dict) or "matrix" not in data:
            raise ConfigError("設定に必須項目 'matrix' がありません。")
        try:
            matrix = [[int(x) for x in row] for row in data["matrix"]]
            digits = _int_vectors(data.get("digits"))
            dual_digits = _int_vectors(data.get("dual_digits"))
        except (TypeError, ValueError) as e:
            raise ConfigError(f"行列または数字の形式が不正です。整数の配列で指定してください。\n詳細: {e}")
        return cls(matrix, digits, dual_digits, str(data.get("label", "")))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "label": self.label,
            "matrix": [list(r) for r in self.matrix.entries],
            "digits": [list(v) for v in self.digit_set.vectors],
            "dual_digits": [list(v) for v in self.dual_digit_set.vectors],
        }

    def __repr__(self) -> str:
        return f"SystemConfig(label='{self.label}', m={self.m}, d={self.dim})"


def _int_vectors(raw) -> Optional[List[List[int]]]:
    if raw is None:
        return None
    vectors = []
    for v in raw:
        # d = 1 では [0, 1] のようにスカラーの並びも許す
        vectors.append([int(x) for x in v] if isinstance(v, (list, tuple)) else [int(v)])
    return vectors
