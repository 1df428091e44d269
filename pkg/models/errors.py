# models/errors.py
"""
アプリケーション全体で使う例外クラス。

どの例外も `name` 属性に機械可読なエラー名（クラス名）を持つ。
CLI はこの名前をそのまま標準エラーに出力し、終了コード 2 で終了する。
"""


class MposError(ValueError):
    """全ての業務エラーの基底クラス。"""

    def __init__(self, message: str = ""):
        super().__init__(message)
        self.message = message

    @property
    def name(self) -> str:
        return type(self).__name__

    def __str__(self) -> str:
        return f"{self.name}: {self.message}" if self.message else self.name


class NotExpanding(MposError):
    """行列が膨張行列でない（絶対値が 1 以下の固有値を持つ）。"""

    def __init__(self, modulus: float, message: str = ""):
        self.modulus = modulus
        super().__init__(message or f"固有値の絶対値 {modulus:.12g} が 1 を超えていません。")


class InvalidDigitSet(MposError):
    """剰余分解で一致する数字が 0 個または複数個見つかった（剰余系が壊れている）。"""


class NotAResidueSystem(MposError):
    """数字の組 (i, j) が M を法として合同。"""

    def __init__(self, i: int, j: int, message: str = ""):
        self.pair = (i, j)
        super().__init__(message or f"数字 s_{i} と s_{j} が M を法として合同です。")


class MissingZero(MposError):
    """先頭の数字 s_0 が零ベクトルでない。"""


class NotInH(MposError):
    """ベクトルが H に属さない（貪欲な数字抽出が 0 に到達しない）。"""


class SpaceMismatch(MposError):
    """X と X* の点、または異なる数字集合の点を混在させた。"""


class ScaleTooCoarse(MposError):
    """要求されたスケールより細かい桁を持つ点が渡された。"""


class ScaleContract(MposError):
    """ステップ関数の形 (n, p) と係数の個数が整合しない（内部の整合性違反）。"""


class DepthTooLarge(MposError):
    """m^n が点数の上限を超える。"""


class DimensionUnsupported(MposError):
    """この処理は指定された次元に対応していない。"""


class LengthMismatch(MposError):
    """入力ベクトルの長さが m^n と一致しない。"""


class ConfigError(MposError):
    """設定ファイル・入力ファイルの形式が不正。"""
