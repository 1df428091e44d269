# models/step_function.py
"""
変換の入出力となるデータモデル。

- SpectrumVector: 長さ m^n の係数列（時間側は H_n、周波数側は H*_n で添字付け）。
- StepFunction:   クラス S_n^{(p)} の階段関数。セル U_{n,k} ごとの値を m 進の添字順に並べる。
"""

from typing import Sequence

import numpy as np

import config
from models.digits import MPoint, cell_of_point
from models.errors import LengthMismatch, ScaleContract, SpaceMismatch

SIDE_TIME = "time"
SIDE_FREQUENCY = "frequency"


def _frozen_complex(values: Sequence[complex]) -> np.ndarray:
    arr = np.array(values, dtype=np.complex128).reshape(-1)
    arr.flags.writeable = False
    return arr


class SpectrumVector:
    """VC 変換の係数列。"""

    def __init__(self, n: int, coefficients: Sequence[complex], m: int, side: str = SIDE_TIME):
        if side not in (SIDE_TIME, SIDE_FREQUENCY):
            raise ValueError(f"不明な側 '{side}' です。")
        self.n = int(n)
        self.m = int(m)
        self.side = side
        self.coefficients = _frozen_complex(coefficients)
        # 【エラー処理】長さがちょうど m^n でなければ受け付けない
        if self.coefficients.size != self.m ** self.n:
            raise LengthMismatch(
                f"係数の個数 {self.coefficients.size} が m^n = {self.m ** self.n} と一致しません。")

    def __len__(self) -> int:
        return int(self.coefficients.size)

    def __repr__(self) -> str:
        return f"SpectrumVector(n={self.n}, m={self.m}, side={self.side})"


class StepFunction:
    """
    S_n^{(p)} の階段関数 f = Σ f_{n,k} 1_{U_{n,k}}。

    n は値のスケール（セル U_{n,k}）、p は台のスケール（supp f ⊂ M^p(U)）。
    係数は m^{n+p} 個で、k 番目がセル U_{n,k} 上の値。
    space が "X*" のときは双対側のセル U*_{n,k} 上の関数を表す。
    """

    def __init__(self, space: str, n: int, p: int, coefficients: Sequence[complex], m: int):
        if space not in (config.STEP_SPACE_PRIMAL, config.STEP_SPACE_DUAL):
            raise SpaceMismatch(f"不明な空間 '{space}' です。")
        self.space = space
        self.n = int(n)
        self.p = int(p)
        self.m = int(m)
        self.coefficients = _frozen_complex(coefficients)
        # 【エラー処理】形 (n, p) と係数の個数の整合性
        if self.n + self.p < 0:
            raise ScaleContract(f"n + p = {self.n + self.p} は 0 以上である必要があります。")
        if self.coefficients.size != self.cell_count:
            raise ScaleContract(
                f"係数の個数 {self.coefficients.size} が m^(n+p) = {self.cell_count} と一致しません。")

    @property
    def cell_count(self) -> int:
        return self.m ** (self.n + self.p)

    @property
    def shape(self):
        return (self.n, self.p)

    def __repr__(self) -> str:
        return f"StepFunction({self.space}, n={self.n}, p={self.p}, m={self.m})"


def indicator(space: str, n: int, k: int, m: int, p: int = 0) -> StepFunction:
    """セル U_{n,k} の指示関数（台のスケール p は k が収まる最小値以上）。"""
    while m ** (n + p) <= k:
        p += 1
    coefficients = np.zeros(m ** (n + p), dtype=np.complex128)
    coefficients[k] = 1.0
    return StepFunction(space, n, p, coefficients, m)


def refine(f: StepFunction, n: int, p: int) -> StepFunction:
    """
    S_{f.n}^{(f.p)} の関数を、より細かいセル・より広い台のクラス S_n^{(p)} に埋め込む。
    セル U_{n0,k} はスケール n で m^{n-n0} 個のセルに分かれ、広がった台の部分は 0 で埋める。
    """
    if n < f.n or p < f.p:
        raise ScaleContract(f"({f.n}, {f.p}) から ({n}, {p}) へは細分できません。")
    values = np.repeat(np.asarray(f.coefficients), f.m ** (n - f.n))
    padded = np.zeros(f.m ** (n + p), dtype=np.complex128)
    padded[:values.size] = values
    return StepFunction(f.space, n, p, padded, f.m)


def evaluate(f: StepFunction, x: MPoint) -> complex:
    """点 x ∈ X^0 での値。台 M^p(U) の外では 0。"""
    if x.space != f.space:
        raise SpaceMismatch(f"{f.space} 上の関数を {x.space} の点で評価できません。")
    k = cell_of_point(x, f.n)
    if k >= f.cell_count:
        return 0j
    return complex(f.coefficients[k])
