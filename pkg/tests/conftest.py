# tests/conftest.py
"""テスト全体で使う系のコーパスと小さな補助関数。"""

import json

import numpy as np
import pytest

from models.digits import MPoint
from models.system import SystemConfig

# (ラベル, 行列, 数字集合) 。数字集合が None なら標準的な数字集合を使う
CORPUS = [
    ("dyadic", [[2]], [[0], [1]]),
    ("two_identity", [[2, 0], [0, 2]], None),
    ("twindragon", [[1, 1], [1, -1]], [[0, 0], [1, 0]]),
    ("cube_root_three", [[0, 0, 3], [1, 0, 0], [0, 1, 0]], None),
]
CORPUS_IDS = [label for label, _, _ in CORPUS]


def make_system(label: str) -> SystemConfig:
    for name, matrix, digits in CORPUS:
        if name == label:
            return SystemConfig(matrix, digits, label=name)
    raise KeyError(label)


@pytest.fixture(params=CORPUS_IDS)
def system(request) -> SystemConfig:
    return make_system(request.param)


@pytest.fixture
def dyadic() -> SystemConfig:
    return make_system("dyadic")


@pytest.fixture
def twindragon() -> SystemConfig:
    return make_system("twindragon")


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(12345)


@pytest.fixture
def write_config(tmp_path):
    """系の定義を JSON ファイルに書き出してパスを返す。"""
    def _write(data, name="system.json"):
        path = tmp_path / name
        path.write_text(json.dumps(data) if not isinstance(data, str) else data, encoding="utf-8")
        return str(path)
    return _write


def random_complex(rng: np.random.Generator, size) -> np.ndarray:
    return rng.standard_normal(size) + 1j * rng.standard_normal(size)


def random_point(rng: np.random.Generator, digit_set, space: str = "X", low: int = -2, high: int = 4) -> MPoint:
    """位置 low..high に一様な数字を持つ点。"""
    return MPoint(digit_set, {j: int(rng.integers(digit_set.m)) for j in range(low, high + 1)}, space)
