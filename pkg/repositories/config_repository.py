# repositories/config_repository.py
"""
系 (M, D, D*) の定義ファイル（JSON）の読み書き。

形式:
    {"label": "twindragon", "matrix": [[1, 1], [1, -1]], "digits": [[0, 0], [1, 0]]}
digits / dual_digits は省略可能（省略時は標準的な数字集合を生成する）。
"""

import json
import logging
import os

from models.errors import ConfigError
from models.system import SystemConfig


def load_system(path: str) -> SystemConfig:
    """
    定義ファイルを読み込み、検証済みの SystemConfig を返す。

    【エラー処理】
    - ファイルが存在しない          → FileNotFoundError
    - 空のファイル・JSON として不正 → ConfigError
    - 行列・数字集合の検証に失敗    → NotExpanding / NotAResidueSystem / MissingZero など
    """
    try:
        with open(path, encoding="utf-8") as fp:
            text = fp.read()
    except FileNotFoundError:
        raise FileNotFoundError(f"設定ファイルが見つかりません: {path}")

    if not text.strip():
        raise ConfigError(f"設定ファイルが空です: {os.path.basename(path)}")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(f"設定ファイルを JSON として読めません: {os.path.basename(path)}\n詳細: {e}")

    system = SystemConfig.from_dict(data)
    logging.info("系を読み込みました: %s (%s)", system, path)
    return system


def save_system(system: SystemConfig, path: str):
    """検証済みの系を、生成された数字集合も含めて書き出す。"""
    with open(path, "w", encoding="utf-8") as fp:
        json.dump(system.to_dict(), fp, ensure_ascii=False, indent=2)
