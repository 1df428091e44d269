# repositories/vector_repository.py
"""
複素ベクトル（1 行 're,im'）と階段関数ファイルの読み書き。

階段関数ファイルの形式:
    1 行目   space,n,p        （例: X,2,1）
    2 行目~  re,im            m^{n+p} 行、m 進の添字順

数値は往復可能な最短の 10 進表現で書き出すので、同じ入力からは常に同じバイト列になる。
"""

import errno
import io
import sys
from typing import Optional, TextIO, Tuple

import numpy as np
import pandas as pd

import config
from models.errors import ConfigError, LengthMismatch
from models.step_function import StepFunction
from utils import format_float

STDIO = "-"
_COLUMNS = ["re", "im"]


def _read_text(path: str) -> str:
    if path == STDIO:
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fp:
            return fp.read()
    except FileNotFoundError:
        raise FileNotFoundError(f"入力ファイルが見つかりません: {path}")


def _parse_complex_rows(text: str, source: str) -> np.ndarray:
    """'re,im' の行を pandas で読み、複素数の配列にする。"""
    if not text.strip():
        return np.zeros(0, dtype=np.complex128)
    try:
        df = pd.read_csv(io.StringIO(text), header=None, names=_COLUMNS, dtype=float, index_col=False,
                         skip_blank_lines=True, float_precision="round_trip")
    except (ValueError, pd.errors.ParserError) as e:
        # 【エラー処理】数値でない値や列数の誤り
        raise ConfigError(f"'{source}' を 're,im' の CSV として読めません。\n詳細: {e}")
    if df.isna().any().any():
        raise ConfigError(f"'{source}' に値の欠けた行があります（各行に re と im が必要です）。")
    return df["re"].to_numpy() + 1j * df["im"].to_numpy()


def read_vector(path: str, expected_length: Optional[int] = None) -> np.ndarray:
    """
    複素ベクトルを読み込む。path が '-' なら標準入力から読む。

    【エラー処理】
    expected_length と行数が一致しない場合は LengthMismatch。
    """
    values = _parse_complex_rows(_read_text(path), path)
    if expected_length is not None and values.size != expected_length:
        raise LengthMismatch(f"入力の行数 {values.size} が m^n = {expected_length} と一致しません。")
    return values


def _complex_frame(values: np.ndarray) -> pd.DataFrame:
    values = np.asarray(values, dtype=np.complex128)
    return pd.DataFrame({"re": [format_float(z.real) for z in values],
                         "im": [format_float(z.imag) for z in values]})


def format_vector(values: np.ndarray) -> str:
    """1 行 're,im' の CSV 文字列（末尾に改行）。"""
    return _complex_frame(values).to_csv(header=False, index=False, lineterminator="\n")


def _write_text(text: str, path: str, stream: Optional[TextIO]):
    """
    path が '-' なら stream（既定は標準出力）へ、それ以外はファイルへ書き出す。

    【エラー処理】
    書き込み権限がない場合は PermissionError、ディスクの空き容量がない場合は IOError に
    ファイル名を添えて送出し直す。
    """
    if path == STDIO:
        (stream or sys.stdout).write(text)
        return
    try:
        with open(path, "w", encoding="utf-8", newline="") as fp:
            fp.write(text)
    except PermissionError:
        raise PermissionError(f"ファイルに書き込めません。書き込み権限を確認してください。\nファイル: {path}")
    except OSError as e:
        if e.errno == errno.ENOSPC:
            raise IOError(f"ディスクの空き容量が不足しているため、ファイルを保存できません。\nファイル: {path}")
        raise


def write_vector(values: np.ndarray, path: str = STDIO, stream: Optional[TextIO] = None):
    """複素ベクトルを書き出す。path が '-' なら stream（既定は標準出力）へ。"""
    _write_text(format_vector(values), path, stream)


# --- 階段関数 ---

def _parse_header(line: str, source: str) -> Tuple[str, int, int]:
    parts = [p.strip() for p in line.split(",")]
    if len(parts) != 3 or parts[0] not in (config.STEP_SPACE_PRIMAL, config.STEP_SPACE_DUAL):
        raise ConfigError(f"'{source}' の 1 行目は 'space,n,p'（space は X または X*）である必要があります: {line!r}")
    try:
        return parts[0], int(parts[1]), int(parts[2])
    except ValueError:
        raise ConfigError(f"'{source}' の 1 行目の n, p が整数ではありません: {line!r}")


def read_step_function(path: str, m: int) -> StepFunction:
    """
    階段関数ファイルを読み込む。

    【エラー処理】
    - 空のファイル・ヘッダーの誤り → ConfigError
    - n + p < 0                     → ScaleContract
    - 係数の行数が m^{n+p} と違う   → LengthMismatch
    """
    text = _read_text(path)
    if not text.strip():
        raise ConfigError(f"階段関数ファイルが空です: {path}")
    header, _, body = text.lstrip().partition("\n")
    space, n, p = _parse_header(header, path)
    values = _parse_complex_rows(body, path)
    if n + p >= 0 and values.size != m ** (n + p):
        raise LengthMismatch(f"係数の行数 {values.size} が m^(n+p) = {m ** (n + p)} と一致しません。")
    return StepFunction(space, n, p, values, m)


def format_step_function(f: StepFunction) -> str:
    """見出し行 'space,n,p' に続けて m^{n+p} 行の係数。"""
    return f"{f.space},{f.n},{f.p}\n" + format_vector(f.coefficients)


def write_step_function(f: StepFunction, path: str = STDIO, stream: Optional[TextIO] = None):
    _write_text(format_step_function(f), path, stream)
