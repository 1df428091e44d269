# repositories/raster_repository.py
"""
タイルの出力: グレイマップ（PGM の P2 / P5）と点群の CSV。
"""

import errno

import numpy as np
import pandas as pd

import config
FORMAT_PGM = "pgm"
FORMAT_PGM_ASCII = "pgm-ascii"
FORMAT_CSV = "csv"
FORMATS = (FORMAT_PGM, FORMAT_PGM_ASCII, FORMAT_CSV)


def to_grey_levels(grid: np.ndarray, max_value: int = config.PGM_MAX_VALUE) -> np.ndarray:
    """
    raster の結果（0 = 空、1.. = 占有またはセル番号 + 1）を 0..max_value の濃淡に直す。
    占有だけの格子は max_value 一色、セル番号付きなら 1..max_value に均等に割り振る。
    """
    top = int(grid.max()) if grid.size else 0
    if top <= 1:
        return (grid > 0).astype(np.int64) * max_value
    levels = 1 + ((grid - 1) * (max_value - 1)) // (top - 1)
    return np.where(grid > 0, levels, 0)


def encode_pgm(grid: np.ndarray, binary: bool = True) -> bytes:
    levels = to_grey_levels(grid)
    height, width = levels.shape
    header = f"{'P5' if binary else 'P2'}\n{width} {height}\n{config.PGM_MAX_VALUE}\n".encode("ascii")
    if binary:
        return header + levels.astype(np.uint8).tobytes(order="C")
    body = "\n".join(" ".join(str(int(v)) for v in row) for row in levels) + "\n"
    return header + body.encode("ascii")


def _write_bytes(path: str, payload: bytes):
    try:
        with open(path, "wb") as fp:
            fp.write(payload)
    except PermissionError:
        raise PermissionError(f"ファイルに書き込めません。書き込み権限を確認してください。\nファイル: {path}")
    except OSError as e:
        if e.errno == errno.ENOSPC:
            raise IOError(f"ディスクの空き容量が不足しているため、ファイルを保存できません。\nファイル: {path}")
        raise


def write_pgm(path: str, grid: np.ndarray, binary: bool = True):
    _write_bytes(path, encode_pgm(grid, binary))


def format_points(points: np.ndarray) -> str:
    """1 行に 1 点（座標をカンマ区切り、有効数字 17 桁）。points は (点の数, d) の配列。"""
    df = pd.DataFrame(np.asarray(points, dtype=float) + 0.0)
    return df.to_csv(header=False, index=False, float_format=config.CSV_FLOAT_FORMAT, lineterminator="\n")


def write_points_csv(path: str, points: np.ndarray):
    _write_bytes(path, format_points(points).encode("ascii"))
