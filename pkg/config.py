# config.py
"""
アプリケーション共通の設定値。
各モジュールはここで定義された定数を参照する。
"""

import os

# --- ログ設定 ---
# main.py で参照される
LOG_FILE = "mpos.log"
LOG_FORMAT = '%(asctime)s [%(levelname)s] %(message)s'


# --- 膨張行列の判定 ---
# 固有値の絶対値がこの値だけ 1 を上回っていなければ膨張行列とみなさない
DILATION_TOLERANCE = 1e-6
# ||M^{-N}|| < 1 を確認するときのべき指数 N
DILATION_POWER_CHECK = 64


# --- 点数の上限（m^n の上限） ---
POINT_BUDGET_ENV = "MPOS_POINT_BUDGET"
DEFAULT_POINT_BUDGET = 2 ** 20


def point_budget() -> int:
    """環境変数 MPOS_POINT_BUDGET があればその値を、なければ既定値を返す。"""
    raw = os.environ.get(POINT_BUDGET_ENV)
    if raw is None or not raw.strip():
        return DEFAULT_POINT_BUDGET
    try:
        value = int(raw)
    except ValueError:
        # 【エラー処理】数値でない値が設定されている場合は既定値に戻す
        return DEFAULT_POINT_BUDGET
    return value if value > 0 else DEFAULT_POINT_BUDGET


# --- 許容誤差 ---
# 検証スイート・テストで共通に使う
TOL_FAST_VS_NAIVE = 1e-10
TOL_ROUNDTRIP = 1e-12
TOL_POISSON = 1e-10
TOL_PLANCHEREL = 1e-12
TOL_SHIFT = 1e-12
TOL_QUADRATURE = 1e-6


# --- 検証スイート ---
# レベルごとの最大深さ n
VERIFY_LEVEL_DEPTH = {1: 3, 2: 6}
VERIFY_RANDOM_CASES = 100
DEFAULT_SEED = 20240607


# --- モンテカルロ測度推定 ---
MEASURE_MIN_SAMPLES = 10 ** 4
MEASURE_DEFAULT_SAMPLES = 10 ** 5
MEASURE_DEFAULT_DEPTH = 12
# 近接判定の半径 = MEASURE_RADIUS_FACTOR * ||M^{-n}|| * diam(D)
MEASURE_RADIUS_FACTOR = 2.0


# --- ファイル形式 ---
CSV_FLOAT_FORMAT = "%.17g"
PGM_MAX_VALUE = 255
STEP_SPACE_PRIMAL = "X"
STEP_SPACE_DUAL = "X*"


# --- Excelレポートのスタイル ---
# report_repository で参照される
REPORT_SHEET_NAME = "検証結果"
HEADER_FONT_COLOR = "000000"
HEADER_FILL_COLOR = "CEE6C1"
FAIL_FILL_COLOR = "F4CCCC"
