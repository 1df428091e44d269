# services/task_runner.py
"""
各コマンドの処理を統括するモジュール。
CLI からの要求に応じて、ファイルの読み込み、計算、書き出しの一連の流れを管理し、
エラー処理をここで一元的に行う。
"""

import logging
from typing import Callable, List, Optional

import numpy as np

import config
from models.errors import MposError
from models.step_function import SIDE_FREQUENCY, SIDE_TIME, SpectrumVector
from repositories import config_repository, raster_repository, report_repository, vector_repository
from services import fourier_service, tile_service, verification_service
from services.transform_service import (FORWARD, INVERSE, vc_fast, vc_forward_naive, vc_inverse_naive)

EXIT_OK = 0
EXIT_IDENTITY_FAILURE = 1
EXIT_USAGE = 2

StatusCallback = Callable[[str], None]


class TaskOutcome:
    """
    コマンド 1 回分の結果。
    output は標準出力に出す本体（係数・レポート）、message は標準エラーに出す短い通知。
    """

    def __init__(self, exit_code: int = EXIT_OK, output: str = "", message: str = ""):
        self.exit_code = exit_code
        self.output = output
        self.message = message

    def __iter__(self):
        return iter((self.exit_code, self.output, self.message))


def _silent(_: str):
    pass


def run_task(name: str, task: Callable[[StatusCallback], TaskOutcome],
             status_callback: StatusCallback = _silent) -> TaskOutcome:
    """
    コマンドを実行し、発生したエラーを終了コードとメッセージに変換する。

    Returns:
        TaskOutcome: 0 = 成功、1 = 恒等式の不成立、2 = 入力・設定の誤り
    """
    logging.info("コマンド開始: %s", name)
    try:
        outcome = task(status_callback)
        logging.info("コマンド終了: %s (exit=%d)", name, outcome.exit_code)
        return outcome

    # --- 【エラー処理】ここから下で、処理中に発生した様々なエラーを捕捉する ---

    except MemoryError:
        # 巨大な m^n を扱おうとした場合
        logging.exception("MemoryErrorが発生しました。")
        return TaskOutcome(EXIT_USAGE, message="MemoryError: メモリ不足のため、処理を中断しました。"
                                               "n または深さを小さくしてください。")

    except MposError as e:
        # 業務エラー: 機械可読な名前をそのまま返す
        logging.exception(f"処理中にハンドリング済みのエラーが発生しました: {e}")
        return TaskOutcome(EXIT_USAGE, message=str(e))

    except (FileNotFoundError, KeyError, ValueError, IOError, PermissionError) as e:
        # 予測可能なエラー群（ファイルが無い、書き込めない、値の範囲外など）
        logging.exception(f"処理中にハンドリング済みのエラーが発生しました: {e}")
        return TaskOutcome(EXIT_USAGE, message=f"{type(e).__name__}: {e}")

    except Exception as e:
        # 上記以外の予期せぬエラー（プログラムのバグなど）
        logging.exception("予期せぬエラーが発生しました。")
        return TaskOutcome(EXIT_USAGE, message=f"InternalError: {e}\n詳細はログファイル {config.LOG_FILE} を確認してください。")


# --- validate ---

def validate_task(config_path: str) -> Callable[[StatusCallback], TaskOutcome]:
    """
    系の定義ファイルを検証し、m・符号・数字集合の表・膨張行列の証明書を出力する。

    Args:
        config_path (str): 系の定義ファイル（JSON）のパス。

    Returns:
        run_task に渡すタスク関数。

    【エラー処理】
    行列や数字集合の誤りは config_repository / models から MposError として上がり、
    run_task で終了コード 2 に変換される。
    """
    def task(status: StatusCallback) -> TaskOutcome:
        system = config_repository.load_system(config_path)
        status(f"系 '{system.label}' は有効です。")
        D, Ds = system.digit_set, system.dual_digit_set
        lines = [
            f"label: {system.label}",
            f"dimension: {system.dim}",
            f"m: {system.m}",
            f"det_sign: {system.matrix.sign}",
            f"digits: {[list(v) for v in D]}",
            f"dual_digits: {[list(v) for v in Ds]}",
            f"add_table: {[list(r) for r in D.add_table]}",
            f"neg_table: {list(D.neg_table)}",
            f"dual_add_table: {[list(r) for r in Ds.add_table]}",
            f"certificate: {system.matrix.certificate}",
        ]
        return TaskOutcome(EXIT_OK, "\n".join(lines) + "\n")
    return task


# --- vc ---

def vc_task(config_path: str, n: int, direction: str, input_path: str,
            output_path: str = vector_repository.STDIO, naive: bool = False,
            rescale: bool = False) -> Callable[[StatusCallback], TaskOutcome]:
    """
    係数ファイルに VC 変換（高速または素朴）を施す。

    Args:
        config_path (str): 系の定義ファイルのパス。
        n (int): スケール。入力は m^n 個の係数。
        direction (str): FORWARD または INVERSE。
        input_path (str): 入力ファイル（"-" なら標準入力）。
        output_path (str): 出力ファイル（"-" なら標準出力）。
        naive (bool): True なら定義どおりの O(m^{2n}) の変換を使う。
        rescale (bool): 逆変換の出力に m^n を掛け、式どおりの往復で入力に戻るようにする。

    【エラー処理】
    係数の個数が m^n でなければ LengthMismatch、n < 0 や不明な方向は ValueError。
    """
    def task(status: StatusCallback) -> TaskOutcome:
        if n < 0:
            raise ValueError(f"n = {n} は 0 以上である必要があります。")
        if direction not in (FORWARD, INVERSE):
            raise ValueError(f"変換方向 '{direction}' は forward / inverse のいずれかです。")

        # --- 【通常処理】ステップ1: 系と係数の読み込み ---
        system = config_repository.load_system(config_path)
        values = vector_repository.read_vector(input_path, system.m ** n)
        side = SIDE_TIME if direction == FORWARD else SIDE_FREQUENCY
        v = SpectrumVector(n, values, system.m, side)

        # --- 【通常処理】ステップ2: 変換 ---
        status(f"VC変換 ({direction}, {'naive' if naive else 'fast'}) n={n}, m={system.m}")
        if naive:
            out = (vc_forward_naive if direction == FORWARD else vc_inverse_naive)(
                v, system.digit_set, system.dual_digit_set)
        else:
            out = vc_fast(v, system.digit_set, system.dual_digit_set, direction)
        coefficients = np.asarray(out.coefficients)
        if rescale and direction == INVERSE:
            coefficients = coefficients * float(system.m) ** n

        # --- 【通常処理】ステップ3: 書き出し ---
        if output_path != vector_repository.STDIO:
            vector_repository.write_vector(coefficients, output_path)
            return TaskOutcome(EXIT_OK, message=f"保存しました: {output_path}")
        return TaskOutcome(EXIT_OK, vector_repository.format_vector(coefficients))
    return task


# --- fourier ---

def fourier_task(config_path: str, input_path: str, output_path: str = vector_repository.STDIO,
                 inverse: bool = False, poisson: bool = False,
                 naive: bool = False) -> Callable[[StatusCallback], TaskOutcome]:
    """
    階段関数ファイルをフーリエ変換する（inverse=True なら逆変換）。
    形 (n, p) の関数は形 (p, n) の関数になる。

    Args:
        poisson (bool): Poisson 和公式の両辺を標準エラーに表示する。
        naive (bool): 内部の VC 変換に素朴な変換を使う。

    【エラー処理】
    空間の取り違え（X* の関数に順変換など）は SpaceMismatch、
    係数の個数が m^(n+p) でなければ ScaleContract / LengthMismatch。
    """
    def task(status: StatusCallback) -> TaskOutcome:
        system = config_repository.load_system(config_path)
        f = vector_repository.read_step_function(input_path, system.m)
        if inverse:
            result = fourier_service.inverse_fourier_step(f, system, naive)
        else:
            result = fourier_service.fourier_step(f, system, naive)
        status(f"{f.space} (n={f.n}, p={f.p}) → {result.space} (n={result.n}, p={result.p})")

        message = ""
        if poisson:
            primal = result if inverse else f
            check = fourier_service.poisson_check(primal, system)
            message = (f"poisson lhs={check.lhs!r} ({check.lhs_terms} terms) "
                       f"rhs={check.rhs!r} ({check.rhs_terms} terms) gap={check.gap:.3e}")
        if output_path != vector_repository.STDIO:
            vector_repository.write_step_function(result, output_path)
            return TaskOutcome(EXIT_OK, message=message)
        return TaskOutcome(EXIT_OK, vector_repository.format_step_function(result), message)
    return task


# --- verify ---

def verify_task(config_path: str, level: int = 1, seed: int = config.DEFAULT_SEED,
                report_path: Optional[str] = None) -> Callable[[StatusCallback], TaskOutcome]:
    """
    恒等式の検証スイートを実行する。

    Args:
        level (int): 1 は n ≤ 3、2 は n ≤ 6。
        seed (int): 乱数の種。同じ種なら出力は同じになる。
        report_path (str | None): 指定すると結果を Excel ファイルにも保存する。

    Returns:
        恒等式が 1 つでも成り立たなければ終了コード 1（標準エラーに最初の失敗の名前）。
    """
    def task(status: StatusCallback) -> TaskOutcome:
        system = config_repository.load_system(config_path)
        status(f"検証スイートを実行中: {system.label or config_path} (level {level})")
        report = verification_service.run_suite(system, level, seed)
        if report_path:
            report_repository.write_report(report_path, [report])
            status(f"レポートを保存しました: {report_path}")
        output = "\n".join(report.lines()) + "\n"
        failure = report.first_failure
        if failure is not None:
            return TaskOutcome(EXIT_IDENTITY_FAILURE, output, f"IdentityFailure: {failure.name}")
        return TaskOutcome(EXIT_OK, output)
    return task


# --- tile ---

def tile_task(config_path: str, depth: int, output_path: str, fmt: str = raster_repository.FORMAT_PGM,
              width: int = 512, height: int = 512, cells: Optional[int] = None,
              measure: Optional[int] = None, seed: int = config.DEFAULT_SEED) -> Callable[[StatusCallback], TaskOutcome]:
    """
    深さ depth のタイルの点群を作り、PGM 画像または点の CSV に書き出す。
    標準出力には点数・外接箱・一致した点の数（measure 指定時は測度の推定値）を出す。

    【エラー処理】
    - m^depth が点数の上限を超える場合は DepthTooLarge
    - d ≠ 2 で PGM を指定した場合は DimensionUnsupported
    - 書き込めない場合は PermissionError / IOError
    """
    def task(status: StatusCallback) -> TaskOutcome:
        if fmt not in raster_repository.FORMATS:
            raise ValueError(f"出力形式 '{fmt}' は {', '.join(raster_repository.FORMATS)} のいずれかです。")

        # --- 【通常処理】ステップ1: 点群の生成 ---
        system = config_repository.load_system(config_path)
        cloud = tile_service.tile_points(system.digit_set, depth)
        status(f"点群を生成しました: {len(cloud)} 点")

        # --- 【通常処理】ステップ2: 書き出し ---
        if fmt == raster_repository.FORMAT_CSV:
            raster_repository.write_points_csv(output_path, cloud.points)
        else:
            grid = tile_service.raster(cloud, width, height, cells)
            raster_repository.write_pgm(output_path, grid, binary=(fmt == raster_repository.FORMAT_PGM))

        # --- 【通常処理】ステップ3: 要約 ---
        low, high = cloud.bbox
        lines: List[str] = [
            f"points: {len(cloud)}",
            f"bbox_low: {[float(x) for x in low]}",
            f"bbox_high: {[float(x) for x in high]}",
            f"hausdorff_bound: {cloud.hausdorff_bound:.6g}",
            f"coincidences: {len(tile_service.cloud_coincidences(cloud))}",
        ]
        if measure is not None:
            estimate = tile_service.measure_estimate(system.digit_set, measure, depth, seed)
            lines.append(f"measure: {estimate.estimate:.6f} ± {estimate.stderr:.6f}")
        return TaskOutcome(EXIT_OK, "\n".join(lines) + "\n", f"保存しました: {output_path}")
    return task


