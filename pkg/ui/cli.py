# ui/cli.py
"""
コマンドラインの入口 `mpos`。

    mpos validate CONFIG
    mpos vc CONFIG -n N [INPUT] [--inverse] [--naive] [--rescale]
    mpos fourier CONFIG [INPUT] [--inverse] [--poisson]
    mpos verify CONFIG [--level 1|2] [--seed S] [--report out.xlsx]
    mpos tile CONFIG --depth N --output FILE [--format pgm|pgm-ascii|csv] [--cells C] [--measure N]

終了コード: 0 成功、1 恒等式の不成立、2 入力・設定の誤り（標準エラーにエラー名を出す）。
"""

import logging
from typing import Optional

import typer

import config
from repositories.raster_repository import FORMAT_PGM, FORMATS
from repositories.vector_repository import STDIO
from services import task_runner
from services.transform_service import FORWARD, INVERSE

app = typer.Typer(name="mpos", add_completion=False,
                  help="M 正ベクトル空間上の Walsh 関数・VC 変換・階段関数のフーリエ変換。")

_state = {"verbose": False}


@app.callback()
def main_options(verbose: bool = typer.Option(False, "--verbose", "-v", help="進捗を標準エラーに表示し、ログを DEBUG にする。")):
    _state["verbose"] = verbose
    if verbose:
        logging.getLogger().setLevel(logging.DEBUG)


def _status(message: str):
    logging.info(message)
    if _state["verbose"]:
        typer.echo(message, err=True)


def _run(name: str, task) -> None:
    outcome = task_runner.run_task(name, task, _status)
    if outcome.output:
        typer.echo(outcome.output, nl=False)
    if outcome.message:
        typer.echo(outcome.message, err=True)
    raise typer.Exit(code=outcome.exit_code)


@app.command()
def validate(config_path: str = typer.Argument(..., help="系の定義ファイル（JSON）")):
    """系を読み込んで検証し、m・det の符号・数字の表・膨張の証明書を表示する。"""
    _run("validate", task_runner.validate_task(config_path))


@app.command()
def vc(config_path: str = typer.Argument(..., help="系の定義ファイル（JSON）"),
       input_path: str = typer.Argument(STDIO, help="'re,im' の CSV（'-' で標準入力）"),
       n: int = typer.Option(..., "--n", "-n", help="スケール n（入力は m^n 行）"),
       inverse: bool = typer.Option(False, "--inverse", help="逆変換を行う"),
       naive: bool = typer.Option(False, "--naive", help="定義どおりの O(m^{2n}) の計算を使う"),
       rescale: bool = typer.Option(False, "--rescale", help="逆変換の出力に m^n を掛ける"),
       output: str = typer.Option(STDIO, "--output", "-o", help="出力先（'-' で標準出力）")):
    """VC 変換（既定は高速変換）。出力は m 進の添字順の 're,im' の行。"""
    direction = INVERSE if inverse else FORWARD
    _run("vc", task_runner.vc_task(config_path, n, direction, input_path, output, naive, rescale))


@app.command()
def fourier(config_path: str = typer.Argument(..., help="系の定義ファイル（JSON）"),
            input_path: str = typer.Argument(STDIO, help="階段関数ファイル（'-' で標準入力）"),
            inverse: bool = typer.Option(False, "--inverse", help="X* 上の関数の逆変換を行う"),
            poisson: bool = typer.Option(False, "--poisson", help="Poisson 和公式の両辺を表示する"),
            naive: bool = typer.Option(False, "--naive", help="素朴な VC 変換を使う"),
            output: str = typer.Option(STDIO, "--output", "-o", help="出力先（'-' で標準出力）")):
    """階段関数のフーリエ変換。S_n^{(p)} の関数は S_p^{(n)} の関数になる。"""
    _run("fourier", task_runner.fourier_task(config_path, input_path, output, inverse, poisson, naive))


@app.command()
def verify(config_path: str = typer.Argument(..., help="系の定義ファイル（JSON）"),
           level: int = typer.Option(1, "--level", "-l", help="1: n ≤ 3、2: n ≤ 6"),
           seed: int = typer.Option(config.DEFAULT_SEED, "--seed", help="乱数の種"),
           report: Optional[str] = typer.Option(None, "--report", help="結果を保存する .xlsx ファイル")):
    """恒等式の検証スイートを実行し、恒等式ごとの合否を表示する。"""
    _run("verify", task_runner.verify_task(config_path, level, seed, report))


@app.command()
def tile(config_path: str = typer.Argument(..., help="系の定義ファイル（JSON）"),
         depth: int = typer.Option(..., "--depth", "-d", help="深さ n（点数 m^n）"),
         output: str = typer.Option(..., "--output", "-o", help="出力ファイル"),
         fmt: str = typer.Option(FORMAT_PGM, "--format", "-f", help=f"出力形式: {' / '.join(FORMATS)}"),
         width: int = typer.Option(512, "--width", help="画像の幅"),
         height: int = typer.Option(512, "--height", help="画像の高さ"),
         cells: Optional[int] = typer.Option(None, "--cells", help="スケール c のセルごとに濃淡を変える"),
         measure: Optional[int] = typer.Option(None, "--measure", help="N 点のモンテカルロ法で測度を推定する"),
         seed: int = typer.Option(config.DEFAULT_SEED, "--seed", help="乱数の種")):
    """タイルの点群を PGM 画像または点の CSV として書き出す。"""
    _run("tile", task_runner.tile_task(config_path, depth, output, fmt, width, height, cells, measure, seed))
