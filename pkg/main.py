"""
アプリケーションのエントリーポイント（開始地点）。
このスクリプトを直接実行するか、インストール後に `mpos` コマンドとして起動します。
"""
import logging

import config
from ui.cli import app


def main():
    # --- 1. ログ機能の初期設定 ---
    # 処理状況とエラーの詳細（スタックトレース）を config.LOG_FILE に追記する。
    # 標準出力は計算結果の出力専用とし、ログは書き込まない。
    logging.basicConfig(
        level=logging.INFO,
        format=config.LOG_FORMAT,
        filename=config.LOG_FILE,
        encoding='utf-8',
        filemode='a'
    )
    logging.info("mpos を起動しました。")

    # --- 2. コマンドの実行 ---
    # 終了コードは各コマンドが typer.Exit で返す
    try:
        app()
    finally:
        logging.info("mpos を終了しました。")


if __name__ == '__main__':
    main()
