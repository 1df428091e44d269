# repositories/report_repository.py
"""
検証スイートの結果を Excel ファイル（.xlsx）に書き出すリポジトリ。
openpyxl の操作はこのクラスの中に閉じ込める。
"""

import errno
from typing import Iterable

from openpyxl import Workbook
from openpyxl.styles import Alignment, Border, Font, PatternFill, Side
from openpyxl.utils import get_column_letter

import config
HEADERS = ["系", "レベル", "恒等式", "結果", "誤差", "詳細"]


class ReportRepository:
    """検証結果のシートを作成して保存する。"""

    def __init__(self, file_path: str):
        self.file_path = file_path
        self.workbook = Workbook()
        self.sheet = self.workbook.active
        self.sheet.title = config.REPORT_SHEET_NAME
        self.sheet.append(HEADERS)
        self._style_header()

    def add_report(self, report):
        """
        スイート 1 回分の結果を行として追記する。失敗した行は背景色を変える。
        report は label・level・results（as_row() と passed を持つ要素）を持つもの。
        """
        fail_fill = PatternFill(start_color=config.FAIL_FILL_COLOR, end_color=config.FAIL_FILL_COLOR,
                                fill_type="solid")
        for result in report.results:
            self.sheet.append([report.label, report.level] + result.as_row())
            if not result.passed:
                for cell in self.sheet[self.sheet.max_row]:
                    cell.fill = fail_fill

    def save(self):
        """
        ファイルに保存する。

        【エラー処理】
        書き込み権限がない（他のアプリで開かれている）、ディスクの空き容量がない、
        といった保存時の問題をここで検知する。
        """
        self._apply_borders()
        self._fit_column_widths()
        try:
            self.workbook.save(self.file_path)
        except PermissionError:
            raise PermissionError(f"レポートの保存に失敗しました。\nファイルが他のプログラムで開かれていないか、"
                                  f"書き込み権限があるか確認してください。\nファイル: {self.file_path}")
        except OSError as e:
            if e.errno == errno.ENOSPC:
                raise IOError(f"ディスクの空き容量が不足しているため、ファイルを保存できません。\nファイル: {self.file_path}")
            raise IOError(f"ファイルの保存中にOSエラーが発生しました。\n詳細: {e}")

    # --- 以下、シートの見た目を整えるための補助的なメソッド群 ---

    def _style_header(self):
        font = Font(bold=True, color=config.HEADER_FONT_COLOR)
        fill = PatternFill(start_color=config.HEADER_FILL_COLOR, end_color=config.HEADER_FILL_COLOR, fill_type="solid")
        center = Alignment(horizontal="center", vertical="center")
        for cell in self.sheet[1]:
            cell.font = font
            cell.fill = fill
            cell.alignment = center

    def _apply_borders(self):
        thin = Side(style="thin")
        border = Border(left=thin, right=thin, top=thin, bottom=thin)
        for row in self.sheet.iter_rows():
            for cell in row:
                cell.border = border

    def _fit_column_widths(self):
        # 全角文字は 2 文字分として幅を見積もる
        for idx, column in enumerate(self.sheet.iter_cols(), 1):
            width = max((_display_width(c.value) for c in column), default=0)
            self.sheet.column_dimensions[get_column_letter(idx)].width = min(width + 2, 60)


def _display_width(value) -> int:
    if value is None:
        return 0
    return sum(2 if ord(ch) > 0x7F else 1 for ch in str(value))


def write_report(path: str, reports: Iterable) -> str:
    """検証結果をまとめて 1 つのシートに書き出し、保存したパスを返す。"""
    repo = ReportRepository(path)
    for report in reports:
        repo.add_report(report)
    repo.save()
    return path
