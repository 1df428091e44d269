# services/__init__.py
"""計算処理（指標・VC 変換・フーリエ変換・タイル・検証スイート）とコマンドの統括。"""
