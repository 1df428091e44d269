# repositories/__init__.py
"""ファイルの読み書き（系の定義 JSON、係数の CSV、PGM 画像、検証結果の Excel）。"""
