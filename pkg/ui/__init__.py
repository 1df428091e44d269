# ui/__init__.py
"""コマンドラインの入口 `mpos`。"""
