# models/__init__.py
"""
データモデル層。膨張行列・数字集合・点・階段関数と、業務エラーの定義を持つ。
計算の手順そのものは services に置く。
"""
