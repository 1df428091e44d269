import numpy as np
import pytest
from typer.testing import CliRunner

from ui.cli import app

runner = CliRunner()

TWINDRAGON = {"label": "twindragon", "matrix": [[1, 1], [1, -1]], "digits": [[0, 0], [1, 0]]}
DYADIC = {"label": "dyadic", "matrix": [[2]], "digits": [[0], [1]]}


def _parse_rows(text):
    rows = [line.split(",") for line in text.strip().splitlines()]
    return np.array([complex(float(re), float(im)) for re, im in rows])


def test_validate(write_config):
    result = runner.invoke(app, ["validate", write_config(TWINDRAGON)])
    assert result.exit_code == 0
    assert "m: 2" in result.output
    assert "det_sign: -1" in result.output
    assert "dual_digits: [[0, 0], [1, 0]]" in result.output


@pytest.mark.parametrize("data, name", [
    ({"matrix": [[1, 0], [0, 2]]}, "NotExpanding"),
    ({"matrix": [[2]], "digits": [[0], [2]]}, "NotAResidueSystem"),
    ({"matrix": [[2]], "digits": [[1], [0]]}, "MissingZero"),
    ("", "ConfigError"),
])
def test_validate_errors(write_config, data, name):
    result = runner.invoke(app, ["validate", write_config(data)])
    assert result.exit_code == 2
    assert name in result.output


def test_missing_config(tmp_path):
    result = runner.invoke(app, ["validate", str(tmp_path / "none.json")])
    assert result.exit_code == 2
    assert "FileNotFoundError" in result.output


def test_vc_delta(write_config):
    result = runner.invoke(app, ["vc", write_config(DYADIC), "-n", "2"], input="1,0\n0,0\n0,0\n0,0\n")
    assert result.exit_code == 0
    np.testing.assert_allclose(_parse_rows(result.output), np.full(4, 0.25))


def test_vc_length_mismatch(write_config):
    result = runner.invoke(app, ["vc", write_config(DYADIC), "-n", "2"], input="1,0\n0,0\n")
    assert result.exit_code == 2
    assert "LengthMismatch" in result.output


def test_vc_roundtrip_with_rescale(write_config, tmp_path):
    config_path = write_config(TWINDRAGON)
    source = tmp_path / "b.csv"
    source.write_text("1,0\n2,-1\n0.5,0\n0,3\n", encoding="utf-8")
    forward, back = tmp_path / "a.csv", tmp_path / "b2.csv"
    assert runner.invoke(app, ["vc", config_path, str(source), "-n", "2", "-o", str(forward)]).exit_code == 0
    result = runner.invoke(app, ["vc", config_path, str(forward), "-n", "2", "--inverse", "--rescale",
                                 "-o", str(back)])
    assert result.exit_code == 0
    np.testing.assert_allclose(_parse_rows(back.read_text(encoding="utf-8")),
                               _parse_rows(source.read_text(encoding="utf-8")), atol=1e-12)


def test_vc_naive_and_fast_agree(write_config, tmp_path):
    config_path = write_config(TWINDRAGON)
    source = tmp_path / "b.csv"
    source.write_text("1,0\n2,-1\n0.5,0\n0,3\n", encoding="utf-8")
    fast = runner.invoke(app, ["vc", config_path, str(source), "-n", "2"])
    naive = runner.invoke(app, ["vc", config_path, str(source), "-n", "2", "--naive"])
    np.testing.assert_allclose(_parse_rows(fast.output), _parse_rows(naive.output), atol=1e-12)


def test_fourier_roundtrip(write_config, tmp_path):
    config_path = write_config(DYADIC)
    source = tmp_path / "f.csv"
    source.write_text("X,1,1\n1,0\n0,0\n0.5,0.5\n-2,0\n", encoding="utf-8")
    spectrum, back = tmp_path / "g.csv", tmp_path / "f2.csv"
    assert runner.invoke(app, ["fourier", config_path, str(source), "-o", str(spectrum)]).exit_code == 0
    assert spectrum.read_text(encoding="utf-8").splitlines()[0] == "X*,1,1"
    assert runner.invoke(app, ["fourier", config_path, str(spectrum), "--inverse",
                               "-o", str(back)]).exit_code == 0
    lines = back.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "X,1,1"
    np.testing.assert_allclose(_parse_rows("\n".join(lines[1:])), [1, 0, 0.5 + 0.5j, -2], atol=1e-12)


def test_fourier_poisson(write_config, tmp_path):
    source = tmp_path / "f.csv"
    source.write_text("X,0,0\n1,0\n", encoding="utf-8")
    result = runner.invoke(app, ["fourier", write_config(DYADIC), str(source), "--poisson"])
    assert result.exit_code == 0
    assert "X*,0,0" in result.output
    assert "poisson lhs=(1+0j)" in result.output


def test_verify_passes(write_config, tmp_path):
    report = tmp_path / "report.xlsx"
    result = runner.invoke(app, ["verify", write_config(TWINDRAGON), "--seed", "3", "--report", str(report)])
    assert result.exit_code == 0
    assert "PASS poisson" in result.output
    assert "FAIL" not in result.output
    assert report.exists()


def test_verify_bad_level(write_config):
    result = runner.invoke(app, ["verify", write_config(DYADIC), "--level", "5"])
    assert result.exit_code == 2


def test_tile_pgm(write_config, tmp_path):
    image = tmp_path / "tile.pgm"
    result = runner.invoke(app, ["tile", write_config(TWINDRAGON), "--depth", "8", "-o", str(image),
                                 "--width", "16", "--height", "8"])
    assert result.exit_code == 0
    assert "points: 256" in result.output
    assert "coincidences: 0" in result.output
    payload = image.read_bytes()
    assert payload.startswith(b"P5\n16 8\n255\n")
    assert len(payload) == len(b"P5\n16 8\n255\n") + 16 * 8


def test_tile_csv_for_one_dimension(write_config, tmp_path):
    points = tmp_path / "points.csv"
    result = runner.invoke(app, ["tile", write_config(DYADIC), "-d", "3", "-o", str(points), "-f", "csv"])
    assert result.exit_code == 0
    assert points.read_text(encoding="ascii").splitlines() == ["0", "0.125", "0.25", "0.375",
                                                               "0.5", "0.625", "0.75", "0.875"]


def test_tile_pgm_needs_two_dimensions(write_config, tmp_path):
    result = runner.invoke(app, ["tile", write_config(DYADIC), "-d", "3", "-o", str(tmp_path / "x.pgm")])
    assert result.exit_code == 2
    assert "DimensionUnsupported" in result.output


def test_tile_depth_budget(write_config, tmp_path, monkeypatch):
    monkeypatch.setenv("MPOS_POINT_BUDGET", "64")
    result = runner.invoke(app, ["tile", write_config(TWINDRAGON), "-d", "7", "-o", str(tmp_path / "x.pgm")])
    assert result.exit_code == 2
    assert "DepthTooLarge" in result.output


def test_tile_measure(write_config, tmp_path):
    result = runner.invoke(app, ["tile", write_config(DYADIC), "-d", "10", "-o", str(tmp_path / "p.csv"),
                                 "-f", "csv", "--measure", "10000"])
    assert result.exit_code == 0
    assert "measure: 0.999" in result.output
