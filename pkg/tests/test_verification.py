import pytest

import config
from models.digits import DigitSet
from services import verification_service
from services.characters import cell_indicator
from services.verification_service import IdentityResult, SuiteReport, run_suite

from tests.conftest import make_system

EXPECTED_NAMES = [
    "char_sum", "digit_unitarity", "vc_normalization", "vc_fast_vs_naive", "vc_unitarity",
    "walsh_orthogonality", "kernel_partition", "h_decomposition", "fourier_duality",
    "fourier_roundtrip", "plancherel", "poisson", "shift", "tile_self_similarity",
]


def test_suite_passes_for_corpus(system):
    report = run_suite(system, level=1, seed=1)
    assert [r.name for r in report.results] == EXPECTED_NAMES
    assert report.passed, report.lines()
    assert report.first_failure is None


@pytest.mark.slow
@pytest.mark.parametrize("label", ["dyadic", "twindragon"])
def test_suite_level_two(label):
    assert run_suite(make_system(label), level=2).passed


def test_suite_is_reproducible(twindragon):
    first = run_suite(twindragon, level=1, seed=99)
    second = run_suite(twindragon, level=1, seed=99)
    assert first.lines() == second.lines()


def test_corrupted_dual_digits_fail_char_sum():
    system = make_system("dyadic")
    system.dual_digit_set = DigitSet(system.dual_matrix, [(0,), (2,)])
    report = run_suite(system, level=1)
    assert not report.passed
    assert report.first_failure.name == "char_sum"


def test_unknown_level(twindragon):
    with pytest.raises(ValueError):
        run_suite(twindragon, level=3)


def test_h_decomposition_check(twindragon):
    assert verification_service.check_h_decomposition_all(twindragon, 4).passed


def test_report_lines():
    report = SuiteReport("x", 1, [IdentityResult("poisson", True, 1.5e-15),
                                  IdentityResult("shift", False, None, "detail")])
    assert report.lines() == ["PASS poisson gap=1.500e-15", "FAIL shift (detail)"]
    assert not report.passed
    assert report.first_failure.name == "shift"


def test_kernel_partition_covers_every_cell(system):
    result = verification_service.check_kernel_partition(system, 3)
    assert result.passed, result.detail


def test_kernel_partition_catches_overlapping_cells(dyadic, monkeypatch):
    # 最後のセルにも属すると答える指示関数は分割にならない
    def also_last_cell(x, n, k, dual_digit_set):
        if n >= 2 and k == dyadic.m ** n - 1:
            return 1
        return cell_indicator(x, n, k, dual_digit_set)

    monkeypatch.setattr(verification_service, "cell_indicator", also_last_cell)
    assert not verification_service.check_kernel_partition(dyadic, 3).passed


def test_random_step_functions(twindragon, rng):
    functions = verification_service.random_step_functions(twindragon, 2, config.VERIFY_RANDOM_CASES, rng)
    assert len(functions) == config.VERIFY_RANDOM_CASES >= 100
    assert all(0 <= f.n <= 2 and -f.n <= f.p <= 2 for f in functions)
