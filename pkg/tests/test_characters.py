import numpy as np
import pytest

from models.digits import GridPoint, MPoint, cell_of_point, gamma_of_index, h_set, oplus, scale_point
from models.errors import ScaleTooCoarse, SpaceMismatch
from services.characters import (CharValue, cell_indicator, char_sum, chi, digit_char_matrix,
                                 exact_root_sum, grid_exponents, kernel_partition_sum, unitary_gram,
                                 walsh_eval, walsh_gram, walsh_polynomial, walsh_polynomial_order)

from tests.conftest import random_point


def test_char_value_arithmetic():
    a = CharValue(2, 3)
    b = CharValue(2, 3)
    assert (a * b).exponent == 1
    assert a.conjugate() == CharValue(1, 3)
    assert CharValue(0, 5).to_complex() == 1


def test_exact_root_sum():
    assert exact_root_sum([4, 0, 0, 0], 4) == 4
    assert exact_root_sum([1, 1, 1, 1], 4) == 0
    # 部分群 {0, 2} の剰余類の和
    assert exact_root_sum([1, 0, 1, 0], 4) == 0
    assert exact_root_sum([0, 2, 0, 2], 4) == 0
    assert exact_root_sum([1, 1, 0], 3) == pytest.approx(1 + np.exp(2j * np.pi / 3))


def test_twindragon_digit_table_is_hadamard(twindragon):
    assert digit_char_matrix(twindragon.digit_set, twindragon.dual_digit_set) == ((0, 0), (0, 1))


def test_char_sum_is_exact(system):
    matrix, m = system.matrix, system.m
    candidates = h_set(system.digit_set, 2)
    candidates |= {matrix.apply(g) for g in list(candidates)}
    for l in candidates:
        expected = m if matrix.is_congruent_zero(l) else 0
        assert char_sum(l, system.dual_digit_set) == expected


def test_unitary_gram_is_identity(system):
    assert np.array_equal(unitary_gram(system.digit_set, system.dual_digit_set), np.eye(system.m))


def test_chi_is_bicharacter(system, rng):
    D, Ds = system.digit_set, system.dual_digit_set
    for _ in range(500):
        x, y = random_point(rng, D), random_point(rng, D)
        omega, eta = random_point(rng, Ds, "X*"), random_point(rng, Ds, "X*")
        assert chi(oplus(x, y), omega) == chi(x, omega) * chi(y, omega)
        assert chi(x, oplus(omega, eta)) == chi(x, omega) * chi(x, eta)
        assert chi(x, MPoint(Ds, {}, "X*")).exponent == 0


def test_chi_commutes_with_dilation(system, rng):
    # χ(Mx, ω) = χ(x, M*ω)
    D, Ds = system.digit_set, system.dual_digit_set
    for _ in range(500):
        x, omega = random_point(rng, D), random_point(rng, Ds, "X*")
        p = int(rng.integers(-2, 3))
        assert chi(scale_point(x, p), omega) == chi(x, scale_point(omega, p))


def test_chi_requires_primal_and_dual(twindragon):
    x = MPoint(twindragon.digit_set, {1: 1})
    with pytest.raises(SpaceMismatch):
        chi(x, x)


def test_chi_is_trivial_on_h_times_h_star(system):
    D, Ds = system.digit_set, system.dual_digit_set
    for k in range(system.m ** 2):
        gamma = GridPoint(0, k).to_point(D)
        for a in range(system.m ** 2):
            assert chi(gamma, GridPoint(0, a).to_point(Ds, "X*")).exponent == 0


def test_walsh_eval_matches_grid_exponents(system):
    D, Ds = system.digit_set, system.dual_digit_set
    n = 2
    exponents = grid_exponents(n, D, Ds)
    for k in range(system.m ** n):
        x = GridPoint(n, k).to_point(D)
        for alpha in range(system.m ** n):
            assert walsh_eval(alpha, x, Ds).exponent == exponents[k, alpha]


def test_walsh_zero_is_constant(twindragon):
    x = GridPoint(3, 5).to_point(twindragon.digit_set)
    assert walsh_eval(0, x, twindragon.dual_digit_set).exponent == 0


def test_walsh_gram_is_identity(system):
    for n in range(0, 3):
        if system.m ** n > 64:
            break
        gram = walsh_gram(n, system.digit_set, system.dual_digit_set)
        assert np.array_equal(gram, np.eye(system.m ** n))


def test_walsh_polynomial_and_order(dyadic):
    D, Ds = dyadic.digit_set, dyadic.dual_digit_set
    coefficients = [0.5, 0.0, 0.25, 0.0]
    assert walsh_polynomial_order(coefficients, 2) == 2
    assert walsh_polynomial_order([3.0], 2) == 0
    # x = 1/4: W_0 = 1, W_2 = χ(1/4, 1 at position -1) = exp(2πi·1/2)
    x = MPoint(D, {2: 1})
    assert walsh_polynomial(coefficients, x, Ds) == pytest.approx(0.25)


def test_kernel_partition_sum(system):
    D, Ds = system.digit_set, system.dual_digit_set
    m = system.m
    n = 1
    for k in range(m ** (n + 1)):
        x = GridPoint(n + 1, k).to_point(D)
        inside = k < m
        assert kernel_partition_sum(x, n, Ds) == (1 if inside else 0)
        for target in range(m ** n):
            assert cell_indicator(x, n, target, Ds) == (1 if k // m == target else 0)


def test_kernel_partition_rejects_points_outside_tile(dyadic):
    gamma = MPoint(dyadic.digit_set, {0: 1})
    with pytest.raises(ScaleTooCoarse):
        kernel_partition_sum(gamma, 1, dyadic.dual_digit_set)


def test_gamma_character_matches_digit_table(twindragon):
    # χ(M^{-1}s_1, γ*_[1]) は数字の表の T[1][1]
    x = GridPoint(1, 1).to_point(twindragon.digit_set)
    omega = GridPoint(0, 1).to_point(twindragon.dual_digit_set, "X*")
    assert chi(x, omega).exponent == 1
    assert gamma_of_index(1, twindragon.digit_set) == (1, 0)


def test_walsh_is_h_periodic(system, rng):
    D, Ds, m = system.digit_set, system.dual_digit_set, system.m
    for _ in range(200):
        x = random_point(rng, D)
        gamma = GridPoint(0, int(rng.integers(m ** 3))).to_point(D)
        alpha = int(rng.integers(m ** 2))
        assert walsh_eval(alpha, oplus(x, gamma), Ds) == walsh_eval(alpha, x, Ds)


@pytest.mark.parametrize("n", [0, 1, 2])
def test_walsh_is_constant_on_cells(system, rng, n):
    D, Ds, m = system.digit_set, system.dual_digit_set, system.m
    for k in range(m ** n):
        anchor = GridPoint(n, k).to_point(D)
        for _ in range(5):
            x = oplus(anchor, random_point(rng, D, low=n + 1, high=n + 4))
            assert cell_of_point(x, n) == k
            for alpha in range(m ** n):
                assert walsh_eval(alpha, x, Ds) == walsh_eval(alpha, anchor, Ds)
