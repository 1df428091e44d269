from fractions import Fraction

import pytest

from models.digits import (GridPoint, MPoint, ancestor_cell, canonical_digit_set, cell_of_point,
                           check_h_decomposition, gamma_of_index, h_point, h_set, index_of_gamma, oplus,
                           oplus_index, ominus, ominus_index, point_to_vector, scale_point, split_point,
                           validate_digit_set)
from models.errors import (InvalidDigitSet, MissingZero, NotAResidueSystem, NotInH, ScaleTooCoarse,
                           SpaceMismatch)
from models.intlinalg import DilationMatrix

from tests.conftest import make_system, random_point


def test_canonical_digits_for_twindragon():
    digit_set = canonical_digit_set(DilationMatrix([[1, 1], [1, -1]]))
    assert digit_set.vectors == ((0, 0), (1, 0))


def test_canonical_digits_for_two_identity():
    digit_set = canonical_digit_set(DilationMatrix([[2, 0], [0, 2]]))
    assert digit_set.vectors == ((0, 0), (1, 0), (0, 1), (1, 1))


def test_canonical_digits_are_deterministic():
    matrix = DilationMatrix([[0, 0, 3], [1, 0, 0], [0, 1, 0]])
    first = canonical_digit_set(matrix)
    second = canonical_digit_set(DilationMatrix([[0, 0, 3], [1, 0, 0], [0, 1, 0]]))
    assert first.vectors == second.vectors
    assert first.vectors[0] == (0, 0, 0)
    assert len(first) == 3


def test_rejects_congruent_pair():
    with pytest.raises(NotAResidueSystem) as excinfo:
        validate_digit_set(DilationMatrix([[2]]), [[0], [2]])
    assert excinfo.value.pair == (0, 1)


def test_rejects_missing_zero():
    with pytest.raises(MissingZero):
        validate_digit_set(DilationMatrix([[2]]), [[1], [0]])


def test_rejects_wrong_count():
    with pytest.raises(InvalidDigitSet):
        validate_digit_set(DilationMatrix([[2]]), [[0], [1], [3]])


def test_digit_group_axioms(system):
    D = system.digit_set
    m = D.m
    for i in range(m):
        assert D.add(i, 0) == i
        assert D.add(i, D.neg(i)) == 0
        for j in range(m):
            assert D.add(i, j) == D.add(j, i)
            for k in range(m):
                assert D.add(D.add(i, j), k) == D.add(i, D.add(j, k))


def test_carry_free_addition_differs_from_vector_sum():
    D = make_system("dyadic").digit_set
    x = MPoint(D, {1: 1})
    # 1/2 ⊕ 1/2 = 0、通常の和は 1
    assert oplus(x, x).is_zero


def test_oplus_ominus_inverse(system, rng):
    D = system.digit_set
    for _ in range(200):
        x, y = random_point(rng, D), random_point(rng, D)
        assert oplus(ominus(x, y), y) == x
        assert ominus(oplus(x, y), y) == x
        assert oplus(x, y) == oplus(y, x)


def test_points_in_different_spaces_do_not_mix(twindragon):
    x = MPoint(twindragon.digit_set, {1: 1})
    omega = MPoint(twindragon.dual_digit_set, {1: 1}, "X*")
    with pytest.raises(SpaceMismatch):
        oplus(x, omega)


def test_split_gives_ordinary_sum(twindragon):
    D = twindragon.digit_set
    x = MPoint(D, {-2: 1, 0: 1, 1: 1, 3: 1})
    u, h = split_point(x)
    assert u.in_tile() and h.in_h()
    assert point_to_vector(x) == tuple(a + b for a, b in zip(point_to_vector(u), point_to_vector(h)))


def test_scale_point_shifts_positions(dyadic):
    x = MPoint(dyadic.digit_set, {1: 1, 2: 1})
    assert point_to_vector(x) == (Fraction(3, 4),)
    assert point_to_vector(scale_point(x, 2)) == (Fraction(3),)


@pytest.mark.parametrize("k", [0, 1, 5, 13, 42, 255])
def test_gamma_index_roundtrip(system, k):
    D = system.digit_set
    assert index_of_gamma(gamma_of_index(k, D), D) == k


def test_gamma_of_index_dyadic(dyadic):
    assert [gamma_of_index(k, dyadic.digit_set) for k in range(6)] == [(k,) for k in range(6)]


def test_negative_integer_is_not_in_h(dyadic):
    with pytest.raises(NotInH):
        index_of_gamma((-1,), dyadic.digit_set)


def test_twindragon_h_sets(twindragon):
    assert h_set(twindragon.digit_set, 2) == {(0, 0), (1, 0), (1, 1), (2, 1)}
    assert len(h_set(twindragon.digit_set, 4)) == 16


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_h_decomposition(system, n):
    if system.m ** n > 4096:
        pytest.skip("大きすぎる")
    assert check_h_decomposition(system.digit_set, n)


def test_h_point_matches_vector(twindragon):
    D = twindragon.digit_set
    for k in range(16):
        gamma = gamma_of_index(k, D)
        assert point_to_vector(h_point(gamma, D)) == tuple(Fraction(x) for x in gamma)


def test_grid_point_and_cell_roundtrip(system):
    D = system.digit_set
    n = 2
    for k in range(system.m ** (n + 1)):
        x = GridPoint(n, k).to_point(D)
        assert cell_of_point(x, n) == k
        assert GridPoint.from_point(x, n) == GridPoint(n, k)


def test_cell_of_point_drops_fine_digits(dyadic):
    x = MPoint(dyadic.digit_set, {1: 1, 3: 1})
    assert cell_of_point(x, 1) == 1
    with pytest.raises(ScaleTooCoarse):
        cell_of_point(x, 1, strict=True)


def test_grid_point_vector(dyadic):
    # M^{-3}γ_[5] = 5/8
    assert point_to_vector(GridPoint(3, 5).to_point(dyadic.digit_set)) == (Fraction(5, 8),)


def test_index_oplus_ominus(system):
    D = system.digit_set
    m = D.m
    for a in range(m ** 2):
        for b in range(m ** 2):
            assert ominus_index(oplus_index(a, b, D), b, D) == a


@pytest.mark.parametrize("n", [1, 2, 3])
def test_anchor_refines_ancestor(system, n):
    # M^{-n}γ_[k] = M^{-(n-1)}γ_[k // m] + M^{-n}s_{k mod m}
    D, m = system.digit_set, system.m
    for k in range(m ** n):
        anchor = GridPoint(n, k).to_point(D)
        parent = ancestor_cell(k, m, n, n - 1)
        step = point_to_vector(MPoint(D, {n: k % m}))
        expected = tuple(a + b for a, b in zip(point_to_vector(GridPoint(n - 1, parent).to_point(D)), step))
        assert point_to_vector(anchor) == expected
        for coarser in range(n + 1):
            assert cell_of_point(anchor, coarser) == ancestor_cell(k, m, n, coarser)


def test_ancestor_cell_rejects_finer_scale():
    with pytest.raises(ValueError):
        ancestor_cell(3, 2, 1, 2)
