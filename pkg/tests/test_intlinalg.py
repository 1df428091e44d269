import pytest

from models.errors import NotExpanding
from models.intlinalg import DilationMatrix, det_adjugate, residue_decompose
from utils import mat_vec


@pytest.mark.parametrize("rows", [
    [[2]],
    [[1, 1], [1, -1]],
    [[2, 0], [0, 2]],
    [[0, 0, 3], [1, 0, 0], [0, 1, 0]],
    [[3, 1, 4], [1, 5, 9], [2, 6, 5]],
])
def test_adjugate_identity(rows):
    det, adj = det_adjugate(rows)
    d = len(rows)
    for i in range(d):
        for j in range(d):
            entry = sum(rows[i][k] * adj[k][j] for k in range(d))
            assert entry == (det if i == j else 0)


def test_sign_and_modulus():
    twindragon = DilationMatrix([[1, 1], [1, -1]])
    assert twindragon.det == -2
    assert twindragon.m == 2
    assert twindragon.sign == -1
    assert DilationMatrix([[2, 0], [0, 2]]).sign == 1


@pytest.mark.parametrize("rows", [
    [[1, 0], [0, 2]],
    [[1]],
    [[0, 1], [1, 0]],
    [[1, 1], [0, 1]],
])
def test_rejects_non_expanding(rows):
    with pytest.raises(NotExpanding) as excinfo:
        DilationMatrix(rows)
    assert excinfo.value.name == "NotExpanding"


def test_rejects_singular():
    with pytest.raises(NotExpanding):
        DilationMatrix([[2, 4], [1, 2]])


def test_certificate_is_attached():
    matrix = DilationMatrix([[0, 0, 3], [1, 0, 0], [0, 1, 0]])
    assert matrix.certificate.min_modulus == pytest.approx(3 ** (1 / 3))
    assert matrix.certificate.power_norm < 1.0


def test_transpose_shares_determinant():
    matrix = DilationMatrix([[1, 2], [-1, 1]])
    dual = matrix.transpose()
    assert dual.entries == ((1, -1), (2, 1))
    assert dual.det == matrix.det
    assert dual.is_transpose_of(matrix)
    assert dual.transpose() is matrix


def test_inverse_power_is_exact():
    matrix = DilationMatrix([[1, 1], [1, -1]])
    numer, denom = matrix.inverse_power(3)
    m3 = matrix.power(3)
    v = (5, -7)
    back = mat_vec(numer, mat_vec(m3, v))
    assert back == tuple(denom * x for x in v)


def test_solve_integral():
    matrix = DilationMatrix([[2, 0], [0, 2]])
    assert matrix.solve_integral((4, -2)) == (2, -1)
    assert matrix.solve_integral((1, 0)) is None
    assert matrix.is_congruent_zero((0, 6))


def test_residue_decompose_reconstructs():
    matrix = DilationMatrix([[1, 1], [1, -1]])
    digits = [(0, 0), (1, 0)]
    for v in [(3, 4), (-5, 2), (0, 1), (7, 7)]:
        i, q = residue_decompose(v, matrix, digits)
        rebuilt = tuple(s + mq for s, mq in zip(digits[i], matrix.apply(q)))
        assert rebuilt == v
