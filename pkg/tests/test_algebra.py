import random
from fractions import Fraction

import pytest
from sympy.polys.domains import QQ

from ptwalls.algebra import (TORUS, LaurentElement, LaurentRing, QMatrix, RingMismatchError, RowReducer,
                             ShapeMismatchError, WeightVector, chi, kernel_basis, rank, rat, rat_str, solve_linear)


def test_rat_accepts_exact_inputs():
    assert rat(3) == QQ(3)
    assert rat('-6/8') == QQ(-3, 4)
    assert rat(Fraction(2, 6)) == QQ(1, 3)
    assert rat(QQ(5, 7)) == QQ(5, 7)
    assert rat(1, 3) == QQ(1, 3)
    assert rat_str(QQ(-3, 4)) == '-3/4'
    assert rat_str(QQ(8, 4)) == '2'


@pytest.mark.parametrize('value', [0.5, '0.5', '1e3'])
def test_rat_refuses_floats(value):
    with pytest.raises(TypeError):
        rat(value)


def test_rank_and_kernel():
    m = QMatrix.from_rows([[1, 2, 3], [2, 4, 6], [1, 0, 1]])
    assert rank(m) == 2
    (k, ) = kernel_basis(m)
    assert m @ k == QMatrix(3, 1)
    assert k[2, 0] == 1


def test_kernel_of_zero_matrix_is_everything():
    basis = kernel_basis(QMatrix(2, 3))
    assert len(basis) == 3


def test_solve_linear():
    m = QMatrix.from_rows([[1, 1], [1, -1]])
    assert solve_linear(m, [3, 1]) == [QQ(2), QQ(1)]
    singular = QMatrix.from_rows([[1, 1], [2, 2]])
    assert solve_linear(singular, [1, 3]) is None


def test_qmatrix_rejects_out_of_range_entries():
    with pytest.raises(ShapeMismatchError):
        QMatrix(2, 2, {(2, 0): 1})
    with pytest.raises(ShapeMismatchError):
        QMatrix(2, 3) @ QMatrix(2, 3)


def test_random_matrices_rank_nullity():
    rng = random.Random(11)
    for _ in range(20):
        rows, cols = rng.randint(1, 6), rng.randint(1, 6)
        m = QMatrix.from_rows([[rng.randint(-2, 2) for _ in range(cols)] for _ in range(rows)])
        basis = kernel_basis(m)
        assert rank(m) + len(basis) == cols
        for k in basis:
            assert m @ k == QMatrix(rows, 1)


def test_row_reducer_normal_forms_and_coordinates():
    rr = RowReducer([{'a': 1, 'b': 1}, {'b': 1, 'c': 1}])
    assert rr.rank == 2
    assert rr.contains({'a': 1, 'c': -1})
    assert not rr.contains({'c': 1})
    assert rr.coordinates({'a': 2, 'b': 2}) is not None
    assert rr.coordinates({'c': 1, 'a': 5}) is None


def test_weight_vector_arithmetic():
    a, b = WeightVector(1, -2), WeightVector(3, 4)
    assert a + b == WeightVector(4, 2)
    assert b - a == WeightVector(2, 6)
    assert -a == WeightVector(-1, 2)
    assert a.scale(3) == WeightVector(3, -6)
    assert a.dot(b) == -5


def test_laurent_arithmetic_and_weights():
    x, u = TORUS.gen('x'), TORUS.gen('u')
    f = x * u**-1 + x
    assert f.weights() == [WeightVector(1, -1), WeightVector(1, 0)]
    assert (x**-2).inverse() == x**2
    assert chi((1, -1)) == x * u**-1
    assert (f - f).is_zero()
    assert str(chi((2, 0), -3)) == '-3*x^2'


def test_laurent_weight_of_inhomogeneous_element_raises():
    with pytest.raises(ValueError):
        (TORUS.gen('x') + TORUS.one()).weight()


def test_laurent_ring_mismatch():
    other = LaurentRing('U', ('y', 'v'), (WeightVector(-1, 0), WeightVector(3, 1)))
    with pytest.raises(RingMismatchError):
        TORUS.gen('x') + other.gen('y')


def test_laurent_substitution_is_a_ring_map():
    chart = LaurentRing('U', ('y', 'v'), (WeightVector(-1, 0), WeightVector(3, 1)))
    images = [chi((-1, 0)), chi((3, 1))]
    f = LaurentElement(chart, {(2, 1): 3, (0, -1): -1})
    g = LaurentElement(chart, {(1, 0): 1})
    assert (f * g).substitute(TORUS, images) == f.substitute(TORUS, images) * g.substitute(TORUS, images)
    assert f.substitute(TORUS, images).weights() == f.weights()
