import random

import pytest

from ptwalls.algebra import QMatrix, ShapeMismatchError, WindowTooSmallError, rank
from ptwalls.cech_dgla import (CechHomCochain, ClassBasis, HomPair, SemicosimplicialDGLA, WeightComplex, bracket,
                               cech_class_coordinates, cech_differential, cohomology_representatives, compose,
                               cup_product, default_margin, default_window, ext_dimensions, hom_differential,
                               move_to_chart, period_matrix, random_cochain, total_differential)
from ptwalls.localmodel import build_model, resolve_sheaf


@pytest.fixture(scope='module')
def single3():
    return build_model('single', 3)


@pytest.fixture(scope='module')
def end_e(single3):
    E = resolve_sheaf('E', single3)
    return HomPair(E, E)


def _sign(m, n):
    return -1 if (m * n) % 2 else 1


def test_total_differential_squares_to_zero(end_e):
    rng = random.Random(0)
    for degree in (-1, 0, 1, 2):
        for _ in range(5):
            f = random_cochain(end_e, degree, rng)
            assert f.is_well_formed()
            df = total_differential(f)
            assert df.is_well_formed()
            assert not total_differential(df)


def test_cech_differential_squares_to_zero(end_e):
    rng = random.Random(1)
    for _ in range(5):
        f = random_cochain(end_e, 0, rng, level=0)
        assert not cech_differential(cech_differential(f))


def test_bracket_is_graded_antisymmetric(end_e):
    rng = random.Random(2)
    for m, n in [(0, 0), (1, 1), (1, 2), (-1, 2)]:
        f = random_cochain(end_e, m, rng, level=0)
        g = random_cochain(end_e, n, rng, level=0)
        assert bracket(f, g) == bracket(g, f) * (-_sign(m, n))


def test_bracket_satisfies_jacobi(end_e):
    rng = random.Random(3)
    for a, b, c in [(0, 1, 1), (1, 1, 1), (-1, 1, 2)]:
        x = random_cochain(end_e, a, rng, level=0)
        y = random_cochain(end_e, b, rng, level=0)
        z = random_cochain(end_e, c, rng, level=0)
        # [x, [y, z]] = [[x, y], z] + (-1)^{ab} [y, [x, z]]
        lhs = bracket(x, bracket(y, z))
        rhs = bracket(bracket(x, y), z) + bracket(y, bracket(x, z)) * _sign(a, b)
        assert lhs == rhs


def test_hom_differential_is_a_derivation_of_the_bracket(end_e):
    rng = random.Random(4)
    for m, n in [(0, 1), (1, 1), (-1, 1), (1, 0)]:
        f = random_cochain(end_e, m, rng, level=0)
        g = random_cochain(end_e, n, rng, level=0)
        lhs = hom_differential(bracket(f, g))
        rhs = bracket(hom_differential(f), g) + bracket(f, hom_differential(g)) * _sign(m, 1)
        assert lhs == rhs


def test_identity_is_a_cocycle(end_e):
    dgla = SemicosimplicialDGLA(end_e.source)
    ident = dgla.identity(0)
    assert not total_differential(ident)
    chart0 = ident.restrict_level(0)
    on_first = CechHomCochain(end_e, {k: v for k, v in chart0.entries.items() if k[0] == (0, )})
    on_second = CechHomCochain(end_e, {k: v for k, v in chart0.entries.items() if k[0] == (1, )})
    assert move_to_chart(on_first, 1) == on_second


def test_move_to_chart_needs_a_single_chart(end_e):
    rng = random.Random(5)
    f = random_cochain(end_e, 1, rng, level=1)
    if f:
        with pytest.raises(ShapeMismatchError):
            move_to_chart(f, 0)


def test_weight_complex_is_a_complex(end_e):
    window = default_window(end_e, margin=1)
    for w in list(window.weights())[::7]:
        wc = WeightComplex(end_e, w)
        for k in range(-1, 3):
            a, b = wc.matrix(k), wc.matrix(k + 1)
            if a.cols and b.rows and a.rows == b.cols:
                assert b @ a == QMatrix(b.rows, a.cols)


@pytest.mark.parametrize('n', [3, 4, pytest.param(5, marks=pytest.mark.slow)])
def test_ext_of_the_polystable_object(n):
    E = resolve_sheaf('E', build_model('single', n))
    dims = ext_dimensions(E, E, degrees=range(4))
    assert [dims[k] for k in range(4)] == [2, n + 2, 2 * n - 2, n - 2]


@pytest.mark.parametrize('n', [2, 3, 4, pytest.param(5, marks=pytest.mark.slow)])
def test_ext2_structure_sheaf_against_twist(n):
    model = build_model('single', n)
    dims = ext_dimensions(resolve_sheaf('O_C', model), resolve_sheaf('O_C(-1)', model), degrees=[2])
    assert dims[2] == n


def test_ext_is_stable_under_a_larger_window(single3):
    E = resolve_sheaf('E', single3)
    pair = HomPair(E, E)
    small = ext_dimensions(E, E, degrees=range(4))
    large = ext_dimensions(E, E, window=default_window(pair, margin=default_margin(single3) + 2), degrees=range(4))
    assert small == large


def test_window_without_guard_ring_is_refused(single3):
    E = resolve_sheaf('E', single3)
    with pytest.raises(WindowTooSmallError):
        ext_dimensions(E, E, window=default_window(HomPair(E, E), margin=0))


def test_class_coordinates_of_representatives(end_e):
    reps = cohomology_representatives(end_e.source, end_e.target, 1, pair=end_e)
    assert len(reps) == 5
    for i, z in enumerate(reps):
        assert not total_differential(z)
        coords = cech_class_coordinates(z, reps)
        assert coords == [1 if j == i else 0 for j in range(len(reps))]


def test_coboundaries_have_no_class(end_e):
    rng = random.Random(6)
    basis = ClassBasis(end_e, 1)
    for _ in range(3):
        b = random_cochain(end_e, 0, rng)
        assert basis.coordinates(total_differential(b)) == {}


def test_non_cocycles_are_rejected_by_class_basis(end_e):
    rng = random.Random(7)
    basis = ClassBasis(end_e, 1)
    f = random_cochain(end_e, 1, rng, level=0)
    while not total_differential(f):
        f = random_cochain(end_e, 1, rng, level=0)
    with pytest.raises(ValueError):
        basis.coordinates(f)


def test_period_matrix_of_representatives(end_e):
    reps = cohomology_representatives(end_e.source, end_e.target, 1, pair=end_e)
    assert period_matrix(reps, 1) == QMatrix.identity(len(reps))
    rng = random.Random(8)
    shifted = reps[0] + total_differential(random_cochain(end_e, 0, rng))
    mixed = period_matrix([shifted, reps[0] + reps[1], reps[1]], 1)
    assert rank(mixed) == 2


def test_total_differential_is_a_derivation_of_the_cup_product(end_e):
    rng = random.Random(9)
    for m, n in [(0, 0), (0, 1), (1, 1), (1, 0), (-1, 2)]:
        for _ in range(3):
            f = random_cochain(end_e, m, rng)
            g = random_cochain(end_e, n, rng)
            lhs = total_differential(cup_product(f, g))
            rhs = cup_product(total_differential(f), g) + cup_product(f, total_differential(g)) * _sign(m, 1)
            assert lhs == rhs


def test_cup_product_on_charts_is_composition(end_e):
    rng = random.Random(10)
    f = random_cochain(end_e, 1, rng, level=0)
    g = random_cochain(end_e, 0, rng, level=0)
    assert cup_product(f, g).restrict_level(0) == compose(f, g)


def test_cup_product_is_associative(end_e):
    rng = random.Random(11)
    x, y, z = (random_cochain(end_e, d, rng) for d in (1, 0, 1))
    assert cup_product(cup_product(x, y), z) == cup_product(x, cup_product(y, z))
