import random

import pytest
import sympy

from ptwalls.algebra import ModelError, QMatrix, rank
from ptwalls.curvechains import (CechHomIdentification, ChainTwist, HomMonomial, OrderedHomBasis, XiClass,
                                 compose_basis, ext1_long_sequence_dims, glued_locus_kernel, hom_dimension,
                                 rank_stratify, serre_pairing_matrix, xi_composition_matrix)
from ptwalls.localmodel import build_model


@pytest.mark.parametrize('a, b, expected', [(2, 3, 6), (0, 0, 1), (3, -1, 3), (-2, 2, 2), (1, -4, 1), (-1, -1, 0),
                                            (0, -1, 0), (-3, 0, 0)])
def test_chain_hom_dimension(a, b, expected):
    assert hom_dimension(a, b) == expected
    assert len(OrderedHomBasis((a, b))) == expected


def test_single_hom_dimension():
    assert [hom_dimension(a) for a in range(-2, 3)] == [0, 0, 1, 2, 3]


def test_ordered_bases():
    assert OrderedHomBasis(ChainTwist(3)).names() == ['e0^3', 'e0^2*e1', 'e0*e1^2', 'e1^3']
    assert OrderedHomBasis((2, 1)).names() == ['e0^2 + 0', 'e0*e1 + 0', 'e1^2 + f1', '0 + f0']
    assert [m.kind for m in OrderedHomBasis((1, 1))] == ['first', 'glued', 'second']


def test_composition_vanishes_through_the_node():
    e0 = HomMonomial(ChainTwist(1, 0), 1, None)
    f0 = HomMonomial(ChainTwist(0, 1), None, 1)
    glued = HomMonomial(ChainTwist(0, 1), 0, 0)
    assert e0 * f0 is None
    assert compose_basis(e0, f0) == [0, 0, 0]
    assert e0 * glued == HomMonomial(ChainTwist(1, 1), 1, None)


def test_mixed_configurations_do_not_compose():
    with pytest.raises(ModelError):
        HomMonomial(ChainTwist(1), 1) * HomMonomial(ChainTwist(1, 0), 1, None)


@pytest.mark.parametrize('scenario, size', [('single:2', 2), ('single:4', 4), ('chain:3,3', 4), ('chain:3,4', 5)])
def test_serre_pairing_is_the_identity(scenario, size):
    assert serre_pairing_matrix(scenario) == QMatrix.identity(size)


def test_xi_class_checks_its_length():
    with pytest.raises(ModelError):
        XiClass('single:3', [1, 2])
    with pytest.raises(ModelError):
        XiClass('single:1', [1])


def test_xi_class_constructors():
    xi = XiClass.single(3, {(0, 2): 1, (2, 0): 5})
    assert xi.coeffs == [5, 0, 1]
    assert xi.a(2) == 5
    chain = XiClass.chain(3, 4, a={1: 2}, b=3, c={3: 7})
    assert chain.coeffs == [2, 3, 0, 0, 7]
    assert chain.b() == 3 and chain.c(3) == 7
    assert chain.to_dict()['coefficients'] == ['2', '3', '0', '0', '7']


def _single_hankel_rank(coeffs):
    n = len(coeffs)
    return sympy.Matrix([[coeffs[i + j] for j in range(2)] for i in range(n - 1)]).rank()


def _chain33_rank(coeffs):
    a1, b, c1, c2 = coeffs
    return sympy.Matrix([[a1, 0], [b, c1], [c1, c2]]).rank()


def test_rank_strata_agree_with_brute_force():
    rng = random.Random(2024)
    for _ in range(200):
        n = rng.randint(2, 5)
        coeffs = [rng.randint(-1, 1) for _ in range(n)]
        stratum = rank_stratify(XiClass(('single', n), coeffs))
        assert stratum.rank == _single_hankel_rank(coeffs)
    for _ in range(200):
        coeffs = [rng.randint(-1, 1) for _ in range(4)]
        xi = XiClass('chain:3,3', coeffs)
        assert rank_stratify(xi).rank == _chain33_rank(coeffs)
        assert rank(xi_composition_matrix(xi)) == _chain33_rank(coeffs)


def test_rank_one_single_classes_sit_on_the_rational_normal_curve():
    xi = XiClass.single(4, {(i, 3 - i): 2**i * (-3)**(3 - i) for i in range(4)})
    stratum = rank_stratify(xi)
    assert stratum.label == 'rational-normal-locus'
    assert stratum.params == (2, -3)
    assert stratum.same_point(4, -6)
    assert not stratum.same_point(1, 1)
    assert glued_locus_kernel(2, -3, 4).coeffs == xi.coeffs


def test_chain_strata():
    assert rank_stratify(XiClass('chain:3,3', [0, 0, 0, 0])).label == 'zero'
    assert rank_stratify(XiClass('chain:3,3', [1, 2, 0, 0])).label == 'exceptional-locus'
    stratum = rank_stratify(XiClass('chain:3,3', [0, 1, 2, 4]))
    assert stratum.label == 'rational-normal-locus'
    assert stratum.params == (1, 2)
    assert rank_stratify(XiClass('chain:3,3', [1, 0, 1, 0])).label == 'generic'


def test_glued_locus_kernel_needs_a_point():
    with pytest.raises(ModelError):
        glued_locus_kernel(0, 0, 3)


def test_ext1_long_sequence_dims():
    generic = ext1_long_sequence_dims(XiClass('single:3', [1, 0, 1]))
    assert generic == {'ext2': 3, 'rank': 2, 'kernel': 0, 'ext1': 2}
    special = ext1_long_sequence_dims(XiClass.single(3, {(0, 2): 1}))
    assert special['ext1'] == 3
    with pytest.raises(ModelError):
        ext1_long_sequence_dims(XiClass('single:3', [0, 0, 0]))


def test_single_hom_table_matches_cech():
    ident = CechHomIdentification(build_model('single', 3))
    table = ident.table(-3, 3)
    assert len(table) == 7
    assert all(closed == cech for closed, cech in table.values())


def test_single_composition_matches_cech():
    ident = CechHomIdentification(build_model('single', 3))
    e0, e1 = HomMonomial(ChainTwist(1), 1), HomMonomial(ChainTwist(1), 0)
    assert ident.compose_agrees(e0, e1)
    assert ident.compose_agrees(e1, e1)


def test_chain_hom_table_near_the_origin():
    ident = CechHomIdentification(build_model('chain', 3, 3))
    assert all(closed == cech for closed, cech in ident.table(-1, 1).values())


@pytest.mark.slow
@pytest.mark.parametrize('n2', [3, 4])
def test_chain_hom_table_matches_cech(n2):
    ident = CechHomIdentification(build_model('chain', 3, n2))
    table = ident.table(-3, 3)
    assert len(table) == 49
    assert all(closed == cech for closed, cech in table.values())


def test_chain_composition_with_the_glued_section():
    ident = CechHomIdentification(build_model('chain', 3, 3))
    e0 = HomMonomial(ChainTwist(1, 0), 1, None)
    glued = HomMonomial(ChainTwist(0, 1), 0, 0)
    assert (e0 * glued).torus_weight(3) == (glued * e0).torus_weight(3) != (0, 0)
    assert ident.compose_agrees(e0, glued)
    assert ident.compose_agrees(glued, e0)


@pytest.mark.slow
def test_chain_composition_through_the_node():
    ident = CechHomIdentification(build_model('chain', 3, 3))
    e0 = HomMonomial(ChainTwist(1, 0), 1, None)
    f0 = HomMonomial(ChainTwist(0, 1), None, 1)
    assert ident.compose_agrees(e0, f0)
