import itertools

import pytest

from ptwalls.algebra import ModelError, chi
from ptwalls.localmodel import (build_model, check_cocycle, default_extension_cocycle, extension_bundle, resolve_sheaf,
                                sheaf_names)


@pytest.fixture(scope='module')
def single3():
    return build_model('single', 3)


@pytest.fixture(scope='module')
def chain33():
    return build_model('chain:3,3')


def test_build_model_parses_tags(single3, chain33):
    assert single3.cover_size == 2
    assert chain33.cover_size == 3
    assert chain33.params == (3, 3)
    assert single3.label == 'single(3)'


@pytest.mark.parametrize('tag, params', [('single', (0, )), ('chain', (1, 3)), ('chain', (3, )), ('cone', (2, ))])
def test_build_model_rejects_bad_parameters(tag, params):
    with pytest.raises(ModelError):
        build_model(tag, *params)


@pytest.mark.parametrize('scenario', ['single:1', 'single:3', 'chain:3,3', 'chain:3,4'])
def test_gluings_are_mutually_inverse(scenario):
    model = build_model(scenario)
    for i, j in itertools.permutations(range(model.cover_size), 2):
        for name in model.charts[i].ring.names:
            x = model.charts[i].ring.gen(name)
            assert model.glue(model.glue(x, j), i) == x


def test_chain_triple_overlap_gluings_compose(chain33):
    for name in chain33.charts[0].ring.names:
        x = chain33.charts[0].ring.gen(name)
        assert chain33.glue(chain33.glue(x, 1), 2) == chain33.glue(x, 2)


@pytest.mark.parametrize('scenario', ['single:3', 'chain:3,4'])
def test_standard_bundles_satisfy_the_cocycle_condition(scenario):
    model = build_model(scenario)
    for bundle in model.standard_bundles():
        assert check_cocycle(bundle)


def test_extension_bundle_matrix_cocycle(chain33):
    v = extension_bundle(chain33)
    assert check_cocycle(v)


def test_extension_datum_must_be_a_cocycle(chain33):
    lam = chi((-2, -1))
    with pytest.raises(ModelError):
        extension_bundle(chain33, {(0, 1): lam, (1, 2): lam, (0, 2): lam})


def test_default_extension_cocycle_shapes(single3, chain33):
    assert list(default_extension_cocycle(single3, 2)) == [(0, 1)]
    assert sorted(default_extension_cocycle(chain33)) == [(0, 2), (1, 2)]


@pytest.mark.parametrize('name', ['O', 'point', 'O_C', 'O_C(-1)', 'O_C(2)[1]', 'E', 'E_xi(1)', 'E_xi(3)'])
def test_single_sheaves_resolve_to_complexes(single3, name):
    cx = resolve_sheaf(name, single3)
    assert cx.is_complex()
    assert cx.name == name


@pytest.mark.parametrize('name', ['O_C1(-1)', 'O_C2(3)', 'O_C12(1,2)', 'O_C12(-3,0)[1]', 'E', 'point'])
def test_chain_sheaves_resolve_to_complexes(chain33, name):
    cx = resolve_sheaf(name, chain33)
    assert cx.is_complex()


def test_single_polystable_complex_shape(single3):
    E = resolve_sheaf('E', single3)
    assert E.degrees == [-2, -1, 0]
    assert [E.rank(s) for s in E.degrees] == [1, 2, 1]
    assert E.d(-2)[1][0].is_zero()


def test_shift_moves_degrees_and_signs(single3):
    cx = resolve_sheaf('O_C', single3)
    shifted = cx.shift(1)
    assert shifted.degrees == [-2, -1]
    assert shifted.d(-2)[0][0] == -cx.d(-1)[0][0]


@pytest.mark.parametrize('name', ['O_C1', 'E_xi(7)', 'nonsense(', 'O_C12(1,2)'])
def test_unknown_sheaves_raise(single3, name):
    with pytest.raises(ModelError):
        resolve_sheaf(name, single3)


def test_sheaf_names(single3, chain33):
    assert 'E_xi(k)' in sheaf_names(single3)
    assert 'O_C12(a,b)' in sheaf_names(chain33)


def test_describe_lists_every_gluing(chain33):
    info = chain33.describe()
    assert sorted(info['gluings']) == ['1->2', '1->3', '2->3']
    assert len(info['charts']) == 3
