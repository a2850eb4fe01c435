import json
import os.path as osp

import pytest
from sympy.polys.domains import QQ

from ptwalls.algebra import DegenerateArrangementError, ModelError, UnsupportedChamberError
from ptwalls.walls import (IntersectionDatum, NumClass, beta_violations, build_arrangement, central_charge,
                           ch_of_curve_object, check_beta, component_report, format_form, transversality,
                           twist_offsets, wall_locus)

GOLDEN_DIR = osp.join(osp.dirname(__file__), 'goldens')


def _golden(name):
    with open(osp.join(GOLDEN_DIR, name)) as f:
        return json.load(f)


@pytest.fixture(scope='module')
def chain33():
    return build_arrangement(IntersectionDatum.chain(3, 3))


@pytest.fixture(scope='module')
def disjoint34():
    return build_arrangement(IntersectionDatum.disjoint((3, 4)))


def test_datum_validation():
    with pytest.raises(ModelError):
        IntersectionDatum.chain(1, 1)
    with pytest.raises(ModelError):
        IntersectionDatum.single(3, beta=(0, 1))
    assert IntersectionDatum.single(3).beta == (QQ(1), )
    assert IntersectionDatum.chain(3, 4).beta == (QQ(3, 4), QQ(5, 4))


def test_twist_offsets():
    assert twist_offsets(IntersectionDatum.disjoint((3, 4))) == [0, 0]
    assert twist_offsets(IntersectionDatum.chain(3, 3)) == [0, 0]
    assert twist_offsets(IntersectionDatum.single(3, beta=(-2, ))) == [-3]
    with pytest.raises(ModelError):
        twist_offsets(IntersectionDatum.single(2, beta=(0, )))


@pytest.mark.parametrize('datum', [
    IntersectionDatum.single(1),
    IntersectionDatum.single(3, beta=(QQ(3, 2) - QQ(1, 100), )),
    IntersectionDatum.disjoint((3, 4), beta=(1, QQ(3, 2))),
    IntersectionDatum.chain(3, 3, beta=(QQ(3, 4), QQ(3, 4))),
    IntersectionDatum.chain(4, 5, beta=(QQ(3, 2), QQ(7, 4))),
])
def test_admissible_beta(datum):
    assert beta_violations(datum) == []
    check_beta(datum)
    assert twist_offsets(datum) == [0] * datum.r


@pytest.mark.parametrize('datum, broken', [
    (IntersectionDatum.single(3, beta=(-2, )), 1),
    (IntersectionDatum.single(3, beta=(QQ(3, 2), )), 1),
    (IntersectionDatum.single(3, beta=(QQ(1, 2), )), 1),
    (IntersectionDatum.disjoint((3, 4), beta=(-1, QQ(-3, 2))), 2),
    (IntersectionDatum.chain(3, 3, beta=(QQ(5, 4), QQ(5, 4))), 1),
    (IntersectionDatum.chain(3, 3, beta=(2, QQ(5, 4))), 2),
])
def test_inadmissible_beta(datum, broken):
    assert len(beta_violations(datum)) == broken
    with pytest.raises(ModelError):
        check_beta(datum)
    with pytest.raises(ModelError):
        build_arrangement(datum)


def test_curve_object_classes():
    datum = IntersectionDatum.single(3)
    assert ch_of_curve_object('O_C(-1)', datum) == NumClass(0, (1, 0), QQ(1, 2))
    assert ch_of_curve_object('O_C(-1)[1]', datum) == NumClass(0, (-1, 0), QQ(-1, 2))
    assert ch_of_curve_object('pt', datum) == NumClass.point(datum)
    chain = IntersectionDatum.chain(3, 3)
    assert ch_of_curve_object('O_C12(1,2)', chain) == NumClass(0, (1, 1, 0), 5)
    for bad in ('O_C3', 'O_X(1)', 'O_C12(1)'):
        with pytest.raises(ModelError):
            ch_of_curve_object(bad, chain)


def test_central_charge_of_a_point():
    datum = IntersectionDatum.single(3)
    assert central_charge(NumClass.point(datum), datum) == (-1, 0)


def test_wall_locus_of_proportional_classes_is_degenerate():
    datum = IntersectionDatum.single(3)
    pt = NumClass.point(datum)
    with pytest.raises(DegenerateArrangementError):
        wall_locus(pt, pt.scale(2), datum)


def test_format_form():
    assert format_form((-3, 1)) == '-3*eps1+eps2 = 0'
    assert format_form((1, )) == 'eps = 0'


@pytest.mark.parametrize('n1, n2', [(3, 3), (3, 4), (2, 5), (4, 2)])
def test_chain_walls(n1, n2):
    arrangement = build_arrangement(IntersectionDatum.chain(n1, n2))
    forms = {w.label: w.form for w in arrangement.walls}
    assert forms['W1'] == (-n1, 1)
    assert forms['W2'] == (1, -n2)
    assert len(arrangement.chambers) == 6


def test_chain_node_wall_is_primitive(chain33):
    assert chain33.walls[2].label == 'W12'
    assert chain33.walls[2].form == (1, 1)
    assert build_arrangement(IntersectionDatum.chain(3, 4)).walls[2].form == (2, 3)


def test_chain_chambers_go_around_the_origin(chain33):
    labels = [c.label for c in chain33.chambers]
    assert labels == [f'C{i}' for i in range(1, 7)]
    assert chain33.chamber('C1').geometric
    assert chain33.separating(chain33.chamber('C1'), chain33.chamber('C2')) == ['W1']
    for a, b in zip(chain33.chambers, chain33.chambers[1:] + chain33.chambers[:1]):
        assert len(chain33.separating(a, b)) == 1


@pytest.mark.parametrize('ns', [(3, ), (3, 4), (2, 3, 4)])
def test_disjoint_chambers(ns):
    arrangement = build_arrangement(IntersectionDatum.disjoint(ns))
    assert len(arrangement.chambers) == 2**len(ns)
    assert arrangement.chambers[0].label == '{}'
    assert arrangement.chambers[0].geometric
    assert [w.form.count(0) for w in arrangement.walls] == [len(ns) - 1] * len(ns)


def test_single_wall():
    arrangement = build_arrangement(IntersectionDatum.single(3))
    (wall, ) = arrangement.walls
    assert wall.label == 'W'
    assert wall.form == (1, )
    assert [c.label for c in arrangement.chambers] == ['{}', '{1}']


def test_transversality(chain33, disjoint34):
    assert transversality(chain33) == {'pairwise_transversal': True, 'normal_crossing': False}
    assert transversality(disjoint34) == {'pairwise_transversal': True, 'normal_crossing': True}


def test_disjoint_component_report(disjoint34):
    assert component_report('{1,2}', disjoint34) == _golden('disjoint_3_4_both_walls.json')
    names = [c['name'] for c in component_report('{2}', disjoint34)['components']]
    assert names == ['S', 'P^3']
    assert component_report('{}', disjoint34)['gluing'] == []


def test_chain_component_report(chain33):
    assert component_report('C3', chain33) == _golden('chain_3_3_C3.json')
    assert [c['name'] for c in component_report('C5', chain33)['components']] == ['S', 'Bl_pt P^2', 'P^3']
    assert [c['name'] for c in component_report('C2', chain33)['components']] == ['S', 'P^2']


def test_unsupported_chambers(chain33):
    with pytest.raises(UnsupportedChamberError):
        component_report('C4', chain33)
    with pytest.raises(UnsupportedChamberError):
        component_report('C9', chain33)
    small = build_arrangement(IntersectionDatum.disjoint((2, 3)))
    with pytest.raises(UnsupportedChamberError):
        component_report('{1}', small)


def test_single_curve_reports():
    for n, names in [(1, ['T']), (2, ['S']), (4, ['S', 'P^3'])]:
        arrangement = build_arrangement(IntersectionDatum.single(n))
        assert [c['name'] for c in component_report('{1}', arrangement)['components']] == names
