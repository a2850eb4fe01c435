import catalogue
import pytest

from ptwalls.algebra import ConfigError
from ptwalls.mchull import stopping_check
from ptwalls.scenarios import build_scenario
from ptwalls.scenarios.chain_scenario import ChainScenario
from ptwalls.scenarios.disjoint_scenario import DisjointScenario
from ptwalls.scenarios.single_scenario import SingleScenario, wall_point_candidate
from ptwalls.utils import SCENARIO_REGISTRY, load_options, split_pair


def _scenario(text, **overrides):
    overrides['scenario'] = text
    return build_scenario(load_options(overrides=overrides))


def test_registry_holds_every_scenario():
    assert SCENARIO_REGISTRY.get('single') is SingleScenario
    assert SCENARIO_REGISTRY.get('chain') is ChainScenario
    assert SCENARIO_REGISTRY.get('disjoint') is DisjointScenario
    with pytest.raises(catalogue.RegistryError):
        SCENARIO_REGISTRY.get('cycle')


def test_build_scenario_from_options():
    scenario = _scenario('chain:3,3')
    assert isinstance(scenario, ChainScenario)
    assert scenario.label == 'chain:3,3'
    assert _scenario('disjoint:3,4').label == 'disjoint:3,4'
    assert _scenario('single:2').n == 2
    with pytest.raises(ConfigError, match='scenario.type'):
        build_scenario({'scenario': {'type': 'cycle', 'ns': [3]}})


def test_bad_parameters_are_config_errors():
    with pytest.raises(ConfigError):
        ChainScenario({'scenario': {'type': 'chain', 'ns': [1, 3]}})
    with pytest.raises(ConfigError):
        SingleScenario({'scenario': {'type': 'single'}})
    with pytest.raises(ConfigError):
        SingleScenario({'scenario': {'type': 'single', 'n': 3}, 'beta': ['x']})
    with pytest.raises(ConfigError):
        SingleScenario({'scenario': {'type': 'single', 'n': 3}, 'beta': ['1', '2']})
    with pytest.raises(ConfigError, match='not admissible'):
        SingleScenario({'scenario': {'type': 'single', 'n': 3}, 'beta': ['-2']})
    with pytest.raises(ConfigError, match='not below -1'):
        ChainScenario({'scenario': {'type': 'chain', 'ns': [3, 3]}, 'beta': ['5/4', '5/4']})


def test_chain_walls_section():
    section = _scenario('chain:3,3').walls_section()
    assert section['section'] == 'walls'
    assert section['twists'] == [0, 0]
    by_chamber = {c['chamber']: c for c in section['components']}
    assert len(by_chamber) == 6
    assert set(by_chamber['C4']) == {'chamber', 'unsupported'}
    assert [c['name'] for c in by_chamber['C3']['components']] == ['S', 'Bl_pt P^2', 'P^3']


def test_pair_rows_report_the_shifted_degree():
    scenario = _scenario('single:3')
    (row, ) = scenario.pair_rows([split_pair('OC,OC(-1)[1]')])
    assert row['source'] == 'O_C'
    assert row['dimensions']['1'] == 3


@pytest.mark.slow
def test_pair_rows_for_a_minus_four_curve():
    section = _scenario('single:4').ext_section(pair='OC,OC(-1)[1]', value_range=(0, 0))
    (row, ) = section['pairs']
    assert row['dimensions']['1'] == 4
    assert section['agrees']


def test_pair_rows_refuse_bad_input():
    scenario = _scenario('single:3')
    with pytest.raises(ConfigError):
        scenario.pair_rows([['O_C']])
    with pytest.raises(ConfigError):
        scenario.pair_rows([['O_C', 'O_D']])
    with pytest.raises(ConfigError):
        scenario.hom_table(2, 1)


def test_unknown_targets():
    single = _scenario('single:3')
    with pytest.raises(ConfigError):
        single.deformation_problem('triple_point')
    with pytest.raises(ConfigError):
        single.deformation_problem('chamber_point:x')
    with pytest.raises(ConfigError):
        _scenario('single:2').deformation_problem('chamber_point:generic')
    with pytest.raises(ConfigError):
        _scenario('chain:2,3').deformation_problem('triple_point')
    with pytest.raises(ConfigError):
        _scenario('chain:3,3').invariants_section()


def test_disjoint_curves_and_targets():
    scenario = _scenario('disjoint:1,3,4')
    assert scenario.curve(2).label == 'single:3'
    assert scenario.report_targets() == ['wall_point:2', 'wall_point:3']
    with pytest.raises(ConfigError):
        scenario.curve(4)
    for bad in ('wall_point', 'wall_point:x', 'triple_point:1'):
        with pytest.raises(ConfigError):
            scenario.hull_section(bad)


def test_disjoint_invariants_delegate_to_the_curve():
    section = _scenario('disjoint:3,4').invariants_section()
    assert section['scenario'] == 'disjoint:3,4'
    assert section['target'] == 'wall_point:1'
    assert section['presentation']['singularity'] == '1/3(1,1)'
    assert section['presentation']['matches_hankel']


def test_report_targets():
    assert _scenario('single:3').report_targets() == ['wall_point', 'chamber_point:generic']
    assert _scenario('single:2').report_targets() == ['wall_point']
    assert _scenario('chain:3,4').report_targets() == ['triple_point']
    assert _scenario('chain:2,3').report_targets() == []


@pytest.mark.parametrize('text', ['single:3', 'chain:3,3'])
def test_lifts_are_built_once(text):
    scenario = _scenario(text)
    assert scenario._lifts is None
    lifts = scenario.lifts
    assert scenario.lifts is lifts


def test_single_hull_section():
    section = _scenario('single:3').hull_section('wall_point')
    assert section['coordinates'] == ['p1', 'p2', 'p3', 'q0', 'q1']
    assert [row['order'] for row in section['transcript']] == [1, 2]
    assert section['verdict']['verdict'] == 'hull-equals-candidate'
    assert section['invariants']['matches_hankel']


def test_invariants_need_a_certified_hull():
    scenario = _scenario('single:3')
    _, state, verdict = scenario.run_target('wall_point')
    ring = state.ideal.ring
    p1, q0 = ring.gens[0], ring.gens[3]
    perturbed = wall_point_candidate(ring, 3)[:-1] + [p1 * q0]
    mismatch = stopping_check(state, perturbed, 3)
    assert not mismatch.conclusive
    section = scenario.invariants_from_hull(state, mismatch, perturbed)
    assert section['presentation'] is None
    assert 'not certified' in section['refused']
    assert section['hull']['verdict']['verdict'] == 'inconclusive'
    certified = scenario.invariants_from_hull(state, verdict)
    assert certified['hull']['verdict']['verdict'] == 'hull-equals-candidate'
    assert certified['presentation']['matches_hankel']
