import argparse
import glob
import json
import os.path as osp

import pytest

from ptwalls import cli
from ptwalls.algebra import ConfigError, WindowTooSmallError
from ptwalls.utils import load_options, scenario_from_string, split_pair

OPTIONS_DIR = osp.join(osp.dirname(osp.dirname(osp.abspath(__file__))), 'options')


def _read(path):
    with open(path, encoding='utf-8') as f:
        return f.read()


def test_load_option_files():
    opt = load_options(osp.join(OPTIONS_DIR, 'chain_3_3.yml'))
    assert opt['scenario'] == {'type': 'chain', 'ns': [3, 3]}
    assert opt['hull']['order'] == 3
    assert opt['name'] == 'chain_3_3'
    disjoint = load_options(osp.join(OPTIONS_DIR, 'disjoint_3_4.yml'))
    assert disjoint['beta'] == ['1', '3/2']


def test_unknown_option_keys_are_refused(tmp_path):
    path = tmp_path / 'bad.yml'
    path.write_text('scenario: single:3\nlearning_rate: 1\n')
    with pytest.raises(ConfigError):
        load_options(str(path))
    with pytest.raises(ConfigError):
        load_options(str(tmp_path / 'missing.yml'))


def test_force_yml():
    opt = load_options(osp.join(OPTIONS_DIR, 'single_3.yml'), force=['hull:order=4', 'report:format=json'])
    assert opt['hull']['order'] == 4
    assert opt['report']['format'] == 'json'
    for entry in (['hull:nope=1'], ['hull'], ['scenario:type:x=1']):
        with pytest.raises(ConfigError):
            load_options(osp.join(OPTIONS_DIR, 'single_3.yml'), force=entry)


@pytest.mark.parametrize('overrides', [
    {'scenario': {'type': 'chain', 'ns': [3]}},
    {'scenario': {'type': 'cycle', 'ns': [3]}},
    {'scenario': 'single:0'},
    {'scenario': 'single:3', 'report': {'format': 'xml'}},
    {'scenario': 'single:3', 'window': {'margin': -1}},
    {'scenario': 'single:3', 'hull': {'primitive_degree_start': 5, 'primitive_degree_cap': 4}},
    {'scenario': 'single:3', 'beta': ['0.5']},
])
def test_validation_errors(overrides):
    with pytest.raises(ConfigError):
        load_options(overrides=overrides)


def test_scenario_from_string():
    assert scenario_from_string('disjoint:3,4') == {'type': 'disjoint', 'ns': [3, 4]}
    assert scenario_from_string('single:3') == {'type': 'single', 'n': 3}
    for bad in ('cycle:3', 'single:3,4', 'chain:a,b', 'chain'):
        with pytest.raises(ConfigError):
            scenario_from_string(bad)


def test_scenario_override_replaces_the_file_block():
    opt = load_options(osp.join(OPTIONS_DIR, 'chain_3_3.yml'), overrides={'scenario': 'single:4'})
    assert opt['scenario'] == {'type': 'single', 'n': 4}
    assert opt['hull']['order'] == 3
    forced = load_options(osp.join(OPTIONS_DIR, 'single_3.yml'), force=['beta=[1, 3/2]', 'scenario:n=5'])
    assert forced['beta'] == [1, '3/2']
    assert forced['scenario'] == {'type': 'single', 'n': 5}


def test_split_pair():
    assert split_pair('OC,OC(-1)[1]') == ['O_C', 'O_C(-1)[1]']
    assert split_pair('O_C12(1,2), O') == ['O_C12(1,2)', 'O']
    assert split_pair('E,E') == ['E', 'E']


def test_parse_range():
    assert cli.parse_range('-3..3') == (-3, 3)
    with pytest.raises(argparse.ArgumentTypeError):
        cli.parse_range('-3:3')


def test_config_hash_ignores_report_options():
    opt = load_options(overrides={'scenario': 'chain:3,3'})
    other = load_options(overrides={'scenario': 'chain:3,3', 'report': {'format': 'json', 'out': 'x.json'}})
    assert cli.config_hash(opt) == cli.config_hash(other)
    assert cli.config_hash(opt) != cli.config_hash(load_options(overrides={'scenario': 'chain:3,4'}))


def test_walls_json_report(tmp_path):
    out = str(tmp_path / 'walls.json')
    assert cli.main(['walls', '--scenario', 'chain:3,3', '--format', 'json', '--out', out]) == 0
    doc = json.loads(_read(out))
    assert doc['schema_version'] == cli.SCHEMA_VERSION
    (section, ) = doc['sections']
    assert section['config_hash'] == doc['config']['hash']
    forms = {w['label']: w['form'] for w in section['walls']}
    assert forms == {'W1': [-3, 1], 'W2': [1, -3], 'W12': [1, 1]}
    assert len(section['chambers']) == 6


def test_reports_are_deterministic(tmp_path):
    out = str(tmp_path / 'walls.json')
    argv = ['walls', '--scenario', 'disjoint:3,4', '--format', 'json', '--out', out]
    assert cli.main(argv) == 0
    first = _read(out)
    assert cli.main(argv) == 0
    assert _read(out) == first


def test_text_report(tmp_path):
    out = str(tmp_path / 'walls.txt')
    assert cli.main(['walls', '--scenario', 'single:3', '--out', out]) == 0
    text = _read(out)
    assert text.startswith('ptwalls report')
    assert '== walls ==' in text


def test_log_file(tmp_path):
    out = str(tmp_path / 'walls.txt')
    assert cli.main(['walls', '--scenario', 'single:2', '--out', out, '--force_yml', f'path:log={tmp_path}']) == 0
    assert len(glob.glob(str(tmp_path / 'walls_single_2_*.log'))) == 1


@pytest.mark.parametrize('argv', [
    ['walls', '--scenario', 'cycle:3'],
    ['walls', '--scenario', 'chain:3,3', '--format', 'xml'],
    ['frobnicate'],
    ['walls', '--scenario', 'single:3', '--window-margin', 'wide'],
    ['invariants', '--scenario', 'chain:3,3'],
    ['hull', '--scenario', 'chain:2,3'],
])
def test_config_errors_exit_with_two(argv, tmp_path):
    assert cli.main(argv + ['--out', str(tmp_path / 'r.txt')]) == 2


def test_selftest_with_custom_checks():
    opt = load_options(overrides={'scenario': 'single:3'})
    section, ok = cli.selftest(opt, [('walls', cli._check_walls), ('components', cli._check_components)])
    assert ok
    assert section['passed'] == 2


def test_selftest_reports_failures_and_window_limits():

    def too_small(opt):
        raise WindowTooSmallError('no guard ring', margin=0)

    def wrong(opt):
        return False, 'mismatch'

    opt = load_options(overrides={'scenario': 'single:3'})
    section, ok = cli.selftest(opt, [('window', too_small), ('wrong', wrong)])
    assert not ok
    assert [r['status'] for r in section['results']] == ['environment-limited', 'fail']


def test_rank_strata_check():
    ok, detail = cli._check_rank_strata(load_options(overrides={'scenario': 'single:3'}), samples=20)
    assert ok, detail


@pytest.mark.slow
def test_selftest_passes(tmp_path):
    out = str(tmp_path / 'selftest.json')
    assert cli.main(['selftest', '--format', 'json', '--out', out]) == 0
    (section, ) = json.loads(_read(out))['sections']
    assert section['passed'] == section['total']
