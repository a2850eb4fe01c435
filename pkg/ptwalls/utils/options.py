import os

import yaml
from omegaconf import DictConfig, OmegaConf
from omegaconf.errors import OmegaConfBaseException

from ptwalls.algebra import ConfigError, rat


def force_yml(cfg, entries):
    """Merge `key:sub=value` overrides into ``cfg``, values parsed as YAML scalars or lists.

    Creating new keys is not supported, only existing ones can be overridden.
    """
    dotlist = []
    for entry in entries or []:
        if '=' not in entry:
            raise ConfigError(f'--force_yml: {entry!r} is not of the form key:sub=value.')
        keys, value = entry.split('=', 1)
        path = keys.strip().split(':')
        node = cfg
        for key in path:
            if not isinstance(node, DictConfig) or key not in node:
                raise ConfigError(f'--force_yml: unknown option key {keys.strip()!r}.')
            node = node[key]
        dotlist.append(f'{".".join(path)}={value.strip()}')
    if not dotlist:
        return cfg
    try:
        return OmegaConf.merge(cfg, OmegaConf.from_dotlist(dotlist))
    except OmegaConfBaseException as error:
        raise ConfigError(f'--force_yml: {error}') from error


def split_pair(text):
    """'O_C12(1,2),O' -> ['O_C12(1,2)', 'O']: split on commas outside parentheses."""
    parts, depth, current = [], 0, ''
    for ch in text:
        if ch in '([':
            depth += 1
        elif ch in ')]':
            depth -= 1
        if ch == ',' and depth == 0:
            parts.append(current)
            current = ''
        else:
            current += ch
    parts.append(current)
    return [sheaf_name(p.strip()) for p in parts if p.strip()]


def sheaf_name(text):
    """Accept the short forms OC, OC1, OC12 for O_C, O_C1, O_C12."""
    if text.startswith('OC'):
        return 'O_C' + text[2:]
    return text


_SCENARIO_TYPES = ('single', 'disjoint', 'chain')
_FORMATS = ('text', 'json')


def scenario_from_string(text):
    """'single:3' / 'disjoint:3,4' / 'chain:3,3' -> scenario option block."""
    kind, _, rest = str(text).partition(':')
    if kind not in _SCENARIO_TYPES or not rest:
        raise ConfigError(f'scenario: expected single:n, disjoint:n1,...,nr or chain:n1,n2, got {text!r}.')
    try:
        ns = [int(x) for x in rest.split(',')]
    except ValueError as error:
        raise ConfigError(f'scenario: non-integer self-intersection in {text!r}.') from error
    if kind == 'single':
        if len(ns) != 1:
            raise ConfigError(f'scenario: single takes one n, got {text!r}.')
        return {'type': kind, 'n': ns[0]}
    return {'type': kind, 'ns': ns}


def default_options():
    return {
        'name': None,
        'scenario': None,
        'beta': None,
        'window': {'margin': 'auto', 'max_margin': 64},
        'hull': {'order': None, 'stop_degree': None, 'primitive_degree_start': 3, 'primitive_degree_cap': 12},
        'report': {'format': 'text', 'out': None},
        'path': {'log': None},
    }


def _positive_int(value, field, minimum=1):
    if isinstance(value, bool) or not isinstance(value, int) or value < minimum:
        raise ConfigError(f'{field}: expected an integer >= {minimum}, got {value!r}.')
    return value


def validate_options(opt):
    """Check every option block, raising ConfigError that names the offending field."""
    scenario = opt.get('scenario')
    if isinstance(scenario, str):
        scenario = opt['scenario'] = scenario_from_string(scenario)
    if not isinstance(scenario, dict) or scenario.get('type') not in _SCENARIO_TYPES:
        raise ConfigError(f'scenario.type: expected one of {list(_SCENARIO_TYPES)}, got {scenario!r}.')
    if scenario['type'] == 'single':
        _positive_int(scenario.get('n'), 'scenario.n')
    else:
        ns = scenario.get('ns')
        if not isinstance(ns, list) or not ns:
            raise ConfigError(f'scenario.ns: expected a list of integers, got {ns!r}.')
        for i, n in enumerate(ns):
            _positive_int(n, f'scenario.ns[{i}]', 2 if scenario['type'] == 'chain' else 1)
        if scenario['type'] == 'chain' and len(ns) != 2:
            raise ConfigError(f'scenario.ns: a chain has two curves, got {len(ns)}.')
    if opt.get('name') is None:
        params = scenario.get('ns') or [scenario.get('n')]
        opt['name'] = f'{scenario["type"]}_{"_".join(str(n) for n in params)}'

    beta = opt.get('beta')
    if beta is not None:
        if not isinstance(beta, list):
            raise ConfigError(f'beta: expected a list of rationals, got {beta!r}.')
        for i, b in enumerate(beta):
            try:
                rat(b)
            except (TypeError, ValueError) as error:
                raise ConfigError(f'beta[{i}]: {error}') from error

    window = opt['window']
    if window.get('margin') != 'auto':
        _positive_int(window.get('margin'), 'window.margin', 0)
    _positive_int(window.get('max_margin'), 'window.max_margin')

    hull = opt['hull']
    for key, minimum in (('order', 1), ('stop_degree', 2)):
        if hull.get(key) is not None:
            _positive_int(hull[key], f'hull.{key}', minimum)
    _positive_int(hull.get('primitive_degree_start'), 'hull.primitive_degree_start')
    _positive_int(hull.get('primitive_degree_cap'), 'hull.primitive_degree_cap')
    if hull['primitive_degree_cap'] < hull['primitive_degree_start']:
        raise ConfigError('hull.primitive_degree_cap must not be below hull.primitive_degree_start.')

    if opt['report'].get('format') not in _FORMATS:
        raise ConfigError(f'report.format: expected one of {list(_FORMATS)}, got {opt["report"].get("format")!r}.')
    return opt


def _with_scenario(cfg, scenario):
    """Replace the scenario block as a whole; a string such as 'chain:3,3' is expanded first."""
    if isinstance(scenario, str):
        scenario = scenario_from_string(scenario)
    elif isinstance(scenario, DictConfig):
        scenario = OmegaConf.to_container(scenario)
    cfg.scenario = None
    return OmegaConf.merge(cfg, {'scenario': scenario})


def load_options(opt_path=None, overrides=None, force=None):
    """Defaults, then the YAML file, then ``overrides`` (flags), then ``--force_yml`` entries; validated.

    Returns a plain dict.
    """
    cfg = OmegaConf.create(default_options())
    if opt_path is not None:
        if not os.path.isfile(opt_path):
            raise ConfigError(f'Option file {opt_path} does not exist.')
        try:
            loaded = OmegaConf.load(opt_path)
        except (yaml.YAMLError, OmegaConfBaseException) as error:
            raise ConfigError(f'{opt_path}: {error}') from error
        if not isinstance(loaded, DictConfig):
            raise ConfigError(f'{opt_path}: top level must be a mapping.')
        unknown = [k for k in loaded if k not in cfg]
        if unknown:
            raise ConfigError(f'{opt_path}: unknown option keys {unknown}.')
        if 'scenario' in loaded:
            cfg = _with_scenario(cfg, loaded.pop('scenario'))
        cfg = OmegaConf.merge(cfg, loaded)
    if overrides:
        overrides = dict(overrides)
        if 'scenario' in overrides:
            cfg = _with_scenario(cfg, overrides.pop('scenario'))
        cfg = OmegaConf.merge(cfg, overrides)
    cfg = force_yml(cfg, force)
    return validate_options(OmegaConf.to_container(cfg))
