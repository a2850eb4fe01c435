import importlib
import pkgutil
from copy import deepcopy
from os import path as osp

import catalogue

from ptwalls.algebra import ConfigError
from ptwalls.utils import SCENARIO_REGISTRY, get_root_logger

__all__ = ['build_scenario']

# automatically scan and import scenario modules for registry
# scan all the modules that end with '_scenario' under the scenarios folder
scenario_folder = osp.dirname(osp.abspath(__file__))
scenario_filenames = [m.name for m in pkgutil.iter_modules([scenario_folder]) if m.name.endswith('_scenario')]
# import all the scenario modules
_scenario_modules = [importlib.import_module(f'ptwalls.scenarios.{file_name}') for file_name in scenario_filenames]


def build_scenario(opt):
    """Build a scenario from options.

    Args:
        opt (dict): Configuration. It must contain:
            scenario (dict): with ``type`` (single | disjoint | chain) and ``n`` or ``ns``.
    """
    opt = deepcopy(opt)
    scenario_type = opt['scenario']['type']
    try:
        scenario_cls = SCENARIO_REGISTRY.get(scenario_type)
    except catalogue.RegistryError as error:
        raise ConfigError(f'scenario.type: {error}') from error
    scenario = scenario_cls(opt)
    logger = get_root_logger()
    logger.info(f'Scenario [{scenario.__class__.__name__}] is created: {scenario.label}.')
    return scenario
