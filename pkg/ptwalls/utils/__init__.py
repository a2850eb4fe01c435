from .logger import get_env_info, get_root_logger, get_time_str
from .options import (default_options, force_yml, load_options, scenario_from_string, sheaf_name, split_pair,
                      validate_options)
from .registry import SCENARIO_REGISTRY

__all__ = [
    # logger.py
    'get_root_logger',
    'get_time_str',
    'get_env_info',
    # options.py
    'force_yml',
    'default_options',
    'load_options',
    'validate_options',
    'scenario_from_string',
    'split_pair',
    'sheaf_name',
    # registry.py
    'SCENARIO_REGISTRY',
]
