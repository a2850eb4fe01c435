from collections import OrderedDict
from copy import deepcopy

from ptwalls.algebra import ConfigError
from ptwalls.utils import SCENARIO_REGISTRY
from ptwalls.walls import IntersectionDatum
from .base_scenario import BaseScenario
from .single_scenario import SingleScenario


@SCENARIO_REGISTRY.register('disjoint')
class DisjointScenario(BaseScenario):
    """Pairwise disjoint curves C_1..C_r: walls eps_i = 0 and 2^r chambers.

    Each curve has its own local model; Ext, hull and invariant sections run on
    the single-curve scenario of the chosen curve.
    """
    tag = 'disjoint'
    targets = ('wall_point:<i>', )

    @classmethod
    def parse_params(cls, scenario_opt):
        ns = scenario_opt.get('ns')
        if not ns:
            raise ConfigError('scenario.ns must list the curve self-intersections.')
        ns = tuple(int(n) for n in ns)
        if min(ns) < 1:
            raise ConfigError(f'scenario.ns entries must be >= 1, got {list(ns)}.')
        return ns

    def build_datum(self):
        return IntersectionDatum.disjoint(self.params, self.beta)

    def curve(self, i) -> SingleScenario:
        """Single-curve scenario for C_i (1-based)."""
        if not 1 <= i <= len(self.params):
            raise ConfigError(f'curve index must be in 1..{len(self.params)}, got {i}.')
        opt = deepcopy(self.opt)
        opt['scenario'] = {'type': 'single', 'n': self.params[i - 1]}
        opt.pop('beta', None)
        return SingleScenario(opt)

    def _curve_index(self, target):
        name, _, index = (target or '').partition(':')
        if name != 'wall_point' or not index:
            raise ConfigError(f'Scenario {self.label} has targets wall_point:<i>, got {target!r}.')
        try:
            return int(index)
        except ValueError as error:
            raise ConfigError(f'target: curve index {index!r} is not an integer.') from error

    def ext_section(self, pair=None, value_range=None):
        out = OrderedDict(section='ext', scenario=self.label)
        out['curves'] = []
        for i in range(1, len(self.params) + 1):
            body = self.curve(i).ext_section(pair, value_range)
            body['curve'] = i
            out['curves'].append(body)
        return out

    def hull_section(self, target, order=None):
        i = self._curve_index(target)
        out = self.curve(i).hull_section('wall_point', order)
        out['scenario'] = self.label
        out['target'] = target
        return out

    def invariants_section(self, target=None, order=None):
        i = self._curve_index(target or 'wall_point:1')
        out = self.curve(i).invariants_section('wall_point', order)
        out['scenario'] = self.label
        out['target'] = f'wall_point:{i}'
        return out

    def report_targets(self):
        return [f'wall_point:{i + 1}' for i, n in enumerate(self.params) if n >= 2]
