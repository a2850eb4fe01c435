import logging
import time
from collections import OrderedDict

from ptwalls.algebra import ConfigError, ModelError, UnsupportedChamberError, rat
from ptwalls.cech_dgla import HomPair, default_window, ext_dimensions
from ptwalls.curvechains import CechHomIdentification, OrderedHomBasis
from ptwalls.localmodel import resolve_sheaf
from ptwalls.mchull import run_hull, stopping_check
from ptwalls.walls import build_arrangement, check_beta, component_report, twist_offsets

logger = logging.getLogger('ptwalls')


def _twist_key(twist):
    return [x for x in twist if x is not None]


class BaseScenario():
    """Base scenario: the intersection datum, its walls and the report sections all scenarios share.

    Subclasses set ``tag`` and implement ``build_datum``; scenarios with a local model
    also implement ``build_model``, ``ext_section`` and the hull targets.
    """
    tag = None
    targets = ()

    def __init__(self, opt):
        self.opt = opt
        self.params = self.parse_params(opt['scenario'])
        beta = opt.get('beta')
        try:
            self.beta = None if beta is None else tuple(rat(b) for b in beta)
        except (TypeError, ValueError) as error:
            raise ConfigError(f'beta: {error}') from error
        window = opt.get('window') or {}
        margin = window.get('margin', 'auto')
        self.margin = None if margin in (None, 'auto') else int(margin)
        self.max_margin = int(window.get('max_margin', 64))
        hull = opt.get('hull') or {}
        self.order = hull.get('order')
        self.stop_degree = hull.get('stop_degree')
        self.degree_start = int(hull.get('primitive_degree_start', 3))
        self.degree_cap = int(hull.get('primitive_degree_cap', 12))
        self.progress = bool(opt.get('progress', False))
        try:
            self.datum = self.build_datum()
        except ModelError as error:
            raise ConfigError(f'scenario: {error}') from error
        try:
            check_beta(self.datum)
        except ModelError as error:
            raise ConfigError(f'beta: {error}') from error
        self._arrangement = None
        self._model = None
        self._lifts = None

    @classmethod
    def parse_params(cls, scenario_opt):
        raise NotImplementedError

    @property
    def label(self):
        return f'{self.tag}:{",".join(str(p) for p in self.params)}'

    def build_datum(self):
        raise NotImplementedError

    def build_model(self):
        raise ConfigError(f'Scenario {self.label} has no local model.')

    @property
    def model(self):
        if self._model is None:
            self._model = self.build_model()
        return self._model

    @property
    def arrangement(self):
        if self._arrangement is None:
            self._arrangement = build_arrangement(self.datum)
        return self._arrangement

    def window(self, pair):
        return default_window(pair, self.margin)

    def ext(self, source, target, degrees=None):
        """Ext dimensions between two resolved complexes, on the configured window."""
        return ext_dimensions(source, target, self.window(HomPair(source, target)), degrees, self.max_margin,
                              self.progress)

    def problem_options(self):
        return {'degree_start': self.degree_start, 'degree_cap': self.degree_cap}

    # ------------------------------------------------------------------
    # report sections
    # ------------------------------------------------------------------

    def walls_section(self):
        arrangement = self.arrangement
        components = []
        for chamber in arrangement.chambers:
            try:
                components.append(component_report(chamber.label, arrangement))
            except UnsupportedChamberError as error:
                components.append({'chamber': chamber.label, 'unsupported': str(error)})
        out = OrderedDict(section='walls', scenario=self.label)
        out.update(arrangement.to_dict())
        out['twists'] = self.twists()
        out['components'] = components
        return out

    def twists(self):
        return twist_offsets(self.datum)

    def ext_section(self, pair=None, value_range=None):
        raise ConfigError(f'Scenario {self.label} has no Ext tables.')

    def pair_rows(self, pairs):
        """Ext dimensions for each [source, target] pair of sheaf names."""
        rows = []
        for names in pairs:
            if len(names) != 2:
                raise ConfigError(f'pair: expected two sheaf names, got {names}.')
            try:
                source, target = (resolve_sheaf(name, self.model) for name in names)
            except ModelError as error:
                raise ConfigError(f'pair: {error}') from error
            dims = self.ext(source, target)
            rows.append({'source': names[0], 'target': names[1],
                         'dimensions': {str(k): v for k, v in sorted(dims.items())}})
        return rows

    def hom_table(self, lo, hi):
        """Closed-form Hom dimensions on the curves against the Cech computation, with ordered bases."""
        if lo > hi:
            raise ConfigError(f'range: empty range {lo}..{hi}.')
        ident = CechHomIdentification(self.model, max_margin=self.max_margin)
        rows = []
        for twist, (closed, cech) in sorted(ident.table(lo, hi).items(), key=lambda kv: _twist_key(kv[0])):
            rows.append({'twist': _twist_key(twist), 'closed_form': closed, 'cech': cech,
                         'basis': OrderedHomBasis(twist).names() if closed else []})
        return {'hom_table': rows, 'agrees': all(r['closed_form'] == r['cech'] for r in rows)}

    def deformation_problem(self, target):
        """(problem, candidate ideal, stop degree, tangent) for a hull target."""
        raise ConfigError(f'Scenario {self.label} has no hull target {target!r}; choose from {list(self.targets)}.')

    def default_order(self, target):
        return 2

    def run_target(self, target, order=None):
        problem, candidate, stop, tangent = self.deformation_problem(target)
        stop = self.stop_degree or stop
        order = max(order or self.order or self.default_order(target), stop - 1)
        start = time.perf_counter()
        state = run_hull(problem, order)
        verdict = stopping_check(state, candidate(problem.ring), stop, tangent)
        logger.info(f'{self.label} {target}: order {order} in {time.perf_counter() - start:.1f}s, '
                    f'verdict {verdict.verdict}.')
        return problem, state, verdict

    def hull_section(self, target, order=None):
        return self.hull_body(target, *self.run_target(target, order))

    def hull_body(self, target, problem, state, verdict):
        out = OrderedDict(section='hull', scenario=self.label, target=target)
        out['coordinates'] = list(problem.names)
        out['coordinate_weights'] = [list(w) for w in problem.weights]
        out['transcript'] = [{'order': q + 1, 'ideal': J.describe()} for q, J in enumerate(state.history)]
        out['obstructions'] = state.obstructions
        out['verdict'] = verdict.to_dict()
        return out

    def invariants_section(self, target=None, order=None):
        raise ConfigError(f'Scenario {self.label} has no invariant ring computation.')

    def report_targets(self):
        """Hull targets run by the full report."""
        return []
