from collections import OrderedDict

from ptwalls.algebra import ConfigError, chi
from ptwalls.cech_dgla import CechHomCochain, HomPair, face, move_to_chart
from ptwalls.localmodel import build_model, resolve_sheaf
from ptwalls.mchull import DeformationProblem
from ptwalls.thomwhitney import SimplexForm, TWElement, solve_primitive, tw_bracket, whitney_lift
from ptwalls.utils import SCENARIO_REGISTRY, split_pair
from ptwalls.walls import IntersectionDatum
from .base_scenario import BaseScenario


class TriplePointLifts():
    """Representatives on Hom(E, E) for the triple point object E of chain(n1, n2).

    mu^i (i = 1..n1-2) and eta^j (j = 1..n2-1) live on double overlaps, tau is the
    Whitney lift of a level-zero cocycle; theta^i and nu are the primitives of
    -[tau, mu^i] and -[tau, eta^1].
    """

    def __init__(self, model, degree_start=3, degree_cap=12):
        self.model = model
        self.n1, self.n2 = model.params
        self.E = resolve_sheaf('E', model)
        self.pair = HomPair(self.E, self.E)
        self.degree_start = degree_start
        self.degree_cap = degree_cap

    def tau_bar(self):
        n1 = self.n1
        local = CechHomCochain(self.pair, {
            ((0, ), -2, -1, 0, 0): chi((1, 0), -1),
            ((0, ), -2, -1, 1, 0): chi((n1, 1)),
            ((0, ), -1, 0, 0, 0): chi((n1, 1), -1),
            ((0, ), -1, 0, 0, 1): chi((1, 0), -1),
        })
        return local + move_to_chart(local, 1) + move_to_chart(local, 2)

    def tau(self):
        return whitney_lift(self.tau_bar())

    def mu_bar(self, i):
        w = chi((-i, -1))
        return CechHomCochain(self.pair, {((0, 1), -1, -1, 0, 1): w, ((0, 2), -1, -1, 0, 1): w})

    def mu(self, i):
        mu_bar = self.mu_bar(i)
        return TWElement.from_terms(self.pair, [
            (1, SimplexForm.t(1, 0) * SimplexForm.dt(1, 0) * 2, mu_bar),
            (2, SimplexForm.t(2, 0) * SimplexForm.dt(2, 0) * 2, face(mu_bar, 1)),
        ])

    def eta_bar(self, j):
        w = chi((1 - self.n1 - j * self.n1, -j - 1))
        return CechHomCochain(self.pair, {((0, 2), -1, -1, 0, 1): w, ((1, 2), -1, -1, 0, 1): w})

    def eta(self, j):
        eta_bar = self.eta_bar(j)
        return TWElement.from_terms(self.pair, [
            (1, SimplexForm.t(1, 1) * SimplexForm.dt(1, 1) * 2, eta_bar),
            (2, SimplexForm.t(2, 2) * SimplexForm.dt(2, 2) * 2, face(eta_bar, 0)),
        ])

    def _negative_primitive(self, element):
        sol = solve_primitive(element, self.degree_start, self.degree_cap)
        if not sol.exact:
            raise ValueError(f'Bracket has nonzero classes at weights {sol.nonzero_weights}.')
        return -sol.primitive

    def theta(self, i):
        return self._negative_primitive(tw_bracket(self.tau(), self.mu(i)))

    def nu(self):
        return self._negative_primitive(tw_bracket(self.tau(), self.eta(1)))

    def names(self):
        return triple_point_names(self.n1, self.n2)

    def lifts(self):
        return ([self.mu(i) for i in range(1, self.n1 - 1)] + [self.eta(j) for j in range(1, self.n2)] +
                [self.tau()])


def triple_point_names(n1, n2):
    return [f'p{i}' for i in range(1, n1 - 1)] + [f'q{j}' for j in range(1, n2)] + ['r']


def triple_point_candidate(ring, n1, n2):
    """(p_i q1 r) for every i and (q_j r) for j >= 2."""
    gens = ring.gens
    p = gens[:n1 - 2]
    q = gens[n1 - 2:n1 + n2 - 3]
    r = gens[-1]
    return [pi * q[0] * r for pi in p] + [qj * r for qj in q[1:]]


@SCENARIO_REGISTRY.register('chain')
class ChainScenario(BaseScenario):
    """Two curves meeting in a node: walls W1, W2, W12, six chambers and the triple point."""
    tag = 'chain'
    targets = ('triple_point', )

    @classmethod
    def parse_params(cls, scenario_opt):
        ns = scenario_opt.get('ns')
        if ns is None or len(ns) != 2:
            raise ConfigError(f'scenario.ns must hold two integers for a chain, got {ns}.')
        ns = tuple(int(n) for n in ns)
        if min(ns) < 2:
            raise ConfigError(f'scenario.ns must be >= 2 for a chain, got {list(ns)}.')
        return ns

    def build_datum(self):
        return IntersectionDatum.chain(*self.params, beta=self.beta)

    def build_model(self):
        return build_model('chain', *self.params)

    @property
    def lifts(self):
        if self._lifts is None:
            self._lifts = TriplePointLifts(self.model, self.degree_start, self.degree_cap)
        return self._lifts

    def ext_section(self, pair=None, value_range=None):
        out = OrderedDict(section='ext', scenario=self.label)
        out['pairs'] = self.pair_rows([split_pair(pair)]) if pair else []
        out.update(self.hom_table(*(value_range or (-3, 3))))
        return out

    def triple_point_problem(self, check=True):
        lifts = self.lifts
        return DeformationProblem(lifts.pair, lifts.lifts(), lifts.names(), label=f'{self.label} triple point',
                                  check=check, **self.problem_options())

    def deformation_problem(self, target):
        if target != 'triple_point':
            return super().deformation_problem(target)
        if min(self.params) < 3:
            raise ConfigError(f'triple_point needs n1, n2 >= 3, got {self.label}.')
        n1, n2 = self.params
        return self.triple_point_problem(), lambda ring: triple_point_candidate(ring, n1, n2), 4, None

    def default_order(self, target):
        return 3

    def report_targets(self):
        return ['triple_point'] if min(self.params) >= 3 else []
