import logging
from collections import OrderedDict

from ptwalls.algebra import ConfigError, ModelError, chi
from ptwalls.cech_dgla import CechHomCochain, HomPair, face
from ptwalls.localmodel import build_model, resolve_sheaf
from ptwalls.mchull import DeformationProblem, TruncatedIdeal, hankel_rank_ideal, invariant_subring
from ptwalls.thomwhitney import SimplexForm, TWElement, whitney_lift
from ptwalls.utils import SCENARIO_REGISTRY, split_pair
from ptwalls.walls import IntersectionDatum
from .base_scenario import BaseScenario

logger = logging.getLogger('ptwalls')

P_WEIGHT = (-1, 1)
Q_WEIGHT = (1, -1)


class WallPointLifts():
    """Explicit representatives on Hom(E, E) for the polystable E = O_C + O_C(-1)[1] of single(n).

    alpha_i (i = 1..n) and beta_j (j = 0, 1) span H^1; gamma_k are the degree-two classes
    with [alpha_i, beta_j] = gamma_(i-j), and mu, eta are primitives of gamma_0 and gamma_n.
    """

    def __init__(self, model):
        self.model = model
        self.n = model.params[0]
        self.E = resolve_sheaf('E', model)
        self.pair = HomPair(self.E, self.E)

    def alpha_bar(self, i):
        return CechHomCochain(self.pair, {((0, 1), -1, -1, 0, 1): chi((1 - i, -1))})

    def alpha(self, i):
        return TWElement.from_terms(self.pair, [(1, SimplexForm.dt(1, 0), self.alpha_bar(i))])

    def beta_bar(self, j):
        entries = {}
        for c in (0, 1):
            entries[((c, ), -2, -1, 1, 0)] = chi((j - 1, 0))
            entries[((c, ), -1, 0, 0, 0)] = chi((j - 1, 0))
        return CechHomCochain(self.pair, entries)

    def beta(self, j):
        return whitney_lift(self.beta_bar(j))

    def gamma_bar(self, k):
        return CechHomCochain(self.pair, {
            ((0, 1), -2, -1, 0, 0): chi((-k, -1)),
            ((0, 1), -1, 0, 0, 1): chi((-k, -1), -1),
        })

    def gamma(self, k):
        return TWElement.from_terms(self.pair, [(1, SimplexForm.dt(1, 0), self.gamma_bar(k))])

    def _on_chart(self, cochain, chart, sign=1):
        return CechHomCochain(self.pair, {((chart, ), s, t, b, a): v * sign
                                          for (_, s, t, b, a), v in cochain.entries.items()})

    def mu_bar(self):
        return self._on_chart(self.gamma_bar(0), 0)

    def mu(self):
        mu_bar = self.mu_bar()
        return TWElement.from_terms(self.pair, [(0, SimplexForm.one(0), mu_bar),
                                                (1, SimplexForm.t(1, 0), face(mu_bar, 1))])

    def eta_bar(self):
        return self._on_chart(self.gamma_bar(self.n), 1, -1)

    def eta(self):
        eta_bar = self.eta_bar()
        return TWElement.from_terms(self.pair, [(0, SimplexForm.one(0), eta_bar),
                                                (1, SimplexForm.t(1, 1), face(eta_bar, 0))])

    def names(self):
        return wall_point_names(self.n)

    def lifts(self):
        return [self.alpha(i) for i in range(1, self.n + 1)] + [self.beta(0), self.beta(1)]

    def aut_weights(self):
        return [P_WEIGHT] * self.n + [Q_WEIGHT] * 2


def wall_point_names(n):
    return [f'p{i}' for i in range(1, n + 1)] + ['q0', 'q1']


def wall_point_candidate(ring, n):
    """(p_k q0 + p_(k+1) q1) for k = 1..n-1."""
    gens = ring.gens
    p = gens[:n]
    q0, q1 = gens[n], gens[n + 1]
    return [p[k] * q0 + p[k + 1] * q1 for k in range(n - 1)]


def hankel_target(ring, n):
    """Images s_k = p_(k+1) q1 (k < n), s_n = -p_n q0 and the 2x2 Hankel minors among them."""
    gens = ring.gens
    p = gens[:n]
    q0, q1 = gens[n], gens[n + 1]
    images = [p[k] * q1 for k in range(n)] + [-p[n - 1] * q0]
    return images, hankel_rank_ideal(n).generators


@SCENARIO_REGISTRY.register('single')
class SingleScenario(BaseScenario):
    """One (-n)-curve: a single wall, the wall point E and the chamber points E_xi."""
    tag = 'single'
    targets = ('wall_point', 'chamber_point:generic', 'chamber_point:<k>')
    invariant_degree = 4

    @classmethod
    def parse_params(cls, scenario_opt):
        n = scenario_opt.get('n')
        if n is None and scenario_opt.get('ns'):
            (n, ) = scenario_opt['ns']
        if n is None:
            raise ConfigError('scenario.n is required for a single-curve scenario.')
        n = int(n)
        if n < 1:
            raise ConfigError(f'scenario.n must be >= 1, got {n}.')
        return (n, )

    @property
    def n(self):
        return self.params[0]

    def build_datum(self):
        return IntersectionDatum.single(self.n, self.beta)

    def build_model(self):
        return build_model('single', self.n)

    @property
    def lifts(self):
        if self._lifts is None:
            self._lifts = WallPointLifts(self.model)
        return self._lifts

    # ------------------------------------------------------------------
    # Ext
    # ------------------------------------------------------------------

    def default_pairs(self):
        return [['E', 'E'], ['O_C', 'O_C(-1)']]

    def ext_section(self, pair=None, value_range=None):
        out = OrderedDict(section='ext', scenario=self.label)
        out['pairs'] = self.pair_rows([split_pair(pair)] if pair else self.default_pairs())
        out.update(self.hom_table(*(value_range or (-3, 3))))
        return out

    # ------------------------------------------------------------------
    # hull
    # ------------------------------------------------------------------

    def wall_point_problem(self, check=True):
        lifts = self.lifts
        return DeformationProblem(lifts.pair, lifts.lifts(), lifts.names(), lifts.aut_weights(),
                                  label=f'{self.label} wall point', check=check, **self.problem_options())

    def chamber_point(self, which):
        if which == 'generic':
            if self.n < 3:
                raise ConfigError(f'chamber_point:generic needs n >= 3 on {self.label}.')
            k = 2
        else:
            try:
                k = int(which)
            except ValueError as error:
                raise ConfigError(f'target: unknown chamber point {which!r}.') from error
        try:
            return resolve_sheaf(f'E_xi({k})', self.model)
        except ModelError as error:
            raise ConfigError(f'target: {error}') from error

    def deformation_problem(self, target):
        if target == 'wall_point':
            return self.wall_point_problem(), lambda ring: wall_point_candidate(ring, self.n), 3, None
        if target.startswith('chamber_point'):
            which = target.partition(':')[2] or 'generic'
            cx = self.chamber_point(which)
            window = self.window(HomPair(cx, cx))
            problem = DeformationProblem.from_cohomology(cx, prefix='t', window=window,
                                                         label=f'{self.label} {target}', **self.problem_options())
            return problem, lambda ring: [], 3, None
        return super().deformation_problem(target)

    def hull_section(self, target, order=None):
        if target != 'wall_point':
            return super().hull_section(target, order)
        problem, state, verdict = self.run_target(target, order)
        out = self.hull_body(target, problem, state, verdict)
        out['coordinate_note'] = 'coordinates (q0, q1) for the two classes of Ext^1(O_C, O_C(-1)[1])'
        invariants = self.invariants_from_hull(state, verdict)
        out['invariants'] = invariants['presentation'] or {'refused': invariants['refused']}
        return out

    # ------------------------------------------------------------------
    # invariants
    # ------------------------------------------------------------------

    def invariants_section(self, target=None, order=None):
        if target not in (None, 'wall_point'):
            raise ConfigError(f'Invariant rings are computed at the wall point, not {target!r}.')
        _, state, verdict = self.run_target('wall_point', order)
        return self.invariants_from_hull(state, verdict)

    def invariants_from_hull(self, state, verdict, candidate=None):
        """Invariant subring of the hull at the wall point.

        The hull is replaced by S / I only when the stopping check certified it equals the candidate
        I; otherwise the section carries the mismatch and no presentation.
        """
        ring = state.ideal.ring
        candidate = wall_point_candidate(ring, self.n) if candidate is None else candidate
        out = OrderedDict(section='invariants', scenario=self.label, target='wall_point')
        out['hull'] = {'order': state.order, 'ideal': state.ideal.describe(), 'verdict': verdict.to_dict()}
        if not verdict.conclusive:
            out['refused'] = (f'the hull at order {state.order} is not certified equal to the candidate '
                              f'({verdict.verdict}, agreement modulo m^{verdict.degree}: '
                              f'{verdict.agrees_modulo_power})')
            out['presentation'] = None
            logger.warning(f'{self.label}: no invariant ring, {out["refused"]}.')
            return out
        ideal = TruncatedIdeal(ring, candidate, self.invariant_degree)
        weights = [tuple(w) for w in state.problem.weights]
        target_presentation = hankel_target(ring, self.n) if self.n >= 2 else None
        presentation = invariant_subring(ideal, weights, self.invariant_degree, target_presentation)
        out['ideal'] = ideal.describe()
        out['weights'] = {'p': list(P_WEIGHT), 'q': list(Q_WEIGHT)}
        body = presentation.to_dict()
        body['singularity'] = f'1/{self.n}(1,1)'
        body['matches_hankel'] = presentation.matches if target_presentation else None
        out['presentation'] = body
        return out

    def report_targets(self):
        return ['wall_point'] + (['chamber_point:generic'] if self.n >= 3 else [])
