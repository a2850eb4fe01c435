"""Toric local models of contractible curve configurations.

A model is a small fan in Z^2 described chart by chart. Every chart ring is a
polynomial ring in two coordinates whose torus weights form a basis of Z^2, so
a torus monomial x^a u^b has a unique expression in every chart and the
exponent of a monomial *is* its torus weight. All gluings are therefore
monomial substitutions, and a monomial lies in the ring of an overlap U_I iff
it pairs non-negatively with the rays shared by all charts of I.

Line bundles are O(D) for torus-invariant divisors D, given by the chart
generators m_i of O(D)|U_i (a monomial exponent). A section of O(D) has a
global coefficient G (a rational function) and on chart i the local
coefficient g = G * chi^{-m_i}.
"""
import itertools
import logging
import re
from dataclasses import dataclass, field
from typing import Dict, Optional, Sequence, Tuple

from ptwalls.algebra import (TORUS, ZERO_WEIGHT, LaurentElement, LaurentRing, ModelError, WeightVector, chi,
                             rat)

logger = logging.getLogger('ptwalls')


def _inverse_unimodular(cols):
    """Inverse of the integer 2x2 matrix with the given columns (det must be +-1)."""
    (a, c), (b, d) = cols
    det = a * d - b * c
    if det not in (1, -1):
        raise ModelError(f'Chart weights {cols} do not form a basis of Z^2 (det={det}).')
    # rows of the inverse
    return ((d * det, -b * det), (-c * det, a * det))


@dataclass(frozen=True)
class Chart():
    index: int
    ring: LaurentRing

    @property
    def rays(self):
        """Dual basis to the coordinate weights: the rays of the chart's cone."""
        inv = _inverse_unimodular(self.ring.weights)
        return tuple(WeightVector(*row) for row in inv)

    def exponent_of(self, weight):
        """Exponent vector of the torus monomial chi^weight in this chart's coordinates."""
        return tuple(r.dot(weight) for r in self.rays)

    @property
    def label(self):
        return f'U{self.index + 1}'


@dataclass(frozen=True)
class Curve():
    name: str
    # one monomial exponent (torus weight of the local equation) per chart; None where the curve misses the chart
    equations: Tuple[Optional[WeightVector], ...]

    def local_equation(self, model, chart):
        eq = self.equations[chart]
        if eq is None:
            return model.charts[chart].ring.one()
        return model.to_chart(chi(eq), chart)


@dataclass(frozen=True)
class LineBundle():
    model: 'ToricModel' = field(repr=False, compare=False)
    name: str
    generators: Tuple[WeightVector, ...]
    # transition f_ij = chi^{m_i - m_j}, as torus elements, for i < j
    transitions: Tuple[Tuple[Tuple[int, int], LaurentElement], ...]

    @classmethod
    def from_generators(cls, model, name, generators):
        generators = tuple(WeightVector(*g) for g in generators)
        trans = tuple(((i, j), chi(generators[i] - generators[j])) for i, j in itertools.combinations(
            range(len(generators)), 2))
        return cls(model, name, generators, trans)

    def transition(self, i, j):
        """f_ij as a torus element; f_ji is its inverse and f_ii = 1."""
        if i == j:
            return TORUS.one()
        table = dict(self.transitions)
        if (i, j) in table:
            return table[(i, j)]
        return table[(j, i)].inverse()

    def transition_in_chart(self, i, j, chart=None):
        return self.model.to_chart(self.transition(i, j), j if chart is None else chart)

    def with_transition(self, i, j, value):
        table = dict(self.transitions)
        table[(i, j)] = value
        return LineBundle(self.model, self.name + "'", self.generators, tuple(sorted(table.items())))


@dataclass(frozen=True)
class Summand():
    bundle: LineBundle
    offset: WeightVector = ZERO_WEIGHT

    @property
    def name(self):
        return self.bundle.name

    def shifted(self, weight):
        return Summand(self.bundle, self.offset + weight)


class BundleTerm():
    """A direct sum of line bundle summands, in the global frame.

    Subclasses may glue the summands non-trivially; ``frame_transition``
    returns the global-frame transition T_ij (chart i frame to chart j frame)
    or None for the identity.
    """

    def __init__(self, summands: Sequence[Summand]):
        self.summands = tuple(summands)

    @property
    def rank(self):
        return len(self.summands)

    def frame_transition(self, i, j):
        return None

    def describe(self):
        return ' + '.join(s.name for s in self.summands) or '0'

    def twisted(self, weight):
        return BundleTerm([s.shifted(weight) for s in self.summands])


class ExtensionBundle(BundleTerm):
    """Rank-2 bundle V with 0 -> sub -> V -> quotient -> 0.

    In the global frame T_ij = [[1, lambda_ij], [0, 1]] where lambda is an additive
    cocycle of global coefficients; lambda_ik = lambda_ij + lambda_jk.
    """

    def __init__(self, sub: Summand, quotient: Summand, extension: Dict[Tuple[int, int], LaurentElement]):
        super().__init__([sub, quotient])
        self.sub = sub
        self.quotient = quotient
        self.extension = {k: v for k, v in extension.items() if v}

    def lam(self, i, j):
        if i == j:
            return TORUS.zero()
        if (i, j) in self.extension:
            return self.extension[(i, j)]
        if (j, i) in self.extension:
            return -self.extension[(j, i)]
        return TORUS.zero()

    def frame_transition(self, i, j):
        one = TORUS.one()
        return [[one, self.lam(i, j)], [TORUS.zero(), one]]

    def transition_matrix(self, i, j):
        """Chart-local transition e_ij = D_j^-1 T_ij D_i, entries in chart j's ring."""
        model = self.sub.bundle.model
        d_i = [chi(s.bundle.generators[i]) for s in self.summands]
        d_j = [chi(s.bundle.generators[j]) for s in self.summands]
        t_ij = self.frame_transition(i, j)
        return [[model.to_chart(d_j[r].inverse() * t_ij[r][c] * d_i[c], j) for c in range(2)] for r in range(2)]

    def twisted(self, weight):
        return ExtensionBundle(self.sub.shifted(weight), self.quotient.shifted(weight), self.extension)

    def describe(self):
        return f'V({self.sub.name} -> V -> {self.quotient.name})'


def check_cocycle(bundle) -> bool:
    """Cocycle condition f_jk f_ij = f_ik on every triple, in the common torus localization.

    Accepts a LineBundle or an ExtensionBundle (matrix cocycle e_jk e_ij = e_ik).
    """
    if isinstance(bundle, ExtensionBundle):
        model = bundle.sub.bundle.model
        for i, j, k in itertools.permutations(range(len(model.charts)), 3):
            e_ij = [[model.to_torus(v) for v in row] for row in bundle.transition_matrix(i, j)]
            e_jk = [[model.to_torus(v) for v in row] for row in bundle.transition_matrix(j, k)]
            e_ik = [[model.to_torus(v) for v in row] for row in bundle.transition_matrix(i, k)]
            prod = [[e_jk[r][0] * e_ij[0][c] + e_jk[r][1] * e_ij[1][c] for c in range(2)] for r in range(2)]
            if prod != e_ik:
                return False
        return True
    n = len(bundle.generators)
    for i, j, k in itertools.permutations(range(n), 3):
        if bundle.transition(j, k) * bundle.transition(i, j) != bundle.transition(i, k):
            return False
    return True


class ToricModel():
    """Charts, gluings, curves and the standard line bundles of a local model."""

    def __init__(self, tag: str, params: Tuple[int, ...], charts, curves, fixed_point_curves):
        self.tag = tag
        self.params = tuple(params)
        self.charts = list(charts)
        self.curves = {c.name: c for c in curves}
        # the two invariant curves through the origin of the first chart (x = 0, u = 0)
        self.fixed_point_curves = fixed_point_curves
        self._bundles = {}
        self._rays = {}

    @property
    def label(self):
        return f'{self.tag}({",".join(map(str, self.params))})'

    @property
    def cover_size(self):
        return len(self.charts)

    def overlaps(self, level):
        """Ordered (level+1)-subsets of charts."""
        return list(itertools.combinations(range(self.cover_size), level + 1))

    def common_rays(self, overlap):
        overlap = tuple(overlap)
        if overlap not in self._rays:
            rays = set(self.charts[overlap[0]].rays)
            for i in overlap[1:]:
                rays &= set(self.charts[i].rays)
            self._rays[overlap] = sorted(rays)
        return self._rays[overlap]

    def in_overlap_ring(self, overlap, exponent):
        return all(r.dot(exponent) >= 0 for r in self.common_rays(overlap))

    def to_chart(self, elem: LaurentElement, chart: int) -> LaurentElement:
        if elem.ring.ring_id != TORUS.ring_id:
            elem = self.to_torus(elem)
        c = self.charts[chart]
        return LaurentElement(c.ring, {c.exponent_of(e): v for e, v in elem.terms.items()})

    def to_torus(self, elem: LaurentElement) -> LaurentElement:
        if elem.ring.ring_id == TORUS.ring_id:
            return elem
        return LaurentElement(TORUS, {elem.ring.weight_of(e): v for e, v in elem.terms.items()})

    def chart_of_ring(self, ring_id):
        for c in self.charts:
            if c.ring.ring_id == ring_id:
                return c.index
        raise ModelError(f'Ring {ring_id} does not belong to {self.label}.')

    def gluing(self, i, j):
        """Chart-i coordinates written as monomials in chart j's coordinates."""
        return tuple(self.to_chart(chi(w), j) for w in self.charts[i].ring.weights)

    def glue(self, elem: LaurentElement, j: int) -> LaurentElement:
        """Transport a chart element to chart j through the explicit gluing substitution."""
        i = self.chart_of_ring(elem.ring.ring_id)
        return elem.substitute(self.charts[j].ring, self.gluing(i, j))

    def line_bundle(self, divisor: Dict[str, int]) -> LineBundle:
        """O(D) for D = sum a_k C_k over the model's invariant curves."""
        divisor = {k: int(v) for k, v in divisor.items() if v}
        for k in divisor:
            if k not in self.curves:
                raise ModelError(f'Unknown curve {k!r} on {self.label}.')
        name = divisor_name(divisor)
        if name in self._bundles:
            return self._bundles[name]
        gens = []
        for chart in range(self.cover_size):
            m = ZERO_WEIGHT
            for curve, a in divisor.items():
                eq = self.curves[curve].equations[chart]
                if eq is not None:
                    m = m - WeightVector(*eq).scale(a)
            gens.append(m)
        bundle = LineBundle.from_generators(self, name, gens)
        self._bundles[name] = bundle
        return bundle

    def standard_bundles(self):
        if self.tag == 'single':
            divisors = [{}, {'C': -1}, {'L': 1}, {'L': -1}, {'C': -1, 'L': -1}]
        else:
            divisors = [{}, {'C1': -1}, {'C2': -1}, {'L': 1}, {'L1': 1}, {'C1': -1, 'C2': -1}, {'L': -1},
                        {'L': -1, 'C1': -1, 'C2': -1}]
        return [self.line_bundle(d) for d in divisors]

    def intersection(self, a, b):
        return self._intersections[(a, b)] if (a, b) in self._intersections else self._intersections[(b, a)]

    def describe(self):
        out = {'tag': self.tag, 'params': list(self.params), 'charts': [], 'curves': {}, 'bundles': {}}
        for c in self.charts:
            out['charts'].append({
                'name': c.label,
                'coordinates': list(c.ring.names),
                'weights': [list(w) for w in c.ring.weights],
            })
        for i, j in itertools.combinations(range(self.cover_size), 2):
            images = self.gluing(i, j)
            out.setdefault('gluings', {})[f'{i + 1}->{j + 1}'] = {
                name: str(img)
                for name, img in zip(self.charts[i].ring.names, images)
            }
        for name, curve in self.curves.items():
            out['curves'][name] = [str(curve.local_equation(self, k)) if curve.equations[k] is not None else '1'
                                   for k in range(self.cover_size)]
        for b in self.standard_bundles():
            out['bundles'][b.name] = {
                f'f{i + 1}{j + 1}': str(b.transition_in_chart(i, j))
                for i, j in itertools.combinations(range(self.cover_size), 2)
            }
        return out


def divisor_name(divisor):
    if not divisor:
        return 'O'
    parts = []
    for k in sorted(divisor, key=lambda c: (c.startswith('L'), c)):
        a = divisor[k]
        sign = '-' if a < 0 else '+'
        mag = '' if abs(a) == 1 else str(abs(a))
        parts.append(f'{sign}{mag}{k}')
    text = ''.join(parts)
    return f'O({text[1:] if text.startswith("+") else text})'


def build_model(tag, *params) -> ToricModel:
    """Build one of the builtin models: ``single`` (n >= 1) or ``chain`` (n1, n2 >= 2).

    ``tag`` may also be a string like ``'single:3'`` or ``'chain:3,4'``.
    """
    if isinstance(tag, str) and ':' in tag and not params:
        tag, rest = tag.split(':', 1)
        params = tuple(int(p) for p in rest.split(','))
    if tag == 'single':
        if len(params) != 1 or params[0] < 1:
            raise ModelError(f'single(n) needs one integer n >= 1, got {params}.')
        return _single_model(params[0])
    if tag == 'chain':
        if len(params) != 2 or min(params) < 2:
            raise ModelError(f'chain(n1, n2) needs two integers >= 2, got {params}.')
        return _chain_model(*params)
    raise ModelError(f'Unknown model tag {tag!r}.')


def _single_model(n):
    u1 = LaurentRing('U1', ('x', 'u'), (WeightVector(1, 0), WeightVector(0, 1)))
    u2 = LaurentRing('U2', ('y', 'v'), (WeightVector(-1, 0), WeightVector(n, 1)))
    charts = [Chart(0, u1), Chart(1, u2)]
    curves = [
        Curve('C', (WeightVector(0, 1), WeightVector(n, 1))),
        Curve('L', (WeightVector(1, 0), None)),
    ]
    model = ToricModel('single', (n, ), charts, curves, ('L', 'C'))
    model._intersections = {('C', 'C'): -n, ('C', 'L'): 1, ('L', 'L'): 0}
    logger.debug(f'Built {model.label}.')
    return model


def _chain_model(n1, n2):
    u1 = LaurentRing('U1', ('x', 'u'), (WeightVector(1, 0), WeightVector(0, 1)))
    u2 = LaurentRing('U2', ('y', 'v'), (WeightVector(-1, 0), WeightVector(n1, 1)))
    u3 = LaurentRing('U3', ('z', 'w'), (WeightVector(n1 * n2 - 1, n2), WeightVector(-n1, -1)))
    charts = [Chart(0, u1), Chart(1, u2), Chart(2, u3)]
    curves = [
        Curve('C1', (WeightVector(0, 1), WeightVector(n1, 1), None)),
        Curve('C2', (None, WeightVector(-1, 0), WeightVector(n1 * n2 - 1, n2))),
        Curve('L1', (WeightVector(1, 0), None, None)),
        Curve('L', (None, None, WeightVector(-n1, -1))),
    ]
    model = ToricModel('chain', (n1, n2), charts, curves, ('L1', 'C1'))
    model._intersections = {
        ('C1', 'C1'): -n1,
        ('C2', 'C2'): -n2,
        ('C1', 'C2'): 1,
        ('C1', 'L1'): 1,
        ('C2', 'L1'): 0,
        ('C1', 'L'): 0,
        ('C2', 'L'): 1,
        ('L', 'L'): 0,
        ('L1', 'L1'): 0,
        ('L', 'L1'): 0,
    }
    logger.debug(f'Built {model.label}.')
    return model


# ----------------------------------------------------------------------------
# complexes
# ----------------------------------------------------------------------------


class BundleComplex():
    """Bounded complex of bundle terms with differentials in the global frame.

    ``terms[s]`` is a BundleTerm; ``differentials[s]`` is the matrix of
    d^s : E^s -> E^{s+1} (rows indexed by E^{s+1} summands) with torus entries.
    """

    def __init__(self, model, terms: Dict[int, BundleTerm], differentials: Dict[int, list], name=''):
        self.model = model
        self.terms = {s: t for s, t in sorted(terms.items()) if t.rank}
        self.differentials = {}
        for s, mat in differentials.items():
            if s not in self.terms or s + 1 not in self.terms:
                continue
            self.differentials[s] = [[_as_torus(v) for v in row] for row in mat]
        self.name = name
        self.validate()

    @property
    def degrees(self):
        return sorted(self.terms)

    def rank(self, s):
        return self.terms[s].rank if s in self.terms else 0

    def d(self, s):
        """Matrix of d^s or None when it is zero."""
        return self.differentials.get(s)

    def validate(self):
        for s, mat in self.differentials.items():
            src, tgt = self.terms[s], self.terms[s + 1]
            if len(mat) != tgt.rank or any(len(row) != src.rank for row in mat):
                raise ModelError(f'{self.name}: d^{s} has shape mismatch.')
            for b, row in enumerate(mat):
                for a, entry in enumerate(row):
                    for exp in entry.terms:
                        w = WeightVector(*exp) + src.summands[a].offset - tgt.summands[b].offset
                        if w != ZERO_WEIGHT:
                            raise ModelError(f'{self.name}: d^{s}[{b}][{a}] is not torus-invariant (weight {w}).')
                        for chart in range(self.model.cover_size):
                            local = WeightVector(*exp) + src.summands[a].bundle.generators[chart] \
                                - tgt.summands[b].bundle.generators[chart]
                            if not self.model.in_overlap_ring((chart, ), local):
                                raise ModelError(f'{self.name}: d^{s}[{b}][{a}] is not regular on U{chart + 1}.')
            for i, j in itertools.permutations(range(self.model.cover_size), 2):
                lhs = _matmul(_frame(tgt, i, j), mat)
                rhs = _matmul(mat, _frame(src, i, j))
                if lhs != rhs:
                    raise ModelError(f'{self.name}: d^{s} does not commute with the transitions on U{i + 1}{j + 1}.')
        for s in self.differentials:
            if s + 1 in self.differentials:
                prod = _matmul(self.differentials[s + 1], self.differentials[s])
                if any(v for row in prod for v in row):
                    raise ModelError(f'{self.name}: d^{s + 1} d^{s} != 0.')
        return True

    def is_complex(self):
        """d^2 = 0 in every chart; local differentials are global ones times units."""
        for s in self.differentials:
            if s + 1 in self.differentials:
                for chart in range(self.model.cover_size):
                    a = self.local_differential(s + 1, chart)
                    b = self.local_differential(s, chart)
                    prod = [[sum((a[r][k] * b[k][c] for k in range(len(b))), self.model.charts[chart].ring.zero())
                             for c in range(len(b[0]))] for r in range(len(a))]
                    if any(v for row in prod for v in row):
                        return False
        return True

    def local_differential(self, s, chart):
        """d^s written in chart-local trivializations, entries in the chart ring."""
        src, tgt = self.terms[s], self.terms[s + 1]
        mat = self.differentials[s]
        out = []
        for b, row in enumerate(mat):
            out_row = []
            for a, entry in enumerate(row):
                shift = chi(src.summands[a].bundle.generators[chart] - tgt.summands[b].bundle.generators[chart])
                out_row.append(self.model.to_chart(entry * shift, chart))
            out.append(out_row)
        return out

    def shift(self, k):
        """E[k]: terms move to degree s - k and the differential picks up (-1)^k."""
        sign = -1 if k % 2 else 1
        terms = {s - k: t for s, t in self.terms.items()}
        diffs = {s - k: [[v * sign for v in row] for row in mat] for s, mat in self.differentials.items()}
        return BundleComplex(self.model, terms, diffs, name=f'{self.name}[{k}]')

    def describe(self):
        parts = [f'{self.terms[s].describe()} (deg {s})' for s in self.degrees]
        return ' -> '.join(parts)


def _as_torus(v):
    if isinstance(v, LaurentElement):
        return v
    return LaurentElement.const(TORUS, rat(v))


def _frame(term, i, j):
    t = term.frame_transition(i, j)
    if t is None:
        one, zero = TORUS.one(), TORUS.zero()
        return [[one if r == c else zero for c in range(term.rank)] for r in range(term.rank)]
    return t


def _matmul(a, b):
    return [[sum((a[r][k] * b[k][c] for k in range(len(b))), TORUS.zero()) for c in range(len(b[0]))]
            for r in range(len(a))]


_SHEAF_RE = re.compile(r'^(?P<base>[A-Za-z_0-9]+)(\((?P<args>[-0-9, ]*)\))?(\[(?P<shift>-?\d+)\])?$')


def resolve_sheaf(name: str, model: ToricModel, cocycle=None) -> BundleComplex:
    """Resolve a named sheaf (or shifted sheaf) on the model by a complex of bundles.

    Names: ``O``, ``point``, ``O_C(k)`` (single), ``O_C1(k)``/``O_C2(k)`` and
    ``O_C12(a,b)`` (chain), ``E`` (the polystable object on the wall for
    single models, the triple point extension for chain models) and
    ``extension_E`` with an optional extension cocycle, and ``E_xi(k)`` (single: the
    nontrivial extension of O_C by O_C(-1)[1] in the k-th class). A ``[m]`` suffix shifts.
    The rightmost term sits in degree 0 before shifting.
    """
    match = _SHEAF_RE.match(name.replace(' ', ''))
    if match is None:
        raise ModelError(f'Cannot parse sheaf name {name!r}.')
    base = match.group('base')
    args = match.group('args')
    args = tuple(int(a) for a in args.split(',')) if args else ()
    shift = int(match.group('shift') or 0)

    if base == 'O':
        cx = BundleComplex(model, {0: BundleTerm([Summand(model.line_bundle({}))])}, {}, name='O')
    elif base == 'point':
        cx = _koszul_point(model)
    elif base == 'O_C' and model.tag == 'single':
        (k, ) = args or (0, )
        cx = _curve_complex(model, {'C': 1}, {'L': k}, name)
    elif base in ('O_C1', 'O_C2') and model.tag == 'chain':
        (k, ) = args or (0, )
        fiber = 'L1' if base == 'O_C1' else 'L'
        cx = _curve_complex(model, {base[2:]: 1}, {fiber: k}, name)
    elif base == 'O_C12' and model.tag == 'chain':
        a, b = args or (0, 0)
        cx = _curve_complex(model, {'C1': 1, 'C2': 1}, {'L1': a, 'L': b}, name)
    elif base == 'E' and model.tag == 'single':
        cx = _single_polystable(model)
    elif base in ('E', 'extension_E') and model.tag == 'chain':
        cx = _extension_complex(model, cocycle)
    elif base == 'E_xi' and model.tag == 'single':
        (k, ) = args or (2, )
        if not 1 <= k <= model.params[0]:
            raise ModelError(f'E_xi(k) needs 1 <= k <= {model.params[0]}, got {k}.')
        cx = _extension_complex(model, cocycle or default_extension_cocycle(model, k))
    else:
        raise ModelError(f'Sheaf {name!r} is not available on {model.label}.')
    if shift:
        cx = cx.shift(shift)
    cx.name = name
    return cx


def _curve_complex(model, curve, twist, name):
    """[O(-C + D) -> O(D)] resolving O_C(D) for the reduced curve C and twist divisor D."""
    sub = dict(twist)
    for k, v in curve.items():
        sub[k] = sub.get(k, 0) - v
    src = model.line_bundle(sub)
    tgt = model.line_bundle(twist)
    return BundleComplex(model, {-1: BundleTerm([Summand(src)]), 0: BundleTerm([Summand(tgt)])}, {-1: [[1]]},
                         name=name)


def _koszul_point(model):
    a, b = model.fixed_point_curves
    terms = {
        -2: BundleTerm([Summand(model.line_bundle({a: -1, b: -1}))]),
        -1: BundleTerm([Summand(model.line_bundle({a: -1})), Summand(model.line_bundle({b: -1}))]),
        0: BundleTerm([Summand(model.line_bundle({}))]),
    }
    diffs = {-2: [[1], [-1]], -1: [[1, 1]]}
    return BundleComplex(model, terms, diffs, name='point')


def _single_polystable(model):
    """O_C + O_C(-1)[1] = [O(-C-L) -> O(-L) + O(-C) -> O]; the shift puts a sign on d^{-2}."""
    terms = {
        -2: BundleTerm([Summand(model.line_bundle({'C': -1, 'L': -1}))]),
        -1: BundleTerm([Summand(model.line_bundle({'L': -1})), Summand(model.line_bundle({'C': -1}))]),
        0: BundleTerm([Summand(model.line_bundle({}))]),
    }
    diffs = {-2: [[-1], [0]], -1: [[0, 1]]}
    return BundleComplex(model, terms, diffs, name='E')


def default_extension_cocycle(model, k=2):
    """The extension class of V.

    chain: lambda_13 = lambda_23 = chi^(1-n1, -1), lambda_12 = 0.
    single: lambda_12 = chi^(1-k, -1), the k-th basis class of Ext^1(O(-C), O(-L)).
    """
    if model.tag == 'single':
        return {(0, 1): chi((1 - k, -1))}
    n1 = model.params[0]
    lam = chi((1 - n1, -1))
    return {(0, 2): lam, (1, 2): lam}


def _extension_divisors(model):
    if model.tag == 'single':
        return {'L': -1}, {'C': -1}
    return {'L': -1}, {'C1': -1, 'C2': -1}


def extension_bundle(model, cocycle=None, sub=None, quotient=None):
    """V with 0 -> O(sub) -> V -> O(quotient) -> 0 glued by the additive cocycle.

    The sub summand is shifted by the weight of the cocycle so that T_ij is torus-invariant.
    """
    cocycle = default_extension_cocycle(model) if cocycle is None else cocycle
    default_sub, default_quotient = _extension_divisors(model)
    sub = default_sub if sub is None else sub
    quotient = default_quotient if quotient is None else quotient
    for (i, j), v in cocycle.items():
        if not i < j:
            raise ModelError(f'Extension cocycle keys must be ordered pairs i < j, got {(i, j)}.')
    lam = {k: _as_torus(v) for k, v in cocycle.items()}
    # additive cocycle lambda_ik = lambda_ij + lambda_jk
    for i, j, k in itertools.combinations(range(model.cover_size), 3):
        lij, ljk, lik = (lam.get(p, TORUS.zero()) for p in ((i, j), (j, k), (i, k)))
        if lij + ljk != lik:
            raise ModelError('Extension datum is not a Cech 1-cocycle.')
    weights = {w for v in lam.values() for w in v.weights()}
    if len(weights) > 1:
        raise ModelError('Extension datum must be torus-homogeneous.')
    weight = next(iter(weights)) if weights else ZERO_WEIGHT
    bundle = ExtensionBundle(Summand(model.line_bundle(sub), weight), Summand(model.line_bundle(quotient)), lam)
    for i, j in itertools.combinations(range(model.cover_size), 2):
        for row in bundle.transition_matrix(i, j):
            for entry in row:
                if not all(model.in_overlap_ring((i, j), e) for e in model.to_torus(entry).terms):
                    raise ModelError(f'Transition e_{i + 1}{j + 1} is not regular on the overlap.')
    return bundle


def _extension_complex(model, cocycle=None, name='E'):
    """[O(sub + quotient) -> V -> O] with V the extension of O(quotient) by O(sub).

    chain: the triple point object, V an extension of O(-C1-C2) by O(-L).
    single: the object E_xi of a chamber point, V an extension of O(-C) by O(-L).
    """
    sub, quotient = _extension_divisors(model)
    v = extension_bundle(model, cocycle, sub, quotient)
    top = dict(sub)
    for k, a in quotient.items():
        top[k] = top.get(k, 0) + a
    terms = {-2: BundleTerm([Summand(model.line_bundle(top), v.sub.offset)]), -1: v,
             0: BundleTerm([Summand(model.line_bundle({}))])}
    diffs = {-2: [[1], [0]], -1: [[0, 1]]}
    return BundleComplex(model, terms, diffs, name=name)


def sheaf_names(model):
    if model.tag == 'single':
        return ['O', 'point', 'O_C(k)', 'E', 'E_xi(k)']
    return ['O', 'point', 'O_C1(k)', 'O_C2(k)', 'O_C12(a,b)', 'E']

