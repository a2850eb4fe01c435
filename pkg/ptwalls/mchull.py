"""Maurer-Cartan solving order by order and hull ideals.

Hull coordinates live in a sympy polynomial ring over QQ. Ideals are only ever
compared through truncated-degree linear algebra: an ideal I truncated at
degree D is the span of all products M * g (deg M + deg g <= D, terms above D
dropped) plus, optionally, every monomial of degree power..D.
"""
import itertools
import logging
from dataclasses import dataclass, field
from math import factorial
from typing import Dict, List, Optional, Sequence

from sympy.polys.domains import QQ
from sympy.polys.orderings import grlex
from sympy.polys.rings import ring as poly_ring

from ptwalls.algebra import (QMatrix, RowReducer, TruncationTooSmall, WeightVector, kernel_basis, rat, rat_str,
                             solve_linear)
from ptwalls.cech_dgla import ClassBasis, HomPair, cohomology_representatives
from ptwalls.thomwhitney import (TWElement, integrate, is_closed, solve_primitive, tw_bracket, tw_differential,
                                 whitney_lift)

logger = logging.getLogger('ptwalls')


def coordinate_ring(names: Sequence[str]):
    """Polynomial ring QQ[names] in graded lex order."""
    return poly_ring(','.join(names), QQ, grlex)[0]


def monomials(nvars, lo, hi):
    """Exponent tuples of total degree lo..hi, highest degree first, then lex descending."""
    out = []
    for total in range(lo, hi + 1):
        for combo in itertools.combinations_with_replacement(range(nvars), total):
            e = [0] * nvars
            for i in combo:
                e[i] += 1
            out.append(tuple(e))
    return sorted(set(out), key=lambda m: (-sum(m), tuple(-x for x in m)))


def truncate(poly, degree):
    return poly.ring.from_dict({m: c for m, c in poly.items() if sum(m) <= degree})


def low_degree(poly):
    return min((sum(m) for m in poly), default=0)


def substitute(poly, images, degree=None):
    """poly(x_i -> images[i]), optionally truncated; images live in the same ring."""
    R = poly.ring
    out = R.zero
    powers = {}
    for mon, c in poly.items():
        term = R.one * c
        for i, e in enumerate(mon):
            if e:
                if (i, e) not in powers:
                    powers[(i, e)] = images[i]**e if degree is None else truncate(images[i]**e, degree)
                term = term * powers[(i, e)]
                if degree is not None:
                    term = truncate(term, degree)
        out = out + term
    return out if degree is None else truncate(out, degree)


def monomial_weight(mon, weights):
    total = tuple(0 for _ in weights[0]) if weights else ()
    for e, w in zip(mon, weights):
        if e:
            total = tuple(a + e * b for a, b in zip(total, w))
    return total


class TruncatedIdeal():
    """Ideal (generators) + m^power in a polynomial ring, seen modulo m^(degree+1)."""

    def __init__(self, ring, generators, degree, power=None):
        self.ring = ring
        self.degree = degree
        self.power = power
        self.generators = [truncate(ring(g), degree) for g in generators]
        self.generators = [g for g in self.generators if g]
        self._span = None

    @classmethod
    def maximal_power(cls, ring, power, degree):
        return cls(ring, [], degree, power)

    @property
    def nvars(self):
        return self.ring.ngens

    def __repr__(self):
        return f'TruncatedIdeal({len(self.generators)} generators, power={self.power}, degree={self.degree})'

    def keys(self):
        return monomials(self.nvars, 0, self.degree)

    def span(self) -> RowReducer:
        if self._span is None:
            vectors = []
            for g in self.generators:
                for mon in monomials(self.nvars, 0, self.degree - low_degree(g)):
                    prod = truncate(g * self.ring.from_dict({mon: QQ(1)}), self.degree)
                    if prod:
                        vectors.append(dict(prod))
            if self.power is not None and self.power <= self.degree:
                vectors.extend({mon: QQ(1)} for mon in monomials(self.nvars, self.power, self.degree))
            self._span = RowReducer(vectors, keys=self.keys())
        return self._span

    @property
    def dimension(self):
        return self.span().rank

    def normal_form(self, poly):
        return self.ring.from_dict(self.span().reduce(dict(truncate(self.ring(poly), self.degree))))

    def contains(self, poly):
        return not self.normal_form(poly)

    def truncated(self, degree):
        return TruncatedIdeal(self.ring, self.generators, degree, self.power)

    def times_maximal(self):
        """m * I, keeping the truncation degree."""
        gens = [x * g for g in self.generators for x in self.ring.gens]
        power = None if self.power is None else self.power + 1
        return TruncatedIdeal(self.ring, gens, self.degree, power)

    def __add__(self, other):
        powers = [p for p in (self.power, other.power) if p is not None]
        return TruncatedIdeal(self.ring, self.generators + other.generators, min(self.degree, other.degree),
                              min(powers) if powers else None)

    def includes(self, other):
        return all(self.span().contains(v) for v in other.span().basis)

    def __eq__(self, other):
        if not isinstance(other, TruncatedIdeal):
            return NotImplemented
        if other.degree != self.degree:
            return self.truncated(min(self.degree, other.degree)) == other.truncated(min(self.degree, other.degree))
        return self.dimension == other.dimension and self.includes(other)

    def is_homogeneous(self):
        return all(len({sum(m) for m in g}) == 1 for g in self.generators)

    def quotient_basis(self, sub: 'TruncatedIdeal'):
        """Echelon basis [(pivot monomial, polynomial)] of self modulo the subspace ``sub``."""
        reduced = [sub.span().reduce(v) for v in self.span().basis]
        classes = RowReducer([r for r in reduced if r], keys=self.keys())
        return [(key, self.ring.from_dict(row)) for key, row in zip(classes.pivot_keys, classes.basis)]

    def minimal_generators(self):
        """Generators modulo m^power: a basis of (I + m^p) / (m I + m^p) in degrees below p."""
        top = self.degree if self.power is None else min(self.degree, self.power - 1)
        low = self.truncated(top)
        return [poly for _, poly in low.quotient_basis(low.times_maximal())]

    def describe(self):
        gens = [str(g) for g in self.minimal_generators()]
        head = f'm^{self.power}' if self.power is not None else ''
        if head and gens:
            return f'{head} + ({", ".join(gens)})'
        return head or f'({", ".join(gens)})'


# ----------------------------------------------------------------------------
# TW elements with polynomial coefficients
# ----------------------------------------------------------------------------


class TWSeries():
    """sum_M x_M (x) M: TW elements indexed by monomials of the hull ring."""

    def __init__(self, ring, pair, terms: Optional[Dict] = None):
        self.ring = ring
        self.pair = pair
        self.terms = {tuple(m): x for m, x in (terms or {}).items() if x}

    @classmethod
    def linear(cls, ring, lifts):
        """sum_l x_l (x) L_l."""
        terms = {}
        for l, lift in enumerate(lifts):
            mon = tuple(1 if i == l else 0 for i in range(ring.ngens))
            terms[mon] = lift
        return cls(ring, lifts[0].pair, terms)

    @classmethod
    def from_poly(cls, poly, element: TWElement):
        return cls(poly.ring, element.pair, {m: element * c for m, c in poly.items()})

    def __repr__(self):
        return f'TWSeries({len(self.terms)} monomials)'

    def __bool__(self):
        return bool(self.terms)

    def _merge(self, other, sign):
        out = dict(self.terms)
        for m, x in other.terms.items():
            y = x if sign > 0 else -x
            out[m] = out[m] + y if m in out else y
        return TWSeries(self.ring, self.pair, out)

    def __add__(self, other):
        return self._merge(other, 1)

    def __sub__(self, other):
        return self._merge(other, -1)

    def __mul__(self, c):
        c = rat(c)
        return TWSeries(self.ring, self.pair, {m: x * c for m, x in self.terms.items()})

    __rmul__ = __mul__

    def degree(self):
        return max((sum(m) for m in self.terms), default=0)

    def truncated(self, degree):
        return TWSeries(self.ring, self.pair, {m: x for m, x in self.terms.items() if sum(m) <= degree})

    def coefficient(self, poly_or_monomial):
        mon = tuple(poly_or_monomial) if not hasattr(poly_or_monomial, 'ring') else next(iter(poly_or_monomial))
        return self.terms.get(mon, TWElement.zero(self.pair))

    def d(self):
        return TWSeries(self.ring, self.pair, {m: tw_differential(x) for m, x in self.terms.items()})

    def bracket(self, other, degree):
        out = {}
        for (m, x), (n, y) in itertools.product(self.terms.items(), other.terms.items()):
            mon = tuple(a + b for a, b in zip(m, n))
            if sum(mon) > degree:
                continue
            value = tw_bracket(x, y)
            if value:
                out[mon] = out[mon] + value if mon in out else value
        return TWSeries(self.ring, self.pair, out)

    def reduce(self, ideal: TruncatedIdeal):
        """Replace every monomial by its normal form modulo the ideal."""
        out = {}
        for m, x in self.terms.items():
            nf = ideal.span().reduce({m: QQ(1)}) if sum(m) <= ideal.degree else {}
            for n, c in nf.items():
                y = x * c
                out[n] = out[n] + y if n in out else y
        return TWSeries(self.ring, self.pair, out)

    def is_zero_modulo(self, ideal: TruncatedIdeal):
        return not self.reduce(ideal)


def mc_residue(xi: TWSeries, degree=None) -> TWSeries:
    """d xi + 1/2 [xi, xi], keeping monomials of degree <= ``degree``."""
    degree = 2 * xi.degree() if degree is None else degree
    out = xi.d().truncated(degree).terms
    items = sorted(xi.terms.items())
    half = QQ(1, 2)
    for a, (m, x) in enumerate(items):
        for n, y in items[a:]:
            mon = tuple(i + j for i, j in zip(m, n))
            if sum(mon) > degree:
                continue
            # degree-one entries: [x, y] = [y, x]
            value = tw_bracket(x, y) * (half if m == n else 1)
            if value:
                out[mon] = out[mon] + value if mon in out else value
    return TWSeries(xi.ring, xi.pair, out)


def gauge_action(z: TWSeries, xi: TWSeries, degree) -> TWSeries:
    """e^z . xi = xi + sum_n ad_z^n / (n+1)! ([z, xi] - dz), up to ``degree``."""
    term = z.bracket(xi, degree) - z.d().truncated(degree)
    out = xi.truncated(degree)
    n = 0
    while term:
        out = out + term * QQ(1, factorial(n + 1))
        term = z.bracket(term, degree)
        n += 1
    return out


# ----------------------------------------------------------------------------
# deformation problems
# ----------------------------------------------------------------------------


@dataclass
class DeformationProblem():
    """Closed lifts of an H^1 basis of a TW DGLA, with coordinate names and torus weights.

    The coordinate dual to a lift of weight w has weight -w, so
    xi_1 = sum x_l L_l is torus-invariant.
    """
    pair: HomPair
    lifts: List[TWElement]
    names: List[str]
    aut_weights: Optional[List] = None
    degree_start: int = 3
    degree_cap: int = 12
    label: str = ''
    check: bool = True
    ring: object = field(init=False, repr=False)
    h2: ClassBasis = field(init=False, repr=False)

    def __post_init__(self):
        if len(self.lifts) != len(self.names):
            raise ValueError(f'{len(self.lifts)} lifts but {len(self.names)} coordinate names.')
        self.ring = coordinate_ring(self.names)
        self.h2 = ClassBasis(self.pair, 2)
        self._harmonic = {}
        if self.check:
            self.validate()

    @classmethod
    def from_cohomology(cls, cx, prefix='t', window=None, **kwargs):
        """Whitney lifts of the canonical H^1 representatives of Hom(cx, cx)."""
        pair = HomPair(cx, cx)
        reps = cohomology_representatives(cx, cx, 1, window, pair=pair)
        lifts = [whitney_lift(r) for r in reps]
        names = [f'{prefix}{i + 1}' for i in range(len(lifts))]
        return cls(pair, lifts, names, **kwargs)

    def validate(self):
        h1 = ClassBasis(self.pair, 1)
        rows = []
        for name, lift in zip(self.names, self.lifts):
            if lift.total_degree != 1 or not is_closed(lift):
                raise ValueError(f'Lift {name} is not a closed degree-one element.')
            if len(lift.weights()) != 1:
                raise ValueError(f'Lift {name} is not torus-homogeneous.')
            rows.append(h1.coordinates(integrate(lift)))
        if RowReducer(rows).rank != len(rows):
            raise ValueError('Lifts do not have independent classes.')
        return True

    @property
    def weights(self) -> List[WeightVector]:
        return [-lift.weights()[0] for lift in self.lifts]

    def harmonic(self, key) -> TWElement:
        """Closed TW lift of the H^2 basis class ``key = (weight, index)``."""
        if key not in self._harmonic:
            self._harmonic[key] = whitney_lift(self.h2.representative(*key))
        return self._harmonic[key]

    def h2_coordinates(self, element: TWElement) -> Dict:
        return self.h2.coordinates(integrate(element))

    def initial_state(self) -> 'HullState':
        ideal = TruncatedIdeal.maximal_power(self.ring, 2, 2)
        return HullState(self, 1, ideal, TWSeries.linear(self.ring, self.lifts), [ideal])


@dataclass
class HullState():
    problem: DeformationProblem
    order: int
    ideal: TruncatedIdeal
    xi: TWSeries
    history: List[TruncatedIdeal] = field(default_factory=list)
    obstructions: List[Dict] = field(default_factory=list)

    @property
    def names(self):
        return self.problem.names

    def residue(self):
        return mc_residue(self.xi, self.order + 1)

    def is_maurer_cartan(self):
        """d xi + 1/2 [xi, xi] vanishes modulo J_q."""
        return self.residue().is_zero_modulo(self.ideal)


def _split_residue(residue: TWSeries, basis, sub: TruncatedIdeal):
    """Coefficients R_k with residue = sum_k b_k R_k modulo ``sub``."""
    reduced = {}
    for m, x in residue.terms.items():
        if sum(m) > sub.degree:
            continue
        for n, c in sub.span().reduce({m: QQ(1)}).items():
            y = x * c
            reduced[n] = reduced[n] + y if n in reduced else y
    reduced = {n: x for n, x in reduced.items() if x}
    parts = [(pivot, b, reduced.get(pivot)) for pivot, b in basis]
    check = {}
    for _, b, x in parts:
        if x is None:
            continue
        for n, c in b.items():
            y = x * c
            check[n] = check[n] + y if n in check else y
    check = {n: x for n, x in check.items() if x}
    if check != reduced:
        raise ValueError('Maurer-Cartan residue does not lie in J_q.')
    return [(b, x) for _, b, x in parts if x is not None]


def extend_order(state: HullState, reduce_xi=True) -> HullState:
    """J_{q+1} = m J_q + (obstruction coefficients) + m^{q+2}, and xi_{q+1} killing the exact part."""
    problem = state.problem
    q = state.order
    top = q + 1
    ring = problem.ring
    J = state.ideal.truncated(top)
    mJ = J.times_maximal()
    basis = J.quotient_basis(mJ)
    residue = mc_residue(state.xi, top)
    parts = _split_residue(residue, basis, mJ)
    logger.debug(f'Order {q}: {len(basis)} generators of J_q/mJ_q, {len(parts)} nonzero residue parts.')

    coords = [problem.h2_coordinates(x) for _, x in parts]
    keys = sorted({k for c in coords for k in c})
    relations = []
    for key in keys:
        g = ring.zero
        for (b, _), c in zip(parts, coords):
            if key in c:
                g = g + b * c[key]
        if g:
            relations.append(g)
    gens = [x * b for _, b in basis for x in ring.gens] + relations
    ideal = TruncatedIdeal(ring, gens, top + 1, top + 1)

    xi = state.xi
    for (b, x), c in zip(parts, coords):
        target = x
        for key, v in c.items():
            target = target - problem.harmonic(key) * v
        sol = solve_primitive(target, problem.degree_start, problem.degree_cap)
        if not sol.exact:
            raise ValueError(f'Residue part at {b} has a class outside the H^2 basis.')
        xi = xi - TWSeries.from_poly(b, sol.primitive)
    if reduce_xi:
        xi = xi.reduce(ideal.truncated(top))
    record = {
        'order': q + 1,
        'relations': [str(g) for g in relations],
        'classes': [[str(b), {f'{tuple(w)}#{i}': rat_str(v) for (w, i), v in sorted(c.items())}]
                    for (b, _), c in zip(parts, coords) if c],
    }
    logger.info(f'{problem.label or "hull"}: J_{q + 1} = {ideal.describe()}')
    return HullState(problem, q + 1, ideal, xi, state.history + [ideal], state.obstructions + [record])


def run_hull(problem: DeformationProblem, order: int) -> HullState:
    state = problem.initial_state()
    while state.order < order:
        state = extend_order(state)
    return state


@dataclass
class PrimaryObstruction():
    pairs: List
    keys: List
    matrix: QMatrix
    quadrics: List

    def is_zero(self):
        return not self.matrix.entries


def primary_obstruction(problem: DeformationProblem) -> PrimaryObstruction:
    """kappa_2: the classes of [L_l, L_l'] (l <= l') against the H^2 basis, and the quadrics it cuts out."""
    n = len(problem.lifts)
    pairs = [(l, m) for l in range(n) for m in range(l, n)]
    coords = [problem.h2_coordinates(tw_bracket(problem.lifts[l], problem.lifts[m])) for l, m in pairs]
    keys = sorted({k for c in coords for k in c})
    entries = {(r, keys.index(k)): v for r, c in enumerate(coords) for k, v in c.items()}
    matrix = QMatrix(len(pairs), len(keys), entries)
    gens = problem.ring.gens
    quadrics = []
    for key in keys:
        g = problem.ring.zero
        for (l, m), c in zip(pairs, coords):
            v = c.get(key)
            if v:
                g = g + gens[l] * gens[m] * (v if l != m else v * QQ(1, 2))
        quadrics.append(g)
    return PrimaryObstruction(pairs, keys, matrix, quadrics)


# ----------------------------------------------------------------------------
# stopping criterion
# ----------------------------------------------------------------------------


@dataclass
class StoppingVerdict():
    verdict: str
    degree: int
    low_degree_generators: Optional[bool]
    agrees_modulo_power: bool
    substitution: Dict[str, str] = field(default_factory=dict)

    @property
    def conclusive(self):
        return self.verdict == 'hull-equals-candidate'

    def to_dict(self):
        return {
            'verdict': self.verdict,
            'degree': self.degree,
            'low_degree_generators': self.low_degree_generators,
            'agrees_modulo_power': self.agrees_modulo_power,
            'substitution': dict(sorted(self.substitution.items())),
        }


def _low_degree_generators(candidate: TruncatedIdeal, d):
    """I_e = (m I)_e for every degree e >= d up to the top generator degree; None when I is not homogeneous."""
    if not candidate.is_homogeneous():
        return None
    top = max((sum(next(iter(g))) for g in candidate.generators), default=0)
    if top < d:
        return True
    full = candidate.truncated(top)
    inner = full.times_maximal()
    for g in full.generators:
        if sum(next(iter(g))) >= d and not inner.contains(g):
            return False
    return True


def match_up_to_coordinate_change(J: TruncatedIdeal, candidate: TruncatedIdeal, d, weights=None, tangent=None):
    """Search t_b -> t_b + sum c M (M of degree 2..d-2, weight of t_b) with phi(I) + m^d = J + m^d.

    Corrections enter linearly modulo m^d when d <= 4; the result is checked exactly
    after substitution either way. Returns the images of the coordinates or None.
    """
    R = J.ring
    top = d - 1
    target = J.truncated(top)
    images = list(tangent) if tangent is not None else list(R.gens)
    base = [truncate(substitute(g, images, top), top) for g in candidate.generators]
    unknowns = []
    for b in range(R.ngens):
        for mon in monomials(R.ngens, 2, d - 2):
            if weights is not None and monomial_weight(mon, weights) != tuple(weights[b]):
                continue
            unknowns.append((b, mon))
    rows = {}
    entries = {}
    rhs = {}

    def row(key):
        if key not in rows:
            rows[key] = len(rows)
        return rows[key]

    for gi, g in enumerate(base):
        for n, c in target.normal_form(g).items():
            rhs[row((gi, n))] = -c
        for col, (b, mon) in enumerate(unknowns):
            term = g.diff(R.gens[b]) * R.from_dict({mon: QQ(1)})
            for n, c in target.normal_form(term).items():
                r = row((gi, n))
                entries[(r, col)] = entries.get((r, col), QQ(0)) + c
    if not rows:
        solution = [QQ(0)] * len(unknowns)
    else:
        solution = solve_linear(QMatrix(len(rows), len(unknowns), entries),
                                [rhs.get(i, QQ(0)) for i in range(len(rows))])
        if solution is None:
            return None
    change = list(R.gens)
    for (b, mon), c in zip(unknowns, solution):
        if c:
            change[b] = change[b] + R.from_dict({mon: c})
    final = [substitute(g, change, top) for g in base]
    moved = TruncatedIdeal(R, final, top, d)
    if moved != target:
        return None
    return [substitute(img, change, top) for img in images]


def stopping_check(state, candidate, d, tangent=None) -> StoppingVerdict:
    """Hull = S / I when I has no generators in degree >= d outside m I and J + m^d = I + m^d."""
    ideal = state.ideal if isinstance(state, HullState) else state
    weights = [tuple(w) for w in state.problem.weights] if isinstance(state, HullState) else None
    order = state.order if isinstance(state, HullState) else ideal.degree - 1
    if order < d - 1 or ideal.degree < d - 1:
        raise TruncationTooSmall(f'Stopping check at d={d} needs J_{d - 1}; the hull is at order {order}.')
    if not isinstance(candidate, TruncatedIdeal):
        candidate = TruncatedIdeal(ideal.ring, list(candidate), max(d, 1))
    low = _low_degree_generators(candidate, d)
    images = match_up_to_coordinate_change(ideal, candidate, d, weights, tangent)
    agrees = images is not None
    substitution = {}
    if agrees:
        for x, img in zip(ideal.ring.gens, images):
            if img != x:
                substitution[str(x)] = str(img)
    verdict = 'hull-equals-candidate' if low and agrees else 'inconclusive'
    logger.info(f'Stopping check at d={d}: {verdict} (low-degree generators: {low}, agreement: {agrees}).')
    return StoppingVerdict(verdict, d, low, agrees, substitution)


# ----------------------------------------------------------------------------
# invariant rings
# ----------------------------------------------------------------------------


@dataclass
class Presentation():
    """Invariant subring of S / I: monomial generators and the relations among them."""
    ring: object
    generators: List
    s_ring: object
    relations: List
    degree_bound: int
    embedding_dimension: int
    comparison: Optional[Dict] = None

    @property
    def matches(self):
        return bool(self.comparison) and all(self.comparison.values())

    def to_dict(self):
        out = {
            'generators': [str(g) for g in self.generators],
            'relations': [str(r) for r in self.relations],
            'degree_bound': self.degree_bound,
            'embedding_dimension': self.embedding_dimension,
        }
        if self.comparison is not None:
            out['comparison'] = dict(self.comparison)
        return out


def _weight_zero_monomials(nvars, weights, lo, hi):
    zero = tuple(0 for _ in weights[0])
    return [m for m in reversed(monomials(nvars, lo, hi)) if monomial_weight(m, weights) == zero]


def _divides(a, b):
    return all(x <= y for x, y in zip(a, b)) and a != b


def _s_monomials(degrees, bound):
    """Exponent tuples over generators of the given degrees with image degree in 1..bound."""
    out = []
    k = len(degrees)

    def rec(i, current, total):
        if i == k:
            if total:
                out.append(tuple(current))
            return
        e = 0
        while total + e * degrees[i] <= bound:
            rec(i + 1, current + [e], total + e * degrees[i])
            e += 1

    rec(0, [], 0)
    return sorted(out, key=lambda m: (sum(e * d for e, d in zip(m, degrees)), tuple(-x for x in m)))


def _image_columns(images, s_mons, quotient: TruncatedIdeal):
    """Normal forms modulo the quotient ideal of the products prod images^sm."""
    columns = []
    for sm in s_mons:
        prod = quotient.ring.one
        for img, e in zip(images, sm):
            if e:
                prod = truncate(prod * img**e, quotient.degree)
        columns.append(dict(quotient.normal_form(prod)))
    return columns


def _kernel_polys(s_ring, images, degrees, bound, quotient):
    s_mons = _s_monomials(degrees, bound)
    if not s_mons:
        return []
    index = {k: i for i, k in enumerate(quotient.keys())}
    columns = _image_columns(images, s_mons, quotient)
    mat = QMatrix(len(index), len(s_mons), {(index[n], j): c for j, col in enumerate(columns) for n, c in col.items()})
    out = []
    for col in kernel_basis(mat):
        vec = col.column_vectors()[0]
        out.append(s_ring.from_dict({sm: c for sm, c in zip(s_mons, vec) if c}))
    return out


def _relation_span(polys, degrees, bound):
    """Span of s-monomial multiples of ``polys`` with image degree <= bound."""
    vectors = []
    for p in polys:
        pdeg = max(sum(e * d for e, d in zip(m, degrees)) for m in p)
        for sm in [()] + _s_monomials(degrees, bound - pdeg):
            mult = p if not sm else p * p.ring.from_dict({sm: QQ(1)})
            vectors.append(dict(mult))
    return RowReducer(vectors)


def invariant_subring(ideal: TruncatedIdeal, weights, degree_bound, target=None) -> Presentation:
    """Weight-zero part of S / (I + m^(bound+1)) presented by indecomposable invariant monomials.

    ``target`` is an optional pair (images, relations) of a proposed presentation:
    images are polynomials in S, relations generate an ideal of the s-ring.
    """
    R = ideal.ring
    weights = [tuple(w) for w in weights]
    quotient = TruncatedIdeal(R, ideal.generators, degree_bound, degree_bound + 1)
    invariant = _weight_zero_monomials(R.ngens, weights, 1, degree_bound)
    gens = [m for m in invariant if not any(_divides(o, m) for o in invariant)]
    gen_polys = [R.from_dict({m: QQ(1)}) for m in gens]
    degrees = [sum(m) for m in gens]
    s_ring = coordinate_ring([f's{i}' for i in range(len(gens))]) if gens else None
    relations = []
    if gens:
        kernel = _kernel_polys(s_ring, gen_polys, degrees, degree_bound, quotient)
        # keep the relations not generated by lower ones
        kernel.sort(key=lambda p: max(sum(e * d for e, d in zip(m, degrees)) for m in p))
        kept = []
        for p in kernel:
            pdeg = max(sum(e * d for e, d in zip(m, degrees)) for m in p)
            if kept and _relation_span(kept, degrees, pdeg).contains(dict(p)):
                continue
            kept.append(p)
        relations = kept
    embedding = RowReducer([dict(quotient.normal_form(g)) for g in gen_polys]).rank if gens else 0
    presentation = Presentation(R, gen_polys, s_ring, relations, degree_bound, embedding)
    if target is not None:
        presentation.comparison = _compare_presentation(quotient, weights, target, degree_bound)
    logger.debug(f'Invariant subring: {len(gens)} monomial generators, embedding dimension {embedding}.')
    return presentation


def _compare_presentation(quotient, weights, target, bound):
    images, relations = target
    R = quotient.ring
    images = [R(img) for img in images]
    degrees = [low_degree(img) for img in images]
    if isinstance(relations, TruncatedIdeal):
        relations = relations.generators
    for rel in relations:
        rdeg = max(sum(e * d for e, d in zip(m, degrees)) for m in rel)
        if rdeg > bound:
            raise TruncationTooSmall(f'Relation of image degree {rdeg} needs degree_bound >= {rdeg}, got {bound}.')
    s_ring = relations[0].ring if relations else coordinate_ring([f's{i}' for i in range(len(images))])
    keys = quotient.keys()
    produced = RowReducer(_image_columns(images, _s_monomials(degrees, bound), quotient), keys=keys)
    invariant = RowReducer([dict(quotient.normal_form(R.from_dict({m: QQ(1)})))
                            for m in _weight_zero_monomials(R.ngens, weights, 1, bound)], keys=keys)
    spans = produced.rank == invariant.rank and all(invariant.contains(v) for v in produced.basis)
    kernel = RowReducer([dict(p) for p in _kernel_polys(s_ring, images, degrees, bound, quotient)])
    expected = _relation_span(relations, degrees, bound) if relations else RowReducer([])
    same = kernel.rank == expected.rank and all(kernel.contains(v) for v in expected.basis)
    return {'spans_invariants': spans, 'relations_match': same}


def hankel_rank_ideal(n) -> TruncatedIdeal:
    """2x2 minors s_i s_(j+1) - s_(i+1) s_j (i < j) of the Hankel matrix (s_0 ... s_(n-1); s_1 ... s_n)."""
    if n < 2:
        raise ValueError(f'hankel_rank_ideal needs n >= 2, got {n}.')
    R = coordinate_ring([f's{i}' for i in range(n + 1)])
    s = R.gens
    gens = [s[i] * s[j + 1] - s[i + 1] * s[j] for i in range(n) for j in range(i + 1, n)]
    return TruncatedIdeal(R, gens, 2)


__all__ = [
    'coordinate_ring', 'monomials', 'truncate', 'substitute', 'TruncatedIdeal', 'TWSeries', 'mc_residue',
    'gauge_action', 'DeformationProblem', 'HullState', 'extend_order', 'run_hull', 'PrimaryObstruction',
    'primary_obstruction', 'StoppingVerdict', 'match_up_to_coordinate_change', 'stopping_check', 'Presentation',
    'invariant_subring', 'hankel_rank_ideal'
]
