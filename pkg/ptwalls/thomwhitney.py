"""Thom-Whitney totalization of the Cech-Hom semicosimplicial DGLA.

Forms on the n-simplex use the reduced coordinates t_1 ... t_n and dt_1 ... dt_n;
t_0 = 1 - sum t_i and dt_0 = -sum dt_i are eliminated, so a form is a plain
dict over monomials (a, S) with a an exponent tuple and S an increasing tuple
of indices in 1..n.

A TWElement keeps one dict per level n: form monomial -> level-n cochain. The
total degree of (a, S) (x) f is |S| plus the internal degree of f.
"""
import itertools
import logging
from dataclasses import dataclass, field
from functools import lru_cache
from math import factorial
from typing import Dict, List, Optional, Sequence

from sympy.polys.domains import QQ

from ptwalls.algebra import (CompatibilityError, PrimitiveSearchExhausted, QMatrix, ShapeMismatchError, WeightVector,
                             rat, solve_linear)
from ptwalls.cech_dgla import (CechHomCochain, ClassBasis, HomPair, WeightComplex, bracket, cech_class_coordinates,
                               coface, face, hom_differential)

logger = logging.getLogger('ptwalls')


def _wedge_sign(s, t):
    """Sign of sorting the concatenation s + t of two increasing index tuples; 0 if they meet."""
    if set(s) & set(t):
        return 0
    inversions = sum(1 for i in s for j in t if i > j)
    return -1 if inversions % 2 else 1


class SimplexForm():
    """Polynomial differential form on the standard n-simplex, in reduced coordinates."""

    __slots__ = ('dim', 'terms')

    def __init__(self, dim, terms=None):
        self.dim = dim
        clean = {}
        for (a, s), c in (terms or {}).items():
            c = rat(c)
            if c:
                if len(a) != dim:
                    raise ShapeMismatchError(f'Exponent {a} on a {dim}-simplex.')
                clean[(tuple(a), tuple(s))] = c
        self.terms = clean

    @classmethod
    def one(cls, dim):
        return cls(dim, {((0, ) * dim, ()): 1})

    @classmethod
    def t(cls, dim, i):
        """Barycentric coordinate t_i; t_0 = 1 - t_1 - ... - t_n."""
        zero = (0, ) * dim
        if i == 0:
            terms = {(zero, ()): 1}
            for j in range(1, dim + 1):
                terms[(_unit(dim, j), ())] = -1
            return cls(dim, terms)
        return cls(dim, {(_unit(dim, i), ()): 1})

    @classmethod
    def dt(cls, dim, i):
        zero = (0, ) * dim
        if i == 0:
            return cls(dim, {(zero, (j, )): -1 for j in range(1, dim + 1)})
        return cls(dim, {(zero, (i, )): 1})

    def __add__(self, other):
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, QQ(0)) + v
        return SimplexForm(self.dim, out)

    def __neg__(self):
        return SimplexForm(self.dim, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        """Scalar multiple or wedge product."""
        if not isinstance(other, SimplexForm):
            c = rat(other)
            return SimplexForm(self.dim, {k: v * c for k, v in self.terms.items()})
        if other.dim != self.dim:
            raise ShapeMismatchError('Wedge of forms on simplices of different dimension.')
        out = {}
        for (a, s), u in self.terms.items():
            for (b, t), v in other.terms.items():
                sign = _wedge_sign(s, t)
                if not sign:
                    continue
                key = (tuple(x + y for x, y in zip(a, b)), tuple(sorted(s + t)))
                out[key] = out.get(key, QQ(0)) + sign * u * v
        return SimplexForm(self.dim, out)

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, SimplexForm) and self.dim == other.dim and self.terms == other.terms

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        return f'SimplexForm({self.dim}, {self.terms})'

    def degrees(self):
        return sorted({len(s) for (_, s) in self.terms})

    def t_degree(self):
        return max((sum(a) for (a, _) in self.terms), default=0)

    def d(self):
        return SimplexForm(self.dim, _d_monomials(self.terms))

    def pullback(self, k):
        """delta_k^*: forms on Delta^n to forms on the face Delta^{n-1} missing vertex k."""
        if not 0 <= k <= self.dim:
            raise ValueError(f'No face {k} on a {self.dim}-simplex.')
        out = SimplexForm(self.dim - 1)
        for (a, s), c in self.terms.items():
            out = out + _pullback_monomial(self.dim, k, a, s) * c
        return out

    def integrate(self):
        """Integral over the simplex: int t^a dt_1...dt_n = prod(a_i!) / (|a| + n)!."""
        top = tuple(range(1, self.dim + 1))
        total = QQ(0)
        for (a, s), c in self.terms.items():
            if s == top:
                total += c * _monomial_integral(a)
        return total


def _unit(dim, i):
    return tuple(1 if j == i - 1 else 0 for j in range(dim))


def _monomial_integral(a):
    num = 1
    for x in a:
        num *= factorial(x)
    return QQ(num, factorial(sum(a) + len(a)))


def _d_monomial(a, s):
    """[(a', S', coeff)] for d(t^a dt_S)."""
    out = []
    for j in range(1, len(a) + 1):
        if not a[j - 1] or j in s:
            continue
        sign = -1 if sum(1 for i in s if i < j) % 2 else 1
        new_a = tuple(x - 1 if idx == j - 1 else x for idx, x in enumerate(a))
        out.append((new_a, tuple(sorted(s + (j, ))), sign * a[j - 1]))
    return out


def _d_monomials(terms):
    out = {}
    for (a, s), c in terms.items():
        for new_a, new_s, coeff in _d_monomial(a, s):
            key = (new_a, new_s)
            out[key] = out.get(key, QQ(0)) + coeff * c
    return out


@lru_cache(maxsize=None)
def _face_images(n, k):
    """Images of t_1..t_n and dt_1..dt_n under delta_k^*, as forms on Delta^{n-1}."""
    m = n - 1
    images = []
    for j in range(1, n + 1):
        if k == 0:
            images.append(SimplexForm.t(m, 0) if j == 1 else SimplexForm.t(m, j - 1))
        elif j < k:
            images.append(SimplexForm.t(m, j))
        elif j == k:
            images.append(SimplexForm(m))
        else:
            images.append(SimplexForm.t(m, j - 1))
    return tuple(images), tuple(f.d() for f in images)


@lru_cache(maxsize=None)
def _pullback_monomial(n, k, a, s):
    t_images, dt_images = _face_images(n, k)
    out = SimplexForm.one(n - 1)
    for j, e in enumerate(a):
        for _ in range(e):
            out = out * t_images[j]
    for j in s:
        out = out * dt_images[j - 1]
    return out


def whitney_form(dim, positions: Sequence[int]) -> SimplexForm:
    """omega_J = p! sum_k (-1)^k t_{j_k} dt_{j_0} ... (omit dt_{j_k}) ... dt_{j_p} on Delta^dim."""
    p = len(positions) - 1
    out = SimplexForm(dim)
    for k, j in enumerate(positions):
        term = SimplexForm.t(dim, j)
        for q, i in enumerate(positions):
            if q != k:
                term = term * SimplexForm.dt(dim, i)
        out = out + (term if k % 2 == 0 else -term)
    return out * factorial(p)


# ----------------------------------------------------------------------------
# Thom-Whitney elements
# ----------------------------------------------------------------------------


class TWElement():
    """Element of Tot_TW: level n -> {(a, S): level-n cochain}."""

    __slots__ = ('pair', 'components')

    def __init__(self, pair: HomPair, components: Dict[int, Dict], check=True):
        self.pair = pair
        clean = {}
        for n, comp in components.items():
            if not 0 <= n < pair.cover_size:
                raise ShapeMismatchError(f'Level {n} outside a cover of size {pair.cover_size}.')
            kept = {k: f for k, f in comp.items() if f}
            for key, f in kept.items():
                if f.pair != pair:
                    raise ShapeMismatchError('TW component from a different Hom complex.')
                if any(len(slot[0]) != n + 1 for slot in f.entries):
                    raise ShapeMismatchError(f'Component {key} at level {n} has entries on other levels.')
            if kept:
                clean[n] = kept
        self.components = clean
        if check:
            self.check_compatibility()

    @classmethod
    def zero(cls, pair):
        return cls(pair, {}, check=False)

    @classmethod
    def from_terms(cls, pair, terms):
        """Build from [(level, SimplexForm, cochain)] and verify face compatibility."""
        comps = {}
        for n, form, f in terms:
            if form.dim != n:
                raise ShapeMismatchError(f'Form on Delta^{form.dim} paired with a level-{n} cochain.')
            _add_form_terms(comps.setdefault(n, {}), form, f)
        return cls(pair, comps)

    def _combine(self, other, sign):
        if self.pair != other.pair:
            raise ShapeMismatchError('TW elements of different Hom complexes.')
        comps = {n: dict(c) for n, c in self.components.items()}
        for n, comp in other.components.items():
            target = comps.setdefault(n, {})
            for key, f in comp.items():
                g = f if sign > 0 else -f
                target[key] = target[key] + g if key in target else g
        return TWElement(self.pair, comps, check=False)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return self * -1

    def __mul__(self, c):
        c = rat(c)
        return TWElement(self.pair, {n: {k: f * c for k, f in comp.items()} for n, comp in self.components.items()},
                         check=False)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, TWElement):
            return NotImplemented
        return self.pair == other.pair and self.components == other.components

    def __bool__(self):
        return bool(self.components)

    def __repr__(self):
        size = sum(len(c) for c in self.components.values())
        return f'TWElement({size} terms, levels={sorted(self.components)})'

    def total_degrees(self):
        out = set()
        for comp in self.components.values():
            for (_, s), f in comp.items():
                out.update(len(s) + d for d in f.internal_degrees())
        return sorted(out)

    @property
    def total_degree(self):
        degs = self.total_degrees()
        if len(degs) > 1:
            raise ValueError(f'TW element mixes total degrees {degs}.')
        return degs[0] if degs else 0

    def t_degree(self):
        return max((sum(a) for comp in self.components.values() for (a, _) in comp), default=0)

    def level(self, n):
        return self.components.get(n, {})

    def weights(self):
        out = set()
        for comp in self.components.values():
            for f in comp.values():
                out.update(f.weights())
        return sorted(out)

    def weight_parts(self):
        parts = {}
        for n, comp in self.components.items():
            for key, f in comp.items():
                for w, piece in f.weight_parts().items():
                    parts.setdefault(w, {}).setdefault(n, {})[key] = piece
        return {w: TWElement(self.pair, c, check=False) for w, c in sorted(parts.items())}

    def compatibility_defects(self):
        """[(n, k)] where delta_k^* x_n differs from face_k x_{n-1}."""
        defects = []
        for n in range(1, self.pair.cover_size):
            upper = self.level(n)
            lower = self.level(n - 1)
            for k in range(n + 1):
                lhs = {}
                for (a, s), f in upper.items():
                    _add_form_terms(lhs, _pullback_monomial(n, k, a, s), f)
                rhs = {}
                for key, f in lower.items():
                    g = face(f, k)
                    if g:
                        rhs[key] = g
                lhs = {key: f for key, f in lhs.items() if f}
                if lhs != rhs:
                    defects.append((n, k))
        return defects

    def check_compatibility(self):
        defects = self.compatibility_defects()
        if defects:
            n, k = defects[0]
            raise CompatibilityError(f'Face {k} of level {n} does not match the coface of level {n - 1}.')
        return True

    def describe(self):
        out = []
        for n in sorted(self.components):
            for (a, s), f in sorted(self.components[n].items()):
                form = '*'.join([f't{j + 1}^{e}' for j, e in enumerate(a) if e] + [f'dt{j}' for j in s]) or '1'
                out.append(f'[{n}] {form} (x) ' + '; '.join(f.describe()))
        return out


def _add_form_terms(target, form, f):
    for key, c in form.terms.items():
        g = f * c
        target[key] = target[key] + g if key in target else g


def tw_differential(x: TWElement) -> TWElement:
    """d(omega (x) f) = d omega (x) f + (-1)^{|omega|} omega (x) d f."""
    comps = {}
    for n, comp in x.components.items():
        out = comps.setdefault(n, {})
        for (a, s), f in comp.items():
            for new_a, new_s, coeff in _d_monomial(a, s):
                key = (new_a, new_s)
                g = f * coeff
                out[key] = out[key] + g if key in out else g
            df = hom_differential(f)
            if df:
                if len(s) % 2:
                    df = -df
                key = (a, s)
                out[key] = out[key] + df if key in out else df
    return TWElement(x.pair, comps, check=False)


def tw_bracket(x: TWElement, y: TWElement) -> TWElement:
    """[omega (x) f, eta (x) g] = (-1)^{|f||eta|} (omega ^ eta) (x) [f, g], levelwise."""
    if x.pair != y.pair:
        raise ShapeMismatchError('tw_bracket needs elements of the same Hom complex.')
    comps = {}
    for n, xcomp in x.components.items():
        ycomp = y.level(n)
        if not ycomp:
            continue
        out = comps.setdefault(n, {})
        split = [(key, m, f.restrict_degree(m)) for key, f in xcomp.items() for m in f.internal_degrees()]
        for (a, s), m, fm in split:
            for (b, t), g in ycomp.items():
                sign = _wedge_sign(s, t)
                if not sign:
                    continue
                if (m * len(t)) % 2:
                    sign = -sign
                value = bracket(fm, g)
                if not value:
                    continue
                key = (tuple(i + j for i, j in zip(a, b)), tuple(sorted(s + t)))
                value = value * sign
                out[key] = out[key] + value if key in out else value
    return TWElement(x.pair, comps, check=False)


def integrate(x: TWElement) -> CechHomCochain:
    """Sum over levels of the integral of the top-form part; a Cech cochain of the same total degree."""
    out = CechHomCochain.zero(x.pair)
    for n, comp in x.components.items():
        top = tuple(range(1, n + 1))
        for (a, s), f in comp.items():
            if s == top:
                out = out + f * _monomial_integral(a)
    return out


def whitney_lift(c: CechHomCochain) -> TWElement:
    """W(c)_n = sum_J omega_J (x) coface(c_p, J, n); integrate(W(c)) = c."""
    pair = c.pair
    comps = {}
    for p in c.levels():
        cp = c.restrict_level(p)
        for n in range(p, pair.cover_size):
            for positions in itertools.combinations(range(n + 1), p + 1):
                image = coface(cp, positions, n)
                if image:
                    _add_form_terms(comps.setdefault(n, {}), whitney_form(n, positions), image)
    return TWElement(pair, comps, check=False)


def constant_lift(c: CechHomCochain) -> TWElement:
    """1 (x) c on every level for a level-0 cochain that glues (Cech closed)."""
    return whitney_lift(c)


def is_closed(x: TWElement) -> bool:
    return not tw_differential(x)


def tw_cohomology_class(x: TWElement, basis: Sequence) -> Optional[List]:
    """Coordinates of [x] against the classes of ``basis`` (TW elements or Cech cocycles).

    Returns None when [x] has a nonzero remainder outside their span.
    """
    if not is_closed(x):
        raise ValueError('tw_cohomology_class needs a closed element.')
    reps = [integrate(b) if isinstance(b, TWElement) else b for b in basis]
    return cech_class_coordinates(integrate(x), reps)


# ----------------------------------------------------------------------------
# primitives
# ----------------------------------------------------------------------------


@dataclass
class PrimitiveSolution():
    primitive: Optional[TWElement]
    nonzero_weights: List[WeightVector] = field(default_factory=list)
    degree_bound: int = 0

    @property
    def exact(self):
        return not self.nonzero_weights


def _exponents(n, bound):
    """Exponent tuples of length n with total degree <= bound, by degree."""
    out = []
    for total in range(bound + 1):
        for combo in itertools.combinations_with_replacement(range(n), total):
            a = [0] * n
            for j in combo:
                a[j] += 1
            out.append(tuple(a))
    return sorted(set(out), key=lambda a: (sum(a), tuple(-x for x in a)))


def _cech_exact(c: TWElement, weight, degree):
    wc = WeightComplex(c.pair, weight)
    target = wc.vector(integrate(c), degree)
    if not any(target):
        return True
    if not wc.valid_slots(degree - 1):
        return False
    return solve_linear(wc.matrix(degree - 1), target) is not None


def _solve_bounded(c: TWElement, weight, degree, bound):
    """Primitive of c at one weight with t-degree <= bound, or None."""
    pair = c.pair
    top = pair.cover_size
    unknowns = []
    for n in range(top):
        for size in range(n + 1):
            for s in itertools.combinations(range(1, n + 1), size):
                slots = [slot for slot in pair.level_slots(n, degree - 1 - size) if pair.is_valid(slot, weight)]
                if not slots:
                    continue
                for a in _exponents(n, bound):
                    for slot in slots:
                        unknowns.append((n, (a, s), slot))
    if not unknowns:
        return None
    unknowns.sort(key=lambda u: (sum(u[1][0]), u[0], u[1], u[2]))

    rows = {}

    def row(key):
        if key not in rows:
            rows[key] = len(rows)
        return rows[key]

    entries = {}

    def put(key, col, coeff):
        r = row(key)
        entries[(r, col)] = entries.get((r, col), QQ(0)) + coeff

    for col, (n, (a, s), slot) in enumerate(unknowns):
        for new_a, new_s, coeff in _d_monomial(a, s):
            put(('d', n, (new_a, new_s), slot), col, coeff)
        sign = -1 if len(s) % 2 else 1
        for image, coeff in pair.hom_image(slot):
            put(('d', n, (a, s), image), col, sign * coeff)
        if n >= 1:
            for k in range(n + 1):
                for key, coeff in _pullback_monomial(n, k, a, s).terms.items():
                    put(('c', n, k, key, slot), col, coeff)
        if n + 1 < top:
            for k in range(n + 2):
                for image, coeff in pair.face_image(slot, k):
                    put(('c', n + 1, k, (a, s), image), col, -coeff)

    rhs = {}
    for n, comp in c.components.items():
        for key, f in comp.items():
            for slot, val in f.entries.items():
                for _, coeff in val.terms.items():
                    rhs[row(('d', n, key, slot))] = coeff
    b = [rhs.get(i, QQ(0)) for i in range(len(rows))]
    sol = solve_linear(QMatrix(len(rows), len(unknowns), entries), b)
    if sol is None:
        return None
    comps = {}
    for (n, key, slot), v in zip(unknowns, sol):
        if v:
            piece = pair.unit(slot, weight, v)
            target = comps.setdefault(n, {})
            target[key] = target[key] + piece if key in target else piece
    return TWElement(pair, comps, check=False)


def solve_primitive(c: TWElement, degree_start=3, degree_cap=12) -> PrimitiveSolution:
    """eta with d eta = c, weight by weight, searching t-degree bounds degree_start, 2x, ... up to the cap.

    Weights where [c] is a nonzero class are reported instead of solved.
    """
    if not c:
        return PrimitiveSolution(TWElement.zero(c.pair))
    degree = c.total_degree
    if degree < 1:
        raise ValueError(f'solve_primitive needs degree >= 1, got {degree}.')
    if not is_closed(c):
        raise ValueError('solve_primitive needs a closed element.')
    parts = c.weight_parts()
    nonzero = [w for w, part in parts.items() if not _cech_exact(part, w, degree)]
    if nonzero:
        logger.debug(f'Nonzero class at weights {nonzero}.')
        return PrimitiveSolution(None, nonzero)
    primitive = TWElement.zero(c.pair)
    used = 0
    for w, part in parts.items():
        bound = max(degree_start, part.t_degree() + 1)
        while True:
            eta = _solve_bounded(part, w, degree, bound)
            if eta is not None:
                break
            if bound >= degree_cap:
                raise PrimitiveSearchExhausted(
                    f'No primitive of t-degree <= {bound} at weight {tuple(w)}.', weight=w, degree_bound=bound)
            bound = min(2 * bound, degree_cap)
        used = max(used, bound)
        primitive = primitive + eta
    return PrimitiveSolution(primitive, [], used)


__all__ = [
    'SimplexForm', 'TWElement', 'PrimitiveSolution', 'ClassBasis', 'whitney_form', 'tw_differential', 'tw_bracket',
    'integrate', 'whitney_lift', 'constant_lift', 'is_closed', 'tw_cohomology_class', 'solve_primitive'
]
