"""Numerical classes, central charges and wall-and-chamber structure on the epsilon slice.

The slice is omega = f*eta + sum eps_i C_i with f*eta . C_i = 0. Classes carry
ch_1 as coordinates on (C_1, ..., C_r, f*eta).
"""
import functools
import itertools
import logging
import re
from dataclasses import dataclass, field
from math import gcd
from typing import Dict, List, Tuple

import sympy
from sympy.polys.domains import QQ

from ptwalls.algebra import (DegenerateArrangementError, ModelError, QMatrix, UnsupportedChamberError, rat, rat_str,
                             solve_linear)

logger = logging.getLogger('ptwalls')


@dataclass(frozen=True)
class IntersectionDatum():
    """Gram matrix of the contracted curves with the beta and polarization pairings."""
    gram: Tuple[Tuple[int, ...], ...]
    beta: Tuple
    eta_square: object = QQ(1)
    beta_eta: object = QQ(0)
    names: Tuple[str, ...] = ()
    tag: str = ''

    def __post_init__(self):
        r = len(self.gram)
        if any(len(row) != r for row in self.gram):
            raise ModelError('Gram matrix must be square.')
        if any(self.gram[i][j] != self.gram[j][i] for i in range(r) for j in range(r)):
            raise ModelError('Gram matrix must be symmetric.')
        if not sympy.Matrix(self.gram).applyfunc(lambda v: -v).is_positive_definite:
            raise ModelError(f'Gram matrix {self.gram} is not negative definite.')
        if len(self.beta) != r:
            raise ModelError(f'beta needs {r} pairings, got {len(self.beta)}.')
        object.__setattr__(self, 'beta', tuple(rat(b) for b in self.beta))
        object.__setattr__(self, 'eta_square', rat(self.eta_square))
        object.__setattr__(self, 'beta_eta', rat(self.beta_eta))
        if self.eta_square <= 0:
            raise ModelError('The polarization must have positive self-intersection.')
        if not self.names:
            object.__setattr__(self, 'names', tuple(f'C{i + 1}' for i in range(r)))

    @property
    def r(self):
        return len(self.gram)

    @classmethod
    def single(cls, n, beta=None):
        return cls.from_gram('single', ((-n, ), ), (n, ), beta, names=('C', ))

    @classmethod
    def disjoint(cls, ns, beta=None):
        gram = tuple(tuple(-n if i == j else 0 for j in range(len(ns))) for i, n in enumerate(ns))
        return cls.from_gram('disjoint', gram, tuple(ns), beta)

    @classmethod
    def chain(cls, n1, n2, beta=None):
        return cls.from_gram('chain', ((-n1, 1), (1, -n2)), (n1, n2), beta)

    @classmethod
    def from_gram(cls, tag, gram, ns, beta=None, names=()):
        """beta is given by its pairings with the curves.

        The default puts beta . C_i - n_i/2 at -1/2, or at -3/4 on a chain so that the pair also
        satisfies beta . (C_1 + C_2) - (n_1 + n_2)/2 < -1.
        """
        if beta is None:
            offset = QQ(-3, 4) if tag == 'chain' else QQ(-1, 2)
            beta = tuple(QQ(n, 2) + offset for n in ns)
        return cls(tuple(tuple(row) for row in gram), tuple(beta), names=tuple(names), tag=tag)

    def dot(self, u, v):
        """Intersection of two ch_1 coordinate vectors."""
        r = self.r
        total = sum((rat(u[i]) * rat(v[j]) * self.gram[i][j] for i in range(r) for j in range(r)), QQ(0))
        return total + rat(u[r]) * rat(v[r]) * self.eta_square

    def beta_class(self):
        """beta written on (C_1, ..., C_r, f*eta)."""
        r = self.r
        mat = QMatrix.from_rows([[QQ(v) for v in row] for row in self.gram])
        coeffs = solve_linear(mat, list(self.beta))
        return tuple(coeffs) + (self.beta_eta / self.eta_square, )

    def beta_dot(self, ch1):
        return self.dot(self.beta_class(), ch1)

    def beta_square(self):
        b = self.beta_class()
        return self.dot(b, b)

    def curve(self, i, coeff=1):
        return tuple(QQ(coeff) if j == i else QQ(0) for j in range(self.r + 1))

    def to_dict(self):
        return {
            'tag': self.tag,
            'gram': [list(row) for row in self.gram],
            'beta': [rat_str(b) for b in self.beta],
            'eta_square': rat_str(self.eta_square),
            'beta_eta': rat_str(self.beta_eta),
        }


@dataclass(frozen=True)
class NumClass():
    ch0: object
    ch1: Tuple
    ch2: object

    def __post_init__(self):
        object.__setattr__(self, 'ch0', rat(self.ch0))
        object.__setattr__(self, 'ch1', tuple(rat(c) for c in self.ch1))
        object.__setattr__(self, 'ch2', rat(self.ch2))

    def __add__(self, other):
        return NumClass(self.ch0 + other.ch0, tuple(a + b for a, b in zip(self.ch1, other.ch1)), self.ch2 + other.ch2)

    def __neg__(self):
        return NumClass(-self.ch0, tuple(-a for a in self.ch1), -self.ch2)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, k):
        k = rat(k)
        return NumClass(k * self.ch0, tuple(k * a for a in self.ch1), k * self.ch2)

    @classmethod
    def point(cls, datum):
        return cls(0, (0, ) * (datum.r + 1), 1)

    def to_dict(self):
        return {'ch0': rat_str(self.ch0), 'ch1': [rat_str(c) for c in self.ch1], 'ch2': rat_str(self.ch2)}


def ch_beta(v: NumClass, datum: IntersectionDatum, scale=1) -> NumClass:
    """ch . exp(-scale * beta)."""
    s = rat(scale)
    b = tuple(s * c for c in datum.beta_class())
    ch1 = tuple(x - v.ch0 * y for x, y in zip(v.ch1, b))
    ch2 = v.ch2 - datum.dot(b, v.ch1) + datum.dot(b, b) * v.ch0 / 2
    return NumClass(v.ch0, ch1, ch2)


_OBJECT_RE = re.compile(r'^(?P<base>O_C\d*|pt|point)(\((?P<args>[-0-9, ]*)\))?(\[(?P<shift>-?\d+)\])?$')


def ch_of_curve_object(name: str, datum: IntersectionDatum) -> NumClass:
    """ch(O_C(k)) = (0, C, k - C^2/2) for a curve or chain of curves C; [m] multiplies by (-1)^m.

    ``O_C`` is the single curve, ``O_Ci`` the i-th curve and ``O_C12`` the chain C_1 + C_2
    with one twist per component. Sums are written with ' + '.
    """
    if ' + ' in name:
        return functools.reduce(lambda x, y: x + y, (ch_of_curve_object(p, datum) for p in name.split(' + ')))
    match = _OBJECT_RE.match(name.replace(' ', ''))
    if match is None:
        raise ModelError(f'Cannot parse curve object {name!r}.')
    base = match.group('base')
    args = match.group('args')
    twists = [int(a) for a in args.split(',')] if args else []
    shift = int(match.group('shift') or 0)
    if base in ('pt', 'point'):
        out = NumClass.point(datum)
    else:
        label = base[3:]
        if label == '':
            curves = [0]
        elif all(ch.isdigit() for ch in label):
            curves = [int(ch) - 1 for ch in label]
        else:
            raise ModelError(f'Unknown curve in {name!r}.')
        if any(not 0 <= i < datum.r for i in curves):
            raise ModelError(f'{name!r} names a curve outside 1..{datum.r}.')
        twists = twists or [0] * len(curves)
        if len(twists) != len(curves):
            raise ModelError(f'{name!r} needs {len(curves)} twists.')
        ch1 = tuple(QQ(1) if j in curves else QQ(0) for j in range(datum.r)) + (QQ(0), )
        out = NumClass(0, ch1, QQ(sum(twists)) - datum.dot(ch1, ch1) / 2)
    return out.scale(-1) if shift % 2 else out


def slice_symbols(r):
    return sympy.symbols(f'eps1:{r + 1}') if r > 1 else (sympy.Symbol('eps'), )


def _sym(q):
    return QQ.to_sympy(rat(q))


def central_charge(v: NumClass, datum: IntersectionDatum, eps=None):
    """(Re Z, Im Z) with Z = -ch_2^beta + omega^2/2 ch_0 + i omega . ch_1^beta, polynomials in eps."""
    eps = eps or slice_symbols(datum.r)
    tw = ch_beta(v, datum)
    r = datum.r
    # omega . C_j = sum_i eps_i C_i . C_j
    omega_c = [sum(eps[i] * datum.gram[i][j] for i in range(r)) for j in range(r)]
    omega_sq = sum(eps[i] * omega_c[i] for i in range(r)) + _sym(datum.eta_square)
    im = sum(_sym(tw.ch1[j]) * omega_c[j] for j in range(r)) + _sym(tw.ch1[r] * datum.eta_square)
    re = -_sym(tw.ch2) + omega_sq / 2 * _sym(tw.ch0)
    return sympy.expand(re), sympy.expand(im)


def _primitive_form(expr, eps):
    poly = sympy.Poly(expr, *eps)
    if poly.is_zero:
        raise DegenerateArrangementError('The wall locus vanishes identically on the slice.')
    if poly.total_degree() != 1 or poly.coeff_monomial(1) != 0:
        raise DegenerateArrangementError(f'The wall locus {expr} is not a line through the origin.')
    coeffs = [sympy.Rational(poly.coeff_monomial(e)) for e in eps]
    den = functools.reduce(sympy.ilcm, [c.q for c in coeffs], 1)
    ints = [int(c * den) for c in coeffs]
    g = functools.reduce(gcd, [abs(c) for c in ints if c])
    return tuple(c // g for c in ints)


def wall_locus(u: NumClass, v: NumClass, datum: IntersectionDatum, eps=None) -> Tuple[int, ...]:
    """Re Z(v) Im Z(u) - Re Z(u) Im Z(v) on the slice, as primitive integer coefficients of eps."""
    eps = eps or slice_symbols(datum.r)
    re_u, im_u = central_charge(u, datum, eps)
    re_v, im_v = central_charge(v, datum, eps)
    return _primitive_form(sympy.expand(re_v * im_u - re_u * im_v), eps)


def format_form(form, names=None):
    names = names or ([f'eps{i + 1}' for i in range(len(form))] if len(form) > 1 else ['eps'])
    parts = []
    for c, name in zip(form, names):
        if not c:
            continue
        mag = '' if abs(c) == 1 else f'{abs(c)}*'
        parts.append(('-' if c < 0 else '+') + mag + name)
    text = ''.join(parts)
    return (text[1:] if text.startswith('+') else text) + ' = 0'


def _evaluate(form, point):
    return sum(c * rat(x) for c, x in zip(form, point))


def _sign(x):
    return 1 if x > 0 else (-1 if x < 0 else 0)


@dataclass
class Wall():
    label: str
    form: Tuple[int, ...]
    destabilizer: str
    quotient: str
    polystable: List[str] = field(default_factory=list)

    def to_dict(self):
        return {
            'label': self.label,
            'form': list(self.form),
            'equation': format_form(self.form),
            'destabilizer': self.destabilizer,
            'quotient': self.quotient,
            'polystable': list(self.polystable),
        }


@dataclass
class Chamber():
    label: str
    signs: Tuple[int, ...]
    point: Tuple
    geometric: bool = False

    def to_dict(self):
        return {
            'label': self.label,
            'signs': list(self.signs),
            'point': [rat_str(x) for x in self.point],
            'geometric': self.geometric,
        }


@dataclass
class WallArrangement():
    datum: IntersectionDatum
    walls: List[Wall]
    chambers: List[Chamber] = field(default_factory=list)

    @property
    def dimension(self):
        return self.datum.r

    def chamber(self, label) -> Chamber:
        for c in self.chambers:
            if c.label == label:
                return c
        raise UnsupportedChamberError(f'No chamber labelled {label!r}.')

    def separating(self, a: Chamber, b: Chamber):
        return [w.label for w, s, t in zip(self.walls, a.signs, b.signs) if s != t]

    def to_dict(self):
        return {
            'datum': self.datum.to_dict(),
            'walls': [w.to_dict() for w in self.walls],
            'chambers': [c.to_dict() for c in self.chambers],
            'transversality': transversality(self),
        }


def ample_forms(datum: IntersectionDatum):
    """omega . C_i as coefficient vectors in eps: omega is ample on the slice iff all are positive."""
    return [tuple(datum.gram[i][j] for i in range(datum.r)) for j in range(datum.r)]


def twist_offsets(datum: IntersectionDatum):
    """k_i with k_i - 1 < beta . C_i + C_i^2 / 2 < k_i."""
    out = []
    for i in range(datum.r):
        x = datum.beta[i] + QQ(datum.gram[i][i], 2)
        if x.denominator == 1:
            raise ModelError(f'beta . C_{i + 1} + C_{i + 1}^2/2 = {rat_str(x)} sits on an integer boundary.')
        out.append(int(sympy.floor(QQ.to_sympy(x))) + 1)
    return out


def beta_violations(datum: IntersectionDatum) -> List[str]:
    """Conditions on beta the wall picture needs that the datum breaks.

    Each curve needs -1 < beta . C_i - n_i/2 < 0; a chain also needs
    beta . (C_1 + C_2) - (n_1 + n_2)/2 < -1.
    """
    offsets = [datum.beta[i] + QQ(datum.gram[i][i], 2) for i in range(datum.r)]
    out = []
    for i, x in enumerate(offsets):
        if not -1 < x < 0:
            out.append(f'beta . C{i + 1} - n{i + 1}/2 = {rat_str(x)} is not in (-1, 0)')
    if datum.tag == 'chain' and not sum(offsets) < -1:
        out.append(f'beta . (C1 + C2) - (n1 + n2)/2 = {rat_str(sum(offsets))} is not below -1')
    return out


def check_beta(datum: IntersectionDatum):
    violations = beta_violations(datum)
    if violations:
        raise ModelError(f'beta {[rat_str(b) for b in datum.beta]} is not admissible: {"; ".join(violations)}.')


def build_arrangement(datum: IntersectionDatum) -> WallArrangement:
    """Walls of [pt]-destabilizing curve objects for the datum's configuration, with chambers.

    The destabilizing pair on the curve C_i is O_Ci and O_Ci(-1)[1], which needs an admissible beta.
    """
    check_beta(datum)
    pt = NumClass.point(datum)
    walls = []
    if datum.tag in ('single', 'disjoint'):
        for i in range(datum.r):
            sub = 'O_C' if datum.tag == 'single' else f'O_C{i + 1}'
            quot = f'{sub}(-1)[1]'
            form = wall_locus(ch_of_curve_object(sub, datum), pt, datum)
            label = 'W' if datum.tag == 'single' else f'W{i + 1}'
            walls.append(Wall(label, form, sub, quot, [sub, quot]))
    elif datum.tag == 'chain':
        for label, sub, quot in (('W1', 'O_C1(-1)[1]', 'O_C1'), ('W2', 'O_C2(-1)[1]', 'O_C2'),
                                 ('W12', 'O_C12', 'O_C1(-1)[1] + O_C2(-1)[1]')):
            form = wall_locus(ch_of_curve_object(sub, datum), pt, datum)
            walls.append(Wall(label, form, sub, quot))
        walls[0].polystable = ['O_C1', 'O_C1(-1)[1]']
        walls[1].polystable = ['O_C2', 'O_C2(-1)[1]']
        walls[2].polystable = ['O_C12', 'O_C1(-1)[1]', 'O_C2(-1)[1]']
    else:
        raise DegenerateArrangementError(f'No wall configuration for {datum.tag!r}.')
    arrangement = WallArrangement(datum, walls)
    arrangement.chambers = enumerate_chambers(arrangement)
    logger.debug(f'{len(walls)} walls, {len(arrangement.chambers)} chambers.')
    return arrangement


def _half(v):
    return 0 if (v[1] > 0 or (v[1] == 0 and v[0] > 0)) else 1


def _angle_cmp(a, b):
    ha, hb = _half(a), _half(b)
    if ha != hb:
        return ha - hb
    cross = a[0] * b[1] - a[1] * b[0]
    return -1 if cross > 0 else (1 if cross < 0 else 0)


def _planar_chambers(forms):
    directions = []
    for a, b in forms:
        directions.extend([(-b, a), (b, -a)])
    directions.sort(key=functools.cmp_to_key(_angle_cmp))
    points = []
    for i, d in enumerate(directions):
        e = directions[(i + 1) % len(directions)]
        points.append((QQ(d[0] + e[0]), QQ(d[1] + e[1])))
    return points


def enumerate_chambers(arrangement: WallArrangement) -> List[Chamber]:
    """Sign-vector cells of the complement, labelled from the geometric chamber.

    Coordinate hyperplanes give 2^r chambers labelled by the set of walls separating
    them from the geometric one; three lines in the plane give six chambers labelled
    C1..C6 counterclockwise or clockwise so that W1 separates C1 from C2.
    """
    walls = arrangement.walls
    r = arrangement.dimension
    forms = [w.form for w in walls]
    for a, b in itertools.combinations(forms, 2):
        if all(a[i] * b[j] == a[j] * b[i] for i in range(r) for j in range(r)):
            raise DegenerateArrangementError(f'Walls {a} and {b} coincide.')
    amples = ample_forms(arrangement.datum)
    coordinate = all(sum(1 for c in f if c) == 1 for f in forms) and len(forms) == r
    if coordinate:
        points = [tuple(QQ(s) for s in signs) for signs in itertools.product((-1, 1), repeat=r)]
    elif r == 2:
        points = _planar_chambers(forms)
    else:
        raise DegenerateArrangementError(f'Cannot enumerate chambers of {len(forms)} walls in dimension {r}.')
    cells = []
    for p in points:
        signs = tuple(_sign(_evaluate(f, p)) for f in forms)
        geometric = all(_evaluate(a, p) > 0 for a in amples)
        cells.append(Chamber('', signs, p, geometric))
    geo = [c for c in cells if c.geometric]
    if len(geo) != 1:
        raise DegenerateArrangementError('The ample cone does not sit inside a single chamber.')
    geo = geo[0]
    if coordinate:
        for c in cells:
            moved = [i + 1 for i, (s, t) in enumerate(zip(c.signs, geo.signs)) if s != t]
            c.label = '{' + ','.join(map(str, moved)) + '}'
        cells.sort(key=lambda c: (len(c.label), c.label))
        return cells
    start = cells.index(geo)
    ordered = cells[start:] + cells[:start]
    first = [w.label for w, s, t in zip(walls, ordered[0].signs, ordered[1].signs) if s != t]
    if first != [walls[0].label]:
        ordered = [ordered[0]] + ordered[1:][::-1]
    for i, c in enumerate(ordered):
        c.label = f'C{i + 1}'
    return ordered


def transversality(arrangement: WallArrangement) -> Dict[str, bool]:
    forms = [sympy.Matrix([f]) for f in (w.form for w in arrangement.walls)]
    pairwise = all(sympy.Matrix.vstack(a, b).rank() == 2 for a, b in itertools.combinations(forms, 2))
    normal = sympy.Matrix.vstack(*forms).rank() == len(forms) if forms else True
    return {'pairwise_transversal': pairwise, 'normal_crossing': normal}


def _component(name, kind, dimension):
    return {'name': name, 'kind': kind, 'dimension': dimension}


def _projective(n):
    return _component(f'P^{n}', 'projective space', n)


def _single_components(n, curve='C'):
    if n == 1:
        return [_component('T', 'surface', 2)], []
    if n == 2:
        return [_component('S', 'surface', 2)], []
    glue = [{'from': f'{curve} in S', 'to': f'rational normal curve in P^{n - 1}'}]
    return [_component('S', 'surface', 2), _projective(n - 1)], glue


def component_report(label, arrangement: WallArrangement) -> Dict:
    """Irreducible components and gluing of the moduli space of [pt] in a chamber."""
    datum = arrangement.datum
    chamber = arrangement.chamber(label)
    ns = [-datum.gram[i][i] for i in range(datum.r)]
    if datum.tag in ('single', 'disjoint'):
        moved = [i for i, (s, t) in enumerate(zip(chamber.signs, _geometric(arrangement).signs)) if s != t]
        if datum.tag == 'single':
            components, gluing = _single_components(ns[0]) if moved else ([_component('S', 'surface', 2)], [])
        else:
            components, gluing = [_component('S', 'surface', 2)], []
            for i in moved:
                if ns[i] < 3:
                    raise UnsupportedChamberError(f'Component report for C{i + 1} needs n >= 3, got {ns[i]}.')
                components.append(_projective(ns[i] - 1))
                gluing.append({'from': f'C{i + 1} in S', 'to': f'rational normal curve in P^{ns[i] - 1}'})
    else:
        n1, n2 = ns
        if label == 'C4':
            raise UnsupportedChamberError('The moduli space for chamber C4 is not described.')
        index = int(label[1:])
        first, second, a, b = (1, 2, n1, n2) if index <= 3 else (2, 1, n2, n1)
        depth = index if index <= 3 else 8 - index
        if depth == 1:
            components, gluing = [_component('S', 'surface', 2)], []
        elif depth == 2:
            components, gluing = _single_components(a, f'C{first}')
        else:
            big = n1 + n2 - 3
            components = [_component('S', 'surface', 2), _component(f'Bl_pt P^{a - 1}', 'blow-up', a - 1),
                          _projective(big)]
            gluing = [
                {'from': f'exceptional divisor of Bl_pt P^{a - 1}', 'to': f'linear P^{a - 2} in P^{big}'},
                {'from': f'C{second} in S', 'to': f'rational normal curve in a complementary P^{b - 1} in P^{big}'},
                {'from': f'C{first} in S',
                 'to': f'strict transform of a rational normal curve in P^{a - 1} through the blown-up point'},
            ]
    walls = []
    for w in arrangement.walls:
        entry = {'wall': w.label, 'polystable': list(w.polystable)}
        if datum.tag in ('single', 'disjoint'):
            i = 0 if datum.tag == 'single' else int(w.label[1:]) - 1
            entry['good_moduli'] = f'1/{ns[i]}(1,1)'
        walls.append(entry)
    return {'chamber': label, 'components': components, 'gluing': gluing, 'walls': walls}


def _geometric(arrangement):
    return next(c for c in arrangement.chambers if c.geometric)


__all__ = [
    'IntersectionDatum', 'NumClass', 'ch_beta', 'ch_of_curve_object', 'central_charge', 'wall_locus', 'format_form',
    'Wall', 'Chamber', 'WallArrangement', 'ample_forms', 'twist_offsets', 'beta_violations', 'check_beta',
    'build_arrangement', 'enumerate_chambers', 'transversality', 'component_report', 'slice_symbols'
]
