"""Closed-form Hom and Ext calculus on a single rational curve C and on a chain C1 u C2.

On C fix e0, e1 spanning Hom(O_C, O_C(1)). On the chain fix e0, e1 on C1 and f0, f1 on
C2 with e0, f0 vanishing at the node p and e1|p = f1|p = 1. Hom(O_C12, O_C12(a, b)) is
spanned by monomials and composition is pointwise multiplication. Ext^2 carries the
Serre-dual basis in the same order, paired with sign +1.
"""
import logging
from dataclasses import dataclass, field
from math import gcd
from typing import Dict, List, NamedTuple, Optional, Tuple

from sympy.polys.domains import QQ

from ptwalls.algebra import ModelError, QMatrix, WeightVector, kernel_basis, rank, rat, rat_str
from ptwalls.cech_dgla import ClassBasis, HomPair, cup_product, weight_table
from ptwalls.localmodel import resolve_sheaf

logger = logging.getLogger('ptwalls')


class ChainTwist(NamedTuple):
    a: int
    b: Optional[int] = None

    @property
    def is_chain(self):
        return self.b is not None

    def __add__(self, other):
        if self.is_chain != other.is_chain:
            raise ModelError('Cannot mix single-curve and chain twists.')
        return ChainTwist(self.a + other.a, self.b + other.b if self.is_chain else None)

    def __neg__(self):
        return ChainTwist(-self.a, -self.b if self.is_chain else None)

    def __sub__(self, other):
        return self + (-other)


def hom_dimension(a, b=None):
    """dim Hom(O_C12, O_C12(a, b)); with b omitted, dim Hom(O_C, O_C(a))."""
    if b is None:
        return max(a + 1, 0)
    if a >= 0 and b >= 0:
        return a + b + 1
    if a >= 1 and b < 0:
        return a
    if a < 0 and b >= 1:
        return b
    return 0


def _power(name, i, k):
    parts = []
    for var, e in ((f'{name}0', i), (f'{name}1', k - i)):
        if e == 1:
            parts.append(var)
        elif e > 1:
            parts.append(f'{var}^{e}')
    return '*'.join(parts) or '1'


@dataclass(frozen=True)
class HomMonomial():
    """Basis monomial of Hom(O, O(twist)).

    ``e`` is the exponent of e0 on the first curve and ``f`` the exponent of f0 on the
    second; None means the component is zero. Single-curve monomials have ``f`` None.
    """
    twist: ChainTwist
    e: Optional[int]
    f: Optional[int] = None

    def __mul__(self, other):
        if self.twist.is_chain != other.twist.is_chain:
            raise ModelError(f'{self} and {other} live on different curve configurations.')
        twist = self.twist + other.twist
        if not twist.is_chain:
            return HomMonomial(twist, self.e + other.e)
        e = None if self.e is None or other.e is None else self.e + other.e
        f = None if self.f is None or other.f is None else self.f + other.f
        if e is None and f is None:
            return None
        return HomMonomial(twist, e, f)

    @property
    def kind(self):
        if not self.twist.is_chain:
            return 'curve'
        if self.e is not None and self.f is not None:
            return 'glued'
        return 'first' if self.e is not None else 'second'

    def torus_weight(self, n1=None):
        """Weight of the monomial near p: e0 has weight (-1, 0), f0 has weight (n1, 1)."""
        w = WeightVector(-(self.e or 0), 0)
        if self.f:
            if n1 is None:
                raise ModelError('The weight of f0 needs n1.')
            w = w + WeightVector(n1, 1).scale(self.f)
        return w

    def __str__(self):
        a = self.twist.a
        if not self.twist.is_chain:
            return _power('e', self.e, a)
        left = '0' if self.e is None else _power('e', self.e, a)
        right = '0' if self.f is None else _power('f', self.f, self.twist.b)
        return f'{left} + {right}'


class OrderedHomBasis():
    """Monomial basis of Hom(O, O(twist)) in the fixed order.

    Chain order: e0^a, e0^(a-1) e1, ..., e0 e1^(a-1) on C1, then e1^a + f1^b, then
    f0 f1^(b-1), ..., f0^b on C2. Single order: e0^a, ..., e1^a.
    """

    def __init__(self, twist):
        self.twist = twist if isinstance(twist, ChainTwist) else ChainTwist(*twist)
        a, b = self.twist
        if not self.twist.is_chain:
            elements = [HomMonomial(self.twist, i) for i in range(a, -1, -1)]
        else:
            elements = []
            if a >= 1:
                elements.extend(HomMonomial(self.twist, i, None) for i in range(a, 0, -1))
            if a >= 0 and b >= 0:
                elements.append(HomMonomial(self.twist, 0, 0))
            if b >= 1:
                elements.extend(HomMonomial(self.twist, None, j) for j in range(1, b + 1))
        self.elements = elements
        self._index = {m: i for i, m in enumerate(elements)}
        assert len(elements) == hom_dimension(*self.twist)

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __getitem__(self, i):
        return self.elements[i]

    def index(self, monomial):
        if monomial not in self._index:
            raise ModelError(f'{monomial} is not in the basis of Hom(O, O{tuple(self.twist)}).')
        return self._index[monomial]

    def expand(self, monomial) -> List:
        vec = [QQ(0)] * len(self)
        if monomial is not None:
            vec[self.index(monomial)] = QQ(1)
        return vec

    def names(self):
        return [str(m) for m in self.elements]


def compose_basis(x: HomMonomial, y: HomMonomial) -> List:
    """x o y expanded in the ordered basis of the composite twist; zero through the node."""
    product = x * y
    return OrderedHomBasis(x.twist + y.twist).expand(product)


# ----------------------------------------------------------------------------
# Serre-dual classes
# ----------------------------------------------------------------------------


def _canonical_twist(scenario):
    """Degree of omega on the curves, so that Ext^2(O(s), O(t)) = Hom(O(t), O(s + omega))^dual."""
    tag, params = scenario[0], scenario[1:]
    if tag == 'single':
        return ChainTwist(params[0] - 2)
    if tag == 'chain':
        return ChainTwist(params[0] - 2, params[1] - 2)
    raise ModelError(f'No curve configuration for {scenario!r}.')


def _source_twist(scenario):
    return ChainTwist(-1) if scenario[0] == 'single' else ChainTwist(0, -1)


def parse_scenario(text):
    """'single:4' or 'chain:3,3' to ('single', 4) / ('chain', 3, 3)."""
    if isinstance(text, tuple):
        return text
    tag, _, rest = text.partition(':')
    params = tuple(int(p) for p in rest.split(',')) if rest else ()
    if tag == 'single' and len(params) == 1 and params[0] >= 2:
        return (tag, ) + params
    if tag == 'chain' and len(params) == 2 and min(params) >= 2:
        return (tag, ) + params
    raise ModelError(f'Curve calculus needs single:n with n >= 2 or chain:n1,n2 with n1, n2 >= 2, got {text!r}.')


@dataclass
class XiClass():
    """Class in Ext^2(O_C, O_C(-1)) or Ext^2(O_C12, O_C12(0, -1)), in the dual ordered basis."""
    scenario: Tuple
    coeffs: List = field(default_factory=list)

    def __post_init__(self):
        self.scenario = parse_scenario(self.scenario)
        self.coeffs = [rat(c) for c in self.coeffs]
        if len(self.coeffs) != len(self.dual_basis):
            raise ModelError(f'{self.scenario} needs {len(self.dual_basis)} coefficients, got {len(self.coeffs)}.')

    @property
    def dual_basis(self) -> OrderedHomBasis:
        return OrderedHomBasis(_canonical_twist(self.scenario) - _source_twist(self.scenario))

    @classmethod
    def single(cls, n, a: Dict[Tuple[int, int], object]):
        """Coefficients a_{i,j} of (e0^i e1^j)^dual with i + j = n - 1."""
        coeffs = [a.get((i, n - 1 - i), 0) for i in range(n - 1, -1, -1)]
        return cls(('single', n), coeffs)

    @classmethod
    def chain(cls, n1, n2, a=None, b=0, c=None):
        """a[i] for (e0^i e1^(n1-2-i) + 0)^dual, b for the glued element, c[j] for (0 + f0^j f1^(n2-1-j))^dual."""
        a, c = a or {}, c or {}
        coeffs = [a.get(i, 0) for i in range(n1 - 2, 0, -1)] + [b] + [c.get(j, 0) for j in range(1, n2)]
        return cls(('chain', n1, n2), coeffs)

    @classmethod
    def dual(cls, scenario, index):
        scenario = parse_scenario(scenario)
        out = cls(scenario, [0] * len(OrderedHomBasis(_canonical_twist(scenario) - _source_twist(scenario))))
        out.coeffs[index] = QQ(1)
        return out

    def __call__(self, monomial: Optional[HomMonomial]):
        if monomial is None:
            return QQ(0)
        return self.coeffs[self.dual_basis.index(monomial)]

    def scale(self, k):
        return XiClass(self.scenario, [rat(k) * c for c in self.coeffs])

    def is_zero(self):
        return not any(self.coeffs)

    def a(self, i):
        if self.scenario[0] == 'single':
            return self.coeffs[self.scenario[1] - 1 - i]
        return self.coeffs[self.scenario[1] - 2 - i]

    def b(self):
        return self.coeffs[self.scenario[1] - 2]

    def c(self, j):
        return self.coeffs[self.scenario[1] - 2 + j]

    def to_dict(self):
        return {
            'scenario': ':'.join([self.scenario[0], ','.join(map(str, self.scenario[1:]))]),
            'basis': [f'({name})^dual' for name in self.dual_basis.names()],
            'coefficients': [rat_str(c) for c in self.coeffs],
        }


def serre_pairing_matrix(scenario) -> QMatrix:
    """Pairing of the declared dual basis against the ordered Hom basis."""
    scenario = parse_scenario(scenario)
    basis = OrderedHomBasis(_canonical_twist(scenario) - _source_twist(scenario))
    rows = [[XiClass.dual(scenario, i)(m) for m in basis] for i in range(len(basis))]
    return QMatrix.from_rows(rows)


def xi_composition_matrix(xi: XiClass) -> QMatrix:
    """Matrix of xi o - : Hom(O(-1), O) -> Ext^2(O(-1), O(-1)), rows in the dual ordered basis.

    (xi o x)(m) = xi(x m), with m running over the basis dual to the codomain.
    """
    domain = OrderedHomBasis(-_source_twist(xi.scenario))
    codomain = OrderedHomBasis(xi.dual_basis.twist - domain.twist)
    rows = [[xi(x * m) for x in domain] for m in codomain]
    entries = {(i, j): v for i, row in enumerate(rows) for j, v in enumerate(row) if v}
    return QMatrix(len(codomain), len(domain), entries)


def _primitive_pair(u, v):
    """Projective point (u:v) as coprime integers with the first nonzero entry positive."""
    u, v = rat(u), rat(v)
    den = u.denominator * v.denominator
    p, q = int((u * den).numerator), int((v * den).numerator)
    g = gcd(p, q)
    p, q = p // g, q // g
    if p < 0 or (p == 0 and q < 0):
        p, q = -p, -q
    return p, q


@dataclass
class RankStratum():
    label: str
    rank: int
    params: Optional[Tuple[int, int]] = None
    scale: Optional[object] = None

    def same_point(self, u, v):
        """Whether (u:v) is the stratum's parameter point."""
        if self.params is None:
            return False
        return rat(u) * self.params[1] == rat(v) * self.params[0]

    def to_dict(self):
        out = {'label': self.label, 'rank': self.rank}
        if self.params is not None:
            out['params'] = list(self.params)
            out['scale'] = rat_str(self.scale)
        return out


def _scale_against(coeffs, pattern):
    """lambda with coeffs == lambda * pattern, or None."""
    lam = None
    for c, p in zip(coeffs, pattern):
        if p:
            lam = c / p
            break
    if lam is None or any(c != lam * p for c, p in zip(coeffs, pattern)):
        return None
    return lam


def rank_stratify(xi: XiClass) -> RankStratum:
    """Classify xi by the rank of xi o -, recovering the rational normal curve parameters."""
    matrix = xi_composition_matrix(xi)
    r = rank(matrix)
    if r == 0:
        return RankStratum('zero', 0)
    if r == 2:
        return RankStratum('generic', 2)
    (kernel, ) = kernel_basis(matrix)
    x0, x1 = kernel[0, 0], kernel[1, 0]
    if xi.scenario[0] == 'single':
        n = xi.scenario[1]
        # kernel spanned by b1 e0 - b0 e1
        b0, b1 = _primitive_pair(-x1, x0)
        pattern = [QQ(b0)**i * QQ(b1)**(n - 1 - i) for i in range(n - 1, -1, -1)]
        scale = _scale_against(xi.coeffs, pattern)
        if scale is None:
            raise ModelError(f'Rank one class {xi.coeffs} is not on the rational normal curve.')
        return RankStratum('rational-normal-locus', 1, (b0, b1), scale)
    n1, n2 = xi.scenario[1:]
    if not any(xi.c(j) for j in range(1, n2)):
        return RankStratum('exceptional-locus', 1)
    # kernel spanned by mu (1 + f1) - lambda (0 + f0)
    lam, mu = _primitive_pair(-x1, x0)
    pattern = [QQ(0)] * (n1 - 2) + [QQ(lam)**(n2 - 1 - j) * QQ(mu)**j for j in range(0, n2)]
    scale = _scale_against(xi.coeffs, pattern)
    if scale is None:
        raise ModelError(f'Rank one class {xi.coeffs} is not on the rational normal curve.')
    return RankStratum('rational-normal-locus', 1, (lam, mu), scale)


def glued_locus_kernel(b0, b1, n) -> XiClass:
    """The class killed by phi = b1 e0 - b0 e1, normalized to a_{i,j} = b0^i b1^j."""
    b0, b1 = rat(b0), rat(b1)
    if not b0 and not b1:
        raise ModelError('(b0, b1) must be nonzero.')
    phi = {HomMonomial(ChainTwist(1), 1): b1, HomMonomial(ChainTwist(1), 0): -b0}
    target = OrderedHomBasis(ChainTwist(n - 1))
    rows = []
    for m in OrderedHomBasis(ChainTwist(n - 2)):
        row = [QQ(0)] * len(target)
        for x, c in phi.items():
            row[target.index(x * m)] += c
        rows.append(row)
    matrix = QMatrix(len(rows), len(target), {(i, j): v for i, row in enumerate(rows) for j, v in enumerate(row) if v})
    (kernel, ) = kernel_basis(matrix)
    coeffs = [kernel[i, 0] for i in range(len(target))]
    pattern = [b0**i * b1**(n - 1 - i) for i in range(n - 1, -1, -1)]
    scale = _scale_against(coeffs, pattern)
    return XiClass(('single', n), [c / scale for c in coeffs])


def ext1_long_sequence_dims(xi: XiClass) -> Dict[str, int]:
    """dim Ext^1(E, E) = (dim Ext^2 - 1) + dim K with K the kernel of xi o -."""
    if xi.is_zero():
        raise ModelError('The long exact sequence needs a nonzero extension class.')
    r = rank(xi_composition_matrix(xi))
    ext2 = len(xi.dual_basis)
    kernel = 2 - r
    return {'ext2': ext2, 'rank': r, 'kernel': kernel, 'ext1': ext2 - 1 + kernel}


# ----------------------------------------------------------------------------
# agreement with the Cech model
# ----------------------------------------------------------------------------


class CechHomIdentification():
    """Matches closed-form Hom bases with degree-0 Cech classes on a local model.

    Each basis monomial spans its own torus weight, so a monomial is identified with the
    class at its weight after a translation (and possibly a sign) of the weight set.
    Complexes and weight tables are built once per twist.
    """

    def __init__(self, model, window=None, max_margin=64):
        self.model = model
        self.window = window
        self.max_margin = max_margin
        self._complexes = {}
        self._tables = {}
        self._identified = {}

    def twist(self, a, b=None):
        return ChainTwist(a, b if self.model.tag == 'chain' else None)

    @property
    def origin(self):
        return self.twist(0, 0)

    def complex(self, twist: ChainTwist):
        if twist not in self._complexes:
            name = f'O_C({twist.a})' if self.model.tag == 'single' else f'O_C12({twist.a},{twist.b})'
            self._complexes[twist] = resolve_sheaf(name, self.model)
        return self._complexes[twist]

    def pair(self, source: ChainTwist, target: ChainTwist) -> HomPair:
        return HomPair(self.complex(source), self.complex(target))

    def weights(self, source: ChainTwist, target: ChainTwist) -> Dict:
        """{weight: dim} of degree-0 classes of Hom(O(source), O(target))."""
        key = (source, target)
        if key not in self._tables:
            table, _ = weight_table(self.complex(source), self.complex(target), self.window, [0], self.max_margin)
            self._tables[key] = {w: d for (_, w), d in table.items()}
        return self._tables[key]

    def hom_dimension(self, a, b=None):
        return sum(self.weights(self.origin, self.twist(a, b)).values())

    def agrees(self, a, b=None):
        return self.hom_dimension(a, b) == hom_dimension(*self.twist(a, b))

    def table(self, lo, hi):
        """{twist: (closed form, Cech)} over [lo, hi] (single) or [lo, hi]^2 (chain)."""
        if self.model.tag == 'single':
            twists = [self.twist(a) for a in range(lo, hi + 1)]
        else:
            twists = [self.twist(a, b) for a in range(lo, hi + 1) for b in range(lo, hi + 1)]
        return {t: (hom_dimension(*t), self.hom_dimension(*t)) for t in twists}

    def identify(self, source: ChainTwist, target: ChainTwist) -> Dict[HomMonomial, WeightVector]:
        """Monomial of Hom(O(source), O(target)) to the weight of its Cech class."""
        key = (source, target)
        if key in self._identified:
            return self._identified[key]
        basis = OrderedHomBasis(target - source)
        closed = [m.torus_weight(self.model.params[0]) for m in basis]
        cech = self.weights(source, target)
        if any(d != 1 for d in cech.values()) or len(cech) != len(closed):
            raise ModelError(f'Cech classes of Hom(O{tuple(source)}, O{tuple(target)}) are not one per weight.')
        out = {}
        if closed:
            targets = set(cech)
            for sign, w in [(s, w) for s in (1, -1) for w in sorted(targets)]:
                shift = w - closed[0].scale(sign)
                if {c.scale(sign) + shift for c in closed} == targets:
                    out = {m: c.scale(sign) + shift for m, c in zip(basis, closed)}
                    break
            else:
                raise ModelError(f'Cech weights {sorted(targets)} do not match the monomial weights.')
        self._identified[key] = out
        return out

    def compose_agrees(self, x: HomMonomial, y: HomMonomial) -> bool:
        """Whether the Cech product of the classes of x and y vanishes exactly when x y does,
        and otherwise is the class at the weight of x y."""
        s0 = self.origin
        s1 = s0 + y.twist
        s2 = s1 + x.twist
        rep_y = ClassBasis(self.pair(s0, s1), 0).representative(self.identify(s0, s1)[y], 0)
        rep_x = ClassBasis(self.pair(s1, s2), 0).representative(self.identify(s1, s2)[x], 0)
        coords = ClassBasis(self.pair(s0, s2), 0).coordinates(cup_product(rep_x, rep_y))
        expected = x * y
        if expected is None:
            return not coords
        return set(coords) == {(self.identify(s0, s2)[expected], 0)}


__all__ = [
    'ChainTwist', 'hom_dimension', 'HomMonomial', 'OrderedHomBasis', 'compose_basis', 'XiClass', 'parse_scenario',
    'serre_pairing_matrix', 'xi_composition_matrix', 'RankStratum', 'rank_stratify', 'glued_locus_kernel',
    'ext1_long_sequence_dims', 'CechHomIdentification'
]
