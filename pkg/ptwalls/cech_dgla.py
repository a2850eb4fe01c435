"""Cech cochains of Hom complexes and their per-weight cohomology.

A cochain entry is addressed by a slot ``(I, s, t, b, a)``: the overlap I
(an increasing tuple of chart indices, level p = len(I) - 1), the source
degree s, the target degree t, the target summand b of F^t and the source
summand a of E^s. The value is the global coefficient G, a torus Laurent
polynomial written in the frame of chart min(I). Internal degree is t - s and
total degree is p + t - s.

Everything is torus-equivariant: the entry chi^g in slot (s, t, b, a) has
weight g + theta_a - theta_b. Cohomology is computed weight by weight on a
finite window of weights.
"""
import itertools
import logging
import random
import sys
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from sympy.polys.domains import QQ
from tqdm import tqdm

from ptwalls.algebra import (TORUS, LaurentElement, QMatrix, RowReducer, ShapeMismatchError, WeightVector,
                             WindowTooSmallError, chi, kernel_basis, rank, rat, solve_linear)

logger = logging.getLogger('ptwalls')


class HomPair():
    """Source and target complexes of a Hom complex on a common cover."""

    def __init__(self, source, target):
        if source.model is not target.model:
            raise ShapeMismatchError('Hom complex between complexes on different models.')
        self.source = source
        self.target = target
        self.model = source.model
        self.cover_size = source.model.cover_size
        self._slots = {}
        self._templates = {}

    def __eq__(self, other):
        return isinstance(other, HomPair) and self.source is other.source and self.target is other.target

    def __hash__(self):
        return hash((id(self.source), id(self.target)))

    def internal_degrees(self):
        degs = {t - s for s in self.source.degrees for t in self.target.degrees}
        return sorted(degs)

    def hom_slots(self, degree):
        """(s, t, b, a) for the internal degree t - s = degree."""
        out = []
        for s in self.source.degrees:
            t = s + degree
            if t not in self.target.terms:
                continue
            for b in range(self.target.rank(t)):
                for a in range(self.source.rank(s)):
                    out.append((s, t, b, a))
        return out

    def slots(self, total_degree):
        """All slots (I, s, t, b, a) of the given total degree."""
        if total_degree not in self._slots:
            out = []
            for p in range(self.cover_size):
                for overlap in self.model.overlaps(p):
                    for s, t, b, a in self.hom_slots(total_degree - p):
                        out.append((overlap, s, t, b, a))
            self._slots[total_degree] = out
        return self._slots[total_degree]

    def offset(self, slot):
        """theta_a - theta_b; the weight of chi^g in the slot is g + offset."""
        _, s, t, b, a = slot
        return self.source.terms[s].summands[a].offset - self.target.terms[t].summands[b].offset

    def local_shift(self, slot):
        """m_i(source summand) - m_i(target summand) on the chart i = min(I)."""
        overlap, s, t, b, a = slot
        i = overlap[0]
        return self.source.terms[s].summands[a].bundle.generators[i] - \
            self.target.terms[t].summands[b].bundle.generators[i]

    def exponent_at(self, slot, weight):
        return WeightVector(*weight) - self.offset(slot)

    def is_valid(self, slot, weight):
        """Whether chi^g with the given weight is a section of Hom on U_I."""
        local = self.exponent_at(slot, weight) + self.local_shift(slot)
        return self.model.in_overlap_ring(slot[0], local)

    def unit(self, slot, weight, coeff=1):
        return CechHomCochain(self, {slot: chi(self.exponent_at(slot, weight), coeff)})

    def frame_source(self, s, i, j):
        return self.source.terms[s].frame_transition(i, j)

    def frame_target(self, t, i, j):
        return self.target.terms[t].frame_transition(i, j)

    def template(self, total_degree):
        """Matrix of the total differential between slot bases, independent of the weight.

        Each entry is (row slot index, column slot index, coefficient); the
        monomial parts are fixed by weight preservation.
        """
        if total_degree not in self._templates:
            cols = self.slots(total_degree)
            rows = {slot: r for r, slot in enumerate(self.slots(total_degree + 1))}
            entries = []
            for c, slot in enumerate(cols):
                image = total_differential(self.unit(slot, (0, 0)))
                for key, val in image.entries.items():
                    if len(val.terms) != 1:
                        raise ShapeMismatchError(f'Differential of a unit cochain is not a monomial at {key}.')
                    (_, coeff), = val.terms.items()
                    entries.append((rows[key], c, coeff))
            self._templates[total_degree] = entries
        return self._templates[total_degree]

    def level_slots(self, level, degree):
        """Slots on overlaps of the given level with internal degree ``degree``."""
        key = ('level', level, degree)
        if key not in self._slots:
            self._slots[key] = [(overlap, ) + hs for overlap in self.model.overlaps(level)
                                for hs in self.hom_slots(degree)]
        return self._slots[key]

    def _unit_image(self, op, slot):
        out = []
        for key, val in op(self.unit(slot, (0, 0))).entries.items():
            (_, coeff), = val.terms.items()
            out.append((key, coeff))
        return out

    def hom_image(self, slot):
        """Internal differential of the unit cochain in ``slot``: [(slot', coeff)], weight-free."""
        key = ('hom', slot)
        if key not in self._templates:
            self._templates[key] = self._unit_image(hom_differential, slot)
        return self._templates[key]

    def face_image(self, slot, k):
        """Coface k of the unit cochain in ``slot``: [(slot', coeff)], weight-free."""
        key = ('face', slot, k)
        if key not in self._templates:
            self._templates[key] = self._unit_image(lambda f: face(f, k), slot)
        return self._templates[key]


class CechHomCochain():
    """Sparse Cech cochain of Hom(E, F): slot -> global coefficient."""

    __slots__ = ('pair', 'entries')

    def __init__(self, pair: HomPair, entries: Dict):
        clean = {}
        for key, val in entries.items():
            if val.ring.ring_id != TORUS.ring_id:
                val = pair.model.to_torus(val)
            if val:
                clean[key] = val
        self.pair = pair
        self.entries = clean

    @classmethod
    def zero(cls, pair):
        return cls(pair, {})

    @classmethod
    def from_components(cls, pair, components):
        """Build from {(I, s, t): matrix} with matrices indexed [b][a]."""
        entries = {}
        for (overlap, s, t), mat in components.items():
            rows, cols = pair.target.rank(t), pair.source.rank(s)
            if len(mat) != rows or any(len(r) != cols for r in mat):
                raise ShapeMismatchError(f'Component {(overlap, s, t)} should be {rows}x{cols}.')
            for b, row in enumerate(mat):
                for a, val in enumerate(row):
                    if not isinstance(val, LaurentElement):
                        val = LaurentElement.const(TORUS, val)
                    if val:
                        entries[(tuple(overlap), s, t, b, a)] = val
        return cls(pair, entries)

    def is_zero(self):
        return not self.entries

    def __bool__(self):
        return bool(self.entries)

    def _check(self, other):
        if self.pair != other.pair:
            raise ShapeMismatchError('Cochains of different Hom complexes.')

    def __add__(self, other):
        self._check(other)
        out = dict(self.entries)
        for k, v in other.entries.items():
            out[k] = out[k] + v if k in out else v
        return CechHomCochain(self.pair, out)

    def __neg__(self):
        return CechHomCochain(self.pair, {k: -v for k, v in self.entries.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, c):
        if isinstance(c, LaurentElement):
            return CechHomCochain(self.pair, {k: v * c for k, v in self.entries.items()})
        c = rat(c)
        return CechHomCochain(self.pair, {k: v * c for k, v in self.entries.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, CechHomCochain):
            return NotImplemented
        return self.pair == other.pair and self.entries == other.entries

    def __repr__(self):
        return f'CechHomCochain({len(self.entries)} entries, degrees={self.total_degrees()})'

    def levels(self):
        return sorted({len(k[0]) - 1 for k in self.entries})

    def internal_degrees(self):
        return sorted({k[2] - k[1] for k in self.entries})

    def total_degrees(self):
        return sorted({len(k[0]) - 1 + k[2] - k[1] for k in self.entries})

    @property
    def level(self):
        levels = self.levels()
        if len(levels) > 1:
            raise ValueError('Cochain spans several levels.')
        return levels[0] if levels else 0

    @property
    def degree(self):
        degs = self.internal_degrees()
        if len(degs) > 1:
            raise ValueError('Cochain is not homogeneous in the internal degree.')
        return degs[0] if degs else 0

    @property
    def total_degree(self):
        degs = self.total_degrees()
        if len(degs) > 1:
            raise ValueError('Cochain is not homogeneous in the total degree.')
        return degs[0] if degs else 0

    def weights(self):
        out = set()
        for key, val in self.entries.items():
            off = self.pair.offset(key)
            for exp in val.terms:
                out.add(WeightVector(*exp) + off)
        return sorted(out)

    def weight_parts(self):
        """Split into torus-homogeneous pieces keyed by weight."""
        parts = {}
        for key, val in self.entries.items():
            off = self.pair.offset(key)
            for exp, c in val.terms.items():
                w = WeightVector(*exp) + off
                parts.setdefault(w, {})[key] = LaurentElement(TORUS, {exp: c})
        return {w: CechHomCochain(self.pair, e) for w, e in sorted(parts.items())}

    def restrict_level(self, p):
        return CechHomCochain(self.pair, {k: v for k, v in self.entries.items() if len(k[0]) == p + 1})

    def restrict_degree(self, n):
        return CechHomCochain(self.pair, {k: v for k, v in self.entries.items() if k[2] - k[1] == n})

    def component(self, overlap, s, t):
        rows, cols = self.pair.target.rank(t), self.pair.source.rank(s)
        zero = TORUS.zero()
        return [[self.entries.get((tuple(overlap), s, t, b, a), zero) for a in range(cols)] for b in range(rows)]

    def local_component(self, overlap, s, t):
        """Component written in chart min(I) local trivializations and coordinates."""
        model = self.pair.model
        out = []
        for b, row in enumerate(self.component(overlap, s, t)):
            out_row = []
            for a, val in enumerate(row):
                shift = chi(self.pair.local_shift((tuple(overlap), s, t, b, a)))
                out_row.append(model.to_chart(val * shift, overlap[0]))
            out.append(out_row)
        return out

    def is_well_formed(self):
        """Every entry lies in the ring of its overlap."""
        for key, val in self.entries.items():
            for exp in val.terms:
                local = WeightVector(*exp) + self.pair.local_shift(key)
                if not self.pair.model.in_overlap_ring(key[0], local):
                    return False
        return True

    def to_vector(self, slots_index):
        """Coordinates against unit slots for a weight-homogeneous cochain."""
        vec = {}
        for key, val in self.entries.items():
            (exp, c), = val.terms.items()
            vec[slots_index[key]] = c
        return vec

    def describe(self):
        out = []
        for key in sorted(self.entries):
            overlap, s, t, b, a = key
            label = ''.join(str(i + 1) for i in overlap)
            out.append(f'U{label}^{{{s},{t}}}[{b}][{a}] = {self.entries[key]}')
        return out


def _mat_mul(a, b):
    zero = TORUS.zero()
    return [[sum((a[r][k] * b[k][c] for k in range(len(b))), zero) for c in range(len(b[0]))] for r in range(len(a))]


def hom_differential(f: CechHomCochain) -> CechHomCochain:
    """d(f) = d_F o f - (-1)^n f o d_E on every component of internal degree n."""
    pair = f.pair
    out = {}

    def add(key, val):
        out[key] = out[key] + val if key in out else val

    for (overlap, s, t, b, a), val in f.entries.items():
        n = t - s
        d_f = pair.target.d(t)
        if d_f is not None:
            for b2, row in enumerate(d_f):
                if row[b]:
                    add((overlap, s, t + 1, b2, a), row[b] * val)
        d_e = pair.source.d(s - 1)
        if d_e is not None:
            sign = 1 if n % 2 else -1
            for a2, entry in enumerate(d_e[a]):
                if entry:
                    add((overlap, s - 1, t, b, a2), val * entry * sign)
    return CechHomCochain(pair, out)


def compose(f: CechHomCochain, g: CechHomCochain) -> CechHomCochain:
    """Pointwise composition f o g on common overlaps, without signs."""
    if f.pair.source is not g.pair.target:
        raise ShapeMismatchError('compose(f, g) needs source(f) = target(g).')
    pair = f.pair if f.pair.target is f.pair.source and g.pair == f.pair else HomPair(g.pair.source, f.pair.target)
    by_start = {}
    for (overlap, t, u, c, b), val in f.entries.items():
        by_start.setdefault((overlap, t, b), []).append((u, c, val))
    out = {}
    for (overlap, s, t, b, a), val in g.entries.items():
        for u, c, fval in by_start.get((overlap, t, b), ()):
            key = (overlap, s, u, c, a)
            prod = fval * val
            out[key] = out[key] + prod if key in out else prod
    return CechHomCochain(pair, out)


def cup_product(f: CechHomCochain, g: CechHomCochain) -> CechHomCochain:
    """Cech composition f . g on the total complex (Alexander-Whitney).

    (f . g)_{i0..ip+q} = (-1)^{q m} f_{i0..ip} o g_{ip..ip+q} for f of level p and internal degree m
    and g of level q, both moved to the frame of i0. D is a derivation of this product, so it
    sends cocycles to cocycles and descends to the Yoneda product on Ext.
    """
    if f.pair.source is not g.pair.target:
        raise ShapeMismatchError('cup_product(f, g) needs source(f) = target(g).')
    out = None
    for p in f.levels():
        fp = f.restrict_level(p)
        for q in g.levels():
            gq = g.restrict_level(q)
            front = coface(fp, range(p + 1), p + q)
            back = coface(gq, range(p, p + q + 1), p + q)
            if not front or not back:
                continue
            for m in front.internal_degrees():
                term = compose(front.restrict_degree(m), back)
                term = -term if (q * m) % 2 else term
                out = term if out is None else out + term
    if out is None:
        return compose(CechHomCochain.zero(f.pair), CechHomCochain.zero(g.pair))
    return out


def bracket(f: CechHomCochain, g: CechHomCochain) -> CechHomCochain:
    """Graded commutator [f, g] = f o g - (-1)^{mn} g o f, levelwise."""
    if f.pair != g.pair:
        raise ShapeMismatchError('bracket needs cochains of the same Hom complex.')
    out = CechHomCochain.zero(f.pair)
    for m in f.internal_degrees():
        fm = f.restrict_degree(m)
        for n in g.internal_degrees():
            gn = g.restrict_degree(n)
            term = compose(fm, gn)
            other = compose(gn, fm)
            out = out + (term - other if (m * n) % 2 == 0 else term + other)
    return out


def _transport(f_entries, pair, overlap_from, i, j, new_overlap):
    """Move entries stored in frame i (on overlap_from) into frame j on new_overlap.

    f^{(j)} = T^F_{i->j} f^{(i)} T^E_{j->i}, componentwise.
    """
    by_comp = {}
    for (overlap, s, t, b, a), val in f_entries:
        by_comp.setdefault((s, t), {})[(b, a)] = val
    out = {}
    for (s, t), vals in by_comp.items():
        tf = pair.frame_target(t, i, j)
        te = pair.frame_source(s, j, i)
        if tf is None and te is None:
            for (b, a), val in vals.items():
                out[(new_overlap, s, t, b, a)] = val
            continue
        zero = TORUS.zero()
        mat = [[vals.get((b, a), zero) for a in range(pair.source.rank(s))] for b in range(pair.target.rank(t))]
        if tf is not None:
            mat = _mat_mul(tf, mat)
        if te is not None:
            mat = _mat_mul(mat, te)
        for b, row in enumerate(mat):
            for a, val in enumerate(row):
                if val:
                    out[(new_overlap, s, t, b, a)] = val
    return out


def move_to_chart(f: CechHomCochain, j: int) -> CechHomCochain:
    """A cochain living on one chart, rewritten on chart j in the frame of j."""
    charts = {key[0] for key in f.entries}
    if len(charts) != 1 or len(next(iter(charts))) != 1:
        raise ShapeMismatchError('move_to_chart expects a cochain supported on a single chart.')
    (chart, ) = charts
    return CechHomCochain(f.pair, _transport(list(f.entries.items()), f.pair, chart, chart[0], j, (j, )))


def face(f: CechHomCochain, k: int) -> CechHomCochain:
    """Coface map L_p -> L_{p+1}: (face_k f)_J = f_{J without j_k}, moved to the frame of min(J)."""
    pair = f.pair
    by_overlap = {}
    for key, val in f.entries.items():
        by_overlap.setdefault(key[0], []).append((key, val))
    out = {}
    for overlap, items in by_overlap.items():
        p = len(overlap) - 1
        if k > p + 1:
            continue
        for extra in range(pair.cover_size):
            if extra in overlap:
                continue
            new = tuple(sorted(overlap + (extra, )))
            if new.index(extra) != k:
                continue
            if k == 0:
                out.update(_transport(items, pair, overlap, overlap[0], new[0], new))
            else:
                for (_, s, t, b, a), val in items:
                    out[(new, s, t, b, a)] = val
    return CechHomCochain(pair, out)


def coface(f: CechHomCochain, positions: Sequence[int], level: int) -> CechHomCochain:
    """Composite face map along the order-preserving inclusion with image ``positions`` in [0..level].

    (coface f)_J = f_{J restricted to positions}, moved to the frame of min(J).
    """
    pair = f.pair
    out = {}
    for overlap in pair.model.overlaps(level):
        sub = tuple(overlap[q] for q in positions)
        items = [(k, v) for k, v in f.entries.items() if k[0] == sub]
        if not items:
            continue
        if sub[0] == overlap[0]:
            for (_, s, t, b, a), val in items:
                out[(overlap, s, t, b, a)] = val
        else:
            out.update(_transport(items, pair, sub, sub[0], overlap[0], overlap))
    return CechHomCochain(pair, out)


def cech_differential(f: CechHomCochain) -> CechHomCochain:
    """Alternating sum of the coface maps."""
    out = CechHomCochain.zero(f.pair)
    for p in f.levels():
        fp = f.restrict_level(p)
        for k in range(p + 2):
            term = face(fp, k)
            out = out + (term if k % 2 == 0 else -term)
    return out


def total_differential(f: CechHomCochain) -> CechHomCochain:
    """D = cech + (-1)^p d on level p."""
    out = cech_differential(f)
    for p in f.levels():
        inner = hom_differential(f.restrict_level(p))
        out = out + (inner if p % 2 == 0 else -inner)
    return out


class SemicosimplicialDGLA():
    """The levels L_p of the Cech-Hom DGLA of a complex with their coface maps."""

    def __init__(self, cx):
        self.complex = cx
        self.pair = HomPair(cx, cx)
        self.cover_size = cx.model.cover_size

    def face(self, k, f):
        return face(f, k)

    def differential(self, f):
        return hom_differential(f)

    def bracket(self, f, g):
        return bracket(f, g)

    def identity(self, level=0):
        entries = {}
        for overlap in self.pair.model.overlaps(level):
            for s in self.complex.degrees:
                for a in range(self.complex.rank(s)):
                    entries[(overlap, s, s, a, a)] = TORUS.one()
        return CechHomCochain(self.pair, entries)


# ----------------------------------------------------------------------------
# per-weight cohomology
# ----------------------------------------------------------------------------


@dataclass(frozen=True)
class WeightWindow():
    lo: Tuple[int, int]
    hi: Tuple[int, int]
    margin: int

    def weights(self):
        for w1 in range(self.lo[0], self.hi[0] + 1):
            for w2 in range(self.lo[1], self.hi[1] + 1):
                yield WeightVector(w1, w2)

    def on_guard(self, w):
        return w[0] in (self.lo[0], self.hi[0]) or w[1] in (self.lo[1], self.hi[1])

    def __len__(self):
        return (self.hi[0] - self.lo[0] + 1) * (self.hi[1] - self.lo[1] + 1)


def default_margin(model):
    return 2 * max(model.params) + 2


def default_window(pair: HomPair, margin: Optional[int] = None) -> WeightWindow:
    """Box spanned by all generator exponents and offsets, expanded by the margin."""
    margin = default_margin(pair.model) if margin is None else margin
    points = [WeightVector(0, 0)]
    for cx in (pair.source, pair.target):
        for term in cx.terms.values():
            for summand in term.summands:
                points.append(summand.offset)
                points.extend(summand.bundle.generators)
    lo = (min(p[0] for p in points) - margin, min(p[1] for p in points) - margin)
    hi = (max(p[0] for p in points) + margin, max(p[1] for p in points) + margin)
    return WeightWindow(lo, hi, margin)


class WeightComplex():
    """The finite complex C^*_e of weight e, built from the weight-free templates."""

    def __init__(self, pair: HomPair, weight):
        self.pair = pair
        self.weight = WeightVector(*weight)
        self._valid = {}
        self._matrices = {}

    def valid_slots(self, degree):
        if degree not in self._valid:
            self._valid[degree] = [i for i, slot in enumerate(self.pair.slots(degree))
                                   if self.pair.is_valid(slot, self.weight)]
        return self._valid[degree]

    def matrix(self, degree) -> QMatrix:
        """D: C^degree_e -> C^{degree+1}_e in the valid-slot bases."""
        if degree not in self._matrices:
            cols = {c: j for j, c in enumerate(self.valid_slots(degree))}
            rows = {r: i for i, r in enumerate(self.valid_slots(degree + 1))}
            entries = {}
            if cols and rows:
                for r, c, coeff in self.pair.template(degree):
                    if c in cols and r in rows:
                        entries[(rows[r], cols[c])] = coeff
            self._matrices[degree] = QMatrix(len(rows), len(cols), entries)
        return self._matrices[degree]

    def dimension(self, degree):
        n = len(self.valid_slots(degree))
        if n == 0:
            return 0
        return n - rank(self.matrix(degree)) - rank(self.matrix(degree - 1))

    def cochain(self, degree, vector):
        """Cochain of the given total degree from coordinates on the valid slots."""
        slots = self.pair.slots(degree)
        entries = {}
        for j, c in enumerate(vector):
            if c:
                slot = slots[self.valid_slots(degree)[j]]
                entries[slot] = chi(self.pair.exponent_at(slot, self.weight), c)
        return CechHomCochain(self.pair, entries)

    def vector(self, cochain, degree):
        """Coordinates of a weight-homogeneous cochain (of this weight) on the valid slots."""
        index = {self.pair.slots(degree)[c]: j for j, c in enumerate(self.valid_slots(degree))}
        vec = [QQ(0)] * len(index)
        for key, val in cochain.entries.items():
            if key not in index:
                raise ShapeMismatchError(f'Entry {key} is not a valid slot of weight {self.weight}.')
            for exp, c in val.terms.items():
                vec[index[key]] += c
        return vec

    def cocycle_basis(self, degree):
        return [col.column_vectors()[0] for col in kernel_basis(self.matrix(degree))]

    def coboundary_span(self, degree):
        return self.matrix(degree - 1).column_vectors()


def _scan(pair, degrees, window, progress):
    """Dimensions per weight for the requested degrees."""
    table = {}
    iterator = window.weights()
    if progress:
        iterator = tqdm(list(iterator), desc=f'weights {pair.source.name}->{pair.target.name}', file=sys.stderr,
                        leave=False)
    for w in iterator:
        wc = WeightComplex(pair, w)
        for k in degrees:
            dim = wc.dimension(k)
            if dim:
                table[(k, w)] = dim
    return table


def _degree_range(pair):
    lo = min(pair.internal_degrees())
    hi = max(pair.internal_degrees()) + pair.cover_size - 1
    return list(range(lo, hi + 1))


def weight_table(E, F, window=None, degrees=None, max_margin=64, progress=False, pair=None):
    """Nonzero cohomology dimensions per (degree, weight), enlarging the window on guard contact."""
    pair = pair or HomPair(E, F)
    degrees = _degree_range(pair) if degrees is None else list(degrees)
    window = window or default_window(pair)
    if window.margin < 1:
        raise WindowTooSmallError('Window margin must be at least 1 to leave a guard ring.', margin=window.margin)
    while True:
        table = _scan(pair, degrees, window, progress)
        touching = [w for (_, w) in table if window.on_guard(w)]
        if not touching:
            return table, window
        if window.margin * 2 > max_margin:
            raise WindowTooSmallError(
                f'Cohomology reaches the window guard at weight {touching[0]} with margin {window.margin}.',
                weight=touching[0],
                margin=window.margin)
        logger.info(f'Cohomology touches the window guard at {touching[0]}; doubling margin to {window.margin * 2}.')
        grow = window.margin
        window = WeightWindow((window.lo[0] - grow, window.lo[1] - grow), (window.hi[0] + grow, window.hi[1] + grow),
                              window.margin * 2)


def ext_dimensions(E, F, window=None, degrees=None, max_margin=64, progress=False) -> Dict[int, int]:
    """Dimensions of the hypercohomology of the Cech total complex of Hom(E, F), per degree."""
    pair = HomPair(E, F)
    degrees = _degree_range(pair) if degrees is None else list(degrees)
    table, used = weight_table(E, F, window, degrees, max_margin, progress, pair=pair)
    dims = {k: 0 for k in degrees}
    for (k, _), dim in table.items():
        dims[k] += dim
    logger.debug(f'Ext({E.name}, {F.name}) = {dims} on window {used.lo}..{used.hi}.')
    return dims


def _class_basis_at(wc, degree):
    """Representatives of H^degree at one weight: cocycles reduced modulo coboundaries, in echelon form."""
    boundaries = RowReducer([dict(enumerate(v)) for v in wc.coboundary_span(degree)],
                            keys=list(range(len(wc.valid_slots(degree)))))
    reduced = [boundaries.reduce(dict(enumerate(z))) for z in wc.cocycle_basis(degree)]
    classes = RowReducer([r for r in reduced if r], keys=list(range(len(wc.valid_slots(degree)))))
    n = len(wc.valid_slots(degree))
    return [[row.get(j, QQ(0)) for j in range(n)] for row in classes.basis], boundaries


def cohomology_representatives(E, F, degree, window=None, max_margin=64, progress=False,
                               pair=None) -> List[CechHomCochain]:
    """Cocycles whose classes form a basis of H^degree, sorted by weight."""
    pair = pair or HomPair(E, F)
    table, _ = weight_table(E, F, window, [degree], max_margin, progress, pair=pair)
    reps = []
    for (k, w) in sorted(table, key=lambda kw: (kw[1][1], -kw[1][0])):
        wc = WeightComplex(pair, w)
        vectors, _ = _class_basis_at(wc, degree)
        for vec in vectors:
            reps.append(wc.cochain(degree, vec))
    return reps


class ClassBasis():
    """Lazily built per-weight bases of H^degree, addressed by (weight, index)."""

    def __init__(self, pair: HomPair, degree: int):
        self.pair = pair
        self.degree = degree
        self._cache = {}

    def _at(self, weight):
        weight = WeightVector(*weight)
        if weight not in self._cache:
            wc = WeightComplex(self.pair, weight)
            n = len(wc.valid_slots(self.degree))
            vectors, boundaries = _class_basis_at(wc, self.degree)
            classes = RowReducer([dict(enumerate(v)) for v in vectors], keys=list(range(n)))
            self._cache[weight] = (wc, vectors, boundaries, classes)
        return self._cache[weight]

    def dimension(self, weight):
        return len(self._at(weight)[1])

    def representative(self, weight, index) -> CechHomCochain:
        wc, vectors, _, _ = self._at(weight)
        return wc.cochain(self.degree, vectors[index])

    def coordinates(self, cocycle: CechHomCochain) -> Dict:
        """{(weight, index): coefficient} of the class of a cocycle; ValueError if it is not closed."""
        out = {}
        for w, part in cocycle.weight_parts().items():
            wc, vectors, boundaries, classes = self._at(w)
            vec = dict(enumerate(wc.vector(part, self.degree)))
            coords = classes.coordinates(boundaries.reduce(vec))
            if coords is None:
                raise ValueError(f'Cochain is not a cocycle at weight {w}.')
            for index, c in enumerate(coords):
                if c:
                    out[(w, index)] = c
        return out


def cech_class_coordinates(cocycle: CechHomCochain, basis: Sequence[CechHomCochain]):
    """Coordinates of [cocycle] against the classes of ``basis``; None if outside their span.

    Solved per weight: cocycle = sum c_l z_l + D(b).
    """
    pair = cocycle.pair
    degree = cocycle.total_degree if cocycle else (basis[0].total_degree if basis else 0)
    coords = [QQ(0)] * len(basis)
    basis_parts = [z.weight_parts() for z in basis]
    weights = set(cocycle.weight_parts())
    for parts in basis_parts:
        weights |= set(parts)
    target_parts = cocycle.weight_parts()
    for w in sorted(weights):
        wc = WeightComplex(pair, w)
        columns = []
        owners = []
        for l, parts in enumerate(basis_parts):
            if w in parts:
                columns.append(wc.vector(parts[w], degree))
                owners.append(l)
        bounds = wc.coboundary_span(degree)
        n = len(wc.valid_slots(degree))
        target = wc.vector(target_parts[w], degree) if w in target_parts else [QQ(0)] * n
        if not columns and not any(target):
            continue
        all_cols = columns + bounds
        mat = QMatrix(n, len(all_cols), {(i, j): v for j, col in enumerate(all_cols) for i, v in enumerate(col) if v})
        sol = solve_linear(mat, target)
        if sol is None:
            return None
        # a basis class split over several weights must get one consistent coefficient
        for l, c in zip(owners, sol[:len(columns)]):
            if coords[l] and c != coords[l]:
                return None
            coords[l] = c
    return coords


def period_matrix(reps: Sequence[CechHomCochain], degree, window=None):
    """Rank data: per weight, the classes of ``reps`` against a full class basis.

    Returns the matrix whose rows are the class coordinates of each
    representative against the canonical basis of cohomology_representatives.
    """
    if not reps:
        return QMatrix(0, 0)
    pair = reps[0].pair
    basis = cohomology_representatives(pair.source, pair.target, degree, window, pair=pair)
    rows = []
    for z in reps:
        coords = cech_class_coordinates(z, basis)
        if coords is None:
            raise ValueError('Representative is not in the span of the class basis.')
        rows.append(coords)
    return QMatrix.from_rows(rows) if rows and basis else QMatrix(len(rows), len(basis))


def random_cochain(pair: HomPair, total_degree: int, rng: random.Random, weights=None, density=3,
                   level=None) -> CechHomCochain:
    """Random cochain with small integer coefficients on valid slots, for property checks."""
    if weights is None:
        window = default_window(pair, margin=2)
        all_w = list(window.weights())
        weights = [rng.choice(all_w) for _ in range(2)]
    out = {}
    slots = [s for s in pair.slots(total_degree) if level is None or len(s[0]) == level + 1]
    for w in weights:
        valid = [s for s in slots if pair.is_valid(s, w)]
        if not valid:
            continue
        for slot in rng.sample(valid, min(density, len(valid))):
            c = rng.randint(-3, 3)
            if c:
                val = chi(pair.exponent_at(slot, w), c)
                out[slot] = out[slot] + val if slot in out else val
    return CechHomCochain(pair, out)


def cover_overlaps(model, level):
    return list(itertools.combinations(range(model.cover_size), level + 1))
