"""Exact scalars, sparse rational matrices and weight-graded Laurent polynomials.

Everything downstream is computed over QQ. Matrices are backed by sympy's
``DomainMatrix`` in its sparse (SDM) format; Laurent polynomials are small
dictionaries keyed by integer exponent vectors.
"""
from fractions import Fraction
from typing import Dict, Iterable, List, NamedTuple, Optional, Sequence, Tuple

from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix

Rat = QQ.dtype


class PtwallsError(Exception):
    """Base class for every failure the engine reports."""


class RingMismatchError(PtwallsError):
    pass


class ShapeMismatchError(PtwallsError):
    pass


class ModelError(PtwallsError):
    pass


class CompatibilityError(PtwallsError):
    pass


class WindowTooSmallError(PtwallsError):

    def __init__(self, message, weight=None, margin=None):
        super().__init__(message)
        self.weight = weight
        self.margin = margin


class PrimitiveSearchExhausted(PtwallsError):

    def __init__(self, message, weight=None, degree_bound=None):
        super().__init__(message)
        self.weight = weight
        self.degree_bound = degree_bound


class TruncationTooSmall(PtwallsError):
    pass


class DegenerateArrangementError(PtwallsError):
    pass


class UnsupportedChamberError(PtwallsError):
    pass


class ConfigError(PtwallsError):
    pass


def rat(value, denominator=None):
    """Exact rational from int, Fraction, Rat or a string such as '-3/4'.

    Floats are refused: there is no float ingestion path.
    """
    if denominator is not None:
        return rat(value) / rat(denominator)
    if isinstance(value, float):
        raise TypeError(f'Refusing float {value!r}: use an int, a Fraction or a string like "3/4".')
    if isinstance(value, Rat):
        return value
    if isinstance(value, (bool, int)):
        return QQ(int(value))
    if isinstance(value, Fraction):
        return QQ(value.numerator, value.denominator)
    if isinstance(value, str):
        text = value.strip()
        if '.' in text or 'e' in text.lower():
            raise TypeError(f'Refusing decimal literal {value!r}: write it as a fraction.')
        if '/' in text:
            num, den = text.split('/', 1)
            return QQ(int(num), int(den))
        return QQ(int(text))
    if hasattr(value, 'numerator') and hasattr(value, 'denominator'):
        return QQ(int(value.numerator), int(value.denominator))
    raise TypeError(f'Cannot build a rational from {type(value).__name__}.')


def rat_str(value):
    value = rat(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f'{value.numerator}/{value.denominator}'


# ----------------------------------------------------------------------------
# sparse matrices
# ----------------------------------------------------------------------------


class QMatrix():
    """Sparse matrix over QQ with fixed dimensions.

    Absent entries are zero. The matrix is immutable after construction.
    """

    __slots__ = ('rows', 'cols', '_entries')

    def __init__(self, rows, cols, entries=None):
        if rows < 0 or cols < 0:
            raise ValueError(f'Invalid matrix shape ({rows}, {cols}).')
        self.rows = rows
        self.cols = cols
        clean = {}
        for (i, j), v in (entries or {}).items():
            if not (0 <= i < rows and 0 <= j < cols):
                raise ShapeMismatchError(f'Entry ({i}, {j}) outside a {rows}x{cols} matrix.')
            v = rat(v)
            if v:
                clean[(i, j)] = v
        self._entries = clean

    @classmethod
    def from_rows(cls, rows):
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise ShapeMismatchError('Rows of unequal length.')
        return cls(len(rows), ncols, {(i, j): v for i, r in enumerate(rows) for j, v in enumerate(r) if v})

    @classmethod
    def identity(cls, n):
        return cls(n, n, {(i, i): 1 for i in range(n)})

    @classmethod
    def column(cls, values):
        values = list(values)
        return cls(len(values), 1, {(i, 0): v for i, v in enumerate(values) if v})

    @property
    def entries(self):
        return dict(self._entries)

    @property
    def shape(self):
        return (self.rows, self.cols)

    def __getitem__(self, key):
        return self._entries.get(key, QQ(0))

    def __eq__(self, other):
        return isinstance(other, QMatrix) and self.shape == other.shape and self._entries == other._entries

    def __hash__(self):
        return hash((self.shape, frozenset(self._entries.items())))

    def __repr__(self):
        return f'QMatrix({self.rows}x{self.cols}, nnz={len(self._entries)})'

    def to_domain_matrix(self):
        sdm = {}
        for (i, j), v in self._entries.items():
            sdm.setdefault(i, {})[j] = v
        return DomainMatrix(sdm, (self.rows, self.cols), QQ)

    def to_lists(self):
        return [[self[i, j] for j in range(self.cols)] for i in range(self.rows)]

    def transpose(self):
        return QMatrix(self.cols, self.rows, {(j, i): v for (i, j), v in self._entries.items()})

    def __matmul__(self, other):
        if self.cols != other.rows:
            raise ShapeMismatchError(f'Cannot multiply {self.shape} by {other.shape}.')
        by_row = {}
        for (k, j), v in other._entries.items():
            by_row.setdefault(k, []).append((j, v))
        out = {}
        for (i, k), a in self._entries.items():
            for j, b in by_row.get(k, ()):
                out[(i, j)] = out.get((i, j), QQ(0)) + a * b
        return QMatrix(self.rows, other.cols, out)

    def apply(self, vector):
        """Multiply by a column given as a sequence of rationals."""
        if len(vector) != self.cols:
            raise ShapeMismatchError(f'Vector of length {len(vector)} for a matrix with {self.cols} columns.')
        out = [QQ(0)] * self.rows
        for (i, j), v in self._entries.items():
            out[i] += v * rat(vector[j])
        return out

    def column_vectors(self):
        cols = [[QQ(0)] * self.rows for _ in range(self.cols)]
        for (i, j), v in self._entries.items():
            cols[j][i] = v
        return cols

    def scale(self, c):
        c = rat(c)
        return QMatrix(self.rows, self.cols, {k: c * v for k, v in self._entries.items()})


def _rref(m: QMatrix):
    """Reduced row echelon form as (rows dict, pivots)."""
    if m.rows == 0 or m.cols == 0 or not m._entries:
        return {}, ()
    reduced, pivots = m.to_domain_matrix().to_sparse().rref()
    rep = reduced.to_sparse().rep
    rows = {i: dict(row) for i, row in rep.items() if row}
    return rows, tuple(pivots)


def rank(m: QMatrix) -> int:
    """Exact rank over QQ."""
    return len(_rref(m)[1])


def kernel_basis(m: QMatrix) -> List[QMatrix]:
    """Basis of the right kernel, one column per basis vector.

    Each free column f of the echelon form gives the vector with 1 at f and
    minus the echelon entries at the pivot positions.
    """
    rows, pivots = _rref(m)
    pivot_row = {p: r for r, p in enumerate(pivots)}
    basis = []
    for f in range(m.cols):
        if f in pivot_row:
            continue
        vec = [QQ(0)] * m.cols
        vec[f] = QQ(1)
        for r, p in enumerate(pivots):
            v = rows.get(r, {}).get(f)
            if v:
                vec[p] = -v
        basis.append(QMatrix.column(vec))
    return basis


def solve_linear(m: QMatrix, b: Sequence) -> Optional[List]:
    """Particular solution of m x = b, or None when the system is inconsistent.

    Free variables are set to zero, so the answer is deterministic.
    """
    if len(b) != m.rows:
        raise ShapeMismatchError(f'Right-hand side of length {len(b)} for a matrix with {m.rows} rows.')
    aug = dict(m._entries)
    for i, v in enumerate(b):
        v = rat(v)
        if v:
            aug[(i, m.cols)] = v
    rows, pivots = _rref(QMatrix(m.rows, m.cols + 1, aug))
    if pivots and pivots[-1] == m.cols:
        return None
    x = [QQ(0)] * m.cols
    for r, p in enumerate(pivots):
        x[p] = rows.get(r, {}).get(m.cols, QQ(0))
    return x


class RowReducer():
    """Echelon basis of a span of sparse row vectors, with normal forms.

    Vectors are dicts ``key -> Rat``; keys are mapped to columns in first-seen
    order unless an explicit ``keys`` order is given.
    """

    def __init__(self, vectors: Iterable[Dict], keys: Optional[Sequence] = None):
        vectors = [{k: rat(v) for k, v in vec.items() if v} for vec in vectors]
        if keys is None:
            keys = []
            seen = set()
            for vec in vectors:
                for k in vec:
                    if k not in seen:
                        seen.add(k)
                        keys.append(k)
        self.keys = list(keys)
        self.index = {k: i for i, k in enumerate(self.keys)}
        for vec in vectors:
            for k in vec:
                if k not in self.index:
                    self.index[k] = len(self.keys)
                    self.keys.append(k)
        entries = {(r, self.index[k]): v for r, vec in enumerate(vectors) for k, v in vec.items()}
        rows, pivots = _rref(QMatrix(len(vectors), len(self.keys), entries))
        self.pivots = pivots
        self.basis = [{self.keys[j]: v for j, v in rows[r].items()} for r in range(len(pivots))]
        self.pivot_keys = [self.keys[p] for p in pivots]

    @property
    def rank(self):
        return len(self.pivots)

    def reduce(self, vector: Dict) -> Dict:
        """Normal form modulo the span: all pivot coordinates eliminated."""
        out = {k: rat(v) for k, v in vector.items() if v}
        for key, row in zip(self.pivot_keys, self.basis):
            c = out.get(key)
            if not c:
                continue
            for k, v in row.items():
                nv = out.get(k, QQ(0)) - c * v
                if nv:
                    out[k] = nv
                else:
                    out.pop(k, None)
        return out

    def contains(self, vector: Dict) -> bool:
        return not self.reduce(vector)

    def coordinates(self, vector: Dict) -> Optional[List]:
        """Coefficients of ``vector`` in the echelon basis, or None if outside the span."""
        if self.reduce(vector):
            return None
        return [rat(vector.get(k, 0)) for k in self.pivot_keys]


# ----------------------------------------------------------------------------
# weights and Laurent polynomials
# ----------------------------------------------------------------------------


class WeightVector(NamedTuple):
    w1: int
    w2: int

    def __add__(self, other):
        return WeightVector(self.w1 + other[0], self.w2 + other[1])

    def __sub__(self, other):
        return WeightVector(self.w1 - other[0], self.w2 - other[1])

    def __neg__(self):
        return WeightVector(-self.w1, -self.w2)

    def scale(self, k):
        return WeightVector(k * self.w1, k * self.w2)

    def dot(self, other):
        return self.w1 * other[0] + self.w2 * other[1]


ZERO_WEIGHT = WeightVector(0, 0)


class LaurentRing(NamedTuple):
    """Identifier, coordinate names and coordinate weights of a Laurent ring."""
    ring_id: str
    names: Tuple[str, ...]
    weights: Tuple[WeightVector, ...]

    @property
    def arity(self):
        return len(self.names)

    def weight_of(self, exponent):
        w1 = sum(e * w[0] for e, w in zip(exponent, self.weights))
        w2 = sum(e * w[1] for e, w in zip(exponent, self.weights))
        return WeightVector(w1, w2)

    def gen(self, name):
        exp = [0] * self.arity
        exp[self.names.index(name)] = 1
        return LaurentElement.monomial(self, exp)

    def one(self):
        return LaurentElement.monomial(self, (0, ) * self.arity)

    def zero(self):
        return LaurentElement(self, {})


TORUS = LaurentRing('T', ('x', 'u'), (WeightVector(1, 0), WeightVector(0, 1)))


class LaurentElement():
    """Laurent polynomial with rational coefficients in a fixed chart ring."""

    __slots__ = ('ring', 'terms', '_hash')

    def __init__(self, ring: LaurentRing, terms: Dict):
        clean = {}
        for exp, c in terms.items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != ring.arity:
                raise ShapeMismatchError(f'Exponent {exp} does not fit ring {ring.ring_id}.')
            c = rat(c)
            if c:
                clean[exp] = c
        self.ring = ring
        self.terms = clean
        self._hash = None

    @classmethod
    def monomial(cls, ring, exponent, coeff=1):
        return cls(ring, {tuple(exponent): coeff})

    @classmethod
    def const(cls, ring, c):
        return cls(ring, {(0, ) * ring.arity: c})

    @property
    def ring_id(self):
        return self.ring.ring_id

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def _check(self, other):
        if not isinstance(other, LaurentElement):
            raise TypeError(f'Expected LaurentElement, got {type(other).__name__}.')
        if other.ring.ring_id != self.ring.ring_id:
            raise RingMismatchError(f'Ring mismatch: {self.ring.ring_id} vs {other.ring.ring_id}.')

    def __add__(self, other):
        self._check(other)
        terms = dict(self.terms)
        for exp, c in other.terms.items():
            terms[exp] = terms.get(exp, QQ(0)) + c
        return LaurentElement(self.ring, terms)

    def __neg__(self):
        return LaurentElement(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, LaurentElement):
            c = rat(other)
            return LaurentElement(self.ring, {e: c * v for e, v in self.terms.items()})
        return laurent_mul(self, other)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, LaurentElement):
            return NotImplemented
        return self.ring.ring_id == other.ring.ring_id and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring.ring_id, frozenset(self.terms.items())))
        return self._hash

    def weights(self):
        return sorted({self.ring.weight_of(e) for e in self.terms})

    def weight(self):
        """Weight of a homogeneous element; None for zero."""
        ws = self.weights()
        if not ws:
            return None
        if len(ws) > 1:
            raise ValueError(f'{self} is not weight-homogeneous.')
        return ws[0]

    def is_monomial(self):
        return len(self.terms) == 1

    def leading(self):
        """The single (exponent, coefficient) pair of a monomial."""
        if len(self.terms) != 1:
            raise ValueError(f'{self} is not a monomial.')
        return next(iter(self.terms.items()))

    def inverse(self):
        exp, c = self.leading()
        return LaurentElement(self.ring, {tuple(-e for e in exp): 1 / c})

    def __pow__(self, k):
        if k < 0:
            return self.inverse()**(-k)
        out = self.ring.one()
        for _ in range(k):
            out = out * self
        return out

    def substitute(self, target: LaurentRing, images: Sequence['LaurentElement']):
        """Ring map sending coordinate i to the monomial ``images[i]``."""
        out = target.zero()
        for exp, c in self.terms.items():
            term = LaurentElement.const(target, c)
            for e, img in zip(exp, images):
                if e:
                    term = term * img**e
            out = out + term
        return out

    def __repr__(self):
        return f'LaurentElement({self.ring.ring_id}, {self})'

    def __str__(self):
        if not self.terms:
            return '0'
        parts = []
        for exp in sorted(self.terms, reverse=True):
            c = self.terms[exp]
            mono = '*'.join(
                (name if e == 1 else f'{name}^{e}') for name, e in zip(self.ring.names, exp) if e)
            if not mono:
                parts.append(rat_str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append(f'-{mono}')
            else:
                parts.append(f'{rat_str(c)}*{mono}')
        return ' + '.join(parts).replace('+ -', '- ')


def laurent_mul(a: LaurentElement, b: LaurentElement) -> LaurentElement:
    """Exact product of two Laurent polynomials in the same ring."""
    a._check(b)
    terms = {}
    for ea, ca in a.terms.items():
        for eb, cb in b.terms.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            terms[e] = terms.get(e, QQ(0)) + ca * cb
    return LaurentElement(a.ring, terms)


def chi(weight, coeff=1, ring=TORUS):
    """Torus character with the given exponent, i.e. x^w1 u^w2."""
    return LaurentElement.monomial(ring, tuple(weight), coeff)
