import json
import logging
import threading
from collections import Counter
from functools import lru_cache

import sympy

from qaff.models.laurent import ONE, Monomial, Y, exact_div, from_json, parse, spectral_shift
from qaff.models.quiver import KRIndex, Vertex, in_component, kr_label
from qaff.models.quivrep import BUILTIN_TYPES, builtin_K, geometric_qchar
from qaff.utils.errors import (
    DependencyCycle,
    ExactDivisionFailed,
    IndexOutOfRange,
    InvalidQCharacter,
    MissingFundamental,
    UnsupportedType,
)

logger = logging.getLogger(__name__)


def dominant_monomial(cd, idx):
    """prod_{j<k} Y_{i, r + 2 d_i j}"""
    d = cd.di(idx.i)
    return Monomial({Y(idx.i, idx.r + 2 * d * j): 1 for j in range(idx.k)})


class FundamentalProvider:
    """Source of the fundamental q-characters chi_q(W^(i)_{1,q^r}).

    Each node stores one polynomial at base_shift; other shifts are obtained
    by spectral shift.
    """

    def __init__(self, cd, base, base_shift=0, source='builtin'):
        self.cd = cd
        self.base = dict(base)
        self.base_shift = base_shift
        self.source = source
        for i, poly in self.base.items():
            cd.check_node(i)
            if poly.coefficient(Monomial.var(Y(i, base_shift))) != 1:
                raise InvalidQCharacter(f'fundamental of node {i} lacks Y[{i},{base_shift}] with coefficient 1')

    @classmethod
    def builtin(cls, cd):
        """Fundamentals from the geometric formula (A1, A2, B2)"""
        if cd.label not in BUILTIN_TYPES:
            raise UnsupportedType(f'no built-in fundamentals for {cd.label}; pass a fundamentals file')
        base = {}
        for i in cd.nodes:
            d = cd.di(i)
            base[i] = geometric_qchar(cd, i, d, builtin_K(cd, i, d))
        return cls(cd, base, 0, source=f'builtin:{cd.label}')

    @classmethod
    def from_dict(cls, cd, data, source='dict'):
        if data.get('type') and data['type'].upper() != cd.label:
            raise UnsupportedType(f'fundamentals file is for {data["type"]}, not {cd.label}')
        base = {}
        for node, value in data.get('fundamentals', {}).items():
            base[int(node)] = parse(value) if isinstance(value, str) else from_json(value)
        return cls(cd, base, int(data.get('base_shift', 0)), source=source)

    @classmethod
    def from_file(cls, cd, path):
        with open(path, encoding='utf-8') as handle:
            data = json.load(handle)
        return cls.from_dict(cd, data, source=str(path))

    def qchar(self, i, r):
        if i not in self.base:
            raise MissingFundamental(f'no fundamental q-character for node {i} of {self.cd.label}')
        return spectral_shift(self.base[i], r - self.base_shift)

    def to_dict(self):
        return {
            'type': self.cd.label,
            'base_shift': self.base_shift,
            'fundamentals': {str(i): p.to_dict() for i, p in sorted(self.base.items())},
        }


def s_term(cd, i, k, r, T):
    """S^(i)_{k,r} of the T-system; T(j, k, r) looks up KR q-characters"""
    d_i = cd.di(i)
    result = ONE
    if d_i >= 2:
        for j in cd.neighbours(i):
            if cd.c(j, i) == -1:
                result = result * T(j, k, r)
            else:
                result = result * T(j, d_i * k, r - d_i + 1)
        return result
    for j in cd.neighbours(i):
        c_ij = cd.c(i, j)
        if c_ij == -1:
            result = result * T(j, k, r)
        elif c_ij == -2:
            l, rem = divmod(k, 2)
            if rem == 0:
                result = result * T(j, l, r) * T(j, l, r + 2)
            else:
                result = result * T(j, l + 1, r) * T(j, l, r + 2)
        elif c_ij == -3:
            l, rem = divmod(k, 3)
            levels = {0: (l, l, l), 1: (l + 1, l, l), 2: (l + 1, l + 1, l)}[rem]
            for offset, level in zip((0, 2, 4), levels):
                result = result * T(j, level, r + offset)
        else:
            raise ValueError(f'unexpected Cartan entry c_{i}{j} = {c_ij}')
    return result


class TSystemSolver:
    """Memoized demand-driven solver for KR q-characters.

    Values are stored per (i, k) at spectral exponent 0 and shifted on lookup.
    """

    def __init__(self, cd, provider, anchor=None):
        self.cd = cd
        self.provider = provider
        self.anchor = anchor
        self._memo = {}
        self._pending = {}
        self._local = threading.local()
        self._lock = threading.Lock()

    def check_index(self, idx):
        self.cd.check_node(idx.i)
        if idx.k < 0:
            raise IndexOutOfRange(f'level k={idx.k} must be nonnegative')
        if self.anchor is not None and not in_component(self.cd, self.anchor, Vertex(idx.i, idx.r - self.cd.di(idx.i))):
            raise IndexOutOfRange(f'{idx} is off the lattice of the component of {self.anchor}')

    def T(self, i, k, r):
        return spectral_shift(self._base(i, k), r)

    def kr_qchar(self, idx):
        idx = KRIndex(*idx)
        self.check_index(idx)
        return self.T(idx.i, idx.k, idx.r)

    def s_term(self, i, k, r):
        return s_term(self.cd, i, k, r, self.T)

    def _base(self, i, k):
        key = (i, k)
        stack = self._stack()
        while True:
            with self._lock:
                cached = self._memo.get(key)
                if cached is not None:
                    return cached
                if key in stack:
                    raise DependencyCycle(f'T^({i})_{k} depends on itself')
                pending = self._pending.get(key)
                owner = pending is None
                if owner:
                    pending = self._pending[key] = threading.Event()
            if owner:
                break
            # another thread is computing key; on its failure we retry ourselves
            pending.wait()

        stack.add(key)
        try:
            value = self._compute(i, k)
            with self._lock:
                self._memo[key] = value
            return value
        finally:
            stack.discard(key)
            with self._lock:
                del self._pending[key]
            pending.set()

    def _stack(self):
        """Keys being computed by the calling thread"""
        stack = getattr(self._local, 'stack', None)
        if stack is None:
            stack = self._local.stack = set()
        return stack

    def _compute(self, i, k):
        if k == 0:
            return ONE
        if k == 1:
            value = self.provider.qchar(i, 0)
        else:
            d = self.cd.di(i)
            numerator = self.T(i, k - 1, 2 * d) * self.T(i, k - 1, 0) - self.s_term(i, k - 1, d)
            try:
                value = exact_div(numerator, self.T(i, k - 2, 2 * d))
            except ExactDivisionFailed as exc:
                raise ExactDivisionFailed(
                    f'T-system division failed for T^({i})_{k} of {self.cd.label}; check the fundamentals',
                    context=KRIndex(i, k, 0),
                ) from exc
        self._assert_qchar(KRIndex(i, k, 0), value)
        logger.debug('computed T^(%s)_%s for %s: %d terms', i, k, self.cd.label, len(value))
        return value

    def _assert_qchar(self, idx, value):
        if any(c < 0 for _, c in value.terms()):
            raise InvalidQCharacter(f'{idx} has a negative coefficient')
        if value.coefficient(dominant_monomial(self.cd, idx)) != 1:
            raise InvalidQCharacter(f'{idx} lacks its dominant monomial with coefficient 1')

    def verify(self, i, k, r):
        """Check T_{k,r+d}T_{k,r-d} = T_{k-1,r+d}T_{k+1,r-d} + S_{k,r} exactly"""
        d = self.cd.di(i)
        lhs = self.T(i, k, r + d) * self.T(i, k, r - d)
        rhs = self.T(i, k - 1, r + d) * self.T(i, k + 1, r - d) + self.s_term(i, k, r)
        return lhs == rhs

    def table(self, indices):
        return {KRIndex(*idx): self.kr_qchar(idx) for idx in indices}


@lru_cache(maxsize=32)
def _solver(cd, provider):
    return TSystemSolver(cd, provider)


def kr_qchar(cd, idx, fp):
    return _solver(cd, fp).kr_qchar(idx)


def verify_tsystem(cd, i, k, r, fp):
    return _solver(cd, fp).verify(i, k, r)


def kr_table(cd, vertices, ell, solver):
    """q-characters of the KR modules attached to the given truncation vertices"""
    return {v: solver.kr_qchar(kr_label(cd, v, ell)) for v in vertices}


def _height_weights(cd):
    inverse = cd.inverse_C
    return [sum(inverse[row, col] for row in range(cd.rank)) for col in range(cd.rank)]


def weight(mono, cd):
    w = [0] * cd.rank
    for key, e in mono.items():
        if key.family == 'Y':
            w[key.node - 1] += e
    return tuple(w)


def highest_monomials(p, cd):
    """Monomials of maximal weight height (coordinate sum of C^-1 times the weight)"""
    heights = _height_weights(cd)
    best, top = None, []
    for mono in p.monomials():
        h = sum((heights[n] * x for n, x in enumerate(weight(mono, cd))), sympy.Integer(0))
        if best is None or h > best:
            best, top = h, [mono]
        elif h == best:
            top.append(mono)
    return sorted(top)


def highest_monomial(p, cd):
    top = highest_monomials(p, cd)
    if len(top) != 1:
        raise ValueError(f'q-character has {len(top)} monomials of maximal weight')
    return top[0]


def loop_weight_label(mono):
    """Dominant monomial as a sorted multiset of (i, r) pairs"""
    label = []
    for key, e in mono.items():
        if e < 0:
            raise ValueError(f'{mono} is not dominant')
        label.extend([(key.node, key.shift)] * e)
    return tuple(sorted(label))


def classical_character(p, cd):
    """Ordinary character: weight (in fundamental-weight coordinates) -> multiplicity"""
    chars = Counter()
    for mono, coeff in p.terms():
        chars[weight(mono, cd)] += coeff
    return {w: c for w, c in chars.items() if c}
