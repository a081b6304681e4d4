"""Exact sparse Laurent polynomials with integer coefficients.

Variables are VarKey triples (family, node, shift) with family one of
'Y' (loop-weight variables), 'Z' (initial cluster variables) and 'V'
(F-polynomial variables). Keys compare as plain tuples, so the fixed order
is family ('V' < 'Y' < 'Z'), then node, then shift. Text and JSON forms list
terms in ascending monomial order under that key order.
"""
import heapq
import re
from typing import NamedTuple

from qaff.utils.errors import DivisionByZero, ExactDivisionFailed, NegativePowerOfNonMonomial

FAMILIES = ('Y', 'Z', 'V')


class VarKey(NamedTuple):
    family: str
    node: int
    shift: int

    def __str__(self):
        return f'{self.family}[{self.node},{self.shift}]'

    def shifted(self, s):
        return VarKey(self.family, self.node, self.shift + s)


def Y(i, r):
    return VarKey('Y', i, r)


def Z(i, r):
    return VarKey('Z', i, r)


def V(i, r):
    return VarKey('V', i, r)


class Monomial:
    """Product of variables with nonzero integer exponents"""
    __slots__ = ('_exps', '_hash')

    def __init__(self, exponents=None):
        items = dict(exponents or {})
        for key in items:
            if not isinstance(key, VarKey):
                raise TypeError(f'monomial keys must be VarKey, got {key!r}')
        self._exps = tuple(sorted((k, int(e)) for k, e in items.items() if e))
        self._hash = hash(self._exps)

    @classmethod
    def _from_sorted(cls, exps):
        mono = cls.__new__(cls)
        mono._exps = exps
        mono._hash = hash(exps)
        return mono

    @classmethod
    def var(cls, key, exp=1):
        return cls._from_sorted(((key, exp),) if exp else ())

    def items(self):
        return self._exps

    def variables(self):
        return tuple(k for k, _ in self._exps)

    def exponent(self, key):
        for k, e in self._exps:
            if k == key:
                return e
        return 0

    def is_one(self):
        return not self._exps

    def __mul__(self, other):
        a, b = self._exps, other._exps
        if not a:
            return other
        if not b:
            return self
        out = []
        i = j = 0
        while i < len(a) and j < len(b):
            ka, ea = a[i]
            kb, eb = b[j]
            if ka == kb:
                if ea + eb:
                    out.append((ka, ea + eb))
                i += 1
                j += 1
            elif ka < kb:
                out.append(a[i])
                i += 1
            else:
                out.append(b[j])
                j += 1
        out.extend(a[i:])
        out.extend(b[j:])
        return Monomial._from_sorted(tuple(out))

    def inverse(self):
        return Monomial._from_sorted(tuple((k, -e) for k, e in self._exps))

    def __truediv__(self, other):
        return self * other.inverse()

    def __pow__(self, n):
        if n == 0:
            return ONE_MONOMIAL
        return Monomial._from_sorted(tuple((k, e * n) for k, e in self._exps))

    def shifted(self, s):
        return Monomial._from_sorted(tuple((k.shifted(s), e) for k, e in self._exps))

    def __eq__(self, other):
        return isinstance(other, Monomial) and self._exps == other._exps

    def __hash__(self):
        return self._hash

    def __lt__(self, other):
        return self._exps < other._exps

    def __repr__(self):
        return f'Monomial({self})'

    def __str__(self):
        if not self._exps:
            return '1'
        return '*'.join(str(k) if e == 1 else f'{k}^{e}' for k, e in self._exps)

    def to_dict(self):
        return {str(k): e for k, e in self._exps}


ONE_MONOMIAL = Monomial()


class LaurentPoly:
    """Finite map Monomial -> nonzero int, kept canonical"""
    __slots__ = ('_terms', '_hash')

    def __init__(self, terms=None):
        clean = {}
        for mono, coeff in (terms or {}).items():
            coeff = int(coeff)
            if coeff:
                clean[mono] = clean.get(mono, 0) + coeff
        self._terms = {m: c for m, c in clean.items() if c}
        self._hash = None

    @classmethod
    def _wrap(cls, terms):
        poly = cls.__new__(cls)
        poly._terms = terms
        poly._hash = None
        return poly

    @classmethod
    def constant(cls, c):
        return cls._wrap({ONE_MONOMIAL: int(c)} if c else {})

    @classmethod
    def monomial(cls, mono, coeff=1):
        return cls._wrap({mono: int(coeff)} if coeff else {})

    @classmethod
    def var(cls, key, exp=1):
        return cls.monomial(Monomial.var(key, exp))

    def terms(self):
        return self._terms.items()

    def monomials(self):
        return self._terms.keys()

    def coefficient(self, mono):
        return self._terms.get(mono, 0)

    def is_zero(self):
        return not self._terms

    def is_monomial(self):
        return len(self._terms) == 1

    def single_term(self):
        if len(self._terms) != 1:
            raise ValueError('polynomial is not a single term')
        return next(iter(self._terms.items()))

    def variables(self):
        keys = set()
        for mono in self._terms:
            keys.update(mono.variables())
        return keys

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.constant(other)
        return isinstance(other, LaurentPoly) and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def _coerce(self, other):
        if isinstance(other, LaurentPoly):
            return other
        if isinstance(other, int):
            return LaurentPoly.constant(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for mono, coeff in other._terms.items():
            value = out.get(mono, 0) + coeff
            if value:
                out[mono] = value
            else:
                out.pop(mono, None)
        return LaurentPoly._wrap(out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly._wrap({m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not self._terms or not other._terms:
            return ZERO
        out = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                mono = m1 * m2
                value = out.get(mono, 0) + c1 * c2
                if value:
                    out[mono] = value
                else:
                    del out[mono]
        return LaurentPoly._wrap(out)

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            if not self.is_monomial():
                raise NegativePowerOfNonMonomial(f'cannot raise {self} to the power {n}')
            mono, coeff = self.single_term()
            if coeff not in (1, -1):
                raise NegativePowerOfNonMonomial(f'coefficient {coeff} of {self} is not a unit')
            return LaurentPoly.monomial(mono ** n, coeff ** (-n))
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def mul_monomial(self, mono, coeff=1):
        return LaurentPoly._wrap({m * mono: c * coeff for m, c in self._terms.items()})

    def sorted_terms(self):
        return sorted(self._terms.items(), key=lambda item: item[0]._exps)

    def __str__(self):
        return to_text(self)

    def __repr__(self):
        return f'LaurentPoly({to_text(self)!r})'

    def to_dict(self):
        return to_json(self)


ZERO = LaurentPoly._wrap({})
ONE = LaurentPoly.constant(1)


def poly_add(p, q):
    return p + q


def poly_sub(p, q):
    return p - q


def poly_mul(p, q):
    return p * q


def _dense(poly, index):
    """Map a polynomial to {exponent tuple: coeff} over an ordered variable list"""
    width = len(index)
    out = {}
    for mono, coeff in poly.terms():
        vec = [0] * width
        for key, e in mono.items():
            vec[index[key]] = e
        out[tuple(vec)] = coeff
    return out


def _strip_content(dense, width):
    """Shift exponents so every variable has minimum exponent 0"""
    low = [min(vec[n] for vec in dense) for n in range(width)]
    shifted = {tuple(v - l for v, l in zip(vec, low)): c for vec, c in dense.items()}
    return shifted, low


def _grlex(vec):
    return (sum(vec),) + vec


def exact_div(p, q):
    """Return s with s*q == p, or raise ExactDivisionFailed.

    Both operands are moved into the polynomial ring by stripping their
    monomial content; the quotient is then found by leading-term elimination
    under graded-lex order, which must leave a zero remainder.
    """
    if q.is_zero():
        raise DivisionByZero('division by the zero polynomial')
    if p.is_zero():
        return ZERO
    if q.is_monomial():
        mono, coeff = q.single_term()
        inverse = mono.inverse()
        out = {}
        for m, c in p.terms():
            if c % coeff:
                raise ExactDivisionFailed(f'coefficient {c} is not divisible by {coeff}', context=(p, q))
            out[m * inverse] = c // coeff
        return LaurentPoly._wrap(out)

    keys = sorted(p.variables() | q.variables())
    index = {key: n for n, key in enumerate(keys)}
    width = len(keys)
    dividend, low_p = _strip_content(_dense(p, index), width)
    divisor, low_q = _strip_content(_dense(q, index), width)

    lead_vec = max(divisor, key=_grlex)
    lead_coeff = divisor[lead_vec]
    divisor_terms = list(divisor.items())

    remainder = dict(dividend)
    heap = [tuple(-x for x in _grlex(vec)) for vec in remainder]
    heapq.heapify(heap)
    quotient = {}
    while remainder:
        entry = heapq.heappop(heap)
        vec = tuple(-x for x in entry[1:])
        coeff = remainder.get(vec)
        if coeff is None:
            continue
        step = tuple(a - b for a, b in zip(vec, lead_vec))
        if min(step, default=0) < 0 or coeff % lead_coeff:
            raise ExactDivisionFailed(f'{p} is not divisible by {q}', context=(p, q))
        factor = coeff // lead_coeff
        quotient[step] = factor
        for dvec, dcoeff in divisor_terms:
            target = tuple(a + b for a, b in zip(step, dvec))
            current = remainder.get(target)
            value = (current or 0) - factor * dcoeff
            if value:
                remainder[target] = value
                if current is None:
                    heapq.heappush(heap, tuple(-x for x in _grlex(target)))
            elif current is not None:
                del remainder[target]

    offset = [a - b for a, b in zip(low_p, low_q)]
    out = {}
    for vec, coeff in quotient.items():
        exps = tuple((keys[n], e + o) for n, (e, o) in enumerate(zip(vec, offset)) if e + o)
        out[Monomial._from_sorted(exps)] = coeff
    return LaurentPoly._wrap(out)


def substitute(p, image):
    """Ring-homomorphic substitution of variables by Laurent polynomials"""
    if not image:
        return p
    result = ZERO
    powers = {}
    for mono, coeff in p.terms():
        term = LaurentPoly.constant(coeff)
        kept = []
        for key, e in mono.items():
            if key not in image:
                kept.append((key, e))
                continue
            cached = powers.get((key, e))
            if cached is None:
                target = image[key]
                if e < 0 and not target.is_monomial():
                    raise NegativePowerOfNonMonomial(f'{key} occurs with exponent {e} and maps to {target}')
                cached = target ** e
                powers[(key, e)] = cached
            term = term * cached
        if kept:
            term = term.mul_monomial(Monomial._from_sorted(tuple(kept)))
        result = result + term
    return result


def spectral_shift(p, s):
    """Relabel every variable (f, i, r) as (f, i, r + s)"""
    if s == 0:
        return p
    return LaurentPoly._wrap({m.shifted(s): c for m, c in p.terms()})


def dimension(p):
    """Sum of coefficients: the value at all variables equal to 1"""
    return sum(c for _, c in p.terms())


def to_text(p):
    if p.is_zero():
        return '0'
    parts = []
    for mono, coeff in p.sorted_terms():
        sign = '-' if coeff < 0 else '+'
        size = abs(coeff)
        if mono.is_one():
            body = str(size)
        elif size == 1:
            body = str(mono)
        else:
            body = f'{size}*{mono}'
        if not parts:
            parts.append(body if sign == '+' else f'-{body}')
        else:
            parts.append(f'{sign} {body}')
    return ' '.join(parts)


_TERM_SPLIT = re.compile(r'(?<![\^\[,])(?=[+-])')
_FACTOR = re.compile(r'^([YZVyzv])\[(-?\d+),(-?\d+)\](?:\^(-?\d+))?$')


def parse_varkey(text):
    match = _FACTOR.match(text.strip())
    if not match or match.group(4) is not None:
        raise ValueError(f'Invalid variable {text!r}')
    return VarKey(match.group(1).upper(), int(match.group(2)), int(match.group(3)))


def parse(text):
    """Parse the text form produced by to_text"""
    compact = re.sub(r'\s+', '', text)
    if compact in ('', '0'):
        return ZERO
    terms = {}
    for chunk in _TERM_SPLIT.split(compact):
        if not chunk:
            continue
        sign = -1 if chunk[0] == '-' else 1
        body = chunk.lstrip('+-')
        if not body:
            raise ValueError(f'Invalid term in {text!r}')
        coeff = sign
        exps = {}
        for factor in body.split('*'):
            if factor.isdigit():
                coeff *= int(factor)
                continue
            match = _FACTOR.match(factor)
            if not match:
                raise ValueError(f'Invalid factor {factor!r} in {text!r}')
            key = VarKey(match.group(1).upper(), int(match.group(2)), int(match.group(3)))
            exps[key] = exps.get(key, 0) + int(match.group(4) or 1)
        mono = Monomial(exps)
        terms[mono] = terms.get(mono, 0) + coeff
    return LaurentPoly(terms)


def to_json(p):
    return [
        {'coeff': str(coeff), 'monomial': mono.to_dict()}
        for mono, coeff in p.sorted_terms()
    ]


def from_json(data):
    if not isinstance(data, list):
        raise ValueError('polynomial JSON must be a list of terms')
    terms = {}
    for entry in data:
        if 'coeff' not in entry or 'monomial' not in entry:
            raise ValueError('each term needs coeff and monomial')
        mono = Monomial({parse_varkey(name): int(e) for name, e in entry['monomial'].items()})
        terms[mono] = terms.get(mono, 0) + int(entry['coeff'])
    return LaurentPoly(terms)
