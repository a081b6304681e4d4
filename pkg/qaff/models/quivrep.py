"""Quiver with potential on the infinite quiver, thin representations and
the geometric q-character formula.

Paths are stored in traversal order: PathWord((a1, a2)) means a1 first.
"""
import logging
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

from qaff.models.laurent import ONE, LaurentPoly, Monomial, V, Y, Z, substitute
from qaff.models.quiver import Vertex, arrows_from, arrows_into
from qaff.utils.errors import InvalidQCharacter, NotAdjacent, NotInImageLattice, NotThin, UnsupportedType

logger = logging.getLogger(__name__)

# Largest support enumerated by brute force
MAX_SUPPORT = 20


@dataclass(frozen=True)
class PathWord:
    arrows: tuple

    def __post_init__(self):
        if not self.arrows:
            raise ValueError('a path needs at least one arrow')
        for (_, head), (tail, _) in zip(self.arrows, self.arrows[1:]):
            if head != tail:
                raise ValueError(f'arrows do not compose at {head} / {tail}')

    @property
    def source(self):
        return self.arrows[0][0]

    @property
    def target(self):
        return self.arrows[-1][1]

    def vertices(self):
        return [self.source] + [dst for _, dst in self.arrows]

    def __len__(self):
        return len(self.arrows)

    def __str__(self):
        return ' -> '.join(str(v) for v in self.vertices())

    def to_dict(self):
        return [[src.to_dict(), dst.to_dict()] for src, dst in self.arrows]


@dataclass(frozen=True)
class Relation:
    """Cyclic derivative of the potential with respect to one arrow"""
    arrow: tuple
    terms: tuple  # ((PathWord, coeff), ...)

    @property
    def source(self):
        return self.arrow[1]

    @property
    def target(self):
        return self.arrow[0]

    def __str__(self):
        body = ' + '.join(f'{c}*[{p}]' if c != 1 else f'[{p}]' for p, c in self.terms)
        return f'd/d({self.arrow[0]}->{self.arrow[1]}): {body}'

    def to_dict(self):
        return {
            'arrow': [self.arrow[0].to_dict(), self.arrow[1].to_dict()],
            'terms': [{'path': p.to_dict(), 'coeff': c} for p, c in self.terms],
        }


@dataclass(frozen=True)
class ThinRep:
    """Representation with vertex spaces of dimension <= 1.

    arrows holds ((src, dst), scalar) pairs with nonzero Fraction scalars;
    dims records declared dimensions other than 1 (only used to reject input).
    """
    support: frozenset
    arrows: tuple = ()
    dims: tuple = field(default=())

    def __post_init__(self):
        for (src, dst), scalar in self.arrows:
            if src not in self.support or dst not in self.support:
                raise ValueError(f'arrow {src}->{dst} leaves the support')
            if scalar == 0:
                raise ValueError(f'arrow {src}->{dst} has zero scalar')

    @classmethod
    def build(cls, support, arrowvals=None):
        arrows = tuple(sorted(((u, v), Fraction(s)) for (u, v), s in (arrowvals or {}).items() if s))
        return cls(frozenset(support), arrows)

    @property
    def arrowvals(self):
        return dict(self.arrows)

    def arrowval(self, u, v):
        return self.arrowvals.get((u, v), Fraction(0))

    def is_thin(self):
        return all(dim <= 1 for _, dim in self.dims)

    def shifted(self, s):
        return ThinRep.build({v.shifted(s) for v in self.support},
                             {(u.shifted(s), v.shifted(s)): c for (u, v), c in self.arrows})

    def to_dict(self):
        """Convert representation to dictionary"""
        return {
            'support': [v.to_dict() for v in sorted(self.support)],
            'arrows': [{'from': u.to_dict(), 'to': v.to_dict(), 'scalar': str(c)} for (u, v), c in self.arrows],
        }

    @classmethod
    def from_dict(cls, data, cd=None):
        if 'support' not in data:
            raise ValueError('support is required')
        support = {Vertex(int(i), int(r)) for i, r in data['support']}
        dims = []
        for (i, r), n in data.get('dims', []):
            if int(n) != 1:
                dims.append((Vertex(int(i), int(r)), int(n)))
        arrowvals = {}
        for entry in data.get('arrows', []):
            u = Vertex(*map(int, entry['from']))
            v = Vertex(*map(int, entry['to']))
            if cd is not None and v not in arrows_from(cd, u):
                raise ValueError(f'{u}->{v} is not an arrow of the quiver for {cd.label}')
            arrowvals[(u, v)] = Fraction(str(entry.get('scalar', '1')))
        rep = cls.build(support, arrowvals)
        return cls(rep.support, rep.arrows, tuple(sorted(dims)))


class ModuleSum:
    """Direct sum of thin representations, kept as a multiset"""

    def __init__(self, summands=None):
        self.summands = Counter(summands or ())

    def __eq__(self, other):
        return isinstance(other, ModuleSum) and self.summands == other.summands

    def f_polynomial(self):
        result = ONE
        for rep, count in self.summands.items():
            result = result * f_polynomial(rep) ** count
        return result


def direct_sum(a, b):
    """Direct sum of representations; None stands for the zero module"""
    total = ModuleSum()
    for part in (a, b):
        if part is None:
            continue
        if isinstance(part, ModuleSum):
            total.summands.update(part.summands)
        elif part.support:
            total.summands[part] += 1
    return total


def potential_cycle(cd, i, j, r):
    """The oriented cycle gamma_{i,j,r} as a PathWord based at (i,r)"""
    cd.check_node(i)
    cd.check_node(j)
    if i == j or cd.c(i, j) >= 0:
        raise NotAdjacent(f'nodes {i} and {j} are not adjacent in {cd.label}')
    b_ij, b_ii = cd.b(i, j), cd.b(i, i)
    start = Vertex(i, r)
    middle = Vertex(j, r + b_ij)
    back = Vertex(i, r + 2 * b_ij)
    arrows = [(start, middle), (middle, back)]
    current = back
    for _ in range(-cd.c(i, j)):
        nxt = current.shifted(b_ii)
        arrows.append((current, nxt))
        current = nxt
    assert current == start
    return PathWord(tuple(arrows))


def _canonical_rotation(arrows):
    return min(arrows[n:] + arrows[:n] for n in range(len(arrows)))


def potential_cycles(cd, window):
    """All cycles gamma_{i,j,r} lying inside the r-window, up to rotation"""
    lo, hi = window
    cycles = {}
    for i in cd.nodes:
        for j in cd.neighbours(i):
            for r in range(lo, hi + 1):
                cycle = potential_cycle(cd, i, j, r)
                if all(lo <= v.r <= hi for v in cycle.vertices()):
                    cycles.setdefault(_canonical_rotation(cycle.arrows), cycle)
    return [cycles[key] for key in sorted(cycles)]


def relations(cd, window):
    """Cyclic derivatives of the potential for every arrow of the window"""
    derivatives = {}
    for cycle in potential_cycles(cd, window):
        arrows = cycle.arrows
        for n, arrow in enumerate(arrows):
            rest = arrows[n + 1:] + arrows[:n]
            terms = derivatives.setdefault(arrow, Counter())
            terms[PathWord(rest)] += 1
    result = []
    for arrow in sorted(derivatives):
        terms = tuple(sorted(((p, c) for p, c in derivatives[arrow].items() if c),
                             key=lambda item: item[0].arrows))
        result.append(Relation(arrow, terms))
    return result


def relation_window(cd, vertices):
    """An r-window containing every relation that can touch the given vertices"""
    rs = [v.r for v in vertices] or [0]
    pad = 2 * cd.max_offdiagonal_b + 2 * cd.t
    return min(rs) - pad, max(rs) + pad


def _path_value(rep, path, vals):
    value = Fraction(1)
    for arrow in path.arrows:
        scalar = vals.get(arrow)
        if not scalar:
            return Fraction(0)
        value *= scalar
    return value


def check_relations(rep, cd, window=None):
    """True iff every cyclic-derivative relation acts as zero on rep"""
    if window is None:
        window = relation_window(cd, rep.support)
    vals = rep.arrowvals
    for relation in relations(cd, window):
        if relation.source not in rep.support or relation.target not in rep.support:
            continue
        total = sum((c * _path_value(rep, p, vals) for p, c in relation.terms), Fraction(0))
        if total != 0:
            logger.debug('relation %s fails on representation', relation)
            return False
    return True


def closed_subsets(rep):
    """Subsets of the support closed under the nonzero arrows (subrepresentations)"""
    order = sorted(rep.support)
    if len(order) > MAX_SUPPORT:
        raise ValueError(f'support of size {len(order)} is too large to enumerate')
    position = {v: n for n, v in enumerate(order)}
    successors = [0] * len(order)
    for (u, v), _ in rep.arrows:
        successors[position[u]] |= 1 << position[v]
    subsets = []
    for mask in range(1 << len(order)):
        if all(successors[n] & ~mask == 0 for n in range(len(order)) if mask >> n & 1):
            subsets.append(frozenset(order[n] for n in range(len(order)) if mask >> n & 1))
    return subsets


def f_polynomial(rep):
    """F-polynomial in the V variables: one term per subrepresentation"""
    if isinstance(rep, ModuleSum):
        return rep.f_polynomial()
    if not rep.is_thin():
        raise NotThin('F-polynomials are only computed for thin representations')
    terms = Counter()
    for subset in closed_subsets(rep):
        terms[Monomial({V(v.i, v.r): 1 for v in subset})] += 1
    return LaurentPoly(terms)


def yhat(cd, v):
    """Monomial in Z: arrows leaving v count +1, arrows entering v count -1"""
    exps = Counter()
    for w in arrows_from(cd, v):
        exps[Z(w.i, w.r)] += 1
    for u in arrows_into(cd, v):
        exps[Z(u.i, u.r)] -= 1
    return Monomial(exps)


def z_to_y(cd, m):
    """Rewrite a Z-monomial in the variables Y_{j,s-d_j} = z_(j,s-2d_j) / z_(j,s)"""
    columns = {}
    for key, e in m.items():
        if key.family != 'Z':
            raise ValueError(f'{key} is not a Z variable')
        d = cd.di(key.node)
        columns.setdefault((key.node, key.shift % (2 * d)), {})[key.shift] = e
    exps = {}
    for (j, _), column in columns.items():
        d = cd.di(j)
        running = 0
        for s in range(min(column), max(column) + 1, 2 * d):
            running += column.get(s, 0)
            if running:
                exps[Y(j, s + d)] = running
        if running:
            raise NotInImageLattice(f'z-column of node {j} has total degree {running} in {m}')
    return Monomial(exps)


def geometric_qchar(cd, i, r, K):
    """q-character of L((varpi_i, q^(r-d_i))) as Y_{i,r-d_i} * F_K(yhat)"""
    F = f_polynomial(K)
    image = {}
    for key in F.variables():
        image[key] = LaurentPoly.monomial(yhat(cd, Vertex(key.node, key.shift)))
    in_z = substitute(F, image)
    terms = Counter()
    for mono, coeff in in_z.terms():
        terms[z_to_y(cd, mono)] += coeff
    result = LaurentPoly(terms).mul_monomial(Monomial.var(Y(i, r - cd.di(i))))
    if any(c < 0 for _, c in result.terms()):
        raise InvalidQCharacter(f'geometric q-character at ({i},{r}) has a negative coefficient')
    return result


def geometric_qchar_standard(cd, summands):
    """Product of geometric q-characters over ((i, r), K) pairs"""
    result = ONE
    for (i, r), K in summands:
        result = result * geometric_qchar(cd, i, r, K)
    return result


BUILTIN_TYPES = ('A1', 'A2', 'B2')


def builtin_K(cd, i, r):
    """The thin module K_(i,r) for the types where it is known explicitly"""
    cd.check_node(i)
    one = Fraction(1)
    if cd.label == 'A1':
        return ThinRep.build({Vertex(1, r)})
    if cd.label == 'A2':
        j = 3 - i
        sink, top = Vertex(i, r), Vertex(j, r + 1)
        return ThinRep.build({sink, top}, {(top, sink): one})
    if cd.label == 'B2':
        if i == 1:
            sink, a, b, c = Vertex(1, r), Vertex(2, r + 2), Vertex(2, r), Vertex(1, r + 2)
            return ThinRep.build({sink, a, b, c}, {(a, sink): one, (b, a): one, (c, b): one})
        sink, a, b = Vertex(2, r), Vertex(1, r + 2), Vertex(2, r + 4)
        return ThinRep.build({sink, a, b}, {(b, a): one, (a, sink): one})
    raise UnsupportedType(f'no built-in K modules for {cd.label}; supply a representation file')
