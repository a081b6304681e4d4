import re
from dataclasses import dataclass
from functools import cached_property, lru_cache

import sympy

from qaff.utils.errors import IndexOutOfRange, RankOutOfRange, UnknownLabel

LABEL_PATTERN = re.compile(r'^\s*([A-Ga-g])\s*_?\s*(\d+)\s*$')

# Smallest and largest rank per family; None means unbounded
RANK_BOUNDS = {
    'A': (1, None),
    'B': (2, None),
    'C': (3, None),
    'D': (4, None),
    'E': (6, 8),
    'F': (4, 4),
    'G': (2, 2),
}

TWIST = {'A': 1, 'D': 1, 'E': 1, 'B': 2, 'C': 2, 'F': 2, 'G': 3}


@dataclass(frozen=True)
class CartanData:
    """Cartan matrix C, symmetrizer d and twist t of a simple Lie type.

    Nodes are numbered 1..n. B2 and G2 follow the numbering used in the
    quiver figures (node 1 long); the other types use Bourbaki numbering.
    """
    label: str
    C: sympy.ImmutableMatrix
    d: tuple

    @property
    def rank(self):
        return self.C.rows

    @property
    def nodes(self):
        return tuple(range(1, self.rank + 1))

    @property
    def t(self):
        return max(self.d)

    @cached_property
    def B(self):
        return sympy.ImmutableMatrix(sympy.diag(*self.d) * self.C)

    @cached_property
    def _c_rows(self):
        return tuple(tuple(int(x) for x in self.C.row(i)) for i in range(self.rank))

    @cached_property
    def _b_rows(self):
        return tuple(tuple(int(x) for x in self.B.row(i)) for i in range(self.rank))

    def check_node(self, i):
        if i not in self.nodes:
            raise IndexOutOfRange(f'node {i} is not in 1..{self.rank} for {self.label}')
        return i

    def c(self, i, j):
        return self._c_rows[i - 1][j - 1]

    def b(self, i, j):
        return self._b_rows[i - 1][j - 1]

    def di(self, i):
        return self.d[i - 1]

    def neighbours(self, i):
        return tuple(j for j in self.nodes if j != i and self.c(i, j) != 0)

    @cached_property
    def max_offdiagonal_b(self):
        values = [abs(self.b(i, j)) for i in self.nodes for j in self.nodes if i != j]
        return max(values, default=0)

    @cached_property
    def inverse_C(self):
        return sympy.ImmutableMatrix(self.C.inv())

    def to_dict(self):
        """Convert Cartan data to dictionary"""
        return {
            'label': self.label,
            'rank': self.rank,
            'C': [list(row) for row in self._c_rows],
            'B': [list(row) for row in self._b_rows],
            'd': list(self.d),
            't': self.t,
        }


def parse_label(label):
    """Split a type tag such as 'B3' into ('B', 3)"""
    if not isinstance(label, str):
        raise UnknownLabel(f'Lie type must be a string, got {label!r}')
    match = LABEL_PATTERN.match(label)
    if not match:
        raise UnknownLabel(f'Unknown Lie type {label!r}')
    family, rank = match.group(1).upper(), int(match.group(2))
    low, high = RANK_BOUNDS[family]
    if rank < low or (high is not None and rank > high):
        bound = f'{low}' if high is None else f'{low}..{high}'
        raise RankOutOfRange(f'Rank {rank} out of range for type {family} (allowed: {bound}{"+" if high is None else ""})')
    return family, rank


def _dynkin(family, n):
    """Edges of the Dynkin diagram and the symmetrizer for a family/rank"""
    chain = [(i, i + 1) for i in range(1, n)]
    if family == 'A':
        return chain, (1,) * n
    if family == 'B':
        return chain, (2,) * (n - 1) + (1,)
    if family == 'C':
        return chain, (1,) * (n - 1) + (2,)
    if family == 'D':
        edges = [(i, i + 1) for i in range(1, n - 1)] + [(n - 2, n)]
        return edges, (1,) * n
    if family == 'E':
        edges = [(1, 3), (3, 4), (4, 5), (2, 4)] + [(i, i + 1) for i in range(5, n)]
        return edges, (1,) * n
    if family == 'F':
        return chain, (2, 2, 1, 1)
    if family == 'G':
        return chain, (3, 1)
    raise UnknownLabel(f'Unknown Lie type family {family!r}')


@lru_cache(maxsize=None)
def cartan_from_label(label):
    """Build CartanData from a type tag ('A3', 'b2', 'G2', ...)"""
    family, n = parse_label(label)
    edges, d = _dynkin(family, n)
    C = sympy.eye(n) * 2
    for i, j in edges:
        # the longer root of an edge gets -1 in its row
        long, short = (i, j) if d[i - 1] >= d[j - 1] else (j, i)
        C[long - 1, short - 1] = -1
        C[short - 1, long - 1] = -(d[long - 1] // d[short - 1])
    cd = CartanData(label=f'{family}{n}', C=sympy.ImmutableMatrix(C), d=tuple(d))
    assert cd.B.is_symmetric(), f'D*C is not symmetric for {cd.label}'
    assert min(d) == 1 and cd.t == TWIST[family]
    return cd


def symmetrized_matrix(cd):
    """Return B = D*C"""
    return cd.B


def simple_root_coords(cd, i):
    """alpha_i in the fundamental-weight basis: the i-th column of C"""
    cd.check_node(i)
    return tuple(cd.c(j, i) for j in cd.nodes)
