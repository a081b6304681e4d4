import logging
import re
from dataclasses import dataclass, field
from typing import NamedTuple

import networkx as nx

from qaff.utils.errors import EmptyTruncation, FrozenVertex, UnknownVertex, VertexNotInTruncation

logger = logging.getLogger(__name__)

VERTEX_PATTERN = re.compile(r'^\s*\(\s*(-?\d+)\s*,\s*(-?\d+)\s*\)\s*$')


class Vertex(NamedTuple):
    i: int
    r: int

    def __str__(self):
        return f'({self.i},{self.r})'

    def shifted(self, s):
        return Vertex(self.i, self.r + s)

    def to_dict(self):
        return [self.i, self.r]


def parse_vertex(text):
    """Parse '(i,r)' into a Vertex"""
    match = VERTEX_PATTERN.match(text)
    if not match:
        raise ValueError(f'Invalid vertex {text!r}, expected (i,r)')
    return Vertex(int(match.group(1)), int(match.group(2)))


class KRIndex(NamedTuple):
    """Kirillov-Reshetikhin module W^(i)_{k,q^r}"""
    i: int
    k: int
    r: int

    def __str__(self):
        return f'W^({self.i})_{{{self.k},q^{self.r}}}'

    def to_dict(self):
        return {'i': self.i, 'k': self.k, 'r': self.r}


@dataclass(frozen=True)
class TruncationParams:
    ell: int
    anchor: Vertex

    def to_dict(self):
        return {'ell': self.ell, 'anchor': self.anchor.to_dict()}


def default_anchor(cd):
    return Vertex(1, -cd.di(1))


def arrows_from(cd, v):
    """Targets of the arrows of the infinite quiver leaving v"""
    cd.check_node(v.i)
    return [Vertex(j, v.r + cd.b(v.i, j)) for j in cd.nodes if cd.b(v.i, j) != 0]


def arrows_into(cd, v):
    """Sources of the arrows of the infinite quiver entering v"""
    cd.check_node(v.i)
    return [Vertex(j, v.r - cd.b(j, v.i)) for j in cd.nodes if cd.b(j, v.i) != 0]


def component_class(cd, v):
    """Parity class (0 or 1) of the connected component containing v.

    With eps_1 = 0 and eps_j = eps_i + b_ij (mod 2) along Dynkin edges, every
    arrow preserves r + eps_i (mod 2).
    """
    eps = _parities(cd)
    return (v.r + eps[v.i]) % 2


def _parities(cd):
    eps = {1: 0}
    stack = [1]
    while stack:
        i = stack.pop()
        for j in cd.neighbours(i):
            if j not in eps:
                eps[j] = (eps[i] + cd.b(i, j)) % 2
                stack.append(j)
    return eps


def in_component(cd, anchor, v):
    return component_class(cd, anchor) == component_class(cd, v)


def window_graph(cd, lo, hi):
    """The infinite quiver restricted to lo <= r <= hi, as a networkx DiGraph"""
    graph = nx.DiGraph()
    for i in cd.nodes:
        for r in range(lo, hi + 1):
            graph.add_node(Vertex(i, r))
    for v in list(graph.nodes):
        for w in arrows_from(cd, v):
            if lo <= w.r <= hi:
                graph.add_edge(v, w)
    return graph


def component(cd, anchor, window):
    """Vertices of anchor's connected component with r in the window"""
    cd.check_node(anchor.i)
    lo, hi = window
    if not lo <= anchor.r <= hi:
        raise ValueError(f'window [{lo},{hi}] does not contain anchor {anchor}')
    pad = 2 * max(cd.max_offdiagonal_b, 2 * cd.t)
    graph = window_graph(cd, lo - pad, hi + pad)
    reached = nx.node_connected_component(graph.to_undirected(as_view=True), anchor)
    return {v for v in reached if lo <= v.r <= hi}


def truncation_range(cd, ell):
    """Smallest and largest r occurring in V_ell"""
    return -2 * ell - 1 - cd.t, -1


def in_truncation(cd, v, ell):
    return -2 * ell - 1 <= v.r + cd.di(v.i) <= 0


def is_frozen(cd, v, ell):
    return v.r - cd.di(v.i) < -2 * ell - 1


def kr_label(cd, v, ell):
    """KR module attached to z_(i,r): W^(i)_{m, q^(r+d_i)}"""
    cd.check_node(v.i)
    if not in_truncation(cd, v, ell):
        raise VertexNotInTruncation(f'{v} is not in V_{ell} for {cd.label}')
    d = cd.di(v.i)
    m = (-v.r - d) // (2 * d) + 1
    return KRIndex(v.i, m, v.r + d)


@dataclass(frozen=True)
class QuiverGraph:
    """Finite quiver without loops or 2-cycles; arrows are (src, dst, multiplicity)"""
    vertices: frozenset
    arrows: frozenset
    frozen: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        seen = set()
        for src, dst, mult in self.arrows:
            if src == dst:
                raise ValueError(f'loop at {src}')
            if src not in self.vertices or dst not in self.vertices:
                raise UnknownVertex(f'arrow {src}->{dst} leaves the vertex set')
            if mult <= 0:
                raise ValueError(f'arrow {src}->{dst} has multiplicity {mult}')
            if (dst, src) in seen:
                raise ValueError(f'2-cycle between {src} and {dst}')
            seen.add((src, dst))
        if not self.frozen <= self.vertices:
            raise UnknownVertex('frozen vertices must be vertices of the quiver')

    @classmethod
    def from_counts(cls, vertices, counts, frozen=()):
        arrows = frozenset((u, v, m) for (u, v), m in counts.items() if m > 0)
        return cls(frozenset(vertices), arrows, frozenset(frozen))

    def counts(self):
        return {(u, v): m for u, v, m in self.arrows}

    def multiplicity(self, u, v):
        for src, dst, m in self.arrows:
            if src == u and dst == v:
                return m
        return 0

    def exchange_entry(self, counts, u, v):
        return counts.get((u, v), 0) - counts.get((v, u), 0)

    def incoming(self, k):
        return [(u, m) for u, v, m in self.arrows if v == k]

    def outgoing(self, k):
        return [(v, m) for u, v, m in self.arrows if u == k]

    @property
    def mutable(self):
        return self.vertices - self.frozen

    def mutate(self, k):
        """Matrix mutation of the exchange matrix b_uv = #(u->v) - #(v->u)"""
        if k not in self.vertices:
            raise UnknownVertex(f'{k} is not a vertex of the quiver')
        if k in self.frozen:
            raise FrozenVertex(f'cannot mutate at frozen vertex {k}')
        counts = self.counts()
        touching = {u for u, v in counts if v == k} | {v for u, v in counts if u == k}
        result = {}
        for (u, v), m in counts.items():
            if u == k or v == k:
                result[(v, u)] = m
            else:
                result[(u, v)] = m
        for u in touching:
            b_uk = self.exchange_entry(counts, u, k)
            if b_uk <= 0:
                continue
            for w in touching:
                b_kw = self.exchange_entry(counts, k, w)
                if w == u or b_kw <= 0:
                    continue
                result[(u, w)] = result.get((u, w), 0) + b_uk * b_kw
        # cancel 2-cycles
        for (u, v) in list(result):
            if (u, v) not in result or (v, u) not in result:
                continue
            net = result[(u, v)] - result[(v, u)]
            del result[(u, v)], result[(v, u)]
            if net > 0:
                result[(u, v)] = net
            elif net < 0:
                result[(v, u)] = -net
        return QuiverGraph.from_counts(self.vertices, result, self.frozen)

    def to_networkx(self, frozen_arrows=True):
        graph = nx.DiGraph()
        for v in self.vertices:
            graph.add_node(v, frozen=v in self.frozen)
        for u, v, m in self.arrows:
            if not frozen_arrows and u in self.frozen and v in self.frozen:
                continue
            graph.add_edge(u, v, weight=m)
        return graph

    def to_dict(self):
        """Convert quiver to dictionary"""
        arrows = []
        for u, v, m in sorted(self.arrows):
            arrows.extend([[u.to_dict(), v.to_dict()]] * m)
        return {
            'vertices': [v.to_dict() for v in sorted(self.vertices)],
            'arrows': arrows,
            'frozen': [v.to_dict() for v in sorted(self.frozen)],
        }


def truncated_quiver(cd, params):
    """Full subquiver on V_ell of the anchor's component, with frozen vertices"""
    if params.ell < 0:
        raise ValueError('ell must be nonnegative')
    lo, hi = truncation_range(cd, params.ell)
    window = (min(lo, params.anchor.r), max(hi, params.anchor.r))
    vertices = {v for v in component(cd, params.anchor, window) if in_truncation(cd, v, params.ell)}
    if not vertices:
        raise EmptyTruncation(f'V_{params.ell} of {cd.label} is empty for anchor {params.anchor}')
    counts = {}
    for v in vertices:
        for w in arrows_from(cd, v):
            if w in vertices:
                counts[(v, w)] = counts.get((v, w), 0) + 1
    frozen = {v for v in vertices if is_frozen(cd, v, params.ell)}
    logger.debug('truncated quiver %s ell=%s: %d vertices, %d frozen', cd.label, params.ell, len(vertices), len(frozen))
    return QuiverGraph.from_counts(vertices, counts, frozen)


def quivers_isomorphic(a, b):
    """Isomorphism keeping frozen flags and multiplicities, ignoring frozen-frozen arrows"""
    return nx.is_isomorphic(
        a.to_networkx(frozen_arrows=False),
        b.to_networkx(frozen_arrows=False),
        node_match=lambda x, y: x['frozen'] == y['frozen'],
        edge_match=lambda x, y: x['weight'] == y['weight'],
    )


def render_layout(cd, quiver, ell):
    """Text grid of the truncated quiver: rows by r, columns by node, frozen in brackets"""
    rows = sorted({v.r for v in quiver.vertices}, reverse=True)
    width = 12
    lines = ['r'.rjust(5) + ''.join(f'i={i}'.center(width) for i in cd.nodes)]
    for r in rows:
        cells = []
        for i in cd.nodes:
            v = Vertex(i, r)
            if v not in quiver.vertices:
                cells.append(''.center(width))
            elif v in quiver.frozen:
                cells.append(f'[{v}]'.center(width))
            else:
                cells.append(str(v).center(width))
        lines.append(str(r).rjust(5) + ''.join(cells))
    lines.append('')
    lines.append('arrows:')
    for u, v, m in sorted(quiver.arrows):
        lines.append(f'  {u} -> {v}' + (f' x{m}' if m > 1 else ''))
    lines.append('')
    lines.append('labels:')
    for v in sorted(quiver.vertices, key=lambda x: (-x.r, x.i)):
        mark = ' (frozen)' if v in quiver.frozen else ''
        lines.append(f'  z{v} -> {kr_label(cd, v, ell)}{mark}')
    return '\n'.join(lines)
