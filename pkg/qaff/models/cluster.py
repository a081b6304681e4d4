import logging
from collections import deque
from dataclasses import dataclass, field

import networkx as nx

from qaff.models.laurent import ONE, LaurentPoly, Monomial, Z, exact_div, substitute
from qaff.models.quiver import QuiverGraph, Vertex, truncated_quiver
from qaff.utils.errors import ExactDivisionFailed, LaurentPhenomenonViolation, UnknownVertex

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ClusterVar:
    """Reduced fraction numerator / denominator with a monomial denominator"""
    numerator: LaurentPoly
    denominator: Monomial

    @classmethod
    def from_laurent(cls, p):
        """Split a Laurent polynomial into polynomial numerator and monomial denominator"""
        lowest = {}
        for mono in p.monomials():
            for key, e in mono.items():
                if e < 0 and e < lowest.get(key, 0):
                    lowest[key] = e
        denominator = Monomial({key: -e for key, e in lowest.items()})
        return cls(p.mul_monomial(denominator), denominator)

    @classmethod
    def initial(cls, v):
        return cls(LaurentPoly.var(Z(v.i, v.r)), Monomial())

    def as_laurent(self):
        return self.numerator.mul_monomial(self.denominator.inverse())

    def is_positive(self):
        return all(c > 0 for _, c in self.numerator.terms())

    def __str__(self):
        if self.denominator.is_one():
            return str(self.numerator)
        return f'({self.numerator}) / ({self.denominator})'

    def to_dict(self):
        return {'numerator': self.numerator.to_dict(), 'denominator': self.denominator.to_dict(), 'text': str(self)}


def _z_vertex(key):
    return Vertex(key.node, key.shift)


@dataclass(frozen=True)
class Seed:
    quiver: QuiverGraph
    attach: tuple  # sorted ((Vertex, ClusterVar), ...)
    frozen: frozenset = field(default_factory=frozenset)

    @property
    def variables(self):
        return dict(self.attach)

    def variable(self, v):
        try:
            return self.variables[v]
        except KeyError:
            raise UnknownVertex(f'{v} is not a vertex of the seed') from None

    @property
    def mutable(self):
        return sorted(self.quiver.mutable)

    def cluster(self):
        """Identity used for closure counting: the set of attached variables"""
        return frozenset(var for _, var in self.attach)

    def mutate(self, k):
        return mutate(self, k)

    def to_dict(self):
        """Convert seed to dictionary"""
        return {
            'quiver': self.quiver.to_dict(),
            'variables': [{'vertex': v.to_dict(), 'value': str(x)} for v, x in self.attach],
            'frozen': [v.to_dict() for v in sorted(self.frozen)],
        }


def initial_seed(cd, params):
    quiver = truncated_quiver(cd, params)
    attach = tuple(sorted((v, ClusterVar.initial(v)) for v in quiver.vertices))
    return Seed(quiver, attach, quiver.frozen)


def exchange_monomials(seed, k):
    """(product over arrows into k, product over arrows out of k) as Laurent polynomials"""
    variables = seed.variables
    incoming, outgoing = ONE, ONE
    for u, m in seed.quiver.incoming(k):
        incoming = incoming * variables[u].as_laurent() ** m
    for w, m in seed.quiver.outgoing(k):
        outgoing = outgoing * variables[w].as_laurent() ** m
    return incoming, outgoing


def mutate(seed, k):
    """Mutate the quiver and replace x_k by (in + out) / x_k"""
    if k not in seed.quiver.vertices:
        raise UnknownVertex(f'{k} is not a vertex of the seed')
    quiver = seed.quiver.mutate(k)
    incoming, outgoing = exchange_monomials(seed, k)
    old = seed.variables[k]
    try:
        new_value = exact_div(incoming + outgoing, old.as_laurent())
    except ExactDivisionFailed as exc:
        raise LaurentPhenomenonViolation(f'mutation at {k} does not give a Laurent polynomial') from exc
    new = ClusterVar.from_laurent(new_value)
    frozen_keys = {Z(v.i, v.r) for v in seed.frozen}
    if any(key in frozen_keys for key in new.denominator.variables()):
        raise LaurentPhenomenonViolation(f'frozen variable in the denominator after mutation at {k}: {new}')
    attach = tuple((v, new if v == k else x) for v, x in seed.attach)
    return Seed(quiver, attach, seed.frozen)


def mutate_sequence(seed, sequence):
    for k in sequence:
        seed = mutate(seed, k)
    return seed


def exchange_check(seed, k):
    """x_k * x_k' - (in + out) == 0 for the mutation at k"""
    incoming, outgoing = exchange_monomials(seed, k)
    mutated = mutate(seed, k)
    product = seed.variables[k].as_laurent() * mutated.variables[k].as_laurent()
    return (product - incoming - outgoing).is_zero()


@dataclass
class ClosureResult:
    variables: set
    frozen_variables: set
    seed_count: int
    closed: bool
    exchange_graph: nx.Graph
    seeds: list

    def to_dict(self):
        return {
            'mutable_variables': len(self.variables),
            'frozen_variables': len(self.frozen_variables),
            'seed_count': self.seed_count,
            'closed': self.closed,
            'exchange_edges': self.exchange_graph.number_of_edges(),
        }


def enumerate_closure(seed, max_seeds):
    """Breadth-first closure of a seed under mutation at mutable vertices"""
    if max_seeds < 1:
        raise ValueError('max_seeds must be at least 1')
    start = seed.cluster()
    seen = {start: seed}
    graph = nx.Graph()
    graph.add_node(start)
    queue = deque([seed])
    closed = True
    while queue:
        current = queue.popleft()
        current_key = current.cluster()
        for k in current.mutable:
            nxt = mutate(current, k)
            key = nxt.cluster()
            if key not in seen:
                if len(seen) >= max_seeds:
                    closed = False
                    continue
                seen[key] = nxt
                graph.add_node(key)
                queue.append(nxt)
            graph.add_edge(current_key, key)
        logger.debug('closure frontier %d, seeds %d', len(queue), len(seen))
    mutable = set(seed.mutable)
    variables = {x for s in seen.values() for v, x in s.attach if v in mutable}
    frozen_variables = {x for v, x in seed.attach if v in seed.frozen}
    logger.info('closure: %d seeds, %d mutable variables, closed=%s', len(seen), len(variables), closed)
    return ClosureResult(variables, frozen_variables, len(seen), closed, graph, list(seen.values()))


def denominator_vector(x, s0):
    """Denominator exponents over the mutable vertices of s0; initial variables give -e_v"""
    mutable = s0.mutable
    initial = {var: v for v, var in s0.attach}
    if x in initial and initial[x] in mutable:
        return tuple(-1 if v == initial[x] else 0 for v in mutable)
    return tuple(x.denominator.exponent(Z(v.i, v.r)) for v in mutable)


def realize_qchar(x, table):
    """Image of a cluster variable under z_v -> chi_q(KR module of v)"""
    image = {Z(v.i, v.r): poly for v, poly in table.items()}
    numerator = substitute(x.numerator, image)
    denominator = ONE
    for key, e in x.denominator.items():
        if key not in image:
            raise KeyError(f'no q-character for {_z_vertex(key)}')
        denominator = denominator * image[key] ** e
    return exact_div(numerator, denominator)
