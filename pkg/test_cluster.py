import networkx as nx
import pytest

from qaff.models.cartan import cartan_from_label
from qaff.models.cluster import (
    ClusterVar,
    denominator_vector,
    enumerate_closure,
    exchange_check,
    initial_seed,
    mutate,
    mutate_sequence,
    realize_qchar,
)
from qaff.models.laurent import Monomial, Z, parse
from qaff.models.quiver import TruncationParams, Vertex
from qaff.models.tsystem import FundamentalProvider, TSystemSolver, highest_monomial, kr_table, loop_weight_label
from qaff.utils.errors import FrozenVertex, UnknownVertex

A2 = cartan_from_label('A2')
A3 = cartan_from_label('A3')
B2 = cartan_from_label('B2')
G2 = cartan_from_label('G2')


@pytest.fixture(scope='module')
def a3_seed():
    return initial_seed(A3, TruncationParams(1, Vertex(2, -1)))


@pytest.fixture(scope='module')
def a3_closure(a3_seed):
    return enumerate_closure(a3_seed, 100)


def test_initial_seeds(a3_seed):
    assert len(a3_seed.attach) == 6
    assert len(a3_seed.frozen) == 3
    assert a3_seed.variable(Vertex(2, -3)) == ClusterVar.initial(Vertex(2, -3))
    b2 = initial_seed(B2, TruncationParams(2, Vertex(1, -2)))
    assert len(b2.attach) == 6 and len(b2.frozen) == 3
    with pytest.raises(UnknownVertex):
        a3_seed.variable(Vertex(2, 1))


def test_exchange_relation_a3(a3_seed):
    k = Vertex(2, -1)
    new = mutate(a3_seed, k).variable(k)
    assert new.numerator == parse('Z[2,-3] + Z[1,-2]*Z[3,-2]')
    assert new.denominator == Monomial({Z(2, -1): 1})
    assert str(new) == '(Z[1,-2]*Z[3,-2] + Z[2,-3]) / (Z[2,-1])'


def test_exchange_relation_a2():
    seed = initial_seed(A2, TruncationParams(1, Vertex(2, -1)))
    k = Vertex(2, -1)
    new = mutate(seed, k).variable(k)
    assert new.as_laurent() == parse('Z[2,-3]*Z[2,-1]^-1 + Z[1,-2]*Z[2,-1]^-1')


def test_mutation_is_involutive(a3_seed):
    for k in a3_seed.mutable:
        back = mutate(mutate(a3_seed, k), k)
        assert back.attach == a3_seed.attach
        assert back.quiver == a3_seed.quiver
        assert exchange_check(a3_seed, k)
    with pytest.raises(FrozenVertex):
        mutate(a3_seed, Vertex(2, -3))
    with pytest.raises(UnknownVertex):
        mutate(a3_seed, Vertex(2, 7))


def test_a3_closure(a3_closure):
    assert a3_closure.closed
    assert len(a3_closure.variables) == 9
    assert len(a3_closure.frozen_variables) == 3
    assert a3_closure.seed_count == 14
    graph = a3_closure.exchange_graph
    assert graph.number_of_nodes() == 14
    assert graph.number_of_edges() == 21
    assert all(degree == 3 for _, degree in graph.degree())
    assert nx.is_connected(graph)


def test_closure_invariants(a3_closure):
    assert all(x.is_positive() for x in a3_closure.variables)
    for seed in a3_closure.seeds:
        for k in seed.mutable:
            assert exchange_check(seed, k)
        frozen_keys = {Z(v.i, v.r) for v in seed.frozen}
        for _, x in seed.attach:
            assert not frozen_keys & set(x.denominator.variables())


def test_denominator_vectors(a3_seed, a3_closure):
    # mutable vertices in order (1,-2), (2,-1), (3,-2)
    vectors = {denominator_vector(x, a3_seed) for x in a3_closure.variables}
    assert vectors == {
        (-1, 0, 0), (0, -1, 0), (0, 0, -1),
        (1, 0, 0), (0, 1, 0), (0, 0, 1),
        (1, 1, 0), (0, 1, 1), (1, 1, 1),
    }
    first = mutate(a3_seed, Vertex(2, -1)).variable(Vertex(2, -1))
    assert denominator_vector(first, a3_seed) == (0, 1, 0)


def test_b2_and_g2_closures():
    b2 = enumerate_closure(initial_seed(B2, TruncationParams(2, Vertex(1, -2))), 100)
    assert b2.closed and len(b2.variables) == 9 and b2.seed_count == 14

    g2 = enumerate_closure(initial_seed(G2, TruncationParams(3, Vertex(1, -3))), 200)
    assert g2.closed
    assert len(g2.variables) == 14
    assert len(g2.frozen_variables) == 4
    assert g2.seed_count == 42
    assert all(degree == 4 for _, degree in g2.exchange_graph.degree())


def test_closure_cap(a3_seed):
    partial = enumerate_closure(a3_seed, 5)
    assert not partial.closed
    assert partial.seed_count == 5
    with pytest.raises(ValueError):
        enumerate_closure(a3_seed, 0)


def test_mutation_sequence_keeps_frozen(a3_seed):
    seed = mutate_sequence(a3_seed, [Vertex(3, -2), Vertex(2, -1), Vertex(1, -2)])
    for v in a3_seed.frozen:
        assert seed.variable(v) == a3_seed.variable(v)


def test_realization_a2():
    cd = A2
    seed = initial_seed(cd, TruncationParams(1, Vertex(2, -1)))
    solver = TSystemSolver(cd, FundamentalProvider.builtin(cd))
    table = kr_table(cd, seed.quiver.vertices, 1, solver)
    assert table[Vertex(2, -3)] == solver.T(2, 2, -2)
    assert table[Vertex(1, -2)] == solver.T(1, 1, -1)

    x = mutate(seed, Vertex(2, -1)).variable(Vertex(2, -1))
    value = realize_qchar(x, table)
    assert value == solver.T(2, 1, -2)
    assert realize_qchar(ClusterVar.initial(Vertex(2, -3)), table) == solver.T(2, 2, -2)
    assert realize_qchar(ClusterVar.from_laurent(x.as_laurent() ** 2), table) == value * value


def test_b2_prime_labels():
    cd = B2
    seed = initial_seed(cd, TruncationParams(2, Vertex(1, -2)))
    closure = enumerate_closure(seed, 100)
    solver = TSystemSolver(cd, FundamentalProvider.builtin(cd))
    table = kr_table(cd, seed.quiver.vertices, 2, solver)
    labels = set()
    for x in closure.variables | closure.frozen_variables:
        q = realize_qchar(x, table)
        assert all(c > 0 for _, c in q.terms())
        top = highest_monomial(q, cd)
        assert q.coefficient(top) == 1
        labels.add(loop_weight_label(top))
    assert labels == {
        ((2, -1),), ((1, 0),), ((1, -2),), ((2, -3), (2, -1)), ((2, -5), (2, -3), (2, -1)),
        ((1, -4), (1, 0)), ((1, -4),), ((2, -3),), ((2, -5),), ((2, -5), (2, -3)),
        ((1, 0), (2, -5)), ((1, 0), (2, -5), (2, -3)),
    }
