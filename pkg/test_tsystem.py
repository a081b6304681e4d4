from concurrent.futures import ThreadPoolExecutor

import pytest

from qaff.models.cartan import cartan_from_label
from qaff.models.laurent import ONE, LaurentPoly, VarKey, dimension, parse, spectral_shift
from qaff.models.quiver import KRIndex, Vertex
from qaff.models.tsystem import (
    FundamentalProvider,
    TSystemSolver,
    classical_character,
    dominant_monomial,
    highest_monomial,
    kr_qchar,
    loop_weight_label,
    s_term,
    verify_tsystem,
)
from qaff.utils.errors import IndexOutOfRange, InvalidQCharacter, MissingFundamental, UnsupportedType

A1 = cartan_from_label('A1')
A2 = cartan_from_label('A2')
B2 = cartan_from_label('B2')
G2 = cartan_from_label('G2')


def builtin_solver(cd, anchor=None):
    return TSystemSolver(cd, FundamentalProvider.builtin(cd), anchor)


def fake_T(j, k, r):
    return LaurentPoly.var(VarKey('V', 10 * j + k, r))


def test_builtin_fundamentals():
    a1 = FundamentalProvider.builtin(A1)
    assert a1.qchar(1, 0) == parse('Y[1,0] + Y[1,2]^-1')
    a2 = FundamentalProvider.builtin(A2)
    assert a2.qchar(1, 0) == parse('Y[1,0] + Y[1,2]^-1*Y[2,1] + Y[2,3]^-1')
    assert a2.qchar(2, 4) == parse('Y[2,4] + Y[1,5]*Y[2,6]^-1 + Y[1,7]^-1')

    b2 = FundamentalProvider.builtin(B2)
    assert b2.qchar(1, 0) == parse(
        'Y[1,0] + Y[1,4]^-1*Y[2,1]*Y[2,3] + Y[2,1]*Y[2,5]^-1 + Y[1,2]*Y[2,3]^-1*Y[2,5]^-1 + Y[1,6]^-1'
    )
    assert b2.qchar(2, 0) == parse('Y[2,0] + Y[1,1]*Y[2,2]^-1 + Y[1,5]^-1*Y[2,4] + Y[2,6]^-1')

    with pytest.raises(UnsupportedType):
        FundamentalProvider.builtin(cartan_from_label('A3'))


def test_a1_recurrence():
    solver = builtin_solver(A1)
    assert solver.T(1, 0, 5) == ONE
    assert solver.T(1, 2, 0) == parse('Y[1,0]*Y[1,2] + Y[1,0]*Y[1,4]^-1 + Y[1,2]^-1*Y[1,4]^-1')
    for k in range(7):
        assert dimension(solver.T(1, k, 0)) == k + 1
        assert solver.T(1, k, 0).coefficient(dominant_monomial(A1, KRIndex(1, k, 0))) == 1


def test_shift_equivariance():
    solver = builtin_solver(A2)
    base = solver.T(2, 3, 0)
    for r in (-5, -1, 2):
        assert solver.T(2, 3, r) == spectral_shift(base, r)


@pytest.mark.parametrize('label, kmax, window', [('A1', 5, range(-10, 10)), ('A2', 4, range(-3, 3))])
def test_simply_laced_tsystem(label, kmax, window):
    cd = cartan_from_label(label)
    solver = builtin_solver(cd)
    for i in cd.nodes:
        for k in range(1, kmax + 1):
            for r in window:
                assert solver.verify(i, k, r)


def test_b2_tsystem():
    solver = builtin_solver(B2)
    for i in B2.nodes:
        for k in range(1, 3):
            for r in range(-2, 2):
                assert solver.verify(i, k, r)
    # T^(2)_{2,r-1} = T^(2)_{1,r+1} T^(2)_{1,r-1} - T^(1)_{1,r}
    assert solver.T(2, 2, -1) == solver.T(2, 1, 1) * solver.T(2, 1, -1) - solver.T(1, 1, 0)
    assert len(solver.T(2, 2, 0)) == 11
    assert dimension(solver.T(2, 2, 0)) == 11
    assert dimension(solver.T(1, 2, 0)) == 14
    assert all(c > 0 for _, c in solver.T(1, 2, 0).terms())


def test_b2_tsystem_to_level_four():
    solver = builtin_solver(B2)
    for i in B2.nodes:
        for k in range(1, 5):
            failures = [r for r in range(-8, 8) if not solver.verify(i, k, r)]
            assert not failures, (i, k, failures)
    assert [dimension(solver.T(1, k, 0)) for k in range(1, 5)] == [5, 14, 30, 55]
    assert [dimension(solver.T(2, k, 0)) for k in range(1, 5)] == [4, 11, 24, 46]


def test_shared_solver_across_threads():
    shared = builtin_solver(B2)
    indices = [(i, k, r) for i in B2.nodes for k in range(1, 5) for r in (-2, 0, 3)]
    with ThreadPoolExecutor(max_workers=4) as pool:
        values = list(pool.map(shared.kr_qchar, indices))
    fresh = builtin_solver(B2)
    assert values == [fresh.kr_qchar(idx) for idx in indices]


def test_s_terms():
    assert s_term(A2, 1, 3, 4, fake_T) == fake_T(2, 3, 4)
    assert s_term(B2, 1, 2, 0, fake_T) == fake_T(2, 4, -1)
    assert s_term(B2, 2, 2, 0, fake_T) == fake_T(1, 1, 0) * fake_T(1, 1, 2)
    assert s_term(B2, 2, 3, 0, fake_T) == fake_T(1, 2, 0) * fake_T(1, 1, 2)
    assert s_term(G2, 1, 1, 0, fake_T) == fake_T(2, 3, -2)
    assert s_term(G2, 2, 4, 0, fake_T) == fake_T(1, 2, 0) * fake_T(1, 1, 2) * fake_T(1, 1, 4)
    assert s_term(G2, 2, 3, 0, fake_T) == fake_T(1, 1, 0) * fake_T(1, 1, 2) * fake_T(1, 1, 4)
    assert s_term(A1, 1, 2, 0, fake_T) == ONE


def test_anchor_lattice():
    solver = builtin_solver(A1, anchor=Vertex(1, -1))
    assert solver.kr_qchar((1, 1, 0)) == solver.T(1, 1, 0)
    with pytest.raises(IndexOutOfRange):
        solver.kr_qchar((1, 1, 1))
    with pytest.raises(IndexOutOfRange):
        solver.kr_qchar((1, -1, 0))
    with pytest.raises(IndexOutOfRange):
        solver.kr_qchar((2, 1, 0))


def test_module_functions():
    fp = FundamentalProvider.builtin(A2)
    assert kr_qchar(A2, KRIndex(1, 2, 0), fp) == builtin_solver(A2).T(1, 2, 0)
    assert verify_tsystem(A2, 2, 2, 1, fp)
    table = builtin_solver(A2).table([(1, 1, 0), (2, 2, 3)])
    assert set(table) == {KRIndex(1, 1, 0), KRIndex(2, 2, 3)}


def test_bad_fundamentals():
    with pytest.raises(InvalidQCharacter):
        FundamentalProvider.from_dict(A1, {'fundamentals': {'1': 'Y[1,2]'}})

    # T_2 = Y[1,0]*Y[1,2] - 1 is not a q-character
    solver = TSystemSolver(A1, FundamentalProvider.from_dict(A1, {'fundamentals': {'1': 'Y[1,0]'}}))
    with pytest.raises(InvalidQCharacter):
        solver.T(1, 2, 0)

    partial = FundamentalProvider.from_dict(A2, {'fundamentals': {'1': 'Y[1,0] + Y[1,2]^-1*Y[2,1] + Y[2,3]^-1'}})
    with pytest.raises(MissingFundamental):
        TSystemSolver(A2, partial).T(2, 1, 0)

    with pytest.raises(UnsupportedType):
        FundamentalProvider.from_dict(A1, {'type': 'B2', 'fundamentals': {}})


def test_fundamentals_round_trip(tmp_path):
    fp = FundamentalProvider.builtin(B2)
    again = FundamentalProvider.from_dict(B2, fp.to_dict())
    assert again.base == fp.base

    path = tmp_path / 'b2.json'
    path.write_text('{"type": "b2", "base_shift": 2, "fundamentals": {"2": "Y[2,2] + Y[2,4]^-1"}}')
    loaded = FundamentalProvider.from_file(B2, path)
    assert loaded.qchar(2, 0) == parse('Y[2,0] + Y[2,2]^-1')


def test_weights_and_labels():
    solver = builtin_solver(A1)
    t2 = solver.T(1, 2, 0)
    assert classical_character(t2, A1) == {(2,): 1, (0,): 1, (-2,): 1}
    top = highest_monomial(t2, A1)
    assert loop_weight_label(top) == ((1, 0), (1, 2))

    b2 = builtin_solver(B2)
    assert classical_character(b2.T(2, 1, 0), B2) == {(0, 1): 1, (1, -1): 1, (-1, 1): 1, (0, -1): 1}
    assert loop_weight_label(highest_monomial(b2.T(1, 2, -4), B2)) == ((1, -4), (1, 0))
