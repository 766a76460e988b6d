from fractions import Fraction

import pytest
from hypothesis import assume, given, strategies as st

from cfpgn.cf import (
    UNBOUNDED,
    check_delta_formula,
    check_facts,
    check_semiconvergent_chains,
    convergents,
    expand,
    from_quotients,
    nearest_integer_decomposition,
    normalize,
    reconstruct,
    semiconvergents,
    table_for,
)
from cfpgn.exact import LatticePoint

rationals = st.fractions(max_denominator=10**6).filter(lambda x: abs(x) < 10**6)
unit_half = st.fractions(min_value=0, max_value=Fraction(1, 2), max_denominator=5000)
quotient_lists = st.lists(st.integers(1, 50), min_size=1, max_size=12).map(
    lambda qs: [qs[0] + 1] + qs[1:]
)


def record_denominators(xi: Fraction, q_max: int) -> list[int]:
    """Q where min_P |Q*xi - P| sets a new strict record, scanning Q = 1, 2, ..."""
    best, out = Fraction(10**9), []
    for Q in range(1, q_max + 1):
        err = abs(Q * xi - round(Q * xi))
        if err < best:
            best = err
            out.append(Q)
    return out


@pytest.mark.parametrize(
    "xi, d, m, eps",
    [(Fraction(3, 7), Fraction(3, 7), 0, 1), (Fraction(-4, 7), Fraction(3, 7), -1, 1),
     (Fraction(355, 113), Fraction(16, 113), 3, 1), (Fraction(5, 7), Fraction(2, 7), 1, -1),
     (Fraction(2), Fraction(0), 2, 1), (Fraction(1, 2), Fraction(1, 2), 0, 1)],
)
def test_normalize(xi, d, m, eps):
    assert normalize(xi) == d
    got = nearest_integer_decomposition(xi)
    assert got == (m, eps, d)
    assert m + eps * d == xi


@given(rationals)
def test_normalize_properties(xi):
    d = normalize(xi)
    assert 0 <= d <= Fraction(1, 2)
    m, eps, d2 = nearest_integer_decomposition(xi)
    assert d2 == d and m + eps * d == xi and eps in (1, -1)


@pytest.mark.parametrize(
    "xi, quotients",
    [(Fraction(0), ()), (Fraction(1, 2), (2,)), (Fraction(3, 7), (2, 3)),
     (Fraction(2, 5), (2, 2)), (Fraction(16, 113), (7, 16)), (Fraction(1, 3), (3,))],
)
def test_expand_examples(xi, quotients):
    cf = expand(xi)
    assert cf.quotients == quotients
    assert cf.s == len(quotients) + 1


def test_expand_rejects_outside_half():
    with pytest.raises(ValueError):
        expand(Fraction(3, 5))


def test_str():
    assert str(expand(Fraction(0))) == "[0]"
    assert str(expand(Fraction(3, 7))) == "[0;2,3]"


@given(unit_half)
def test_expand_reconstruct(xi):
    cf = expand(xi)
    assert reconstruct(cf.quotients) == xi
    if cf.quotients:
        assert cf.quotients[0] >= 2
        assert len(cf.quotients) == 1 or cf.quotients[-1] >= 2


@given(quotient_lists)
def test_from_quotients_merges_trailing_one(qs):
    cf = from_quotients(qs)
    assert cf.value == reconstruct(qs)
    assert expand(cf.value).quotients == cf.quotients


def test_from_quotients_rejects_large_value():
    with pytest.raises(ValueError):
        from_quotients([1, 3])


def test_convergent_table_3_7():
    t = table_for(Fraction(3, 7))
    assert [(t.Q(n), t.P(n)) for n in range(-1, 3)] == [(0, 1), (1, 0), (2, 1), (7, 3)]
    assert [t.delta(n) for n in range(-1, 3)] == [1, Fraction(3, 7), Fraction(1, 7), 0]
    assert t.Q(3) is UNBOUNDED
    assert UNBOUNDED > 10**100


@given(unit_half)
def test_convergents_are_best_approximations(xi):
    # independent: strict error records over all Q are exactly Q_0 < Q_1 < ... < Q_{s-1}
    assume(xi.denominator <= 400)
    t = table_for(xi)
    expected = [t.Q(n) for n in range(0, t.s)]
    assert record_denominators(xi, xi.denominator) == expected


@given(unit_half)
def test_facts_and_delta_formula(xi):
    t = table_for(xi)
    assert check_facts(t).passed
    assert check_delta_formula(t).passed


@given(unit_half)
def test_chains(xi):
    t = table_for(xi)
    for n in range(1, t.s):
        rep = check_semiconvergent_chains(t, n)
        assert rep.passed, rep.to_json()


@pytest.mark.parametrize("xi", [Fraction(3, 7), Fraction(2, 5)])
def test_semiconvergents_first_interval(xi):
    # x_{1,t} = x_{-1} + t*x_0 = (t, 1)
    pts = {sc.point for sc in semiconvergents(table_for(xi), 1)}
    assert pts == {LatticePoint(0, 1), LatticePoint(1, 1), LatticePoint(2, 1)}


def test_semiconvergents_second_interval():
    sc = semiconvergents(table_for(Fraction(3, 7)), 2)
    assert [(x.point.Q, x.point.P) for x in sc] == [(1, 0), (3, 1), (5, 2), (7, 3)]
    assert [x.delta for x in sc] == [Fraction(3, 7), Fraction(2, 7), Fraction(1, 7), 0]


def test_semiconvergents_index_range():
    t = table_for(Fraction(3, 7))
    with pytest.raises(IndexError):
        semiconvergents(t, 0)
    with pytest.raises(IndexError):
        semiconvergents(t, 3)


def test_chain_equality_notes():
    t = table_for(Fraction(3, 7))
    assert "Q_{n,1} = Q_{n-1}" in check_semiconvergent_chains(t, 1).notes
    assert check_semiconvergent_chains(t, 2).notes
