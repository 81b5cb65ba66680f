from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from orbitq.exact import (
    Echelon,
    FractionElement,
    MultiPoly,
    PolyMatrix,
    SpecializationError,
    rank_over_fractions,
    rational_rank,
    solve_rational,
    specialize,
    t_adic_valuations,
    q_series_expand,
)

VARS = ("x", "y", "lam1")


@st.composite
def polys(draw, vars=VARS, max_terms=4, max_exp=2):
    p = MultiPoly.constant(0)
    for _ in range(draw(st.integers(0, max_terms))):
        c = draw(st.integers(-5, 5))
        mono = MultiPoly.constant(c)
        for v in vars:
            e = draw(st.integers(0, max_exp))
            if e:
                mono = mono * MultiPoly.variable(v, e)
        p = p + mono
    return p


@st.composite
def laurent(draw):
    """Laurent polynomials in q and L1 with small support."""
    p = MultiPoly.constant(0)
    for _ in range(draw(st.integers(1, 3))):
        c = draw(st.integers(-3, 3))
        p = p + MultiPoly.variable("q", draw(st.integers(-2, 2))) * MultiPoly.variable("L1", draw(st.integers(-1, 1))) * c
    return p


# -- polynomial ring --------------------------------------------------------------------------------


@settings(max_examples=60, deadline=None)
@given(polys(), polys(), polys())
def test_ring_axioms(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert (a + b) * c == a * c + b * c
    assert a + b == b + a
    assert a * b == b * a
    assert a - a == MultiPoly.constant(0)


@settings(max_examples=40, deadline=None)
@given(polys(), polys())
def test_divexact_inverts_multiplication(a, b):
    if not b:
        return
    assert (a * b).divexact(b) == a


def test_variable_arithmetic():
    x, y = MultiPoly.variable("x"), MultiPoly.variable("y")
    p = (x + y) ** 2
    assert p == x * x + x * y * 2 + y * y
    assert p.evaluate({"x": 1, "y": 2}) == 9
    assert p.derivative("x") == x * 2 + y * 2
    assert p.subs({"y": x}) == x * x * 4
    assert p.total_degree() == 2


def test_laurent_variables():
    q = MultiPoly.variable("q")
    qi = MultiPoly.variable("q", -1)
    assert q * qi == MultiPoly.constant(1)
    assert str(qi) in ("q^(-1)", "q^-1")


def test_fraction_field():
    q = FractionElement(MultiPoly.variable("q"))
    a = (q * q - 1) / (q - 1)
    assert a == q + 1
    assert (q / (q + 1)) * ((q + 1) / q) == FractionElement(1)
    assert (q - q.inverse()) * q == q * q - 1


# -- matrices ---------------------------------------------------------------------------------------


@st.composite
def poly_matrices(draw):
    n = draw(st.integers(1, 3))
    m = draw(st.integers(1, 3))
    return [[draw(polys(vars=("x", "y"), max_terms=2, max_exp=1)) for _ in range(m)] for _ in range(n)]


@settings(max_examples=40, deadline=None)
@given(poly_matrices(), st.randoms(use_true_random=False))
def test_rank_invariant_under_row_operations(rows, rnd):
    r = rank_over_fractions(PolyMatrix(rows))
    perm = rows[:]
    rnd.shuffle(perm)
    scaled = [[e * (MultiPoly.variable("x") + i + 1) for e in row] for i, row in enumerate(perm)]
    assert rank_over_fractions(PolyMatrix(perm)) == r
    assert rank_over_fractions(PolyMatrix(scaled)) == r


@settings(max_examples=40, deadline=None)
@given(poly_matrices(), st.integers(-4, 4), st.integers(-4, 4))
def test_specialized_rank_bounded_by_generic(rows, a, b):
    m = PolyMatrix(rows)
    s = specialize(m, {"x": Fraction(a), "y": Fraction(b)})
    assert s.rank() <= rank_over_fractions(m)


def test_rank_examples():
    x = MultiPoly.variable("x")
    m = PolyMatrix([[x, 1], [x * x, x]])
    assert rank_over_fractions(m) == 1
    m2 = PolyMatrix([[x, 1], [1, x]])
    assert rank_over_fractions(m2) == 2
    assert specialize(m2, {"x": 1}).rank() == 1
    assert rational_rank([{0: 1, 1: 2}, {0: 2, 1: 4}, {2: 1}]) == 2


def test_specialize_rejects_vanishing_denominator():
    x = FractionElement(MultiPoly.variable("x"))
    m = PolyMatrix([[1 / x]])
    with pytest.raises(SpecializationError):
        specialize(m, {"x": 0})


def test_echelon_membership():
    ech = Echelon()
    assert ech.add({"a": 1, "b": 2})
    assert ech.add({"b": 1, "c": Fraction(1, 2)})
    assert not ech.add({"a": 1, "b": 3, "c": Fraction(1, 2)})
    assert ech.contains({"a": 2, "b": 4})
    assert not ech.contains({"c": 1})
    assert ech.rank == 2


def test_solve_rational():
    x = solve_rational([{0: 1, 1: 1}, {1: 1, 2: 1}], {0: 2, 1: 5, 2: 3})
    assert x == [2, 3]
    assert solve_rational([{0: 1}], {1: 1}) is None


# -- t-series ---------------------------------------------------------------------------------------


@settings(max_examples=40, deadline=None)
@given(laurent(), laurent())
def test_q_expansion_is_a_ring_homomorphism(p, q):
    order = 4
    lhs = q_series_expand(p * q, order)
    rhs = q_series_expand(p, order) * q_series_expand(q, order)
    assert lhs == rhs
    assert q_series_expand(p + q, order) == q_series_expand(p, order) + q_series_expand(q, order)


def test_q_expansion_examples():
    q = MultiPoly.variable("q")
    s = q_series_expand(q, 3)
    # e^t = 1 + t + t^2/2 + t^3/6
    assert [s.coefficient(k) for k in range(4)] == [MultiPoly.constant(c) for c in (1, 1, Fraction(1, 2), Fraction(1, 6))]
    qq = FractionElement(q)
    bracket = (qq * qq - qq.inverse() * qq.inverse()) / (qq - qq.inverse())  # q + q^-1 = 2 + t^2 + ...
    s2 = q_series_expand(bracket, 2)
    assert s2.coefficient(0) == MultiPoly.constant(2)
    assert s2.coefficient(1) == MultiPoly.constant(0)
    assert s2.coefficient(2) == MultiPoly.constant(1)
    L = q_series_expand(MultiPoly.variable("L1"), 2)
    lam = MultiPoly.variable("lam1")
    assert L.coefficient(1) == lam and L.coefficient(2) == lam * lam / 2


def test_t_adic_valuations():
    # rows (1, t) and (1, t + t^2): the difference has valuation 2
    v = t_adic_valuations([{"a": [1], "b": [0, 1]}, {"a": [1], "b": [0, 1, 1]}], 2)
    assert sorted(v) == [0, 2]
    assert t_adic_valuations([{"a": [0, 0, 0]}], 2) == []
