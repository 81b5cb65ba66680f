import random

import pytest

from orbitq.exact import FractionElement, MultiPoly
from orbitq.liealg import UnsupportedType, build_root_system, levi_datum
from orbitq.uq import (
    ClosureError,
    QVermaModule,
    UqAlgebra,
    ad_action,
    ad_closure,
    build_q_slice,
    classical_limit,
    equivariance_check,
    find_Gq,
    phi,
    second_bracket_sl2,
)
from orbitq.uq.fu import FieldEchelon, ad_element

A1 = build_root_system("A", 1)
A2 = build_root_system("A", 2)
q = FractionElement(MultiPoly.variable("q"))


@pytest.fixture(scope="module")
def sl2():
    return UqAlgebra(A1)


@pytest.fixture(scope="module")
def sl3():
    return UqAlgebra(A2)


@pytest.fixture(scope="module", params=[2, 4])
def gq(request, sl2):
    return find_Gq(sl2, factor=request.param)


@pytest.fixture(scope="module")
def qslice(sl2):
    return build_q_slice(find_Gq(sl2, factor=4), 2, order=2)


def random_word(alg, rng, length):
    letters = []
    for i in range(1, alg.rank + 1):
        letters += [alg.E(i), alg.F(i), alg.K(i), alg.K(i, -1)]
    return [rng.choice(letters) for _ in range(length)]


# -- relations ------------------------------------------------------------------------------------


def test_sl2_relations(sl2):
    E, F, K, Ki = sl2.E(), sl2.F(), sl2.K(), sl2.K(power=-1)
    assert sl2.antipode(E) == -(Ki * E)
    assert sl2.counit(K) == 1 and sl2.counit(E) == 0
    assert E * F - F * E == (K - Ki).scale((q - q.inverse()).inverse())
    assert K * E * Ki == E.scale(q * q)
    assert K * F * Ki == F.scale((q * q).inverse())
    assert K * Ki == sl2.one()


def test_sl3_serre_relations(sl3):
    two = q + q.inverse()
    for i, j in ((1, 2), (2, 1)):
        for X in (sl3.E, sl3.F):
            a, b = X(i), X(j)
            assert (a * a * b - (a * b * a).scale(two) + b * a * a).is_zero()
    assert sl3.E(1) * sl3.F(2) == sl3.F(2) * sl3.E(1)


def test_unsupported_types():
    with pytest.raises(UnsupportedType):
        UqAlgebra(build_root_system("B", 2))
    with pytest.raises(UnsupportedType):
        UqAlgebra(build_root_system("A", 3))


@pytest.mark.parametrize("name", ["sl2", "sl3"])
def test_hopf_axioms_on_generators_and_words(name, request):
    alg = request.getfixturevalue(name)
    for x in alg.generators().values():
        assert all(alg.check_hopf(x).values())
    rng = random.Random(1)
    for _ in range(4 if name == "sl3" else 8):
        x = alg.word(*random_word(alg, rng, rng.randint(1, 3)))
        assert all(alg.check_hopf(x).values())
        y = alg.word(*random_word(alg, rng, 2))
        assert alg.counit(x * y) == alg.counit(x) * alg.counit(y)


@pytest.mark.parametrize("name", ["sl2", "sl3"])
def test_normal_form_is_idempotent_and_multiplicative(name, request):
    alg = request.getfixturevalue(name)
    rng = random.Random(2)
    for _ in range(15):
        u = alg.word(*random_word(alg, rng, rng.randint(1, 3)))
        v = alg.word(*random_word(alg, rng, rng.randint(1, 3)))
        for w in u.terms:
            assert alg.is_normal(w)
            assert alg.normal_form(w) == alg.word(*[alg.normal_form((s,)) for s in w])
        uv = u * v
        for w1, c1 in u.terms.items():
            for w2, c2 in v.terms.items():
                assert alg.nf_word(w1 + w2) == alg.normal_form(w1 + w2).terms
        assert uv == alg.word(u, v)


def test_adjoint_action_is_a_representation(sl2):
    m = QVermaModule(A1, levi_datum(A1, ()), sl2)
    cols = m.basis(2)
    A = phi(m, sl2.F() * sl2.E())
    rng = random.Random(3)
    for _ in range(5):
        u = sl2.word(*random_word(sl2, rng, 2))
        v = sl2.word(*random_word(sl2, rng, 1))
        assert ad_action(u * v, A).equals_on(ad_action(u, ad_action(v, A)), cols)


# -- the adjoint-type copy G_q ----------------------------------------------------------------------


def test_find_gq(gq, sl2):
    expected_closure = {2: 4, 4: 9}[gq.factor]
    assert gq.closure_dim == expected_closure == len(ad_closure(sl2, sl2.Kw(gq.start)))
    span = FieldEchelon()
    for x in gq.elements.values():
        span.add(x.terms)
    assert span.rank == 3
    for x in gq.elements.values():
        for kind in ("E", "F", "K"):
            assert not span.reduce(ad_element(sl2, kind, 1, x).terms)
    assert set(gq.elements) == {"e1", "h1", "f1"}
    assert {k: set(v) for k, v in gq.limits.items()} == {"e1": {"e1"}, "h1": {"h1"}, "f1": {"f1"}}
    for x in gq.elements.values():
        val, _ = classical_limit(sl2, x)
        assert val == 0
    assert gq.to_json()["lattice_factor"] == gq.factor


def test_find_gq_rejections(sl2, sl3):
    with pytest.raises(ValueError):
        find_Gq(sl2, factor=3)
    with pytest.raises(UnsupportedType):
        find_Gq(sl3)
    with pytest.raises(ClosureError):
        ad_closure(sl2, sl2.Kw((-2,)), cap=3)


def test_equivariance(gq):
    res = equivariance_check(gq, pairs=10, seed=4)
    assert res["all_exact"] and len(res["pairs"]) == 10


# -- the two-parameter slices ----------------------------------------------------------------------


def test_t0_span_is_the_classical_slice(qslice):
    assert qslice.t0_ranks == qslice.classical_ranks == [1, 5, 14]
    assert all(qslice.t0_matches_classical)
    assert all(qslice.polynomial_by_order[d][0] for d in qslice.polynomial_by_order)
    assert qslice.to_json()["schema"] == 1


@pytest.mark.parametrize("d", [0, 1])
def test_rank_is_constant_in_t_low_degree(qslice, d):
    ranks = qslice.degree_ranks[d]
    assert ranks == [ranks[0]] * (qslice.order + 1)


@pytest.mark.xfail(strict=True, reason=(
    "observed ranks 14, 14, 18 at t-orders 0, 1, 2: the four degree-2 relations of the t = 0 "
    "algebra (three commutators and the Casimir) acquire t^2 residuals with lambda^3/h and "
    "lambda^4/h^2 terms that leave the degree-2 span; recorded as a finding"))
def test_rank_is_constant_in_t_degree_two(qslice):
    ranks = qslice.degree_ranks[2]
    assert ranks == [ranks[0]] * (qslice.order + 1)


def test_second_bracket(gq):
    res = second_bracket_sl2(gq)
    assert res["antisymmetric"] and res["kks_part_matches"] and res["t_part_polynomial_in_h"]
    assert res["proportional"] and res["scalar"] == "-1"
    assert res["orbit_relation"] == "4*e1*f1 + h1^2 - lam1^2"


def test_second_bracket_needs_t_order_two(sl2):
    gq = find_Gq(sl2)
    with pytest.raises(ValueError):
        second_bracket_sl2(gq, order=1)
