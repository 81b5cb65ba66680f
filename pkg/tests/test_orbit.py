from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from orbitq.checks import full_labels
from orbitq.exact import MultiPoly
from orbitq.liealg import build_root_system, chevalley_constants, levi_datum
from orbitq.orbit import (
    dominant_weights_up_to,
    isotypic_multiplicities,
    kks_bracket,
    levi_invariant_dim,
    orbit_filtered_dim,
    orbit_sample,
    orbit_weight_dims,
    weight_multiplicities,
    weyl_dimension,
    weyl_group,
)

A1 = build_root_system("A", 1)
A2 = build_root_system("A", 2)
B2 = build_root_system("B", 2)
CB1 = chevalley_constants(A1)
CB2 = chevalley_constants(A2)
V = MultiPoly.variable


@st.composite
def sym_polys(draw, names=tuple(CB2.names)):
    p = MultiPoly.constant(0)
    for _ in range(draw(st.integers(1, 3))):
        mono = MultiPoly.constant(draw(st.integers(-3, 3)))
        for _ in range(draw(st.integers(0, 2))):
            mono = mono * V(draw(st.sampled_from(names)))
        p = p + mono
    return p


def test_kks_examples():
    assert kks_bracket(CB1, V("e1"), V("f1")) == V("h1")
    assert kks_bracket(CB1, V("h1"), V("e1") * V("e1")) == V("e1") * V("e1") * 4
    casimir = V("h1") * V("h1") + V("e1") * V("f1") * 4
    for x in CB1.names:
        assert kks_bracket(CB1, casimir, V(x)) == MultiPoly.constant(0)


@settings(max_examples=30, deadline=None)
@given(sym_polys(), sym_polys(), sym_polys())
def test_kks_is_a_poisson_bracket(f, g, k):
    assert kks_bracket(CB2, f, g) == -kks_bracket(CB2, g, f)
    assert kks_bracket(CB2, f, g * k) == kks_bracket(CB2, f, g) * k + g * kks_bracket(CB2, f, k)
    jac = kks_bracket(CB2, f, kks_bracket(CB2, g, k)) + kks_bracket(CB2, g, kks_bracket(CB2, k, f)) + kks_bracket(CB2, k, kks_bracket(CB2, f, g))
    assert jac == MultiPoly.constant(0)


def test_orbit_points_lie_on_the_orbit():
    s = orbit_sample(A2, (Fraction(5, 2), 3), 4, seed=1)
    ev = sorted(s.eigenvalues)
    assert sum(ev) == 0
    for p in s.points:
        assert sum(p[i][i] for i in range(3)) == sum(ev)


@pytest.mark.parametrize("d,expected", [(0, 1), (1, 4), (2, 9), (3, 16)])
def test_sl2_regular_orbit_dims(d, expected):
    s = orbit_sample(A1, (Fraction(7, 2),), 30, seed=0)
    assert orbit_filtered_dim(CB1, s, d) == expected


def test_sl3_regular_orbit_dims():
    s = orbit_sample(A2, (Fraction(5, 2), 3), 60, seed=0)
    assert orbit_filtered_dim(CB2, s, 0) == 1
    assert orbit_filtered_dim(CB2, s, 1) == 9
    assert orbit_filtered_dim(CB2, s, 2) == 44


@pytest.mark.parametrize("seed", [0, 3])
def test_filtered_dims_monotone_and_seed_independent(seed):
    s = orbit_sample(A2, (Fraction(1, 3), Fraction(-2, 5)), 60, seed=seed)
    dims = [orbit_filtered_dim(CB2, s, d) for d in range(3)]
    assert dims == sorted(dims)
    assert dims == [1, 9, 44]


def test_two_oracles_agree_for_sl2():
    # graded pieces of the coordinate ring carry V_{2k} with multiplicity ell_{2k} = 1
    s = orbit_sample(A1, (Fraction(3),), 30, seed=2)
    for d in range(4):
        assert orbit_filtered_dim(CB1, s, d) == sum(levi_invariant_dim(A1, levi_datum(A1, ()), (2 * k,)) * (2 * k + 1) for k in range(d + 1))


def test_isotypic_decomposition_of_orbit_functions():
    ld = levi_datum(A2, ())
    s = orbit_sample(A2, full_labels(A2, ld, (Fraction(5, 2), 3)), 60, seed=0)
    assert isotypic_multiplicities(A2, orbit_weight_dims(CB2, s, 1)) == {(0, 0): 1, (1, 1): 1}
    iso = isotypic_multiplicities(A2, orbit_weight_dims(CB2, s, 2))
    assert iso[(0, 0)] == 1 and iso[(1, 1)] == 2
    assert sum(m * weyl_dimension(A2, mu) for mu, m in iso.items()) == 44


def test_freudenthal_examples():
    adj = weight_multiplicities(A2, (1, 1))
    assert weyl_dimension(A2, (1, 1)) == 8 and adj[(0, 0)] == 2
    assert (0, 0) not in weight_multiplicities(A2, (1, 0))
    assert weyl_dimension(B2, (0, 1)) == 4 and weyl_dimension(B2, (1, 0)) == 5
    with pytest.raises(ValueError):
        weight_multiplicities(A2, (-1, 0))


def test_weyl_group_orders():
    assert len(weyl_group(A2)) == 6
    assert len(weyl_group(B2)) == 8
    assert len(weyl_group(A2, [1])) == 2


def test_levi_invariant_examples():
    assert levi_invariant_dim(A1, levi_datum(A1, ()), (2,)) == 1
    assert levi_invariant_dim(A2, levi_datum(A2, ()), (1, 1)) == 2
    assert levi_invariant_dim(A2, levi_datum(A2, (1,)), (1, 1)) == 1
    assert levi_invariant_dim(A2, levi_datum(A2, (1,)), (0, 0)) == 1


@pytest.mark.parametrize("rs", [A1, A2, B2], ids=lambda r: r.name)
@pytest.mark.parametrize("levi", [(), (1,)])
def test_levi_invariants_bounded_by_zero_weight(rs, levi):
    if rs.rank == 1 and levi:
        return
    ld = levi_datum(rs, levi)
    for mu in dominant_weights_up_to(rs, dim_cap=30):
        ell = levi_invariant_dim(rs, ld, mu)
        zero = weight_multiplicities(rs, mu).get((0,) * rs.rank, 0)
        assert 0 <= ell <= zero
        if not levi:
            assert ell == zero
