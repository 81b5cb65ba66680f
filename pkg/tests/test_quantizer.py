import random
from fractions import Fraction

import pytest

from orbitq.exact import Echelon, MultiPoly
from orbitq.liealg import build_root_system, levi_datum, parabolic_split
from orbitq.quantizer import (
    H,
    SliceTower,
    apply_generator,
    commutativity_mod_h,
    flatness_evidence,
    flatten,
    generic_rank,
    hilbert_function,
    leading_term_eval,
    multiplicity_check,
    specialized_hilbert,
    specialized_rank,
)
from orbitq.verma import VermaModule


def datum(letter, rank, levi=()):
    rs = build_root_system(letter, rank)
    return parabolic_split(rs, levi_datum(rs, levi))


SL2 = datum("A", 1)
lam = MultiPoly.variable("lam1")
h = MultiPoly.variable(H)


def test_sl2_hilbert_function():
    table, _ = hilbert_function(SL2, 3)
    # A is free over Q[lambda, h] with fiber dims (d+1)^2: generating function (1+s)/(1-s)^4
    assert table.ranks == [1, 5, 14, 30]
    assert table.stabilized
    assert table.to_json()["schema"] == 1
    assert table.to_csv().splitlines()[:2] == ["degree,rank", "0,1"]


def test_ranks_are_depth_independent_once_stable():
    table, _ = hilbert_function(SL2, 2)
    tail = [r for D, r in table.history if D >= table.depth]
    assert len(tail) >= 3 and all(r == table.ranks for r in tail)


def test_shallow_depth_is_rejected():
    with pytest.raises(ValueError):
        SliceTower(SL2, 1, 2)


def _product(vm, word, tower):
    """The operator a_{word[0]} ... a_{word[-1]} on the trusted columns."""
    op = tower.slices[0].basis_ops[0]
    for x in reversed(word):
        op = apply_generator(vm, x, op)
    return op


@pytest.mark.parametrize("pd", [SL2, datum("A", 2, (1,))], ids=["A1", "A2-S1"])
def test_filtration_is_multiplicative(pd):
    # products of d generators, and h or lambda times a degree d-1 element, lie in the degree-d slice
    tower = SliceTower(pd, 8 if pd is SL2 else 6, 2)
    vm = tower.vm
    rng = random.Random(0)
    params = [MultiPoly.variable(v) for v in tower.params]
    for d in (1, 2):
        eches = {}
        for op in tower.slices[d].basis_ops:
            eches.setdefault(op.weight, Echelon()).add(flatten(op))
        for _ in range(10):
            word = [rng.choice(vm.cb.names) for _ in range(d)]
            op = _product(vm, word, tower)
            if not op.is_zero():
                assert eches[op.weight].contains(flatten(op)), word
        for lower in tower.slices[d - 1].basis_ops:
            for p in params:
                op = lower.scaled(p)
                if lower.weight is None:
                    continue
                assert eches[lower.weight].contains(flatten(op))


@pytest.mark.parametrize("pd", [SL2, datum("A", 2), datum("A", 2, (2,)), datum("B", 2, (1,))], ids=["A1", "A2", "A2-S2", "B2-S1"])
def test_commutative_modulo_h(pd):
    rep = commutativity_mod_h(pd)
    assert rep["max_residual"] == 0
    n = len(VermaModule(pd).cb.names)
    assert len(rep["pairs"]) == n * (n - 1) // 2


def test_commutator_does_not_vanish_before_dividing_by_h():
    vm = VermaModule(SL2)
    v = {(1,): MultiPoly.constant(1)}
    ef = vm.rescaled_vec("e1", vm.rescaled_vec("f1", v))
    fe = vm.rescaled_vec("f1", vm.rescaled_vec("e1", v))
    # [a_e, a_f] = h a_h, which is h (lam - 2h) on F v0
    assert ef[(1,)] - fe[(1,)] == h * (lam - h * 2)


def test_leading_term_examples():
    vm = VermaModule(SL2)
    assert leading_term_eval(vm, ["h1"]) == (lam, lam)
    assert leading_term_eval(vm, ["h1", "h1"]) == (lam * lam, lam * lam)
    obs, exp = leading_term_eval(vm, ["e1", "f1"])
    assert obs == exp == MultiPoly.constant(0)
    assert leading_term_eval(vm, ["e1", "f1", "h1"], {"lam1": Fraction(3)}) == (0, 0)


def test_leading_terms_on_a2_words():
    vm = VermaModule(datum("A", 2))
    rng = random.Random(5)
    for _ in range(15):
        word = [rng.choice(vm.cb.names) for _ in range(rng.randint(1, 3))]
        obs, exp = leading_term_eval(vm, word)
        assert obs == exp, word


def test_specialized_dims_do_not_depend_on_the_point():
    for pt in ({"lam1": Fraction(7, 2), H: Fraction(1, 3)}, {"lam1": -5, H: 2}, {"lam1": 1, H: 1}):
        # fiber dims (d+1)^2 at every point
        assert specialized_hilbert(SL2, 3, pt).ranks == [1, 4, 9, 16]
    with pytest.raises(ValueError):
        specialized_hilbert(SL2, 2, {"lam1": 0, H: 1})


def test_generic_rank_is_the_fiber_dimension():
    tower = SliceTower(SL2, 8, 2)
    assert tower.ranks == [1, 5, 14]
    assert [generic_rank(s) for s in tower.slices] == [1, 4, 9]
    assert [specialized_rank(s, {"lam1": 3, H: 1}) for s in tower.slices] == [1, 4, 9]


def test_flatness_evidence_and_special_points():
    ev = flatness_evidence(SL2, 2, trials=3, depth_cap=14,
                           extra_points=[{"lam1": 0, H: 1}, {"lam1": 2, H: 0}])
    assert ev["flat"] and ev["stabilized"]
    assert ev["graded_ranks"] == [1, 5, 14]
    assert ev["generic_ranks"] == [1, 4, 9]
    assert ev["quotient_by_h"] == [1, 4, 9]
    lam_zero, h_zero = ev["special_points"]
    # lambda = 0 shows no drop once the depth is large enough
    assert lam_zero["drops_at"] == []
    # h = 0 evaluates the operator image, which collapses: a_f = h F vanishes there
    assert h_zero["kind"] == "operator image at h = 0" and h_zero["drops_at"]


def test_multiplicities_sl2():
    rep = multiplicity_check(SL2, (Fraction(7, 2),), Fraction(1, 3), 2)
    assert rep["stable"]
    assert {tuple(r["mu"]): r["n"] for r in rep["rows"]} == {(0,): 1, (2,): 1, (4,): 1}
    low = multiplicity_check(SL2, (Fraction(5),), Fraction(1, 2), 1)
    assert {tuple(r["mu"]): r["n"] for r in low["rows"]} == {(0,): 1, (2,): 1}
    assert all(r["ell"] == 1 for r in low["rows"])


def test_multiplicity_rejects_degenerate_points():
    with pytest.raises(ValueError):
        multiplicity_check(SL2, (0,), 1, 1)
    with pytest.raises(ValueError):
        multiplicity_check(SL2, (1,), 0, 1)
