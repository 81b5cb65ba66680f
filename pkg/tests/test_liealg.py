import itertools
import json

import pytest

from orbitq.liealg import (
    UnsupportedType,
    build_root_system,
    chevalley_constants,
    levi_datum,
    parabolic_split,
    root_data_json,
)

TYPES = [("A", 1), ("A", 2), ("B", 2), ("A", 3)]


def all_levis(rank):
    for k in range(rank):
        yield from itertools.combinations(range(1, rank + 1), k)


@pytest.mark.parametrize("letter,rank", TYPES)
def test_cartan_matrix_axioms(letter, rank):
    rs = build_root_system(letter, rank)
    a, d = rs.cartan_matrix, rs.symmetrizers
    for i in range(rank):
        assert a[i][i] == 2
        for j in range(rank):
            if i != j:
                assert a[i][j] <= 0
            assert d[i] * a[i][j] == d[j] * a[j][i]
    assert len(rs.positive_roots) == {"A1": 1, "A2": 3, "B2": 4, "A3": 6}[rs.name]


def test_root_order_height_then_lex():
    rs = build_root_system("A", 3)
    heights = [sum(r) for r in rs.positive_roots]
    assert heights == sorted(heights)
    assert rs.positive_roots[:3] == ((1, 0, 0), (0, 1, 0), (0, 0, 1))
    assert rs.positive_roots[-1] == (1, 1, 1)


def test_b2_convention_recorded():
    rs = build_root_system("B", 2)
    assert rs.symmetrizers == (2, 1)
    assert len(rs.positive_roots) == 4
    assert rs.to_json()["symmetrizers"] == [2, 1]
    assert [list(r) for r in rs.cartan_matrix] == [[2, -1], [-2, 2]]


def test_unsupported():
    with pytest.raises(UnsupportedType):
        build_root_system("G", 2)


@pytest.mark.parametrize("letter,rank", TYPES)
def test_jacobi_and_integrality(letter, rank):
    cb = chevalley_constants(build_root_system(letter, rank))
    for x, y, z in itertools.product(cb.names, repeat=3):
        assert cb.jacobi_residual(x, y, z) == {}
    for (x, y), v in cb.brackets.items():
        assert all(isinstance(c, int) for c in v.values())
        assert cb.brackets[(y, x)] == {k: -c for k, c in v.items()}


@pytest.mark.parametrize("letter,rank", TYPES)
def test_cartan_action_and_ef(letter, rank):
    rs = build_root_system(letter, rank)
    cb = chevalley_constants(rs)
    for root in rs.positive_roots:
        e, f = cb.e(root), cb.f(root)
        ef = cb.bracket(e, f)
        assert ef and all(k.startswith("h") for k in ef)
        for i in range(1, rank + 1):
            p = rs.pairing(root, i)
            assert cb.bracket(cb.h(i), e) == ({e: p} if p else {})
            assert cb.bracket(cb.h(i), f) == ({f: -p} if p else {})


def test_sl2_relations():
    cb = chevalley_constants(build_root_system("A", 1))
    assert cb.bracket("e1", "f1") == {"h1": 1}
    assert cb.bracket("h1", "e1") == {"e1": 2}
    assert cb.bracket("h1", "f1") == {"f1": -2}


def test_a2_simple_bracket_has_unit_coefficient():
    cb = chevalley_constants(build_root_system("A", 2))
    v = cb.bracket("e1", "e2")
    assert list(v) == ["e12"] and abs(v["e12"]) == 1


@pytest.mark.parametrize("letter,rank", TYPES)
def test_parabolic_counts(letter, rank):
    rs = build_root_system(letter, rank)
    for S in all_levis(rank):
        ld = levi_datum(rs, S)
        pd = parabolic_split(rs, ld)
        assert set(ld.levi_simples) | set(ld.orbit_params) == set(range(1, rank + 1))
        assert len(pd.n_minus_P_basis) + len(pd.levi_roots) == len(rs.positive_roots)


def test_parabolic_examples():
    a1 = build_root_system("A", 1)
    assert parabolic_split(a1, levi_datum(a1, ())).n_minus_P_basis == ("f1",)
    a2 = build_root_system("A", 2)
    assert parabolic_split(a2, levi_datum(a2, (1,))).n_minus_P_basis == ("f2", "f12")
    assert len(parabolic_split(a2, levi_datum(a2, ())).n_minus_P_basis) == 3


def test_levi_validation():
    a2 = build_root_system("A", 2)
    with pytest.raises(ValueError):
        levi_datum(a2, (3,))
    with pytest.raises(ValueError):
        levi_datum(a2, (1, 2))  # no orbit parameter left


def test_json_export():
    data = json.loads(root_data_json(build_root_system("A", 2)))
    assert data["type"] == "A2"
    assert data["cartan"] == [[2, -1], [-1, 2]]
