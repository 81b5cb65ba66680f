"""Root data, Chevalley bases with integral structure constants, Levi and parabolic splits.

Simple roots are numbered from 1. The Cartan matrix follows a_ij = alpha_j(h_i).
Positive roots are ordered by height, then lexicographically with the lower
simple-root indices first; that order is the PBW order used everywhere.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

__all__ = [
    "RootSystemDatum",
    "ChevalleyBasis",
    "LeviDatum",
    "ParabolicDatum",
    "build_root_system",
    "chevalley_constants",
    "parabolic_split",
    "levi_datum",
    "UnsupportedType",
]

SUPPORTED = {("A", 1), ("A", 2), ("A", 3), ("B", 2)}


class UnsupportedType(ValueError):
    pass


def _cartan(letter: str, rank: int):
    if letter == "A":
        return tuple(
            tuple(2 if i == j else -1 if abs(i - j) == 1 else 0 for j in range(rank))
            for i in range(rank)
        )
    if letter == "B" and rank == 2:
        # alpha_1 long, alpha_2 short
        return ((2, -1), (-2, 2))
    raise UnsupportedType(f"unsupported type {letter}{rank}")


def _inverse(m):
    n = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for c in range(n):
        p = next(r for r in range(c, n) if a[r][c] != 0)
        a[c], a[p] = a[p], a[c]
        piv = a[c][c]
        a[c] = [x / piv for x in a[c]]
        for r in range(n):
            if r != c and a[r][c] != 0:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return tuple(tuple(row[n:]) for row in a)


@dataclass(frozen=True)
class RootSystemDatum:
    type_letter: str
    rank: int
    cartan_matrix: tuple
    symmetrizers: tuple
    positive_roots: tuple
    fundamental_weights: tuple  # row i = omega_i in simple-root coordinates

    @property
    def name(self) -> str:
        return f"{self.type_letter}{self.rank}"

    def height(self, root) -> int:
        return sum(root)

    def pairing(self, root, i: int) -> int:
        """alpha(h_i) for alpha given in simple-root coordinates (i is 1-based)."""
        return sum(c * self.cartan_matrix[i - 1][j] for j, c in enumerate(root))

    def form(self, a, b):
        """Symmetric invariant form on root coordinates, (alpha_i, alpha_j) = d_i a_ij."""
        n = self.rank
        return sum(
            a[i] * b[j] * self.symmetrizers[i] * self.cartan_matrix[i][j]
            for i in range(n)
            for j in range(n)
        )

    def simple_root(self, i: int):
        return tuple(int(j == i - 1) for j in range(self.rank))

    def labels_to_root_coords(self, labels):
        """Dynkin labels mu(h_i) -> coordinates in the simple roots (rational)."""
        inv = _inverse(self.cartan_matrix)
        return tuple(sum(inv[j][i] * labels[i] for i in range(self.rank)) for j in range(self.rank))

    def root_to_labels(self, root):
        return tuple(self.pairing(root, i + 1) for i in range(self.rank))

    @cached_property
    def rho_labels(self):
        return tuple(1 for _ in range(self.rank))

    def to_json(self) -> dict:
        return {
            "type": self.name,
            "cartan": [list(r) for r in self.cartan_matrix],
            "symmetrizers": list(self.symmetrizers),
            "positive_roots": [list(r) for r in self.positive_roots],
            "fundamental_weights": [[str(x) for x in r] for r in self.fundamental_weights],
            "root_order": "height-then-lex",
        }


def _root_key(root):
    return (sum(root), tuple(-c for c in root))


def build_root_system(type_letter: str, rank: int) -> RootSystemDatum:
    type_letter = type_letter.upper()
    if (type_letter, rank) not in SUPPORTED:
        raise UnsupportedType(f"unsupported type {type_letter}{rank}; supported: A1, A2, A3, B2")
    a = _cartan(type_letter, rank)
    d = (2, 1) if type_letter == "B" else tuple(1 for _ in range(rank))
    simple = [tuple(int(j == i) for j in range(rank)) for i in range(rank)]
    roots = set(simple)
    layer = list(simple)
    while layer:
        nxt = []
        for beta in layer:
            for i in range(rank):
                # alpha_i string through beta: p steps down, then beta + alpha_i is a root iff p - <beta, a_i^vee> > 0
                p = 0
                while True:
                    down = tuple(c - (p + 1) * (j == i) for j, c in enumerate(beta))
                    if down in roots:
                        p += 1
                    else:
                        break
                pair = sum(c * a[i][j] for j, c in enumerate(beta))
                if p - pair > 0:
                    up = tuple(c + (j == i) for j, c in enumerate(beta))
                    if up not in roots:
                        roots.add(up)
                        nxt.append(up)
        layer = nxt
    positive = tuple(sorted(roots, key=_root_key))
    inv = _inverse(a)
    fw = tuple(tuple(inv[j][i] for j in range(rank)) for i in range(rank))
    expected = {("A", 1): 1, ("A", 2): 3, ("B", 2): 4, ("A", 3): 6}[(type_letter, rank)]
    assert len(positive) == expected
    return RootSystemDatum(type_letter, rank, a, d, positive, fw)


# -- matrix realizations --------------------------------------------------------


def _zeros(n):
    return [[0] * n for _ in range(n)]


def _unit(n, i, j, c=1):
    m = _zeros(n)
    m[i][j] = c
    return m


def _add(a, b, s=1):
    return [[x + s * y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def _mul(a, b):
    n = len(a)
    return [[sum(a[i][k] * b[k][j] for k in range(n) if a[i][k]) for j in range(n)] for i in range(n)]


def _comm(a, b):
    return _add(_mul(a, b), _mul(b, a), -1)


def _transpose(a):
    return [list(r) for r in zip(*a)]


def _simple_matrices(rs: RootSystemDatum):
    if rs.type_letter == "A":
        n = rs.rank + 1
        return [_unit(n, i, i + 1) for i in range(rs.rank)]
    # B2 inside sp(4): alpha_1 (long) = 2 eps_2, alpha_2 (short) = eps_1 - eps_2
    e1 = _unit(4, 1, 3)
    e2 = _add(_unit(4, 0, 1), _unit(4, 3, 2), -1)
    return [e1, e2]


def _root_name(prefix, root):
    return prefix + "".join(str(i + 1) * c for i, c in enumerate(root))


@dataclass
class ChevalleyBasis:
    """Chevalley basis e_alpha, h_i, f_alpha with integral structure constants."""

    rs: RootSystemDatum
    names: tuple
    weights: dict  # name -> root coordinates (zero for h_i)
    brackets: dict  # (x, y) -> {z: int}
    matrices: dict = field(repr=False)
    extraspecial: dict = field(default_factory=dict)
    convention: str = "extraspecial pairs (alpha_i, xi - alpha_i), i minimal, N = +(p+1); f = e^T"

    def e(self, root) -> str:
        return _root_name("e", root)

    def f(self, root) -> str:
        return _root_name("f", root)

    def h(self, i: int) -> str:
        return f"h{i}"

    @cached_property
    def positive(self):
        return tuple(self.e(r) for r in self.rs.positive_roots)

    @cached_property
    def negative(self):
        return tuple(self.f(r) for r in self.rs.positive_roots)

    @cached_property
    def cartan(self):
        return tuple(self.h(i + 1) for i in range(self.rs.rank))

    def kind(self, x: str) -> str:
        return x[0]

    def root_of(self, x: str):
        """Positive root underlying a root vector."""
        w = self.weights[x]
        return w if x[0] == "e" else tuple(-c for c in w)

    def bracket(self, x: str, y: str) -> dict:
        return self.brackets[(x, y)]

    def bracket_vec(self, u: dict, v: dict) -> dict:
        out = {}
        for x, a in u.items():
            for y, b in v.items():
                for z, c in self.brackets[(x, y)].items():
                    out[z] = out.get(z, 0) + a * b * c
        return {z: c for z, c in out.items() if c}

    def jacobi_residual(self, x, y, z) -> dict:
        X, Y, Z = {x: 1}, {y: 1}, {z: 1}
        out = {}
        for a, b, c in ((X, Y, Z), (Y, Z, X), (Z, X, Y)):
            for k, v in self.bracket_vec(a, self.bracket_vec(b, c)).items():
                out[k] = out.get(k, 0) + v
        return {k: v for k, v in out.items() if v}

    def to_json(self) -> dict:
        return {
            "root_system": self.rs.to_json(),
            "basis": list(self.names),
            "convention": self.convention,
            "brackets": {
                f"[{x},{y}]": dict(sorted(v.items()))
                for (x, y), v in sorted(self.brackets.items())
                if v and self.names.index(x) < self.names.index(y)
            },
        }


def _decompose(mat, basis_mats, names, weights, weight, rs):
    """Coordinates of a matrix of known weight in the Chevalley basis."""
    if not any(any(r) for r in mat):
        return {}
    if any(weight):
        if weight in rs.positive_roots:
            name = _root_name("e", weight)
        elif tuple(-c for c in weight) in rs.positive_roots:
            name = _root_name("f", tuple(-c for c in weight))
        else:
            raise AssertionError("nonzero bracket outside the root spaces")
        b = basis_mats[name]
        for i, row in enumerate(b):
            for j, x in enumerate(row):
                if x:
                    c = Fraction(mat[i][j], x)
                    assert _add(mat, [[c * y for y in r] for r in b], -1) == _zeros(len(b))
                    assert c.denominator == 1
                    return {name: int(c)}
    # Cartan part: diagonal solve
    hs = [n for n in names if n[0] == "h"]
    n = len(mat)
    diag = [mat[i][i] for i in range(n)]
    cols = [[basis_mats[h][i][i] for i in range(n)] for h in hs]
    # least-squares free exact solve: pick independent rows greedily
    k = len(hs)
    rows = []
    for i in range(n):
        rows.append([Fraction(cols[c][i]) for c in range(k)] + [Fraction(diag[i])])
    # gaussian elimination
    piv_row = 0
    where = [-1] * k
    for c in range(k):
        p = next((r for r in range(piv_row, n) if rows[r][c] != 0), None)
        if p is None:
            continue
        rows[piv_row], rows[p] = rows[p], rows[piv_row]
        pv = rows[piv_row][c]
        rows[piv_row] = [x / pv for x in rows[piv_row]]
        for r in range(n):
            if r != piv_row and rows[r][c] != 0:
                f = rows[r][c]
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[piv_row])]
        where[c] = piv_row
        piv_row += 1
    sol = {hs[c]: rows[where[c]][k] for c in range(k)}
    for r in range(piv_row, n):
        assert rows[r][k] == 0
    assert all(v.denominator == 1 for v in sol.values())
    return {h: int(v) for h, v in sol.items() if v}


def chevalley_constants(rs: RootSystemDatum) -> ChevalleyBasis:
    simple = _simple_matrices(rs)
    mats = {}
    extraspecial = {}
    for i, m in enumerate(simple):
        mats[_root_name("e", rs.simple_root(i + 1))] = m
    for xi in rs.positive_roots:
        if sum(xi) == 1:
            continue
        i = next(
            i
            for i in range(rs.rank)
            if xi[i] > 0 and tuple(c - (j == i) for j, c in enumerate(xi)) in rs.positive_roots
        )
        beta = tuple(c - (j == i) for j, c in enumerate(xi))
        p = 0
        while tuple(c - (p + 1) * (j == i) for j, c in enumerate(beta)) in rs.positive_roots:
            p += 1
        alpha = rs.simple_root(i + 1)
        comm = _comm(mats[_root_name("e", alpha)], mats[_root_name("e", beta)])
        assert all(x % (p + 1) == 0 for r in comm for x in r)
        mats[_root_name("e", xi)] = [[x // (p + 1) for x in r] for r in comm]
        extraspecial[_root_name("e", xi)] = (_root_name("e", alpha), _root_name("e", beta), p + 1)
    for r in rs.positive_roots:
        mats[_root_name("f", r)] = _transpose(mats[_root_name("e", r)])
    for i in range(rs.rank):
        r = rs.simple_root(i + 1)
        mats[f"h{i + 1}"] = _comm(mats[_root_name("e", r)], mats[_root_name("f", r)])
    names = (
        tuple(_root_name("e", r) for r in rs.positive_roots)
        + tuple(f"h{i + 1}" for i in range(rs.rank))
        + tuple(_root_name("f", r) for r in rs.positive_roots)
    )
    weights = {}
    for r in rs.positive_roots:
        weights[_root_name("e", r)] = r
        weights[_root_name("f", r)] = tuple(-c for c in r)
    for i in range(rs.rank):
        weights[f"h{i + 1}"] = tuple(0 for _ in range(rs.rank))
    brackets = {}
    for x, y in itertools.product(names, repeat=2):
        w = tuple(a + b for a, b in zip(weights[x], weights[y]))
        brackets[(x, y)] = _decompose(_comm(mats[x], mats[y]), mats, names, weights, w, rs)
    return ChevalleyBasis(rs, names, weights, brackets, mats, extraspecial)


# -- Levi and parabolic data ------------------------------------------------------


@dataclass(frozen=True)
class LeviDatum:
    levi_simples: frozenset  # 1-based indices of simple roots in L
    orbit_params: tuple  # 1-based indices carrying lam_1..lam_m, in increasing order

    @property
    def m(self) -> int:
        return len(self.orbit_params)

    def lam_names(self) -> tuple:
        return tuple(f"lam{j + 1}" for j in range(self.m))

    def lam_of_simple(self, i: int):
        """Name of the parameter lam_j attached to h_i, or None for i in the Levi."""
        if i in self.levi_simples:
            return None
        return f"lam{self.orbit_params.index(i) + 1}"


def levi_datum(rs: RootSystemDatum, levi_simples=()) -> LeviDatum:
    s = frozenset(int(i) for i in levi_simples)
    if any(i < 1 or i > rs.rank for i in s):
        raise ValueError(f"Levi index out of range 1..{rs.rank}: {sorted(s)}")
    params = tuple(i for i in range(1, rs.rank + 1) if i not in s)
    if not params:
        raise ValueError("the Levi subset must leave at least one orbit parameter")
    return LeviDatum(s, params)


@dataclass(frozen=True)
class ParabolicDatum:
    rs: RootSystemDatum
    basis: ChevalleyBasis
    levi: LeviDatum
    n_minus_P_roots: tuple  # positive roots beta with f_beta spanning N^-_P, PBW order
    levi_roots: tuple

    @property
    def n_minus_P_basis(self) -> tuple:
        return tuple(self.basis.f(r) for r in self.n_minus_P_roots)

    @property
    def max_height(self) -> int:
        return max(sum(r) for r in self.rs.positive_roots)

    def lam_value(self, x: str):
        """lam(x) for a basis element: lam_j on h_i for orbit parameters, else 0."""
        if x[0] != "h":
            return None
        return self.levi.lam_of_simple(int(x[1:]))

    def to_json(self) -> dict:
        return {
            "algebra": self.rs.name,
            "levi": sorted(self.levi.levi_simples),
            "orbit_params": list(self.levi.orbit_params),
            "n_minus_P": list(self.n_minus_P_basis),
        }


def parabolic_split(rs: RootSystemDatum, levi: LeviDatum, basis: ChevalleyBasis | None = None) -> ParabolicDatum:
    basis = basis or chevalley_constants(rs)
    inside = [r for r in rs.positive_roots if all(c == 0 or (i + 1) in levi.levi_simples for i, c in enumerate(r))]
    outside = [r for r in rs.positive_roots if r not in inside]
    return ParabolicDatum(rs, basis, levi, tuple(outside), tuple(inside))


def root_data_json(rs: RootSystemDatum) -> str:
    return json.dumps(rs.to_json(), sort_keys=True)
