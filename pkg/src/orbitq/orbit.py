"""Classical oracles: the KKS bracket on S(g), evaluation at points of semisimple
orbits in sl_n, and weight multiplicities / Levi-invariant counts.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from math import prod

from .exact import Echelon, MultiPoly
from .liealg import ChevalleyBasis, LeviDatum, RootSystemDatum

__all__ = [
    "kks_bracket",
    "OrbitSample",
    "orbit_sample",
    "orbit_filtered_dim",
    "orbit_weight_dims",
    "weight_multiplicities",
    "weyl_dimension",
    "weyl_group",
    "levi_invariant_dim",
    "isotypic_multiplicities",
    "dominant_weights_up_to",
]


# -- KKS bracket --------------------------------------------------------------------


def kks_bracket(cb: ChevalleyBasis, f, g) -> MultiPoly:
    """{f, g} = sum_{x,y} df/dx dg/dy [x, y], the Leibniz extension of {x, y} = [x, y].

    Polynomials are MultiPoly values in variables named after basis elements.
    """
    f, g = MultiPoly.constant(0) + f, MultiPoly.constant(0) + g
    out = MultiPoly.constant(0)
    for x in f.free_vars():
        dfx = f.derivative(x)
        for y in g.free_vars():
            br = cb.bracket(x, y)
            if not br:
                continue
            lin = MultiPoly.constant(0)
            for z, c in br.items():
                lin = lin + MultiPoly.variable(z) * c
            out = out + dfx * g.derivative(y) * lin
    return out


# -- orbit sampling (sl_n) -------------------------------------------------------------


def _matmul(a, b):
    n = len(a)
    return [[sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)] for i in range(n)]


def base_point(rs: RootSystemDatum, labels) -> list:
    """Diagonal Lambda in sl_n with x_i - x_{i+1} = labels[i] and trace zero."""
    if rs.type_letter != "A":
        raise ValueError("orbit evaluation is implemented for sl_n only")
    n = rs.rank + 1
    xs = [Fraction(0)]
    for lab in labels:
        xs.append(xs[-1] - Fraction(lab))
    shift = sum(xs) / n
    xs = [x - shift for x in xs]
    return [[xs[i] if i == j else Fraction(0) for j in range(n)] for i in range(n)]


def _unimodular_pair(n, rng, steps):
    g = [[int(i == j) for j in range(n)] for i in range(n)]
    ginv = [row[:] for row in g]
    for _ in range(steps):
        i, j = rng.sample(range(n), 2)
        c = rng.choice([-2, -1, 1, 2])
        e = [[int(a == b) for b in range(n)] for a in range(n)]
        einv = [row[:] for row in e]
        e[i][j] = c
        einv[i][j] = -c
        g = _matmul(g, e)
        ginv = _matmul(einv, ginv)
    return g, ginv


@dataclass(frozen=True)
class OrbitSample:
    rs: RootSystemDatum
    labels: tuple  # lambda(h_i) for every simple root
    base: tuple
    points: tuple
    seed: int

    @property
    def eigenvalues(self):
        return tuple(self.base[i][i] for i in range(len(self.base)))


def orbit_sample(rs: RootSystemDatum, labels, count: int, seed: int = 0, steps: int = 6) -> OrbitSample:
    rng = random.Random(seed)
    lam = base_point(rs, labels)
    n = len(lam)
    pts = []
    for _ in range(count):
        g, ginv = _unimodular_pair(n, rng, steps)
        pts.append(tuple(tuple(r) for r in _matmul(_matmul(g, lam), ginv)))
    return OrbitSample(rs, tuple(labels), tuple(tuple(r) for r in lam), tuple(pts), seed)


def _coordinates(cb: ChevalleyBasis, point):
    """Value of each basis element, as a linear function, at a point of g* = g (trace form)."""
    n = len(point)
    out = {}
    for x in cb.names:
        m = cb.matrices[x]
        out[x] = sum(m[i][j] * point[j][i] for i in range(n) for j in range(n) if m[i][j])
    return out


def _monomials(names, d):
    for k in range(d + 1):
        yield from itertools.combinations_with_replacement(names, k)


def orbit_weight_dims(cb: ChevalleyBasis, sample: OrbitSample, d: int) -> dict:
    """Dimension of each weight space (Dynkin labels) of F^{<= d} = polynomials of degree <= d on the orbit.

    The orbit is torus-stable, so monomials of different weights never mix and
    each weight block is ranked separately.
    """
    monos = list(_monomials(cb.names, d))
    if len(sample.points) < len(monos):
        raise ValueError(f"insufficient points: {len(sample.points)} < {len(monos)} monomials")
    coords = [_coordinates(cb, p) for p in sample.points]
    rs = cb.rs
    blocks = {}
    for mono in monos:
        w = tuple(sum(cb.weights[x][j] for x in mono) for j in range(rs.rank))
        blocks.setdefault(rs.root_to_labels(w), []).append(mono)
    dims = {}
    for w, ms in blocks.items():
        ech = Echelon()
        for mono in ms:
            ech.add({k: prod((c[x] for x in mono), start=Fraction(1)) for k, c in enumerate(coords)})
        dims[w] = ech.rank
    return dims


def orbit_filtered_dim(cb: ChevalleyBasis, sample: OrbitSample, d: int) -> int:
    return sum(orbit_weight_dims(cb, sample, d).values())


# -- weights, Weyl group, multiplicities ----------------------------------------------------


def _form_labels(rs: RootSystemDatum, a, b):
    return rs.form(rs.labels_to_root_coords(a), rs.labels_to_root_coords(b))


def weyl_dimension(rs: RootSystemDatum, mu) -> int:
    num = Fraction(1)
    rho = rs.rho_labels
    mr = tuple(m + r for m, r in zip(mu, rho))
    for alpha in rs.positive_roots:
        a_lab = rs.root_to_labels(alpha)
        num *= _form_labels(rs, mr, a_lab) / _form_labels(rs, rho, a_lab)
    assert num.denominator == 1
    return int(num)


def weight_multiplicities(rs: RootSystemDatum, mu) -> dict:
    """Freudenthal recursion: weight (Dynkin labels) -> multiplicity in V_mu."""
    mu = tuple(mu)
    if any(m < 0 for m in mu):
        raise ValueError("mu must be dominant")
    rho = rs.rho_labels
    alphas = [rs.root_to_labels(a) for a in rs.positive_roots]
    simple = [rs.root_to_labels(rs.simple_root(i + 1)) for i in range(rs.rank)]
    mr = tuple(m + r for m, r in zip(mu, rho))
    top = _form_labels(rs, mr, mr)
    mult = {mu: 1}
    layer = [mu]
    while layer:
        cand = set()
        for nu in layer:
            for s in simple:
                cand.add(tuple(a - b for a, b in zip(nu, s)))
        nxt = []
        for nu in sorted(cand):
            nr = tuple(a + b for a, b in zip(nu, rho))
            denom = top - _form_labels(rs, nr, nr)
            if denom == 0:
                continue
            acc = Fraction(0)
            for a in alphas:
                k = 1
                while True:
                    up = tuple(x + k * y for x, y in zip(nu, a))
                    m = mult.get(up)
                    if m is None:
                        break
                    acc += m * _form_labels(rs, up, a)
                    k += 1
            val = 2 * acc / denom
            assert val.denominator == 1 and val >= 0
            if val:
                mult[nu] = int(val)
                nxt.append(nu)
        layer = nxt
    assert sum(mult.values()) == weyl_dimension(rs, mu)
    return mult


def _reflect(rs, i, labels):
    """s_i on Dynkin labels (i is 0-based)."""
    ai = rs.root_to_labels(rs.simple_root(i + 1))
    return tuple(x - labels[i] * a for x, a in zip(labels, ai))


def weyl_group(rs: RootSystemDatum, generators=None):
    """Elements of the (parabolic) Weyl group as (sign, word) pairs, via BFS on a regular orbit."""
    gens = list(range(rs.rank)) if generators is None else [i - 1 for i in generators]
    probe = tuple(range(2, 2 + rs.rank))  # strictly dominant, so the stabilizer is trivial
    seen = {probe: ()}
    layer = [probe]
    while layer:
        nxt = []
        for v in layer:
            for i in gens:
                w = _reflect(rs, i, v)
                if w not in seen:
                    seen[w] = (i,) + seen[v]
                    nxt.append(w)
        layer = nxt
    return [((-1) ** len(word), word) for word in seen.values()]


def _apply_word(rs, word, labels):
    for i in reversed(word):
        labels = _reflect(rs, i, labels)
    return labels


def levi_invariant_dim(rs: RootSystemDatum, levi: LeviDatum, mu) -> int:
    """ell_mu: multiplicity of the trivial L-module in V_mu restricted to L.

    Alternating sum over W_L of weight multiplicities at rho_L - w rho_L.
    """
    mult = weight_multiplicities(rs, mu)
    lroots = [r for r in rs.positive_roots if all(c == 0 or (i + 1) in levi.levi_simples for i, c in enumerate(r))]
    two_rho_l = tuple(sum(r[j] for r in lroots) for j in range(rs.rank))
    rho_l = tuple(Fraction(c, 2) for c in rs.root_to_labels(two_rho_l))
    total = 0
    for sign, word in weyl_group(rs, sorted(levi.levi_simples)):
        w_rho = _apply_word(rs, word, rho_l)
        nu = tuple(a - b for a, b in zip(rho_l, w_rho))
        assert all(Fraction(x).denominator == 1 for x in nu)
        total += sign * mult.get(tuple(int(x) for x in nu), 0)
    return total


def isotypic_multiplicities(rs: RootSystemDatum, weight_dims: dict) -> dict:
    """Multiplicities of the V_mu in a finite-dimensional module given by its weight dims."""
    rho = rs.rho_labels
    group = weyl_group(rs)
    out = {}
    for mu in weight_dims:
        if any(m < 0 for m in mu):
            continue
        mr = tuple(m + r for m, r in zip(mu, rho))
        total = 0
        for sign, word in group:
            w_rho = _apply_word(rs, word, rho)
            nu = tuple(a - b + c for a, b, c in zip(mu, w_rho, rho))
            total += sign * weight_dims.get(nu, 0)
        assert total >= 0, (mu, total, mr)
        if total:
            out[mu] = total
    return out


def dominant_weights_up_to(rs: RootSystemDatum, dim_cap: int = 64, root_lattice_only: bool = True):
    """Dominant mu with dim V_mu <= dim_cap (optionally only those in the root lattice)."""
    out = []
    for mu in itertools.product(range(0, 8), repeat=rs.rank):
        if weyl_dimension(rs, mu) > dim_cap:
            continue
        if root_lattice_only:
            c = rs.labels_to_root_coords(mu)
            if any(Fraction(x).denominator != 1 for x in c):
                continue
        out.append(mu)
    return out
