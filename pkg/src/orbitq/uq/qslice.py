"""The algebra A_{t,lambda,h}: images of h phi_{q,lambda/h} on G_q, as truncated t-series.

Matrix entries of phi_{q,lambda}(g) live in Q(q)[L^{+-1}]. They are expanded with
q = e^t and L = e^{lambda t}, then lambda -> lambda/h and the result multiplied by h.
At t^0 the entries are polynomial in (lambda, h) and reproduce the classical
rescaled action; from t^1 on, powers of lambda/h appear (the coefficient ring is
that of formal series in t, lambda/h and h), so polynomiality is only reported.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from ..exact import Echelon, FractionElement, MultiPoly, q_series_expand, solve_rational, t_adic_valuations
from ..liealg import chevalley_constants, levi_datum, parabolic_split
from ..quantizer import SliceTower, flatten
from .algebra import ONE, UqElement
from .fu import GqBasis
from .module import QVermaModule, ad_action, phi

__all__ = [
    "QGenerators",
    "QSliceReport",
    "build_q_slice",
    "equivariance_check",
    "second_bracket_sl2",
]

T = "t"
HV = "h"


def _add(acc, vec, c=None):
    for k, v in vec.items():
        val = v if c is None else v * c
        s = acc.get(k)
        s = val if s is None else s + val
        if s:
            acc[k] = s
        else:
            acc.pop(k, None)
    return acc


class QGenerators:
    """Rescaled series actions a_X = h phi_{q,lambda/h}(g_X) on basis vectors, memoized."""

    def __init__(self, module: QVermaModule, gq: GqBasis, order: int):
        self.module = module
        self.gq = gq
        self.order = order
        self.labels = tuple(gq.elements)
        self.lam_vars = module.levi.lam_names()
        self.exponents = {"L" + v[3:]: MultiPoly.variable(v) for v in self.lam_vars}
        self._subs = {v: MultiPoly.variable(v) * MultiPoly.variable(HV, -1) for v in self.lam_vars}
        self._h = MultiPoly.variable(HV)
        self._cache = {}
        self.weights = {x: gq.elements[x].weight() for x in self.labels}

    def rescale(self, c: FractionElement) -> MultiPoly:
        s = q_series_expand(c, self.order, self.exponents).poly
        return (s.subs(self._subs) * self._h).truncate(T, self.order)

    def on_basis(self, x, fw) -> dict:
        key = (x, fw)
        hit = self._cache.get(key)
        if hit is None:
            raw = self.module.act(self.gq.elements[x], {fw: ONE})
            hit = {k: p for k, v in raw.items() if (p := self.rescale(v))}
            self._cache[key] = hit
        return hit

    def apply(self, x, vec: dict) -> dict:
        out = {}
        for fw, c in vec.items():
            for k, p in self.on_basis(x, fw).items():
                val = (p * c).truncate(T, self.order)
                s = out.get(k)
                s = val if s is None else s + val
                if s:
                    out[k] = s
                else:
                    out.pop(k, None)
        return out


@dataclass
class QSliceReport:
    degree_ranks: dict  # d -> [rank at t-order 0..N]
    t0_ranks: list
    classical_ranks: list
    t0_matches_classical: list
    polynomial_by_order: dict  # d -> [bool per t-order]
    depth: int
    order: int
    valuations: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "schema": 1,
            "t_order": self.order,
            "depth": self.depth,
            "table": [
                {"d": d, "rank_by_t_order": r, "rank_t0": self.t0_ranks[d], "classical_rank": self.classical_ranks[d],
                 "t0_span_equals_classical": self.t0_matches_classical[d],
                 "polynomial_in_lambda_h_by_t_order": self.polynomial_by_order[d]}
                for d, r in sorted(self.degree_ranks.items())
            ],
        }


def _fw_to_mono(fw):
    return (len(fw),)


def _t_coeffs(op_cols, order):
    """Split entries into t-coefficient lists keyed by (row, col, lambda/h monomial)."""
    vec = {}
    for c, col in op_cols.items():
        for r, p in col.items():
            for k, coeff in p.coeffs_in(T).items():
                for e, val in coeff.terms.items():
                    key = (r, c, tuple((v, x) for v, x in zip(coeff.vars, e) if x))
                    vec.setdefault(key, [Fraction(0)] * (order + 1))[k] = val
    return vec


def _is_polynomial_h(p: MultiPoly) -> bool:
    if HV not in p.vars:
        return True
    i = p.vars.index(HV)
    return all(e[i] >= 0 for e in p.terms)


def build_q_slice(gq: GqBasis, d_max: int, *, D: int | None = None, order: int = 2) -> QSliceReport:
    """Degree <= d_max slices of A_{t,lambda,h} for sl2 and their ranks per t-order."""
    alg = next(iter(gq.elements.values())).alg
    rs = alg.rs
    if rs.rank != 1:
        raise ValueError("two-parameter slices are implemented for sl2")
    levi = levi_datum(rs, ())
    module = QVermaModule(rs, levi, alg)
    gens = QGenerators(module, gq, order)
    D = D if D is not None else max(2 * d_max, 1)
    Tcol = D - d_max
    cols = module.basis(Tcol)
    pd = parabolic_split(rs, levi)
    classical = SliceTower(pd, D, d_max)
    lam_h = [MultiPoly.variable(v) for v in list(levi.lam_names()) + [HV]]

    zero = tuple(0 for _ in range(rs.rank))
    one = MultiPoly.constant(1)
    basis = [(zero, {c: {c: one} for c in cols})]
    ranks, t0_ranks, matches, poly_flags, vals = {}, [], [], {}, {}
    for d in range(d_max + 1):
        if d > 0:
            echs, new = {}, []
            for w, opc in basis:
                cands = []
                for x in gens.labels:
                    wx = tuple(a + b for a, b in zip(w, gens.weights[x]))
                    cands.append((wx, {c: gens.apply(x, v) for c, v in opc.items()}))
                for p in lam_h:
                    cands.append((w, {c: {r: (e * p) for r, e in v.items()} for c, v in opc.items()}))
                for wc, oc in cands:
                    ech = echs.setdefault(wc, Echelon())
                    if ech.add(_flat(oc)):
                        new.append((wc, oc))
            basis = new
        # ranks per t-order, block by weight
        by_w = {}
        for w, oc in basis:
            by_w.setdefault(w, []).append(oc)
        per_order = [0] * (order + 1)
        all_vals = []
        for w, ocs in by_w.items():
            v = t_adic_valuations([_t_coeffs(oc, order) for oc in ocs], order)
            all_vals.extend(v)
            for n in range(order + 1):
                per_order[n] += sum(1 for x in v if x <= n)
        ranks[d] = per_order
        vals[d] = sorted(all_vals)
        # t^0 span against the classical slice
        t0 = Echelon()
        t0_ops = []
        for w, oc in basis:
            cols0 = {}
            for c, col in oc.items():
                for r, p in col.items():
                    p0 = p.coeffs_in(T).get(0)
                    if p0:
                        cols0.setdefault(_fw_to_mono(c), {})[_fw_to_mono(r)] = p0
            flat0 = _flat_mono(cols0)
            if t0.add(flat0):
                t0_ops.append(flat0)
        t0_ranks.append(t0.rank)
        cl = Echelon()
        for op in classical.slices[d].basis_ops:
            cl.add(flatten(op))
        same = t0.rank == cl.rank and all(cl.contains(v) for v in t0_ops)
        matches.append(same)
        flags = []
        for n in range(order + 1):
            ok = True
            for w, oc in basis:
                for col in oc.values():
                    for p in col.values():
                        cn = p.coeffs_in(T).get(n)
                        if cn is not None and not _is_polynomial_h(cn):
                            ok = False
            flags.append(ok)
        poly_flags[d] = flags
        if not flags[0]:
            raise ValueError(f"degree {d}: t^0 entries are not polynomial in (lambda, h)")
    return QSliceReport(ranks, t0_ranks, classical.ranks, matches, poly_flags, D, order, vals)


def _flat(op_cols):
    out = {}
    for c, col in op_cols.items():
        for r, p in col.items():
            for e, val in p.terms.items():
                out[(r, c, tuple((v, x) for v, x in zip(p.vars, e) if x))] = val
    return out


def _flat_mono(cols):
    out = {}
    for c, col in cols.items():
        for r, p in col.items():
            for e, val in p.terms.items():
                out[(r, c, tuple((v, x) for v, x in zip(p.vars, e) if x))] = val
    return out


# -- equivariance ------------------------------------------------------------------------------------


def _random_op(rng, module, gq, degree):
    labels = list(gq.elements)
    ops = [phi(module, gq.elements[x]) for x in labels]
    if degree == 1:
        coeffs = [rng.randint(-3, 3) for _ in ops]
        if not any(coeffs):
            coeffs[0] = 1
        out = None
        for c, op in zip(coeffs, ops):
            if c:
                term = op.scale(c)
                out = term if out is None else out + term
        return out
    i, j = rng.randrange(len(ops)), rng.randrange(len(ops))
    return ops[i] @ ops[j]


def equivariance_check(gq: GqBasis, pairs: int = 20, seed: int = 0, depth: int = 2) -> dict:
    """sum ad(u_(1))(A) ad(u_(2))(B) = ad(u)(AB) for u in {E, F, K}, and ad(uv) = ad(u) ad(v)."""
    alg = next(iter(gq.elements.values())).alg
    rs = alg.rs
    module = QVermaModule(rs, levi_datum(rs, ()), alg)
    cols = module.basis(depth)
    rng = random.Random(seed)
    us = {"E": alg.E(), "F": alg.F(), "K": alg.K()}
    results = []
    for n in range(pairs):
        A = _random_op(rng, module, gq, rng.choice([1, 2]))
        B = _random_op(rng, module, gq, rng.choice([1, 2]))
        row = {"pair": n}
        for name, u in us.items():
            lhs = ad_action(u, A @ B)
            rhs = None
            for (a, b), c in alg.coproduct(u).terms.items():
                term = ad_action(UqElement(alg, {a: c}), A) @ ad_action(UqElement(alg, {b: ONE}), B)
                rhs = term if rhs is None else rhs + term
            row[name] = lhs.equals_on(rhs, cols)
        letters = [alg.E(), alg.F(), alg.K(), alg.K(1, -1)]
        u = alg.word(*rng.choices(letters, k=rng.randint(1, 2)))
        v = alg.word(*rng.choices(letters, k=rng.randint(1, 2)))
        row["ad_hom"] = ad_action(u * v, A).equals_on(ad_action(u, ad_action(v, A)), cols)
        results.append(row)
    ok = all(all(v for k, v in r.items() if k != "pair") for r in results)
    return {"pairs": results, "all_exact": ok, "seed": seed, "depth": depth}


# -- second bracket -----------------------------------------------------------------------------------


def _bivector_bracket(cb, x, y) -> MultiPoly:
    """{x, y}_R = [e, x][f, y] - [f, x][e, y] as a quadratic polynomial in the coordinates of g."""
    e, f = cb.e((1,)), cb.f((1,))
    out = MultiPoly.constant(0)
    for a, b, s in ((e, f, 1), (f, e, -1)):
        for z, c1 in cb.bracket(a, x).items():
            for w, c2 in cb.bracket(b, y).items():
                out = out + MultiPoly.variable(z) * MultiPoly.variable(w) * (s * c1 * c2)
    return out


def _kks(cb, p: MultiPoly, q: MultiPoly) -> MultiPoly:
    out = MultiPoly.constant(0)
    for x in p.vars:
        if x not in cb.names:
            continue
        dp = p.derivative(x)
        for y in q.vars:
            if y not in cb.names:
                continue
            lin = MultiPoly.constant(0)
            for z, c in cb.bracket(x, y).items():
                lin = lin + MultiPoly.variable(z) * c
            out = out + dp * q.derivative(y) * lin
    return out


def _quadratic_invariant(cb) -> MultiPoly:
    """The KKS-central quadratic polynomial in the coordinates of g (normalized, integral)."""
    names = list(cb.names)
    quads = [MultiPoly.variable(a) * MultiPoly.variable(b) for i, a in enumerate(names) for b in names[i:]]
    vectors = []
    for qd in quads:
        vec = {}
        for x in names:
            for key, c in _flat_poly(_kks(cb, MultiPoly.variable(x), qd), x).items():
                vec[key] = c
        vectors.append(vec)
    # first quadratic whose bracket image depends on the earlier ones gives the kernel vector
    for i in range(len(quads)):
        sol = solve_rational(vectors[:i], {k: -v for k, v in vectors[i].items()})
        if sol is not None:
            out = quads[i]
            for c, qd in zip(sol, quads[:i]):
                if c:
                    out = out + qd * c
            return out
    raise ValueError("no quadratic invariant")


def _flat_poly(p: MultiPoly, tag=()):
    return {(tag, tuple((v, x) for v, x in zip(p.vars, e) if x)): c for e, c in p.terms.items()}


def second_bracket_sl2(gq: GqBasis, *, D: int = 6, order: int = 2) -> dict:
    """Both semiclassical brackets of A_{t,lambda,h} on the linear generators of sl2.

    [a_X, a_Y] = h a_{[X,Y]} + t Q_{XY} + O(t^2): the first term is the KKS part.
    Q_{XY} is written as a polynomial in the t^0 generators with coefficients in
    (lambda, h); its value at h = 0 is the t-part of the bracket, a function on
    the orbit. It is compared with the E^F bivector bracket modulo the orbit
    relation I = I(lambda).
    """
    if order < 2:
        raise ValueError("extraction needs t-order >= 2")
    alg = next(iter(gq.elements.values())).alg
    rs = alg.rs
    if rs.rank != 1:
        raise ValueError("the second bracket is extracted for sl2")
    cb = chevalley_constants(rs)
    levi = levi_datum(rs, ())
    module = QVermaModule(rs, levi, alg)
    gens = QGenerators(module, gq, order)
    cols = module.basis(D - 2)
    labels = gens.labels
    lam = levi.lam_names()[0]
    hpoly = MultiPoly.variable(HV)

    def tcoef(vec, n):
        return {r: c for r, p in vec.items() if (c := p.coeffs_in(T).get(n))}

    def flat_op(op):
        out = {}
        for c, col in op.items():
            for r, p in col.items():
                for e, v in p.terms.items():
                    out[(r, c, tuple((x, k) for x, k in zip(p.vars, e) if k))] = v
        return out

    # candidates: (lambda, h)-monomial * ordered product of t^0 generators, total degree 2
    order_labels = sorted(labels, key=lambda x: (x[0] != "f", x[0] != "h"))  # f, h, e
    prods = [((), {c: {c: MultiPoly.constant(1)} for c in cols})]
    prods += [((x,), {c: tcoef(gens.on_basis(x, c), 0) for c in cols}) for x in order_labels]
    for i, x in enumerate(order_labels):
        for y in order_labels[i:]:
            prods.append(((x, y), {c: tcoef(gens.apply(x, tcoef(gens.on_basis(y, c), 0)), 0) for c in cols}))
    scalars = {0: [MultiPoly.constant(1)], 1: [MultiPoly.variable(lam), hpoly]}
    scalars[2] = [MultiPoly.variable(lam) ** 2, MultiPoly.variable(lam) * hpoly, hpoly**2]
    cands = []
    for word, op in prods:
        for m in scalars[2 - len(word)]:
            cands.append((word, m, flat_op({c: {r: p * m for r, p in col.items()} for c, col in op.items()})))

    invariant = _quadratic_invariant(cb)
    h_name = cb.h(1)
    value = invariant.subs({n: (MultiPoly.variable(lam) if n == h_name else 0) for n in cb.names})
    relation = invariant - value

    table, ratio, kks_ok, poly_ok, proportional, fitted = [], None, True, True, True, True
    polys = {}
    for x in labels:
        for y in labels:
            if x == y:
                continue
            comm = {}
            for c in cols:
                v = _add(dict(gens.apply(x, gens.on_basis(y, c))), gens.apply(y, gens.on_basis(x, c)), -1)
                for z, k in cb.bracket(x, y).items():
                    _add(v, gens.on_basis(z, c), hpoly * (-k))
                comm[c] = v
            kks_ok &= all(not tcoef(v, 0) for v in comm.values())
            q1 = {c: tcoef(v, 1) for c, v in comm.items()}
            poly_ok &= all(_is_polynomial_h(p) for col in q1.values() for p in col.values())
            sol = solve_rational([v for _, _, v in cands], flat_op(q1))
            if sol is None:
                fitted = False
                table.append({"pair": [x, y], "fitted": False})
                continue
            qpoly = MultiPoly.constant(0)
            for (word, m, _), coeff in zip(cands, sol):
                if coeff:
                    term = m * coeff
                    for z in word:
                        term = term * MultiPoly.variable(z)
                    qpoly = qpoly + term
            qpoly = qpoly.subs({HV: 0})
            polys[(x, y)] = qpoly
            rb = _bivector_bracket(cb, x, y)
            # qpoly = c * rb + k * relation, c and k rational
            sol2 = solve_rational([_flat_poly(rb), _flat_poly(relation)], _flat_poly(qpoly))
            ok = sol2 is not None
            local = sol2[0] if ok else None
            if ok and not rb:
                local = None
            if ok and local is not None:
                if ratio is None:
                    ratio = local
                elif ratio != local:
                    ok = False
            proportional &= ok
            table.append({"pair": [x, y], "fitted": True, "t_part": str(qpoly), "bivector": str(rb),
                          "proportional": ok, "ratio": None if local is None else str(local)})
    antisym = all(not (polys[(x, y)] + polys[(y, x)]) for (x, y) in polys if (y, x) in polys)
    return {
        "pairs": table,
        "kks_part_matches": kks_ok,
        "t_part_polynomial_in_h": poly_ok,
        "antisymmetric": antisym,
        "proportional": fitted and proportional and ratio is not None,
        "scalar": None if ratio is None else str(ratio),
        "orbit_relation": str(relation),
        "t_order": order,
        "depth": D,
    }
