"""The graded algebra A_{lambda,h}: images of the rescaled Verma action, degree by degree.

Operators are restricted to the input vectors of depth <= T (the trusted
columns). Since the module action is computed without truncation, every
restricted operator is exact; the depth only controls how faithfully the finite
set of columns sees the algebra, which is why ranks are re-checked at larger
depths until they stop changing.
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .exact import Echelon, MultiPoly, PolyMatrix, rank_over_fractions
from .liealg import ParabolicDatum
from .verma import VermaModule, add_into

__all__ = [
    "Op",
    "GradedSlice",
    "SliceTower",
    "HilbertTable",
    "build_slice",
    "hilbert_function",
    "commutativity_mod_h",
    "leading_term_eval",
    "flatness_evidence",
    "multiplicity_check",
    "specialized_hilbert",
    "random_point",
]

H = "h"


@dataclass
class Op:
    """An operator of definite ad-weight, stored column by column on the trusted inputs."""

    weight: tuple
    cols: dict  # input monomial -> {output monomial: coefficient}

    def scaled(self, c) -> Op:
        return Op(self.weight, {m: {k: v * c for k, v in col.items()} for m, col in self.cols.items()})

    def is_zero(self) -> bool:
        return not any(self.cols.values())


def _exp_key(p: MultiPoly):
    return tuple(sorted(tuple((v, k) for v, k in zip(p.vars, e) if k) for e in p.terms))


def flatten(op: Op) -> dict:
    """Coordinates over Q: (output, input, monomial in lambda/h) -> rational."""
    out = {}
    for c, col in op.cols.items():
        for r, p in col.items():
            if isinstance(p, MultiPoly):
                for e, coeff in p.terms.items():
                    out[(r, c, tuple((v, k) for v, k in zip(p.vars, e) if k))] = coeff
            else:
                out[(r, c, ())] = p
    return out


def identity(columns) -> Op:
    one = MultiPoly.constant(1)
    return Op(None, {m: {m: one} for m in columns})


def apply_generator(vm: VermaModule, x: str, op: Op) -> Op:
    w = vm.pd.basis.weights[x]
    weight = w if op.weight is None else tuple(a + b for a, b in zip(op.weight, w))
    return Op(weight, {m: vm.rescaled_vec(x, col) for m, col in op.cols.items()})


@dataclass
class GradedSlice:
    degree: int
    spanning_count: int
    basis_ops: list
    rank: int
    trusted_depth: int
    weights: dict = field(default_factory=dict)  # ad-weight -> count in basis


class SliceTower:
    """Slices slice_0 .. slice_dmax of A_{lambda,h} on the columns of depth <= T."""

    def __init__(self, pd: ParabolicDatum, D: int, d_max: int, module: VermaModule | None = None):
        self.pd = pd
        self.vm = module or VermaModule(pd)
        self.D = D
        self.d_max = d_max
        self.H = pd.max_height
        self.T = D - d_max * self.H
        if self.T < 0:
            raise ValueError(f"depth budget exhausted: D={D} < d_max * max height = {d_max * self.H}")
        self.columns = tuple(self.vm.monomials(self.T))
        self.params = list(pd.levi.lam_names()) + [H]
        zero = tuple(0 for _ in range(pd.rs.rank))
        idop = identity(self.columns)
        idop.weight = zero
        self.slices = [GradedSlice(0, 1, [idop], 1, self.T, {zero: 1})]
        for d in range(1, d_max + 1):
            self.slices.append(self._next(self.slices[-1]))

    def _next(self, prev: GradedSlice) -> GradedSlice:
        vm = self.vm
        echelons = {}
        basis = []
        count = 0
        params = [MultiPoly.variable(v) for v in self.params]
        for b in prev.basis_ops:
            cands = [apply_generator(vm, x, b) for x in vm.cb.names] + [b.scaled(p) for p in params]
            for op in cands:
                count += 1
                ech = echelons.setdefault(op.weight, Echelon())
                if ech.add(flatten(op)):
                    basis.append(op)
        weights = {w: e.rank for w, e in echelons.items() if e.rank}
        return GradedSlice(prev.degree + 1, count, basis, len(basis), self.T, weights)

    @property
    def ranks(self):
        return [s.rank for s in self.slices]


def build_slice(d: int, pd: ParabolicDatum, D: int) -> GradedSlice:
    return SliceTower(pd, D, d).slices[d]


# -- Hilbert function with adaptive depth ----------------------------------------------------


@dataclass
class HilbertTable:
    algebra: str
    levi: list
    ranks: list
    depth: int
    stabilized: bool
    history: list  # (D, ranks) for every depth tried

    def to_json(self) -> dict:
        return {
            "schema": 1,
            "algebra": self.algebra,
            "levi": self.levi,
            "table": [{"d": d, "rank": r} for d, r in enumerate(self.ranks)],
            "depth": self.depth,
            "stabilized": self.stabilized,
            "history": [{"depth": D, "ranks": r} for D, r in self.history],
        }

    def to_csv(self) -> str:
        return "degree,rank\n" + "".join(f"{d},{r}\n" for d, r in enumerate(self.ranks))


def start_depth(pd: ParabolicDatum, d_max: int) -> int:
    return max(2 * d_max * pd.max_height, 1)


def hilbert_function(pd: ParabolicDatum, d_max: int, *, depth_cap: int | None = None, start: int | None = None):
    """Graded ranks for d <= d_max; D grows by 2 until two consecutive increments agree."""
    D = start if start is not None else start_depth(pd, d_max)
    cap = depth_cap if depth_cap is not None else D + 12
    vm = VermaModule(pd)
    history = []
    towers = {}
    while D <= cap:
        tower = SliceTower(pd, D, d_max, module=vm)
        towers[D] = tower
        history.append((D, tower.ranks))
        if len(history) >= 3 and history[-1][1] == history[-2][1] == history[-3][1]:
            D0 = history[-3][0]
            return HilbertTable(pd.rs.name, sorted(pd.levi.levi_simples), history[-1][1], D0, True, history), towers[D0]
        D += 2
    last = history[-1]
    return HilbertTable(pd.rs.name, sorted(pd.levi.levi_simples), last[1], last[0], False, history), towers[last[0]]


# -- commutativity modulo h ---------------------------------------------------------------------


def commutativity_mod_h(pd: ParabolicDatum, D: int | None = None, module: VermaModule | None = None) -> dict:
    """(1/h)[(h phi)X, (h phi)Y] - (h phi)[X,Y] on the trusted columns, for all X, Y."""
    vm = module or VermaModule(pd)
    D = D if D is not None else start_depth(pd, 2)
    T = D - 2 * pd.max_height
    cols = vm.monomials(T)
    names = vm.cb.names
    hvar = MultiPoly.variable(H)
    pairs = []
    for i, x in enumerate(names):
        for y in names[i + 1:]:
            worst = 0
            for c in cols:
                v = {c: MultiPoly.constant(1)}
                lhs = vm.rescaled_vec(x, vm.rescaled_vec(y, v))
                add_into(lhs, vm.rescaled_vec(y, vm.rescaled_vec(x, v)), -1)
                rhs = {}
                for z, k in vm.cb.bracket(x, y).items():
                    add_into(rhs, vm.rescaled_vec(z, v), k)
                add_into(lhs, rhs, hvar * -1)
                worst = max(worst, len(lhs))
            pairs.append({"pair": [x, y], "nonzero_entries": worst})
    return {
        "algebra": pd.rs.name,
        "levi": sorted(pd.levi.levi_simples),
        "depth": D,
        "pairs": pairs,
        "max_residual": max((p["nonzero_entries"] for p in pairs), default=0),
    }


# -- leading terms -------------------------------------------------------------------------------


def _distinct_orders(word):
    counts = {}
    for x in word:
        counts[x] = counts.get(x, 0) + 1
    return set(itertools.permutations(word)), counts


def leading_term_eval(vm: VermaModule, word, assignment: dict | None = None):
    """h-constant term of the v_0-coefficient of phi_{lambda,h}(sym(word)) v_0, and f(lambda).

    Returns (observed, expected); both are MultiPoly in lambda, or rationals when
    an assignment of the lambda variables is given.
    """
    word = tuple(word)
    orders, _ = _distinct_orders(word)
    total = MultiPoly.constant(0)
    one = {vm.zero: MultiPoly.constant(1)}
    for order in orders:
        v = one
        for x in reversed(order):
            v = vm.rescaled_vec(x, v)
        total = total + v.get(vm.zero, MultiPoly.constant(0))
    # each distinct order stands for (#permutations / #orders) identical terms
    total = total / len(orders)
    observed = total.subs({H: 0})
    expected = MultiPoly.constant(1)
    for x in word:
        expected = expected * (vm.lam(x) if x[0] == "h" else MultiPoly.constant(0))
    if assignment is not None:
        return observed.evaluate(assignment), expected.evaluate(assignment)
    return observed, expected


# -- flatness -------------------------------------------------------------------------------------


def random_point(pd: ParabolicDatum, rng: random.Random, *, h=None) -> dict:
    pt = {v: rng.choice([-1, 1]) * rng.randint(1, 100) for v in pd.levi.lam_names()}
    pt[H] = rng.choice([-1, 1]) * rng.randint(1, 100) if h is None else h
    return pt


def _weight_blocks(ops):
    blocks = {}
    for op in ops:
        blocks.setdefault(op.weight, []).append(op)
    return blocks


def generic_rank(sl: GradedSlice) -> int:
    """Rank of the slice over the fraction field Q(lambda, h), block by ad-weight."""
    total = 0
    for w, ops in sorted(_weight_blocks(sl.basis_ops).items()):
        keys = sorted({(r, c) for op in ops for c, col in op.cols.items() for r in col})
        index = {k: i for i, k in enumerate(keys)}
        rows = []
        for op in ops:
            row = [0] * len(keys)
            for c, col in op.cols.items():
                for r, p in col.items():
                    row[index[(r, c)]] = p
            rows.append(row)
        total += rank_over_fractions(PolyMatrix(rows, cols=len(keys)))
    return total


def specialize_op(op: Op, point: dict) -> dict:
    out = {}
    for c, col in op.cols.items():
        for r, p in col.items():
            val = p.evaluate(point) if isinstance(p, MultiPoly) else p
            if val:
                out[(r, c)] = val
    return out


def specialized_rank(sl: GradedSlice, point: dict) -> int:
    total = 0
    for w, ops in _weight_blocks(sl.basis_ops).items():
        ech = Echelon()
        for op in ops:
            ech.add(specialize_op(op, point))
        total += ech.rank
    return total


class _Towers:
    """Slice towers at D, D+2, D+4, ... built on demand and sharing one module."""

    def __init__(self, pd, d_max, D, cap):
        self.pd, self.d_max, self.D, self.cap = pd, d_max, D, cap
        self.vm = VermaModule(pd)
        self._built = {}

    def __getitem__(self, D):
        if D not in self._built:
            self._built[D] = SliceTower(self.pd, D, self.d_max, module=self.vm)
        return self._built[D]

    def stable(self, measure):
        """Apply ``measure`` to towers of growing depth until two increments agree."""
        history = []
        D = self.D
        while D <= self.cap:
            history.append((D, measure(self[D])))
            if len(history) >= 3 and history[-1][1] == history[-2][1] == history[-3][1]:
                return history[-1][1], history[-3][0], True
            D += 2
        return history[-1][1], history[-1][0], False


def specialized_hilbert(pd: ParabolicDatum, d_max: int, point: dict, *, D=None, depth_cap=None) -> HilbertTable:
    """Q-ranks of the degree <= d slices at a numeric point (lambda_0, h_0), depth-stabilized."""
    if any(point.get(v, 1) == 0 for v in pd.levi.lam_names()):
        raise ValueError("lambda_i must be nonzero")
    D = D if D is not None else start_depth(pd, d_max)
    towers = _Towers(pd, d_max, D, depth_cap if depth_cap is not None else D + 12)
    ranks, depth, ok = towers.stable(lambda t: [specialized_rank(s, point) for s in t.slices])
    return HilbertTable(pd.rs.name, sorted(pd.levi.levi_simples), ranks, depth, ok, [])


def flatness_evidence(pd: ParabolicDatum, d_max: int, trials: int = 5, seed: int = 0, *, D=None, depth_cap=None, extra_points=()):
    """Generic rank over Q(lambda,h) vs Q-rank at random points of Lambda_L x (Q minus 0), per degree.

    Every rank (generic and specialized) is taken at the first depth after which
    two further increments leave it unchanged. Points with h = 0 are evaluated
    on the operator image, which is not the fiber of A at h = 0; they are
    reported separately together with the graded quotient dims of A/hA.
    """
    D = D if D is not None else start_depth(pd, d_max)
    towers = _Towers(pd, d_max, D, depth_cap if depth_cap is not None else D + 12)
    rng = random.Random(seed)
    graded, _, _ = towers.stable(lambda t: t.ranks)
    generic, gD, g_ok = towers.stable(lambda t: [generic_rank(s) for s in t.slices])
    points = [random_point(pd, rng) for _ in range(trials)]
    trials_out = []
    for pt in points:
        ranks, pD, ok = towers.stable(lambda t: [specialized_rank(s, pt) for s in t.slices])
        trials_out.append({"point": pt, "ranks": ranks, "depth": pD, "stabilized": ok, "match": ranks == generic})
    extras = []
    for pt in extra_points:
        ranks, pD, ok = towers.stable(lambda t: [specialized_rank(s, pt) for s in t.slices])
        drops = [d for d, (a, b) in enumerate(zip(ranks, generic)) if a != b]
        extras.append({"point": pt, "ranks": ranks, "depth": pD, "stabilized": ok, "drops_at": drops,
                       "kind": "operator image at h = 0" if pt.get(H) == 0 else "fiber"})
    return {
        "algebra": pd.rs.name,
        "levi": sorted(pd.levi.levi_simples),
        "depth": gD,
        "graded_ranks": graded,
        "quotient_by_h": [graded[0]] + [b - a for a, b in zip(graded, graded[1:])],
        "generic_ranks": generic,
        "stabilized": g_ok and all(t["stabilized"] for t in trials_out),
        "trials": trials_out,
        "flat": all(t["match"] for t in trials_out),
        "special_points": extras,
    }


# -- isotypic multiplicities ---------------------------------------------------------------------


def _numeric_generator(vm: VermaModule, x: str, point: dict):
    def act(vec):
        out = {}
        for m, c in vec.items():
            for m2, p in vm.rescaled(x, m).items():
                val = p.evaluate(point) * c
                if val:
                    s = out.get(m2, 0) + val
                    if s:
                        out[m2] = s
                    else:
                        out.pop(m2)
        return out

    return act


def highest_weight_counts(pd: ParabolicDatum, point: dict, d_max: int, D: int, module: VermaModule | None = None) -> dict:
    """Dominant mu -> number of ad-highest-weight vectors of weight mu in the specialized span of degree <= d_max."""
    vm = module or VermaModule(pd)
    tower = SliceTower(pd, D, d_max, module=vm)
    rs = pd.rs
    raising = [_numeric_generator(vm, vm.cb.e(rs.simple_root(i + 1)), point) for i in range(rs.rank)]
    cols = tower.columns
    out = {}
    for w, ops in _weight_blocks(tower.slices[-1].basis_ops).items():
        mu = rs.root_to_labels(w)
        if any(m < 0 for m in mu):
            continue
        ech = Echelon()
        span = []
        for op in ops:
            vec = specialize_op(op, point)
            if ech.add(vec):
                span.append(vec)
        images = Echelon()
        for vec in span:
            as_cols = {}
            for (r, c), val in vec.items():
                as_cols.setdefault(c, {})[r] = val
            comm = {}
            for i, e in enumerate(raising):
                for c in cols:
                    # [e, A](c) = e(A c) - A(e c)
                    left = e(as_cols.get(c, {}))
                    right = {}
                    for m, val in e({c: 1}).items():
                        for r, a in as_cols.get(m, {}).items():
                            right[r] = right.get(r, 0) + val * a
                    for r, val in left.items():
                        comm[(i, r, c)] = comm.get((i, r, c), 0) + val
                    for r, val in right.items():
                        comm[(i, r, c)] = comm.get((i, r, c), 0) - val
            images.add({k: v for k, v in comm.items() if v})
        n = len(span) - images.rank
        if n:
            out[mu] = n
    return out


def multiplicity_check(pd: ParabolicDatum, lam0, h0, d_max: int, *, D=None, filtered_oracle=None) -> dict:
    """Compare highest-weight-vector counts n_mu with ell_mu (full) and, if given, the filtered oracle."""
    from .orbit import levi_invariant_dim

    if any(x == 0 for x in lam0):
        raise ValueError("lambda_i must be nonzero")
    if h0 == 0:
        raise ValueError("h_0 must be nonzero")
    point = {v: Fraction(x) for v, x in zip(pd.levi.lam_names(), lam0)}
    point[H] = Fraction(h0)
    D = D if D is not None else start_depth(pd, d_max)
    vm = VermaModule(pd)
    counts = highest_weight_counts(pd, point, d_max, D, module=vm)
    counts_next = highest_weight_counts(pd, point, d_max, D + 2, module=vm)
    rows = []
    for mu in sorted(set(counts) | set(counts_next) | set(filtered_oracle or {})):
        row = {
            "mu": list(mu),
            "n": counts.get(mu, 0),
            "n_next_depth": counts_next.get(mu, 0),
            "ell": levi_invariant_dim(pd.rs, pd.levi, mu),
        }
        if filtered_oracle is not None:
            row["ell_filtered"] = filtered_oracle.get(mu, 0)
        rows.append(row)
    return {
        "algebra": pd.rs.name,
        "levi": sorted(pd.levi.levi_simples),
        "lambda": [str(x) for x in lam0],
        "h": str(h0),
        "degree_cap": d_max,
        "depth": D,
        "stable": counts == counts_next,
        "rows": rows,
    }


def report_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, default=str, indent=1)
