"""Generalized Verma modules realized on U(N^-_P), with exact actions polynomial in lambda.

A vector of the module is a dict from PBW exponent tuples (over the ordered basis
of N^-_P) to MultiPoly coefficients; the empty monomial is the highest weight
vector v_0. Actions are computed in the whole (infinite) module by recursive
straightening, so they are never truncated; truncation only enters through the
finite set of basis vectors a caller chooses to act on.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .exact import MultiPoly, PolyMatrix, rank_over_fractions
from .liealg import ParabolicDatum

__all__ = [
    "VermaModule",
    "TruncatedVerma",
    "GeneratorAction",
    "RescalingError",
    "verma_basis",
    "generator_action",
    "rescaled_action",
    "shapovalov_rank",
    "add_into",
]

ZERO = MultiPoly.constant(0)
H = MultiPoly.variable("h")


class RescalingError(ValueError):
    """An entry of lambda-degree > 1 met the rescaling lambda -> lambda/h, times h."""


def add_into(acc: dict, vec: dict, c=1):
    """acc += c * vec for sparse vectors with MultiPoly (or rational) coefficients."""
    for k, v in vec.items():
        s = acc.get(k)
        s = v * c if s is None else s + v * c
        if s:
            acc[k] = s
        else:
            acc.pop(k, None)
    return acc


class VermaModule:
    """M_lambda = U(g) (x)_{U(P)} 1_lambda, identified with U(N^-_P) v_0."""

    def __init__(self, pd: ParabolicDatum):
        self.pd = pd
        self.cb = pd.basis
        self.nminus = pd.n_minus_P_basis
        self.index = {x: i for i, x in enumerate(self.nminus)}
        self.heights = tuple(sum(r) for r in pd.n_minus_P_roots)
        self.roots = pd.n_minus_P_roots
        self.lam_vars = pd.levi.lam_names()
        self._lam = {}
        for i in range(pd.rs.rank):
            name = pd.levi.lam_of_simple(i + 1)
            self._lam[f"h{i + 1}"] = MultiPoly.variable(name) if name else ZERO
        self._mul_cache = {}
        self._act_cache = {}
        self._hact_cache = {}
        self.zero = tuple(0 for _ in self.nminus)

    # -- monomial data -----------------------------------------------------------

    def depth(self, mono) -> int:
        return sum(e * h for e, h in zip(mono, self.heights))

    def weight(self, mono):
        """Weight relative to the highest weight, in simple-root coordinates."""
        n = self.pd.rs.rank
        return tuple(-sum(e * r[j] for e, r in zip(mono, self.roots)) for j in range(n))

    def monomials(self, depth_cap: int):
        """All PBW monomials of depth <= depth_cap, ordered by depth then exponents."""
        out = []

        def rec(i, left, cur):
            if i == len(self.nminus):
                out.append(tuple(cur))
                return
            for e in range(left // self.heights[i] + 1):
                cur.append(e)
                rec(i + 1, left - e * self.heights[i], cur)
                cur.pop()

        rec(0, depth_cap, [])
        out.sort(key=lambda m: (self.depth(m), tuple(-e for e in m)))
        return out

    def lam(self, x: str) -> MultiPoly:
        """lambda(x) for x in the Cartan subalgebra."""
        return self._lam[x]

    # -- straightening -------------------------------------------------------------

    @staticmethod
    def _first(mono):
        for j, e in enumerate(mono):
            if e:
                return j
        return None

    def _shift(self, mono, j, s):
        m = list(mono)
        m[j] += s
        return tuple(m)

    def mul_nminus(self, i: int, mono) -> dict:
        """(i-th basis element of N^-_P) * monomial, rewritten in PBW order (integer coefficients)."""
        key = (i, mono)
        hit = self._mul_cache.get(key)
        if hit is not None:
            return hit
        j = self._first(mono)
        if j is None or i <= j:
            out = {self._shift(mono, i, 1): 1}
        else:
            rest = self._shift(mono, j, -1)
            out = {}
            for m, c in self.mul_nminus(i, rest).items():
                add_into(out, self.mul_nminus(j, m), c)
            for z, c in self.cb.bracket(self.nminus[i], self.nminus[j]).items():
                add_into(out, self.mul_nminus(self.index[z], rest), c)
        self._mul_cache[key] = out
        return out

    def act(self, x: str, mono) -> dict:
        """phi_lambda(x) applied to a PBW monomial, exact in lambda."""
        key = (x, mono)
        hit = self._act_cache.get(key)
        if hit is not None:
            return hit
        if x in self.index:
            out = {m: MultiPoly.constant(c) for m, c in self.mul_nminus(self.index[x], mono).items()}
        else:
            j = self._first(mono)
            if j is None:
                if x[0] == "h":
                    lam = self.lam(x)
                    out = {mono: lam} if lam else {}
                else:
                    # N^+ and the lowering part of L kill v_0
                    out = {}
            else:
                rest = self._shift(mono, j, -1)
                out = {}
                for m, c in self.act(x, rest).items():
                    for m2, c2 in self.mul_nminus(j, m).items():
                        add_into(out, {m2: c}, c2)
                for z, c in self.cb.bracket(x, self.nminus[j]).items():
                    add_into(out, self.act(z, rest), c)
        self._act_cache[key] = out
        return out

    def act_vec(self, x: str, vec: dict) -> dict:
        out = {}
        for m, c in vec.items():
            add_into(out, self.act(x, m), c)
        return out

    def rescaled(self, x: str, mono) -> dict:
        """(h phi_{lambda/h})(x) on a monomial: entries homogeneous of degree 1 in (lambda, h)."""
        key = (x, mono)
        hit = self._hact_cache.get(key)
        if hit is None:
            hit = {m: homogenize(c, self.lam_vars) for m, c in self.act(x, mono).items()}
            self._hact_cache[key] = hit
        return hit

    def rescaled_vec(self, x: str, vec: dict) -> dict:
        out = {}
        for m, c in vec.items():
            for m2, c2 in self.rescaled(x, m).items():
                s = out.get(m2)
                s = c2 * c if s is None else s + c2 * c
                if s:
                    out[m2] = s
                else:
                    out.pop(m2, None)
        return out


def homogenize(p: MultiPoly, lam_vars) -> MultiPoly:
    """Substitute lambda -> lambda/h and multiply by h; fail unless the result is polynomial."""
    p = MultiPoly(p.terms, p.vars) if not isinstance(p, MultiPoly) else p
    if p.is_constant():
        return p * H
    idx = [p.vars.index(v) for v in lam_vars if v in p.vars]
    out = ZERO
    for e, c in p.terms.items():
        k = sum(e[i] for i in idx)
        if k > 1:
            raise RescalingError(f"entry {p} has lambda-degree {k}; h * phi_(lambda/h) would not be polynomial")
        mono = MultiPoly._raw({e: c}, p.vars)
        out = out + (mono * H if k == 0 else mono)
    return out


# -- truncated module and matrices ------------------------------------------------


@dataclass
class TruncatedVerma:
    module: VermaModule
    depth_cap: int
    basis: tuple
    weight_of: dict

    @property
    def pd(self):
        return self.module.pd

    def index(self):
        return {m: i for i, m in enumerate(self.basis)}


def verma_basis(pd: ParabolicDatum, D: int, module: VermaModule | None = None) -> TruncatedVerma:
    if D < 0:
        raise ValueError("depth cap must be >= 0")
    vm = module or VermaModule(pd)
    basis = tuple(vm.monomials(D))
    return TruncatedVerma(vm, D, basis, {m: vm.weight(m) for m in basis})


@dataclass
class GeneratorAction:
    generator: str
    columns: dict  # input monomial -> {output monomial: coefficient}
    overflow_depth: int
    rescaled: bool = False
    basis: tuple = field(default=(), repr=False)

    def to_matrix(self) -> PolyMatrix:
        idx = {m: i for i, m in enumerate(self.basis)}
        n = len(self.basis)
        rows = [[0] * n for _ in range(n)]
        for m, col in self.columns.items():
            for m2, c in col.items():
                if m2 in idx:
                    rows[idx[m2]][idx[m]] = c
        return PolyMatrix(rows, cols=n)

    def apply(self, mono) -> dict:
        return self.columns.get(mono, {})


def _shift_of(vm: VermaModule, x: str) -> int:
    """Depth change caused by x (depth is minus the height of the relative weight)."""
    return -sum(vm.pd.basis.weights[x])


def generator_action(x: str, tv: TruncatedVerma) -> GeneratorAction:
    vm = tv.module
    shift = _shift_of(vm, x)
    cols = {}
    for m in tv.basis:
        out = vm.act(x, m)
        cols[m] = {m2: c for m2, c in out.items() if vm.depth(m2) <= tv.depth_cap}
    return GeneratorAction(x, cols, tv.depth_cap - max(0, shift), False, tv.basis)


def rescaled_action(x: str, tv: TruncatedVerma) -> GeneratorAction:
    vm = tv.module
    shift = _shift_of(vm, x)
    cols = {}
    for m in tv.basis:
        out = vm.rescaled(x, m)
        cols[m] = {m2: c for m2, c in out.items() if vm.depth(m2) <= tv.depth_cap}
    return GeneratorAction(x, cols, tv.depth_cap - max(0, shift), True, tv.basis)


# -- pairing with the highest weight vector ---------------------------------------------


def _to_sympy(p: MultiPoly):
    import sympy

    syms = {v: sympy.Symbol(v) for v in p.vars}
    expr = sympy.Integer(0)
    for e, c in p.terms.items():
        term = sympy.Rational(c.numerator, c.denominator) if hasattr(c, "denominator") else sympy.Integer(c)
        for v, k in zip(p.vars, e):
            if k:
                term = term * syms[v] ** k
        expr += term
    return expr


def _factor_det(rows):
    """Determinant of a square MultiPoly matrix with its factorization (sympy)."""
    import sympy

    m = sympy.Matrix([[_to_sympy(x if isinstance(x, MultiPoly) else MultiPoly.constant(x)) for x in r] for r in rows])
    det = sympy.expand(m.det(method="berkowitz"))
    c, factors = sympy.factor_list(det)
    return str(det), str(c), [(str(f), int(k)) for f, k in factors]


def shapovalov_rank(pd: ParabolicDatum, D: int, *, factor=True, module: VermaModule | None = None) -> list:
    """Pairing <v_0*, (E-word)(F-word) v_0> per depth and weight, with generic ranks.

    The E-words are PBW monomials in the e_beta opposite to N^-_P, so the matrix
    of a weight space of N^-_P is square; its determinant is factored.
    """
    vm = module or VermaModule(pd)
    cb = pd.basis
    eword = [cb.e(r) for r in pd.n_minus_P_roots]
    report = []
    for k in range(D + 1):
        monos = [m for m in vm.monomials(k) if vm.depth(m) == k]
        by_weight = {}
        for m in monos:
            by_weight.setdefault(vm.weight(m), []).append(m)
        blocks = []
        total_rank = 0
        for w, fs in sorted(by_weight.items()):
            es = fs  # same exponent shapes, read as words in the e_beta
            rows = []
            for em in es:
                row = []
                for fm in fs:
                    vec = {fm: MultiPoly.constant(1)}
                    # apply e^{a_last} first: the word e_1^{a_1} ... e_n^{a_n} acts right to left
                    for i in reversed(range(len(em))):
                        for _ in range(em[i]):
                            vec = vm.act_vec(eword[i], vec)
                    row.append(vec.get(vm.zero, ZERO))
                rows.append(row)
            r = rank_over_fractions(PolyMatrix(rows))
            total_rank += r
            block = {"weight": list(w), "size": len(fs), "rank": r, "entries": [[str(x) for x in row] for row in rows]}
            if factor:
                det, content, factors = _factor_det(rows)
                block.update(determinant=det, content=content, factors=factors)
            blocks.append(block)
        report.append({"depth": k, "size": len(monos), "rank": total_rank, "blocks": blocks})
    return report
