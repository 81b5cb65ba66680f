"""Locally finite part F(U): ad-closures of K_omega, adjoint-type copies G_q, and q -> 1 limits."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from ..exact import FractionElement, MultiPoly, q_series_expand
from ..exact.series import _exp_series
from ..liealg import ChevalleyBasis, UnsupportedType, chevalley_constants
from .algebra import ONE, UqAlgebra, UqElement

__all__ = ["ad_element", "ad_closure", "find_Gq", "GqBasis", "classical_limit", "ClosureError"]


class ClosureError(RuntimeError):
    pass


def ad_element(alg: UqAlgebra, kind: str, i: int, a: UqElement) -> UqElement:
    """Adjoint action inside U: ad(E)a = Ea - K a K^-1 E, ad(F)a = F a K - a F K, ad(K)a = K a K^-1."""
    E, F, K, Ki = alg.E(i), alg.F(i), alg.K(i), alg.K(i, -1)
    if kind == "E":
        return E * a - K * a * Ki * E
    if kind == "F":
        return F * a * K - a * F * K
    if kind == "K":
        return K * a * Ki
    raise ValueError(kind)


class FieldEchelon:
    """Row echelon form over Q(q) for UqElements (keys are normal words)."""

    def __init__(self):
        self.rows = {}  # pivot word -> (element terms with pivot coefficient 1)
        self.order = []

    def reduce(self, terms: dict) -> dict:
        v = dict(terms)
        changed = True
        while changed:
            changed = False
            for p in sorted(k for k in v if k in self.rows):
                c = v.get(p)
                if c is None:
                    continue
                for k, x in self.rows[p].items():
                    s = v.get(k)
                    s = -(x * c) if s is None else s - x * c
                    if s:
                        v[k] = s
                    else:
                        v.pop(k, None)
                changed = True
                break
        return v

    def add(self, terms: dict) -> bool:
        v = self.reduce(terms)
        if not v:
            return False
        p = min(v)
        inv = ONE / v[p]
        self.rows[p] = {k: x * inv for k, x in v.items()}
        self.order.append(p)
        return True

    @property
    def rank(self):
        return len(self.rows)


def ad_closure(alg: UqAlgebra, start: UqElement, cap: int = 200) -> list:
    """Basis of ad(U) start, by closing under ad(E_i), ad(F_i) (ad(K_i) preserves weight vectors)."""
    ech = FieldEchelon()
    basis = []
    queue = [start]
    while queue:
        a = queue.pop(0)
        if not ech.add(a.terms):
            continue
        basis.append(a)
        if len(basis) > cap:
            raise ClosureError(f"ad-closure exceeds {cap} dimensions")
        for i in range(1, alg.rank + 1):
            for kind in ("E", "F"):
                b = ad_element(alg, kind, i, a)
                if b.terms:
                    queue.append(b)
    return basis


def _nullspace(columns: list, cols_count: int):
    """Kernel of the map c -> sum c_j columns[j] (columns are dicts key -> FractionElement)."""
    # Gaussian elimination on the transpose: rows are keys, unknowns are column indices
    keys = sorted({k for col in columns for k in col})
    rows = [[col.get(k, FractionElement(0)) for col in columns] for k in keys]
    n = cols_count
    pivots = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = ONE / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(n) if c not in pivots]
    out = []
    for f in free:
        vec = [FractionElement(0)] * n
        vec[f] = ONE
        for i, pc in enumerate(pivots):
            vec[pc] = -rows[i][f]
        out.append(vec)
    return out


def _combine(alg, elems, coeffs):
    out = UqElement(alg, {})
    for e, c in zip(elems, coeffs):
        if c:
            out = out + e.scale(c)
    return out


# -- q -> 1 limit -----------------------------------------------------------------------------------


def _classical_letter(cb: ChevalleyBasis, kind: str, root):
    """Image of a quantum root vector at q = 1 as {Chevalley name: coefficient}."""
    if sum(root) == 1:
        return {cb.e(root) if kind == "E" else cb.f(root): 1}
    # X_12 = X_1 X_2 - q^{-1} X_2 X_1 -> [x_1, x_2]
    a = tuple(int(j == 0) for j in range(len(root)))
    b = tuple(int(j == 1) for j in range(len(root)))
    x, y = (cb.e(a), cb.e(b)) if kind == "E" else (cb.f(a), cb.f(b))
    return dict(cb.bracket(x, y))


def classical_limit(alg: UqAlgebra, a: UqElement, order: int = 6):
    """Leading t-coefficient of a with q = e^t and K_omega = exp(t sum omega_i d_i H_i).

    Returns (valuation, {(F-word, E-word): MultiPoly in H1..Hr}) where the words
    are tuples of quantum symbols. The leading term is an element of U(g) in the
    order (F-word)(polynomial in H)(E-word).
    """
    # termwise poles (e.g. (K - K^-1)/(q - q^-1)) are cleared by (q - q^-1)^m = (2t)^m (1 + O(t^2))
    qq = FractionElement(MultiPoly.variable("q"))
    m = 0
    while True:
        try:
            scale = (qq - qq.inverse()) ** m
            expanded = {w: q_series_expand(c * scale, order + m).poly for w, c in a.terms.items()}
            break
        except ValueError:
            m += 1
            if m > order:
                raise
    order = order + m
    grouped = {}
    for w, c in a.terms.items():
        fw = tuple(s for s in w if s[0] == "F")
        ew = tuple(s for s in w if s[0] == "E")
        k = [s for s in w if s[0] == "K"]
        series = expanded[w]
        if k:
            expo = MultiPoly.constant(0)
            for i, ci in enumerate(k[0][1]):
                if ci:
                    expo = expo + MultiPoly.variable(f"H{i + 1}") * (ci * alg.d(alg.simple[i]))
            series = (series * _exp_series(expo, order)).truncate("t", order)
        key = (fw, ew)
        grouped[key] = grouped[key] + series if key in grouped else series
    val = None
    for p in grouped.values():
        cs = p.coeffs_in("t")
        if cs:
            v = min(cs)
            val = v if val is None else min(val, v)
    if val is None:
        return None, {}
    lead = {}
    for key, p in grouped.items():
        c = p.coeffs_in("t").get(val)
        if c:
            lead[key] = c / 2**m
    return val - m, lead


def limit_in_g(alg: UqAlgebra, cb: ChevalleyBasis, lead: dict):
    """Express a leading term as an element of g (dict Chevalley name -> Fraction), or None if not linear."""
    out = {}
    for (fw, ew), poly in lead.items():
        if len(fw) + len(ew) + poly.total_degree() != 1 and not (len(fw) + len(ew) == 0 and poly.total_degree() == 1):
            return None
        if len(fw) + len(ew) == 1:
            if not poly.is_constant():
                return None
            kind, root = (fw or ew)[0]
            for name, k in _classical_letter(cb, kind, root).items():
                out[name] = out.get(name, 0) + Fraction(poly.constant_value()) * k
        else:
            for e, c in poly.terms.items():
                for v, k in zip(poly.vars, e):
                    if k:
                        hname = "h" + v[1:]
                        out[hname] = out.get(hname, 0) + Fraction(c)
    return {k: v for k, v in out.items() if v}


@dataclass
class GqBasis:
    elements: dict  # classical label (e1, h1, f1, ...) -> UqElement
    closure_dim: int
    start: tuple  # lattice element omega of K_omega generating the closure
    factor: int
    limits: dict = field(default_factory=dict)  # label -> {name: Fraction}
    valuation: int = 0

    def to_json(self) -> dict:
        return {
            "lattice_factor": self.factor,
            "start_K": list(self.start),
            "closure_dim": self.closure_dim,
            "valuation": self.valuation,
            "basis": {k: repr(v) for k, v in self.elements.items()},
            "limits": {k: {n: str(c) for n, c in sorted(v.items())} for k, v in self.limits.items()},
        }


def find_Gq(alg: UqAlgebra, factor: int = 4, cap: int = 200) -> GqBasis:
    """Adjoint-type copy in ad(U) K_{-factor * mu}, normalized so that its q -> 1 limit is e, h, f.

    Implemented for sl2, where mu is the fundamental weight; factor 4 reads the
    lattice exponent literally (K^{-2}), factor 2 gives K^{-1}.
    """
    if alg.rank != 1:
        raise UnsupportedType("find_Gq is implemented for A1 only")
    if factor % 2:
        raise ValueError("factor * omega must lie in the root lattice (factor even)")
    cb = chevalley_constants(alg.rs)
    start = (-(factor // 2),)
    closure = ad_closure(alg, alg.Kw(start), cap)
    theta = alg.simple[0]
    top = [b for b in closure if b.weight() == theta]
    images = [ad_element(alg, "E", 1, b).terms for b in top]
    kernel = _nullspace(images, len(top))
    if not kernel:
        raise ClosureError("no highest weight vector of adjoint type")
    candidates = [_combine(alg, top, vec) for vec in kernel]
    # fewest / shortest PBW words first
    candidates.sort(key=lambda e: (max(len(w) for w in e.terms), len(e.terms)))
    v = candidates[0]
    copy = [v, ad_element(alg, "F", 1, v), ad_element(alg, "F", 1, ad_element(alg, "F", 1, v))]
    assert ad_element(alg, "F", 1, copy[2]).is_zero()
    leads = [classical_limit(alg, x) for x in copy]
    val = min(l[0] for l in leads if l[0] is not None)
    # rescale by (q - q^-1)^-val so the common leading order becomes t^0
    qq = FractionElement(MultiPoly.variable("q"))
    s = (qq - qq.inverse()) ** (-val) * FractionElement(2) ** val if val else ONE
    labels = (cb.e(theta), cb.h(1), cb.f(theta))
    elements, limits = {}, {}
    for lab, x in zip(labels, copy):
        x = x.scale(s)
        _, lead = classical_limit(alg, x)
        g = limit_in_g(alg, cb, lead)
        if not g or set(g) != {lab}:
            raise ClosureError(f"limit of the {lab}-component is {g}, not a multiple of {lab}")
        x = x.scale(FractionElement(1 / g[lab]))
        elements[lab] = x
        limits[lab] = {lab: Fraction(1)}
    return GqBasis(elements, len(closure), start, factor, limits, val)
