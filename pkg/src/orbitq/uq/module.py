"""Quantized generalized Verma modules M_{q,lambda} = U (x)_{U_P} 1_{q,lambda} and operators on them.

Basis vectors are normal F-words in the root vectors outside the Levi factor.
The convex order of the algebra puts the Levi root vectors rightmost, so a
normal word ending in a Levi F annihilates v_0. On v_0, E's act by zero and
K_i by L_j^{d_i} (L_j = q^{lambda_j}) for the j-th orbit parameter, by 1 on the Levi.
"""

from __future__ import annotations

from ..exact import FractionElement, MultiPoly
from ..liealg import LeviDatum, RootSystemDatum, UnsupportedType
from .algebra import ONE, UqAlgebra, UqElement

__all__ = ["QVermaModule", "QOp", "phi", "ad_action", "convex_order_for"]


def convex_order_for(rs: RootSystemDatum, levi: LeviDatum):
    """A convex order on the positive roots with the Levi roots last."""
    if rs.rank == 1:
        return rs.positive_roots
    if levi.levi_simples == frozenset({2}):
        return ((1, 0), (1, 1), (0, 1))
    return ((0, 1), (1, 1), (1, 0))


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


class QVermaModule:
    def __init__(self, rs: RootSystemDatum, levi: LeviDatum, alg: UqAlgebra | None = None):
        self.rs = rs
        self.levi = levi
        self.alg = alg or UqAlgebra(rs, convex_order_for(rs, levi))
        if rs.rank > 2:
            raise UnsupportedType("quantized Verma modules are implemented for rank <= 2")
        self.levi_roots = {r for r in rs.positive_roots if all(c == 0 or (i + 1) in levi.levi_simples for i, c in enumerate(r))}
        self.roots = tuple(r for r in self.alg.order if r not in self.levi_roots)
        self.v0 = ()
        self._cache = {}

    def lam_symbol(self, i: int):
        """L_j with K_i v_0 = L_j^{d_i} v_0, or None for a Levi simple root (i is 1-based)."""
        name = self.levi.lam_of_simple(i)
        return None if name is None else "L" + name[3:]

    def depth(self, fword) -> int:
        return sum(sum(r) for _, r in fword)

    def basis(self, depth_cap: int):
        """Normal F-words over the non-Levi roots with depth <= depth_cap."""
        out = []

        def rec(i, left, cur):
            if i == len(self.roots):
                out.append(tuple(cur))
                return
            h = sum(self.roots[i])
            for e in range(left // h + 1):
                rec(i + 1, left - e * h, cur + [("F", self.roots[i])] * e)

        rec(0, depth_cap, [])
        out.sort(key=lambda w: (self.depth(w), w))
        return out

    def _k_eigen(self, omega) -> FractionElement:
        out = MultiPoly.constant(1)
        for i, c in enumerate(omega):
            sym = self.lam_symbol(i + 1)
            if sym is not None and c:
                out = out * MultiPoly.variable(sym, c * self.alg.d(self.rs.simple_root(i + 1)))
        return FractionElement(out)

    def act_word(self, word, fword) -> dict:
        """A normal word of U applied to the basis vector fword . v_0."""
        key = (word, fword)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        out = {}
        for w, c in self.alg.nf_word(word + fword).items():
            if w and w[-1][0] == "E":
                continue
            fs = tuple(s for s in w if s[0] == "F")
            if any(s[1] in self.levi_roots for s in fs):
                continue
            k = [s for s in w if s[0] == "K"]
            val = c * self._k_eigen(k[0][1]) if k else c
            _add(out, {fs: val})
        self._cache[key] = out
        return out

    def act(self, x: UqElement, vec: dict) -> dict:
        out = {}
        for w, c in x.terms.items():
            for fw, v in vec.items():
                _add(out, self.act_word(w, fw), c * v)
        return out


class QOp:
    """A linear operator on the module, evaluated lazily and exactly on basis vectors."""

    def __init__(self, module: QVermaModule, fn, weight=None):
        self.module = module
        self._fn = fn
        self._cache = {}
        self.weight = weight

    def on_basis(self, fword) -> dict:
        hit = self._cache.get(fword)
        if hit is None:
            hit = self._fn(fword)
            self._cache[fword] = hit
        return hit

    def __call__(self, vec: dict) -> dict:
        out = {}
        for fw, c in vec.items():
            _add(out, self.on_basis(fw), c)
        return out

    def __matmul__(self, other: QOp) -> QOp:
        w = None if self.weight is None or other.weight is None else tuple(a + b for a, b in zip(self.weight, other.weight))
        return QOp(self.module, lambda fw: self(other.on_basis(fw)), w)

    def __add__(self, other: QOp) -> QOp:
        def fn(fw):
            out = dict(self.on_basis(fw))
            return _add(out, other.on_basis(fw))

        return QOp(self.module, fn, self.weight if self.weight == other.weight else None)

    def __sub__(self, other: QOp) -> QOp:
        return self + other.scale(-1)

    def scale(self, c) -> QOp:
        c = c if isinstance(c, FractionElement) else FractionElement(c)
        return QOp(self.module, lambda fw: {k: v * c for k, v in self.on_basis(fw).items()}, self.weight)

    def columns(self, cols) -> dict:
        return {c: self.on_basis(c) for c in cols}

    def equals_on(self, other: QOp, cols) -> bool:
        for c in cols:
            d = _add(dict(self.on_basis(c)), other.on_basis(c), FractionElement(-1))
            if d:
                return False
        return True


def phi(module: QVermaModule, x: UqElement) -> QOp:
    return QOp(module, lambda fw: module.act(x, {fw: ONE}), x.weight())


def ad_action(u: UqElement, A: QOp) -> QOp:
    """ad(u) A = sum phi(u_(1)) o A o phi(S(u_(2)))."""
    alg = u.alg
    m = A.module
    parts = []
    for (a, b), c in alg.coproduct(u).terms.items():
        left = UqElement(alg, {a: c})
        right = alg.antipode(UqElement(alg, {b: ONE}))
        parts.append((left, right))

    def fn(fw):
        out = {}
        for left, right in parts:
            _add(out, m.act(left, A(m.act(right, {fw: ONE}))))
        return out

    w = None
    uw = u.weight()
    if A.weight is not None and uw is not None:
        w = tuple(x + y for x, y in zip(A.weight, uw))
    return QOp(m, fn, w)
