"""Truncated power series in t, the bridge q = e^t, L_i = e^{lambda_i t}."""

from __future__ import annotations

import re
from fractions import Fraction
from math import factorial

from .fraction import FractionElement
from .poly import MultiPoly, as_poly

__all__ = ["TSeries", "q_series_expand", "default_exponents", "t_adic_valuations"]

T = "t"


class TSeries:
    """A MultiPoly in t (and other variables) known up to t**order."""

    __slots__ = ("poly", "order")

    def __init__(self, poly, order: int):
        self.poly = as_poly(poly).truncate(T, order)
        self.order = order

    def coefficient(self, k: int) -> MultiPoly:
        """Coefficient of t**k (k <= order)."""
        if k > self.order:
            raise ValueError(f"t^{k} beyond truncation order {self.order}")
        return self.poly.coeffs_in(T).get(k, MultiPoly.constant(0))

    def _other(self, other):
        if isinstance(other, TSeries):
            return other.poly, min(self.order, other.order)
        return as_poly(other), self.order

    def __add__(self, other):
        p, o = self._other(other)
        return TSeries(self.poly + p, o)

    __radd__ = __add__

    def __sub__(self, other):
        p, o = self._other(other)
        return TSeries(self.poly - p, o)

    def __neg__(self):
        return TSeries(-self.poly, self.order)

    def __mul__(self, other):
        p, o = self._other(other)
        return TSeries(self.poly.truncate(T, o) * p.truncate(T, o), o)

    __rmul__ = __mul__

    def __eq__(self, other):
        p, o = self._other(other)
        return (self.poly - p).truncate(T, o).is_zero()

    __hash__ = None

    def is_zero(self) -> bool:
        return self.poly.is_zero()

    def __repr__(self):
        return f"TSeries({self.poly} + O(t^{self.order + 1}))"


def default_exponents(names) -> dict:
    """L_i -> lam_i, the exponent of q carried by the weight symbol L_i."""
    out = {}
    for n in names:
        m = re.fullmatch(r"L(\d+)", n)
        if m:
            out[n] = MultiPoly.variable(f"lam{m.group(1)}")
    return out


def _exp_series(x: MultiPoly, order: int) -> MultiPoly:
    t = MultiPoly.variable(T)
    out = MultiPoly.constant(1)
    power = MultiPoly.constant(1)
    for n in range(1, order + 1):
        power = power * x * t
        out = out + power / factorial(n)
    return out


def _expand_laurent(p: MultiPoly, order: int, exponents: dict) -> MultiPoly:
    """Expand each q/L monomial as exp(t * exponent) up to t**order."""
    p = as_poly(p)
    laurent = [v for v in p.vars if v == "q" or v in exponents]
    if not laurent:
        return p
    idx = [p.vars.index(v) for v in laurent]
    keep = [i for i in range(len(p.vars)) if i not in idx]
    keep_vars = tuple(p.vars[i] for i in keep)
    cache = {}
    out = MultiPoly.constant(0)
    for e, c in p.terms.items():
        key = tuple(e[i] for i in idx)
        if key not in cache:
            expo = MultiPoly.constant(0)
            for v, k in zip(laurent, key):
                if k:
                    expo = expo + (k if v == "q" else exponents[v] * k)
            cache[key] = _exp_series(expo, order)
        rest = MultiPoly._raw({tuple(e[i] for i in keep): c}, keep_vars)
        out = out + rest * cache[key]
    return out.truncate(T, order)


def _valuation(p: MultiPoly) -> int:
    cs = p.coeffs_in(T)
    return min(cs) if cs else None


def q_series_expand(p, order: int, exponents: dict | None = None) -> TSeries:
    """Substitute q = e^t and L_i = e^{lambda_i t}, truncating at t**order.

    ``exponents`` maps each L symbol to the polynomial that multiplies t in its
    exponent (default L_i -> lam_i). Quotients are handled when the expanded
    denominator is t**v times a series with invertible constant term.
    """
    if order < 0:
        raise ValueError("order must be >= 0")
    if isinstance(p, FractionElement) and p.den.is_constant():
        p = p.as_poly()
    if isinstance(p, FractionElement):
        num, den = p.num, p.den
    else:
        num, den = as_poly(p), None
    if exponents is None:
        names = set(num.vars) | (set(den.vars) if den is not None else set())
        exponents = default_exponents(names)
    if den is None:
        return TSeries(_expand_laurent(num, order, exponents), order)
    extra = 1
    while True:
        d = _expand_laurent(den, order + extra, exponents)
        v = _valuation(d)
        if v is not None and v < order + extra:
            break
        extra += 1
        if extra > 64:
            raise ValueError(f"denominator vanishes to high order at t = 0: {den}")
    n = _expand_laurent(num, order + v, exponents)
    nv = _valuation(n)
    if nv is not None and nv < v:
        raise ValueError(f"pole of order {v - nv} at t = 0 in {p}")
    # shift both by t^v and invert the unit part of the denominator
    dc = d.coeffs_in(T)
    nc = n.coeffs_in(T)
    u = [dc.get(k + v, MultiPoly.constant(0)) for k in range(order + 1)]
    if not u[0].is_constant():
        raise ValueError("denominator unit part has a non-constant leading coefficient")
    u0 = Fraction(u[0].constant_value())
    inv = [MultiPoly.constant(1 / u0)]
    for k in range(1, order + 1):
        s = MultiPoly.constant(0)
        for j in range(1, k + 1):
            s = s + u[j] * inv[k - j]
        inv.append(-s / u0)
    top = [nc.get(k + v, MultiPoly.constant(0)) for k in range(order + 1)]
    t = MultiPoly.variable(T)
    out = MultiPoly.constant(0)
    for k in range(order + 1):
        s = MultiPoly.constant(0)
        for j in range(k + 1):
            if top[j] and inv[k - j]:
                s = s + top[j] * inv[k - j]
        if s:
            out = out + s * t**k
    return TSeries(out, order)


def t_adic_valuations(vectors, order: int) -> list:
    """Valuations of the nonzero invariant factors over Q[t]/(t^{order+1}).

    ``vectors`` are dicts key -> list of rationals (t-coefficients 0..order).
    Elimination always pivots on an entry of least t-valuation, which is the
    Smith normal form algorithm for a discrete valuation ring. Invariant
    factors that vanish modulo t^{order+1} are not reported.
    """
    n = order + 1
    rows = []
    for v in vectors:
        row = {k: [Fraction(x) for x in s[:n]] + [Fraction(0)] * (n - len(s)) for k, s in v.items()}
        row = {k: s for k, s in row.items() if any(s)}
        if row:
            rows.append(row)

    def val(s):
        for i, x in enumerate(s):
            if x:
                return i
        return n

    out = []
    while rows:
        best = None
        for ri, row in enumerate(rows):
            for k, s in row.items():
                vv = val(s)
                if best is None or vv < best[0]:
                    best = (vv, ri, k)
                    if vv == 0:
                        break
            if best is not None and best[0] == 0:
                break
        if best is None or best[0] >= n:
            break
        v, ri, key = best
        prow = rows.pop(ri)
        p = prow[key]
        # unit part of the pivot, inverted as a series
        u = p[v:] + [Fraction(0)] * v
        inv = [1 / u[0]]
        for k in range(1, n):
            inv.append(-sum(u[j] * inv[k - j] for j in range(1, k + 1)) / u[0])
        new_rows = []
        for row in rows:
            s = row.get(key)
            if s is not None:
                # factor = (s / t^v) * u^{-1}, valid since val(s) >= v
                sh = s[v:] + [Fraction(0)] * v
                f = [sum(sh[j] * inv[k - j] for j in range(k + 1)) for k in range(n)]
                for kk, ps in prow.items():
                    prod = [sum(f[j] * ps[k - j] for j in range(k + 1)) for k in range(n)]
                    cur = row.get(kk)
                    if cur is None:
                        cur = [Fraction(0)] * n
                    cur = [a - b for a, b in zip(cur, prod)]
                    if any(cur):
                        row[kk] = cur
                    else:
                        row.pop(kk, None)
                row.pop(key, None)
            if row:
                new_rows.append(row)
        rows = new_rows
        out.append(v)
    return sorted(out)
