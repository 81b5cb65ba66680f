"""Quotients of MultiPoly values.

Reduction is partial: exact division, content, Laurent monomials, and a true
gcd when the denominator involves a single variable. That covers every
denominator this package produces (powers and products of q-numbers).
"""

from __future__ import annotations

from fractions import Fraction

from .poly import MultiPoly, as_poly, is_laurent_var, univariate_gcd

__all__ = ["FractionElement", "as_fraction"]


def _dense(p: MultiPoly, name: str):
    """Dense coefficient list of a univariate polynomial (shifted to start at degree 0)."""
    cs = p.coeffs_in(name)
    lo = min(cs)
    out = [Fraction(0)] * (max(cs) - lo + 1)
    for k, c in cs.items():
        out[k - lo] = Fraction(c.constant_value())
    return lo, out


def _from_dense(coeffs, name, shift=0):
    return MultiPoly({(i + shift,): c for i, c in enumerate(coeffs) if c}, (name,))


class FractionElement:
    """numerator / denominator with a nonzero denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=1, reduce=True):
        num = as_poly(num)
        den = as_poly(den)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        self.num = num
        self.den = den
        if reduce:
            self._reduce()

    def _reduce(self):
        num, den = self.num, self.den
        if num.is_zero():
            self.num, self.den = num, MultiPoly.constant(1)
            return
        if den.is_constant():
            self.num, self.den = num / den.constant_value(), MultiPoly.constant(1)
            return
        # Laurent monomial factors of the denominator are units
        den = den.compact()
        unit = {}
        for i, v in enumerate(den.vars):
            if is_laurent_var(v):
                unit[v] = min(e[i] for e in den.terms)
        if any(unit.values()):
            mono = MultiPoly.monomial({v: -k for v, k in unit.items()})
            num, den = num * mono, den * mono
        try:
            q = num.divexact(den)
            self.num, self.den = q, MultiPoly.constant(1)
            return
        except ValueError:
            pass
        free = den.free_vars()
        if len(free) == 1:
            (x,) = free
            _, g = _dense(den, x)
            # gcd against each coefficient slice of the numerator in x
            i = num.vars.index(x) if x in num.vars else None
            rest = {}
            for e, c in num.terms.items():
                k = e[i] if i is not None else 0
                key = e[:i] + e[i + 1:] if i is not None else e
                rest.setdefault(key, {})[k] = c
            for slice_ in rest.values():
                if len(g) <= 1:
                    break
                lo_s = min(slice_)
                dense = [Fraction(0)] * (max(slice_) - lo_s + 1)
                for k, c in slice_.items():
                    dense[k - lo_s] = Fraction(c)
                g = univariate_gcd(g, dense)
            if len(g) > 1:
                gp = _from_dense(g, x)
                num = num.divexact(gp)
                den = den.divexact(gp)
        lc = den.leading()[1]
        if lc != 1:
            num, den = num / lc, den / lc
        self.num, self.den = num, den

    # -- predicates -------------------------------------------------------------

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self):
        return not self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def as_poly(self) -> MultiPoly:
        if not self.den.is_constant():
            raise ValueError(f"not a polynomial: {self}")
        return self.num / self.den.constant_value()

    def free_vars(self) -> set:
        return self.num.free_vars() | self.den.free_vars()

    # -- arithmetic -------------------------------------------------------------

    def __add__(self, other):
        other = as_fraction(other)
        if other is NotImplemented:
            return NotImplemented
        if self.den == other.den:
            return FractionElement(self.num + other.num, self.den)
        return FractionElement(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return FractionElement(-self.num, self.den, reduce=False)

    def __sub__(self, other):
        other = as_fraction(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = as_fraction(other)
        if other is NotImplemented:
            return NotImplemented
        if self.den.is_constant() and other.den.is_constant():
            return FractionElement(self.num * other.num, self.den * other.den, reduce=False)._fix()
        return FractionElement(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def _fix(self):
        if self.den.is_constant():
            c = self.den.constant_value()
            if c != 1:
                self.num = self.num / c
                self.den = MultiPoly.constant(1)
        return self

    def inverse(self) -> FractionElement:
        if self.num.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return FractionElement(self.den, self.num)

    def __truediv__(self, other):
        other = as_fraction(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return as_fraction(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = FractionElement(1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        other = as_fraction(other)
        if other is NotImplemented:
            return NotImplemented
        return (self.num * other.den - other.num * self.den).is_zero()

    __hash__ = None

    # -- substitution -------------------------------------------------------------

    def subs(self, mapping) -> FractionElement:
        den = self.den.subs(mapping)
        if den.is_zero():
            raise ZeroDivisionError(f"denominator vanishes: {self.den} at {mapping}")
        return FractionElement(self.num.subs(mapping), den)

    def evaluate(self, mapping):
        return self.subs(mapping).as_poly().constant_value()

    def __repr__(self):
        return f"FractionElement({self})"

    def __str__(self):
        if self.den.is_constant():
            return str(self.num)
        return f"({self.num})/({self.den})"


def as_fraction(x):
    if isinstance(x, FractionElement):
        return x
    p = as_poly(x)
    if p is NotImplemented:
        return NotImplemented
    return FractionElement(p, MultiPoly.constant(1), reduce=False)
