"""Sparse multivariate (Laurent) polynomials over Q in named indeterminates."""

from __future__ import annotations

import re
from fractions import Fraction
from math import gcd
from numbers import Rational

__all__ = ["MultiPoly", "is_laurent_var", "as_poly", "univariate_gcd"]

_LAURENT = re.compile(r"q|L\d+")


def is_laurent_var(name: str) -> bool:
    """q and the weight symbols L1, L2, ... are invertible."""
    return _LAURENT.fullmatch(name) is not None


def _nc(c):
    if type(c) is Fraction and c.denominator == 1:
        return c.numerator
    return c


class MultiPoly:
    """Polynomial with rational coefficients in an ordered tuple of variables.

    Exponents may be negative; for the Laurent variables (q, L_i) this is the
    normal representation of inverses, for any other variable it marks a
    non-polynomial result that callers can detect with :meth:`is_polynomial`.
    """

    __slots__ = ("vars", "terms")

    def __init__(self, terms=None, vars=()):
        self.vars = tuple(vars)
        self.terms = {} if terms is None else {e: c for e, c in terms.items() if c != 0}

    # -- constructors -------------------------------------------------------

    @classmethod
    def constant(cls, c) -> MultiPoly:
        return cls({(): _nc(Fraction(c)) if not isinstance(c, int) else c})

    @classmethod
    def variable(cls, name: str, power: int = 1) -> MultiPoly:
        return cls({(power,): 1}, (name,))

    @classmethod
    def monomial(cls, exps: dict, coeff=1) -> MultiPoly:
        names = tuple(sorted(n for n, e in exps.items() if e != 0))
        return cls({tuple(exps[n] for n in names): coeff}, names)

    @classmethod
    def _raw(cls, terms, vars):
        p = cls.__new__(cls)
        p.vars = vars
        p.terms = terms
        return p

    # -- variable bookkeeping -----------------------------------------------

    def _remap(self, target):
        if self.vars == target:
            return self.terms
        idx = [target.index(v) for v in self.vars]
        n = len(target)
        out = {}
        for e, c in self.terms.items():
            new = [0] * n
            for i, k in zip(idx, e):
                new[i] = k
            out[tuple(new)] = c
        return out

    def _align(self, other):
        if self.vars == other.vars:
            return self.vars, self.terms, other.terms
        merged = tuple(sorted(set(self.vars) | set(other.vars)))
        return merged, self._remap(merged), other._remap(merged)

    def compact(self) -> MultiPoly:
        """Drop variables that do not occur."""
        used = [i for i in range(len(self.vars)) if any(e[i] for e in self.terms)]
        if len(used) == len(self.vars):
            return self
        terms = {tuple(e[i] for i in used): c for e, c in self.terms.items()}
        return MultiPoly._raw(terms, tuple(self.vars[i] for i in used))

    def free_vars(self) -> set:
        return {v for i, v in enumerate(self.vars) if any(e[i] for e in self.terms)}

    # -- predicates ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_value(self):
        """Rational value of a constant polynomial."""
        if not self.is_constant():
            raise ValueError(f"not a constant: {self}")
        return sum(self.terms.values(), 0)

    def constant_term(self):
        for e, c in self.terms.items():
            if not any(e):
                return c
        return 0

    def is_polynomial(self, names=None) -> bool:
        """True if no variable in ``names`` (default: non-Laurent ones) has a negative exponent."""
        for i, v in enumerate(self.vars):
            if names is None and is_laurent_var(v):
                continue
            if names is not None and v not in names:
                continue
            if any(e[i] < 0 for e in self.terms):
                return False
        return True

    def degree(self, name: str) -> int:
        if name not in self.vars:
            return 0
        i = self.vars.index(name)
        return max((e[i] for e in self.terms), default=0)

    def total_degree(self, names=None) -> int:
        idx = [i for i, v in enumerate(self.vars) if names is None or v in names]
        return max((sum(e[i] for i in idx) for e in self.terms), default=-1)

    def is_homogeneous(self, names, degree=None) -> bool:
        idx = [i for i, v in enumerate(self.vars) if v in names]
        degs = {sum(e[i] for i in idx) for e in self.terms}
        if not degs:
            return True
        if len(degs) > 1:
            return False
        return degree is None or degs == {degree}

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        other = as_poly(other)
        if other is NotImplemented:
            return NotImplemented
        vars, a, b = self._align(other)
        out = dict(a)
        for e, c in b.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return MultiPoly._raw(out, vars)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly._raw({e: -c for e, c in self.terms.items()}, self.vars)

    def __sub__(self, other):
        other = as_poly(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return MultiPoly._raw({}, self.vars)
            return MultiPoly._raw({e: c * other for e, c in self.terms.items()}, self.vars)
        other = as_poly(other)
        if other is NotImplemented:
            return NotImplemented
        vars, a, b = self._align(other)
        out = {}
        if len(vars) == 1:
            for (e1,), c1 in a.items():
                for (e2,), c2 in b.items():
                    k = (e1 + e2,)
                    out[k] = out.get(k, 0) + c1 * c2
        else:
            for e1, c1 in a.items():
                for e2, c2 in b.items():
                    k = tuple(x + y for x, y in zip(e1, e2))
                    out[k] = out.get(k, 0) + c1 * c2
        return MultiPoly._raw({k: c for k, c in out.items() if c}, vars)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            if len(self.terms) != 1:
                raise ValueError("negative power of a non-monomial")
            (e, c), = self.terms.items()
            return MultiPoly._raw({tuple(n * x for x in e): _nc(Fraction(c) ** n)}, self.vars)
        result = MultiPoly._raw({tuple(0 for _ in self.vars): 1}, self.vars)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            f = Fraction(1) / other
            return MultiPoly._raw({e: _nc(c * f) for e, c in self.terms.items()}, self.vars)
        other = as_poly(other)
        if other is NotImplemented:
            return NotImplemented
        if other.is_constant():
            return self / other.constant_value()
        return self.divexact(other)

    def __eq__(self, other):
        other = as_poly(other)
        if other is NotImplemented:
            return NotImplemented
        return (self - other).is_zero()

    def __ne__(self, other):
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    __hash__ = None

    # -- division -------------------------------------------------------------

    def leading(self):
        """Lexicographically largest term as (exps, coeff)."""
        e = max(self.terms)
        return e, self.terms[e]

    def divexact(self, other: MultiPoly) -> MultiPoly:
        """Exact quotient; raises ValueError when ``other`` does not divide ``self``."""
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        vars, a, b = self._align(other)
        if not a:
            return MultiPoly._raw({}, vars)
        n = len(vars)
        # exponents of an exact quotient lie in [min(a)-min(b), max(a)-max(b)]
        lo = [min(e[i] for e in a) - min(e[i] for e in b) for i in range(n)]
        hi = [max(e[i] for e in a) - max(e[i] for e in b) for i in range(n)]
        for i, v in enumerate(vars):
            if not is_laurent_var(v) and min(e[i] for e in a) >= 0:
                lo[i] = max(lo[i], 0)
        be, bc = max(b.items())
        rem = dict(a)
        quot = {}
        while rem:
            re_, rc = max(rem.items())
            qe = tuple(x - y for x, y in zip(re_, be))
            if any(k < l or k > u for k, l, u in zip(qe, lo, hi)):
                raise ValueError("not divisible")
            qc = _nc(Fraction(rc) / bc)
            quot[qe] = qc
            for e, c in b.items():
                k = tuple(x + y for x, y in zip(qe, e))
                s = rem.get(k, 0) - qc * c
                if s:
                    rem[k] = s
                else:
                    rem.pop(k, None)
        return MultiPoly._raw({e: c for e, c in quot.items() if c}, vars)

    def content(self) -> Fraction:
        """Positive rational gcd of the coefficients (sign follows the leading term)."""
        if not self.terms:
            return Fraction(0)
        nums = 0
        dens = 1
        for c in self.terms.values():
            c = Fraction(c)
            nums = gcd(nums, c.numerator)
            dens = dens * c.denominator // gcd(dens, c.denominator)
        g = Fraction(nums, dens)
        return g if self.leading()[1] > 0 else -g

    # -- substitution ----------------------------------------------------------

    def subs(self, mapping: dict) -> MultiPoly:
        """Substitute numbers or polynomials for some variables."""
        hit = [i for i, v in enumerate(self.vars) if v in mapping]
        if not hit:
            return self
        keep = [i for i in range(len(self.vars)) if i not in hit]
        keep_vars = tuple(self.vars[i] for i in keep)
        numeric = all(isinstance(mapping[self.vars[i]], (int, Fraction)) for i in hit)
        if numeric:
            out = {}
            vals = [mapping[self.vars[i]] for i in hit]
            for e, c in self.terms.items():
                f = c
                for i, v in zip(hit, vals):
                    k = e[i]
                    if k:
                        if v == 0 and k < 0:
                            raise ZeroDivisionError(f"{self.vars[i]} = 0 in a negative power")
                        f = f * (Fraction(v) ** k if k < 0 else v ** k)
                ke = tuple(e[i] for i in keep)
                out[ke] = out.get(ke, 0) + f
            return MultiPoly._raw({k: _nc(c) for k, c in out.items() if c}, keep_vars)
        result = MultiPoly._raw({}, keep_vars)
        cache = {}
        for e, c in self.terms.items():
            term = MultiPoly._raw({tuple(e[i] for i in keep): c}, keep_vars)
            for i in hit:
                k = e[i]
                if k:
                    key = (i, k)
                    if key not in cache:
                        cache[key] = as_poly(mapping[self.vars[i]]) ** k
                    term = term * cache[key]
            result = result + term
        return result

    def evaluate(self, mapping: dict):
        """Rational value at a full numeric assignment."""
        p = self.subs(mapping)
        return p.constant_value()

    def derivative(self, name: str) -> MultiPoly:
        if name not in self.vars:
            return MultiPoly._raw({}, self.vars)
        i = self.vars.index(name)
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                k = e[:i] + (e[i] - 1,) + e[i + 1:]
                out[k] = c * e[i]
        return MultiPoly._raw(out, self.vars)

    def coeffs_in(self, name: str) -> dict:
        """Split as sum of name**k * c_k; returns {k: c_k}."""
        if name not in self.vars:
            return {0: self} if self.terms else {}
        i = self.vars.index(name)
        rest = self.vars[:i] + self.vars[i + 1:]
        out = {}
        for e, c in self.terms.items():
            out.setdefault(e[i], {})[e[:i] + e[i + 1:]] = c
        return {k: MultiPoly._raw(t, rest) for k, t in out.items()}

    def truncate(self, name: str, order: int) -> MultiPoly:
        """Drop terms with exponent of ``name`` above ``order``."""
        if name not in self.vars:
            return self
        i = self.vars.index(name)
        return MultiPoly._raw({e: c for e, c in self.terms.items() if e[i] <= order}, self.vars)

    def homogeneous_part(self, names, degree: int) -> MultiPoly:
        idx = [i for i, v in enumerate(self.vars) if v in names]
        return MultiPoly._raw(
            {e: c for e, c in self.terms.items() if sum(e[i] for i in idx) == degree}, self.vars
        )

    def items(self):
        """Iterate (dict var->exp, coeff) pairs."""
        for e, c in self.terms.items():
            yield {v: k for v, k in zip(self.vars, e) if k}, c

    # -- printing -------------------------------------------------------------

    def __repr__(self):
        return f"MultiPoly({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, reverse=True):
            c = self.terms[e]
            mono = "*".join(
                v if k == 1 else f"{v}^{k}" if k > 0 else f"{v}^({k})"
                for v, k in zip(self.vars, e)
                if k
            )
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                cs = str(c)
                parts.append(f"({cs})*{mono}" if "/" in cs else f"{cs}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


def as_poly(x):
    if isinstance(x, MultiPoly):
        return x
    if isinstance(x, bool):
        return NotImplemented
    if isinstance(x, (int, Fraction)):
        return MultiPoly._raw({(): x} if x else {}, ())
    if isinstance(x, Rational):
        return MultiPoly._raw({(): Fraction(x)} if x else {}, ())
    return NotImplemented


# -- univariate helpers (dense lists, lowest degree first) ------------------


def _trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _divmod_dense(a, b):
    a = list(a)
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    lb = Fraction(b[-1])
    while len(a) >= len(b) and a:
        k = len(a) - len(b)
        f = a[-1] / lb
        q[k] = f
        for i, c in enumerate(b):
            a[i + k] -= f * c
        _trim(a)
    return q, a


def univariate_gcd(a: list, b: list) -> list:
    """Monic gcd of dense univariate polynomials over Q."""
    a = _trim([Fraction(x) for x in a])
    b = _trim([Fraction(x) for x in b])
    while b:
        _, r = _divmod_dense(a, b)
        a, b = b, r
    if not a:
        return []
    lead = a[-1]
    return [x / lead for x in a]
