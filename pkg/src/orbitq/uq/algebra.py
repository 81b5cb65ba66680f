"""U_q(g) for g of type A1 or A2, in the normal form (F-word)(K_omega)(E-word).

Conventions:
  K_omega E_beta K_omega^{-1} = q^{(omega, beta)} E_beta,  similarly with q^{-(omega, beta)} for F_beta,
  E_i F_j - F_j E_i = delta_ij (K_i - K_i^{-1}) / (q_i - q_i^{-1}),
  Delta(E) = E (x) 1 + K (x) E,  Delta(F) = F (x) K^{-1} + 1 (x) F,  Delta(K) = K (x) K,
  S(E) = -K^{-1} E,  S(F) = -F K,  S(K) = K^{-1},  eps(E) = eps(F) = 0,  eps(K) = 1.
For A2 the non-simple root vectors are E_12 = E_1 E_2 - q^{-1} E_2 E_1 and
F_12 = F_1 F_2 - q^{-1} F_2 F_1; words are ordered along a convex order of the
positive roots, and the commutation rules among E_1, E_12, E_2 (and the F's)
are consequences of the q-Serre relations.
"""

from __future__ import annotations

from ..exact import FractionElement, MultiPoly
from ..liealg import RootSystemDatum, UnsupportedType

__all__ = ["UqAlgebra", "UqElement", "Tensor", "HOPF_CONVENTION"]

HOPF_CONVENTION = {
    "coproduct": "Delta(E_i)=E_i(x)1+K_i(x)E_i; Delta(F_i)=F_i(x)K_i^-1+1(x)F_i; Delta(K_i)=K_i(x)K_i",
    "antipode": "S(E_i)=-K_i^-1 E_i; S(F_i)=-F_i K_i; S(K_i)=K_i^-1",
    "counit": "eps(E_i)=eps(F_i)=0; eps(K_i)=1",
    "commutator": "E_i F_j - F_j E_i = delta_ij (K_i - K_i^-1)/(q_i - q_i^-1)",
}

Q = MultiPoly.variable("q")
ONE = FractionElement(1)
_CAT = {"F": 0, "K": 1, "E": 2}


def qpow(n: int) -> FractionElement:
    return FractionElement(MultiPoly.variable("q", n))


class UqElement:
    """Linear combination of normal words with coefficients in Q(q) (and L-symbols)."""

    __slots__ = ("alg", "terms")

    def __init__(self, alg, terms=None):
        self.alg = alg
        self.terms = {w: c for w, c in (terms or {}).items() if c}

    def __add__(self, other):
        other = self.alg.coerce(other)
        t = dict(self.terms)
        for w, c in other.terms.items():
            s = t.get(w)
            t[w] = c if s is None else s + c
        return UqElement(self.alg, t)

    __radd__ = __add__

    def __neg__(self):
        return UqElement(self.alg, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self.alg.coerce(other))

    def __rsub__(self, other):
        return self.alg.coerce(other) - self

    def scale(self, c):
        c = FractionElement(c) if not isinstance(c, FractionElement) else c
        return UqElement(self.alg, {w: v * c for w, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, FractionElement, MultiPoly)):
            return self.scale(other)
        other = self.alg.coerce(other)
        out = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                for w, c in self.alg.nf_word(w1 + w2).items():
                    s = out.get(w)
                    v = c * c1 * c2
                    out[w] = v if s is None else s + v
        return UqElement(self.alg, out)

    def __rmul__(self, other):
        if isinstance(other, (int, FractionElement, MultiPoly)):
            return self.scale(other)
        return self.alg.coerce(other) * self

    def __pow__(self, n):
        out = self.alg.one()
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        other = self.alg.coerce(other)
        return not (self - other).terms

    __hash__ = None

    def is_zero(self):
        return not self.terms

    def weight(self):
        """ad(K)-weight if homogeneous (root coordinates), else None."""
        ws = {self.alg.word_weight(w) for w in self.terms}
        return ws.pop() if len(ws) == 1 else None

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"({c})*{self.alg.word_str(w)}" for w, c in sorted(self.terms.items(), key=lambda x: self.alg.word_str(x[0])))


class Tensor:
    """Element of U^{(x)n}: dict from tuples of normal words to coefficients."""

    def __init__(self, alg, n, terms=None):
        self.alg, self.n = alg, n
        self.terms = {k: c for k, c in (terms or {}).items() if c}

    def __add__(self, other):
        t = dict(self.terms)
        for k, c in other.terms.items():
            s = t.get(k)
            t[k] = c if s is None else s + c
        return Tensor(self.alg, self.n, t)

    def __sub__(self, other):
        return self + Tensor(self.alg, other.n, {k: -c for k, c in other.terms.items()})

    def __mul__(self, other):
        out = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                parts = [self.alg.nf_word(a + b) for a, b in zip(k1, k2)]
                combos = [((), c1 * c2)]
                for p in parts:
                    combos = [(k + (w,), c * v) for k, c in combos for w, v in p.items()]
                for k, c in combos:
                    s = out.get(k)
                    out[k] = c if s is None else s + c
        return Tensor(self.alg, self.n, out)

    def is_zero(self):
        return not self.terms

    @classmethod
    def pure(cls, *elements):
        alg = elements[0].alg
        combos = [((), ONE)]
        for e in elements:
            combos = [(k + (w,), c * v) for k, c in combos for w, v in e.terms.items()]
        t = {}
        for k, c in combos:
            t[k] = t[k] + c if k in t else c
        return cls(alg, len(elements), t)


class UqAlgebra:
    def __init__(self, rs: RootSystemDatum, order=None):
        if rs.type_letter != "A" or rs.rank > 2:
            raise UnsupportedType(f"quantum layer implemented for A1 and A2 only, not {rs.name}")
        self.rs = rs
        self.rank = rs.rank
        if order is None:
            order = rs.positive_roots if rs.rank == 1 else ((0, 1), (1, 1), (1, 0))
        self.order = tuple(tuple(r) for r in order)
        assert sorted(self.order) == sorted(rs.positive_roots)
        self.pos = {r: i for i, r in enumerate(self.order)}
        self.simple = [rs.simple_root(i + 1) for i in range(rs.rank)]
        self.zero = tuple(0 for _ in range(rs.rank))
        self._nf = {}

    # -- symbols -----------------------------------------------------------------------

    def coerce(self, x):
        if isinstance(x, UqElement):
            return x
        return self.one().scale(x)

    def one(self) -> UqElement:
        return UqElement(self, {(): ONE})

    def E(self, i=1) -> UqElement:
        return UqElement(self, {(("E", self.simple[i - 1]),): ONE})

    def F(self, i=1) -> UqElement:
        return UqElement(self, {(("F", self.simple[i - 1]),): ONE})

    def K(self, i=1, power=1) -> UqElement:
        return self.Kw(tuple(power * c for c in self.simple[i - 1]))

    def Kw(self, omega) -> UqElement:
        omega = tuple(omega)
        if not any(omega):
            return self.one()
        return UqElement(self, {(("K", omega),): ONE})

    def root_vector(self, kind: str, root) -> UqElement:
        return UqElement(self, {((kind, tuple(root)),): ONE})

    def word(self, *letters) -> UqElement:
        out = self.one()
        for x in letters:
            out = out * x
        return out

    def d(self, root) -> int:
        return 1

    def form(self, a, b) -> int:
        return self.rs.form(a, b)

    def word_weight(self, w):
        wt = list(self.zero)
        for kind, r in w:
            if kind == "E":
                wt = [a + b for a, b in zip(wt, r)]
            elif kind == "F":
                wt = [a - b for a, b in zip(wt, r)]
        return tuple(wt)

    def word_str(self, w) -> str:
        if not w:
            return "1"
        parts = []
        for kind, r in w:
            label = "".join(str(i + 1) * c for i, c in enumerate(r))
            if kind == "K":
                parts.append("K[" + ",".join(map(str, r)) + "]")
            else:
                parts.append(f"{kind}{label if self.rank > 1 else ''}")
        return "*".join(parts)

    # -- normal form ---------------------------------------------------------------------

    def _composite(self, kind, r):
        """Expansion of a non-simple root vector into generators (A2 only)."""
        a, b = self.simple
        x, y = (kind, a), (kind, b)
        return [((x, y), ONE), ((y, x), -qpow(-1))]

    def _rule(self, s, t):
        """Rewrite of an out-of-order adjacent pair (s, t), or None if already ordered."""
        ks, kt = _CAT[s[0]], _CAT[t[0]]
        if ks < kt:
            return None
        if s[0] == "K" and t[0] == "K":
            tot = tuple(a + b for a, b in zip(s[1], t[1]))
            return [(((("K", tot),) if any(tot) else ()), ONE)]
        if ks > kt:
            if s[0] == "K":  # K_a F_b = q^{-(a,b)} F_b K_a
                return [((t, s), qpow(-self.form(s[1], t[1])))]
            if t[0] == "K":  # E_b K_a = q^{-(a,b)} K_a E_b
                return [((t, s), qpow(-self.form(t[1], s[1])))]
            # s = E, t = F
            if sum(s[1]) > 1:
                return [(rep + (t,), c) for rep, c in self._composite("E", s[1])]
            if sum(t[1]) > 1:
                return [((s,) + rep, c) for rep, c in self._composite("F", t[1])]
            out = [((t, s), ONE)]
            if s[1] == t[1]:
                di = self.d(s[1])
                denom = qpow(di) - qpow(-di)
                inv = ONE / denom
                out.append(((("K", s[1]),), inv))
                out.append(((("K", tuple(-c for c in s[1])),), -inv))
            return out
        # same family: E-E or F-F
        if self.pos[s[1]] <= self.pos[t[1]]:
            return None
        kind = s[0]
        a, b = self.simple
        ab = tuple(x + y for x, y in zip(a, b))
        A, B, AB = (kind, a), (kind, b), (kind, ab)
        pair = (s[1], t[1])
        if pair == (a, b):
            return [((AB,), ONE), ((B, A), qpow(-1))]
        if pair == (b, a):
            return [((A, B), qpow(1)), ((AB,), -qpow(1))]
        if pair == (ab, a):
            return [((A, AB), qpow(-1))]
        if pair == (a, ab):
            return [((AB, A), qpow(1))]
        if pair == (b, ab):
            return [((AB, B), qpow(-1))]
        if pair == (ab, b):
            return [((B, AB), qpow(1))]
        raise AssertionError(f"no rule for {pair}")

    def nf_word(self, word) -> dict:
        """Normal form of a word of symbols: {normal word: coefficient}."""
        hit = self._nf.get(word)
        if hit is not None:
            return hit
        out = None
        # cross the F | K | E blocks first; reordering inside a family comes last,
        # otherwise an expanded composite would be recombined before it crosses
        cross = [i for i in range(len(word) - 1) if _CAT[word[i][0]] > _CAT[word[i + 1][0]] or word[i][0] == word[i + 1][0] == "K"]
        rest = [i for i in range(len(word) - 1) if i not in cross]
        for i in cross + rest:
            rep = self._rule(word[i], word[i + 1])
            if rep is not None:
                out = {}
                head, tail = word[:i], word[i + 2:]
                for mid, c in rep:
                    for w, v in self.nf_word(head + mid + tail).items():
                        s = out.get(w)
                        val = v * c
                        out[w] = val if s is None else s + val
                out = {w: c for w, c in out.items() if c}
                break
        if out is None:
            out = {word: ONE}
        self._nf[word] = out
        return out

    def normal_form(self, word) -> UqElement:
        return UqElement(self, self.nf_word(tuple(word)))

    def is_normal(self, word) -> bool:
        return all(self._rule(word[i], word[i + 1]) is None for i in range(len(word) - 1))

    # -- Hopf structure ------------------------------------------------------------------------

    def _letters(self, w):
        """Expand a normal word into generator letters (composites and K_omega split)."""
        out = []
        for kind, r in w:
            if kind == "K":
                for i, c in enumerate(r):
                    if c:
                        out.append(("K", i, c))
            elif sum(r) == 1:
                out.append((kind, r.index(1), 1))
            else:
                out.append(("C", kind, r))
        return out

    def coproduct(self, x: UqElement) -> Tensor:
        total = Tensor(self, 2)
        for w, c in x.terms.items():
            t = Tensor.pure(self.one(), self.one())
            for letter in self._letters(w):
                t = t * self._delta_letter(letter)
            total = total + Tensor(self, 2, {k: v * c for k, v in t.terms.items()})
        return total

    def _delta_letter(self, letter) -> Tensor:
        if letter[0] == "C":
            # Delta(X_12) = Delta(X_1) Delta(X_2) - q^{-1} Delta(X_2) Delta(X_1), never re-normalizing X_12
            _, kind, r = letter
            out = Tensor(self, 2)
            for rep, c in self._composite(kind, r):
                t = Tensor.pure(self.one(), self.one())
                for sym in rep:
                    t = t * self._delta_letter((sym[0], sym[1].index(1), 1))
                out = out + Tensor(self, 2, {k: v * c for k, v in t.terms.items()})
            return out
        kind, i, p = letter
        if kind == "K":
            k = self.K(i + 1, p)
            return Tensor.pure(k, k)
        if kind == "E":
            return Tensor.pure(self.E(i + 1), self.one()) + Tensor.pure(self.K(i + 1), self.E(i + 1))
        return Tensor.pure(self.F(i + 1), self.K(i + 1, -1)) + Tensor.pure(self.one(), self.F(i + 1))

    def counit(self, x: UqElement):
        total = FractionElement(0)
        for w, c in x.terms.items():
            if all(kind == "K" for kind, _ in w):
                total = total + c
        return total

    def antipode(self, x: UqElement) -> UqElement:
        out = UqElement(self, {})
        for w, c in x.terms.items():
            t = self.one()
            for letter in self._letters(w):
                t = self._antipode_letter(letter) * t  # anti-homomorphism
            out = out + t.scale(c)
        return out

    def _antipode_letter(self, letter) -> UqElement:
        if letter[0] == "C":
            _, kind, r = letter
            out = UqElement(self, {})
            for rep, c in self._composite(kind, r):
                t = self.one()
                for sym in rep:
                    t = self._antipode_letter((sym[0], sym[1].index(1), 1)) * t
                out = out + t.scale(c)
            return out
        kind, i, p = letter
        if kind == "K":
            return self.K(i + 1, -p)
        if kind == "E":
            return -(self.K(i + 1, -1) * self.E(i + 1))
        return -(self.F(i + 1) * self.K(i + 1))

    def generators(self):
        gens = {}
        for i in range(self.rank):
            s = "" if self.rank == 1 else str(i + 1)
            gens["E" + s] = self.E(i + 1)
            gens["F" + s] = self.F(i + 1)
            gens["K" + s] = self.K(i + 1)
            gens["Kinv" + s] = self.K(i + 1, -1)
        return gens

    # -- tensor helpers --------------------------------------------------------------------------

    def apply_left(self, t: Tensor, fn) -> Tensor:
        """(fn (x) id) on a 2-tensor, fn: UqElement -> Tensor or UqElement."""
        return self._apply(t, fn, 0)

    def apply_right(self, t: Tensor, fn) -> Tensor:
        return self._apply(t, fn, 1)

    def _apply(self, t: Tensor, fn, slot):
        out = Tensor(self, t.n + 1)
        for k, c in t.terms.items():
            img = fn(UqElement(self, {k[slot]: ONE}))
            other = UqElement(self, {k[1 - slot]: c})
            out = out + self._tensor_join(img, other, slot)
        return out

    def _tensor_join(self, img: Tensor, other: UqElement, slot) -> Tensor:
        terms = {}
        for k, c in img.terms.items():
            for w, v in other.terms.items():
                key = k + (w,) if slot == 0 else (w,) + k
                s = terms.get(key)
                terms[key] = c * v if s is None else s + c * v
        return Tensor(self, img.n + 1, terms)

    def multiply(self, t: Tensor) -> UqElement:
        out = UqElement(self, {})
        for k, c in t.terms.items():
            e = self.one()
            for w in k:
                e = e * UqElement(self, {w: ONE})
            out = out + e.scale(c)
        return out

    def check_hopf(self, x: UqElement) -> dict:
        """Coassociativity, counit and antipode axioms on x (each True when exact)."""
        d = self.coproduct(x)
        left = self.apply_left(d, self.coproduct)
        right = self.apply_right(d, self.coproduct)
        coassoc = (left - right).is_zero()
        eps_left = UqElement(self, {})
        eps_right = UqElement(self, {})
        for (a, b), c in d.terms.items():
            eps_left = eps_left + UqElement(self, {b: c * self.counit(UqElement(self, {a: ONE}))})
            eps_right = eps_right + UqElement(self, {a: c * self.counit(UqElement(self, {b: ONE}))})
        counit = eps_left == x and eps_right == x
        s_left = UqElement(self, {})
        s_right = UqElement(self, {})
        for (a, b), c in d.terms.items():
            s_left = s_left + (self.antipode(UqElement(self, {a: ONE})) * UqElement(self, {b: ONE})).scale(c)
            s_right = s_right + (UqElement(self, {a: ONE}) * self.antipode(UqElement(self, {b: ONE}))).scale(c)
        unit = self.one().scale(self.counit(x))
        antipode = s_left == unit and s_right == unit
        return {"coassociativity": coassoc, "counit": counit, "antipode": antipode}
