"""Exact linear algebra over Q and over fraction fields of polynomial rings."""

from __future__ import annotations

import random
from fractions import Fraction
from math import gcd

from .fraction import FractionElement, as_fraction
from .poly import MultiPoly, as_poly

__all__ = [
    "Echelon",
    "rational_rank",
    "solve_rational",
    "PolyMatrix",
    "rank_over_fractions",
    "specialize",
    "SpecializationError",
]


class SpecializationError(ZeroDivisionError):
    """A denominator vanished at the requested assignment."""

    def __init__(self, message, entry=None):
        super().__init__(message)
        self.entry = entry


def _to_int_vector(vec: dict):
    den = 1
    for c in vec.values():
        if type(c) is Fraction:
            d = c.denominator
            den = den * d // gcd(den, d)
    if den == 1:
        out = {k: int(c) for k, c in vec.items() if c}
    else:
        out = {k: int(c * den) for k, c in vec.items() if c}
    return _primitive(out)


def _primitive(vec: dict):
    g = 0
    for c in vec.values():
        g = gcd(g, c)
        if g == 1:
            return vec
    if g > 1:
        return {k: c // g for k, c in vec.items()}
    return vec


class Echelon:
    """Incremental row echelon form of sparse rational vectors.

    Vectors are dicts from sortable keys to rationals. Rows are stored as
    primitive integer vectors keyed by their smallest key (the pivot).
    """

    def __init__(self):
        self.rows = {}  # pivot key -> primitive integer row

    @property
    def rank(self) -> int:
        return len(self.rows)

    def _full_reduce(self, vec: dict) -> dict:
        v = _to_int_vector(vec)
        while True:
            hits = [k for k in v if k in self.rows]
            if not hits:
                return v
            k = min(hits)
            a = v[k]
            row = self.rows[k]
            p = row[k]
            g = gcd(a, p)
            fa, fp = p // g, a // g
            if fa != 1:
                for kk in v:
                    v[kk] *= fa
            for kk, c in row.items():
                s = v.get(kk, 0) - fp * c
                if s:
                    v[kk] = s
                else:
                    v.pop(kk, None)
            v = _primitive(v)

    def add(self, vec: dict) -> bool:
        """Insert ``vec``; return True if it was independent of the current rows."""
        v = self._full_reduce(vec)
        if not v:
            return False
        k = min(v)
        if v[k] < 0:
            v = {kk: -c for kk, c in v.items()}
        self.rows[k] = v
        return True

    def contains(self, vec: dict) -> bool:
        return not self._full_reduce(vec)


def rational_rank(vectors) -> int:
    """Rank over Q of an iterable of sparse vectors (dicts) or dense sequences."""
    ech = Echelon()
    for v in vectors:
        if not isinstance(v, dict):
            v = {i: c for i, c in enumerate(v) if c}
        ech.add(v)
    return ech.rank


def solve_rational(vectors, target: dict):
    """Coefficients x (list of Fractions) with sum x_i vectors[i] = target, or None.

    Vectors are sparse dicts over a common key set; the solution is the one with
    zero weight on every column that is dependent on earlier ones.
    """
    rows = {}  # pivot key -> (row dict, combination dict index -> Fraction)
    order = []

    def reduce(v, comb):
        v, comb = dict(v), dict(comb)
        for k in order:
            c = v.get(k)
            if not c:
                continue
            row, rc = rows[k]
            for kk, x in row.items():
                s = v.get(kk, 0) - c * x
                if s:
                    v[kk] = s
                else:
                    v.pop(kk, None)
            for i, x in rc.items():
                s = comb.get(i, 0) - c * x
                if s:
                    comb[i] = s
                else:
                    comb.pop(i, None)
        return v, comb

    for i, vec in enumerate(vectors):
        v, comb = reduce({k: Fraction(c) for k, c in vec.items() if c}, {i: Fraction(1)})
        if not v:
            continue
        k = next(kk for kk in vec if kk in v) if any(kk in v for kk in vec) else next(iter(v))
        inv = 1 / v[k]
        rows[k] = ({kk: x * inv for kk, x in v.items()}, {j: x * inv for j, x in comb.items()})
        # keep earlier rows reduced against the new pivot
        for kp in order:
            row, rc = rows[kp]
            c = row.get(k)
            if c:
                nr = {kk: row.get(kk, 0) - c * rows[k][0].get(kk, 0) for kk in set(row) | set(rows[k][0])}
                nc = {j: rc.get(j, 0) - c * rows[k][1].get(j, 0) for j in set(rc) | set(rows[k][1])}
                rows[kp] = ({kk: x for kk, x in nr.items() if x}, {j: x for j, x in nc.items() if x})
        order.append(k)
    # express target: t = sum_k t_k row_k, read off coefficients
    rem = {k: Fraction(c) for k, c in target.items() if c}
    x = [Fraction(0)] * len(vectors)
    for k in order:
        c = rem.get(k)
        if not c:
            continue
        row, rc = rows[k]
        for kk, val in row.items():
            s = rem.get(kk, 0) - c * val
            if s:
                rem[kk] = s
            else:
                rem.pop(kk, None)
        for j, val in rc.items():
            x[j] += c * val
    return None if rem else x


class PolyMatrix:
    """Dense matrix whose entries are rationals, MultiPoly or FractionElement values."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries, cols=None):
        entries = [list(r) for r in entries]
        self.rows = len(entries)
        self.cols = cols if cols is not None else (len(entries[0]) if entries else 0)
        for r in entries:
            if len(r) != self.cols:
                raise ValueError("ragged matrix")
        self.entries = entries

    @classmethod
    def identity(cls, n: int) -> PolyMatrix:
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def transpose(self) -> PolyMatrix:
        return PolyMatrix([list(c) for c in zip(*self.entries)], cols=self.rows)

    def free_vars(self) -> set:
        out = set()
        for r in self.entries:
            for x in r:
                if isinstance(x, (MultiPoly, FractionElement)):
                    out |= x.free_vars()
        return out

    def rank(self) -> int:
        return rank_over_fractions(self)

    def __repr__(self):
        return f"PolyMatrix({self.rows}x{self.cols})"


def specialize(m: PolyMatrix, assignment: dict) -> PolyMatrix:
    """Substitute rational values; every resulting entry is a rational."""
    missing = m.free_vars() - set(assignment)
    if missing:
        raise ValueError(f"assignment misses variables {sorted(missing)}")
    out = []
    for i, row in enumerate(m.entries):
        new = []
        for j, x in enumerate(row):
            if isinstance(x, FractionElement):
                d = x.den.subs(assignment)
                if d.is_zero():
                    raise SpecializationError(
                        f"denominator vanishes at entry ({i},{j}): {x}", entry=(i, j)
                    )
                new.append(Fraction(x.num.subs(assignment).constant_value()) / d.constant_value())
            elif isinstance(x, MultiPoly):
                try:
                    new.append(x.subs(assignment).constant_value())
                except ZeroDivisionError as exc:
                    raise SpecializationError(
                        f"denominator vanishes at entry ({i},{j}): {x}", entry=(i, j)
                    ) from exc
            else:
                new.append(x)
        out.append([_nc(v) for v in new])
    return PolyMatrix(out, cols=m.cols)


def _nc(c):
    if type(c) is Fraction and c.denominator == 1:
        return c.numerator
    return c


def _clear_denominators(m: PolyMatrix):
    """Row-scale to polynomial entries; rank over the fraction field is unchanged."""
    out = []
    for row in m.entries:
        fr = [as_fraction(x) for x in row]
        den = MultiPoly.constant(1)
        for f in fr:
            if f.den.is_constant():
                continue
            try:
                den.divexact(f.den)
            except ValueError:
                den = den * f.den
        out.append([(f.num * den).divexact(f.den) for f in fr])
    return out


def _random_point(vars, rng):
    return {v: rng.choice([-1, 1]) * rng.randint(2, 10_000) for v in vars}


def _bareiss_rank(a) -> int:
    """Rank by fraction-free elimination with full pivoting on the sparsest entry."""
    a = [list(r) for r in a]
    nrows = len(a)
    ncols = len(a[0]) if a else 0
    prev = MultiPoly.constant(1)
    rank = 0
    rows = list(range(nrows))
    cols = list(range(ncols))
    while rank < min(nrows, ncols):
        best = None
        for i in rows[rank:]:
            ri = a[i]
            for j in cols[rank:]:
                x = ri[j]
                if x:
                    size = (len(x.terms), x.total_degree())
                    if best is None or size < best[0]:
                        best = (size, i, j)
        if best is None:
            break
        _, pi, pj = best
        ri = rows.index(pi)
        rows[rank], rows[ri] = rows[ri], rows[rank]
        cj = cols.index(pj)
        cols[rank], cols[cj] = cols[cj], cols[rank]
        piv = a[pi][pj]
        prow = a[pi]
        for i in rows[rank + 1:]:
            r = a[i]
            f = r[pj]
            for j in cols[rank + 1:]:
                x = r[j]
                y = prow[j]
                if f and y:
                    val = piv * x - f * y if x else -(f * y)
                elif x:
                    val = piv * x
                else:
                    r[j] = x
                    continue
                r[j] = val.divexact(prev) if not prev.is_constant() else val / prev.constant_value()
            r[pj] = MultiPoly.constant(0)
        prev = piv
        rank += 1
    return rank


def rank_over_fractions(m, *, rng=None, use_gram=None) -> int:
    """Rank of ``m`` over the fraction field of its coefficient ring.

    A rank computed at a random rational point is a lower bound; when it is
    already maximal it is returned directly, otherwise Bareiss elimination
    decides. For wide matrices the Gram matrix M M^T is eliminated instead;
    over a formally real field such as Q(x_1..x_k) it has the same rank.
    """
    if not isinstance(m, PolyMatrix):
        m = PolyMatrix(m)
    if m.rows == 0 or m.cols == 0:
        return 0
    rng = rng or random.Random(0x5EED)
    vars = sorted(m.free_vars())
    bound = min(m.rows, m.cols)
    for _ in range(2):
        try:
            lower = rational_rank(specialize(m, _random_point(vars, rng)).entries)
        except SpecializationError:
            continue
        if lower == bound:
            return lower
        break
    rows = _clear_denominators(m)
    rows = [r for r in rows if any(rows_j for rows_j in r)]
    if not rows:
        return 0
    ncols = len(rows[0])
    if use_gram is None:
        use_gram = ncols > 4 * len(rows)
    if use_gram:
        sparse = [{j: x for j, x in enumerate(r) if x} for r in rows]
        n = len(sparse)
        gram = [[MultiPoly.constant(0)] * n for _ in range(n)]
        for i in range(n):
            for k in range(i, n):
                si, sk = sparse[i], sparse[k]
                if len(sk) < len(si):
                    si, sk = sk, si
                acc = MultiPoly.constant(0)
                for j, x in si.items():
                    y = sk.get(j)
                    if y is not None:
                        acc = acc + x * y
                gram[i][k] = acc
                gram[k][i] = acc
        rows = gram
    return _bareiss_rank([[as_poly(x) for x in r] for r in rows])
