"""Verification suites: one function per acceptance check, each returning a CheckReport."""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial

from .exact import MultiPoly
from .liealg import UnsupportedType, build_root_system, chevalley_constants, levi_datum, parabolic_split
from .orbit import isotypic_multiplicities, orbit_filtered_dim, orbit_sample, orbit_weight_dims
from .quantizer import (
    commutativity_mod_h,
    flatness_evidence,
    hilbert_function,
    leading_term_eval,
    multiplicity_check,
)
from .verma import VermaModule, shapovalov_rank

PASS, FAIL, INCONCLUSIVE, SKIPPED = "pass", "fail", "inconclusive", "skipped"


@dataclass
class CheckReport:
    name: str
    status: str
    details: dict = field(default_factory=dict)
    seconds: float = 0.0

    def to_json(self) -> dict:
        # timing is left out so that identical configurations give identical reports
        return {"name": self.name, "status": self.status, "details": self.details}


def _timed(name, fn, *args, **kwargs) -> CheckReport:
    t0 = time.perf_counter()
    status, details = fn(*args, **kwargs)
    return CheckReport(name, status, details, time.perf_counter() - t0)


def overall_status(reports) -> str:
    statuses = {r.status for r in reports}
    if FAIL in statuses:
        return FAIL
    if INCONCLUSIVE in statuses:
        return INCONCLUSIVE
    return PASS


def full_labels(rs, levi, lam0) -> list:
    """lambda(h_i) for every simple root: the orbit parameter, or 0 on the Levi factor."""
    out = []
    for i in range(1, rs.rank + 1):
        name = levi.lam_of_simple(i)
        out.append(Fraction(0) if name is None else Fraction(lam0[levi.lam_names().index(name)]))
    return out


def series_coefficients(num, den_power, n):
    """Coefficients of num(s) / (1 - s)^den_power up to s^n (num given by its coefficient list)."""
    # 1/(1-s)^k has coefficients binom(j + k - 1, k - 1)
    base = [comb(j + den_power - 1, den_power - 1) for j in range(n + 1)]
    return [sum(num[i] * base[j - i] for i in range(min(j, len(num) - 1) + 1)) for j in range(n + 1)]


# -- individual checks ------------------------------------------------------------------------------


def hilbert_check(rs_name="A1", levi=(), degree=3, seed=0, expected=None, time_limit=60.0):
    rs = build_root_system(rs_name[0], int(rs_name[1:]))
    pd = parabolic_split(rs, levi_datum(rs, levi))
    t0 = time.perf_counter()
    table, _ = hilbert_function(pd, degree)
    elapsed = time.perf_counter() - t0
    details = {"ranks": table.ranks, "depth": table.depth, "stabilized": table.stabilized}
    if not table.stabilized:
        return INCONCLUSIVE, details
    ok = True
    # A is free over Q[lambda_1..lambda_m, h]: the filtered fiber dims are the
    # coefficients of H_A(s) (1 - s)^m, i.e. m successive differences
    fiber = list(table.ranks)
    for _ in range(len(pd.levi.orbit_params)):
        fiber = [fiber[0]] + [b - a for a, b in zip(fiber, fiber[1:])]
    details["fiber_filtered_dims"] = fiber
    if rs.type_letter == "A":
        lam0 = [Fraction(1)] * len(pd.levi.orbit_params)
        cb = chevalley_constants(rs)
        n_monos = _monomial_count(len(cb.names), degree)
        sample = orbit_sample(rs, full_labels(rs, pd.levi, lam0), n_monos + 10, seed)
        oracle = [orbit_filtered_dim(cb, sample, d) for d in range(degree + 1)]
        details["orbit_filtered_dims"] = oracle
        ok &= fiber == oracle
    if rs_name == "A1" and not levi:
        gf = series_coefficients([1, 1], 4, degree)
        details["generating_function"] = gf
        ok &= table.ranks == gf
    if expected is not None:
        ok &= table.ranks == list(expected)
    details["within_time_limit"] = elapsed < time_limit
    ok &= elapsed < time_limit
    return (PASS if ok else FAIL), details


def _monomial_count(n, d):
    return comb(n + d, d)


def fiber_check(rs_name="A1", levi=(), degree=4, trials=5, seed=0):
    """Filtered dims of the specialized algebra at random (lambda_0, h_0) against the orbit oracle."""
    rs = build_root_system(rs_name[0], int(rs_name[1:]))
    pd = parabolic_split(rs, levi_datum(rs, levi))
    cb = chevalley_constants(rs)
    ev = flatness_evidence(pd, degree, trials=trials, seed=seed)
    rows = []
    ok = ev["stabilized"]
    for k, tr in enumerate(ev["trials"]):
        lam0 = [tr["point"][v] for v in pd.levi.lam_names()]
        row = {"point": {v: str(x) for v, x in tr["point"].items()}, "ranks": tr["ranks"]}
        if rs.type_letter == "A":
            sample = orbit_sample(rs, full_labels(rs, pd.levi, lam0), _monomial_count(len(cb.names), degree) + 10, seed + k)
            row["orbit"] = [orbit_filtered_dim(cb, sample, d) for d in range(degree + 1)]
            ok &= row["orbit"] == tr["ranks"]
        if rs_name == "A1":
            ok &= tr["ranks"] == [(d + 1) ** 2 for d in range(degree + 1)]
        rows.append(row)
    status = PASS if ok else (INCONCLUSIVE if not ev["stabilized"] else FAIL)
    return status, {"trials": rows, "generic_ranks": ev["generic_ranks"], "depth": ev["depth"]}


def commutativity_check(algebras=(("A1", ()), ("A2", ()))):
    out = {}
    ok = True
    total = 0
    for name, levi in algebras:
        rs = build_root_system(name[0], int(name[1:]))
        res = commutativity_mod_h(parabolic_split(rs, levi_datum(rs, levi)))
        out[name] = {"pairs": len(res["pairs"]), "max_residual": res["max_residual"]}
        total += len(res["pairs"])
        ok &= res["max_residual"] == 0
    out["total_pairs"] = total
    return (PASS if ok else FAIL), out


def leading_term_check(algebras=("A1", "A2"), count=50, max_degree=3, seed=0):
    rng = random.Random(seed)
    details = {}
    ok = True
    for name in algebras:
        rs = build_root_system(name[0], int(name[1:]))
        pd = parabolic_split(rs, levi_datum(rs, ()))
        vm = VermaModule(pd)
        names = list(vm.cb.names)
        mismatches = []
        for _ in range(count):
            word = [rng.choice(names) for _ in range(rng.randint(1, max_degree))]
            point = {v: Fraction(rng.choice([-1, 1]) * rng.randint(1, 20), rng.randint(1, 5)) for v in pd.levi.lam_names()}
            obs, exp = leading_term_eval(vm, word, point)
            if obs != exp:
                mismatches.append({"word": word, "observed": str(obs), "expected": str(exp)})
        details[name] = {"monomials": count, "mismatches": mismatches}
        ok &= not mismatches
    return (PASS if ok else FAIL), details


def filtered_isotypic_oracle(rs, levi, lam0, degree, seed=0):
    cb = chevalley_constants(rs)
    sample = orbit_sample(rs, full_labels(rs, levi, lam0), _monomial_count(len(cb.names), degree) + 15, seed)
    return isotypic_multiplicities(rs, orbit_weight_dims(cb, sample, degree))


def multiplicity_suite(cases=None, seed=0):
    """n_mu against ell_mu; at a finite degree cap only the filtered oracle is exact for every mu."""
    cases = cases or [("A1", (), (Fraction(7, 2),), Fraction(1, 3), 3), ("A2", (), (Fraction(5, 2), Fraction(3, 1)), Fraction(1, 2), 2)]
    details = {}
    ok = True
    stable = True
    for name, levi, lam0, h0, cap in cases:
        rs = build_root_system(name[0], int(name[1:]))
        ld = levi_datum(rs, levi)
        pd = parabolic_split(rs, ld)
        oracle = filtered_isotypic_oracle(rs, ld, lam0, cap, seed)
        res = multiplicity_check(pd, lam0, h0, cap, filtered_oracle=oracle)
        stable &= res["stable"]
        for row in res["rows"]:
            ok &= row["n"] == row["ell_filtered"]
        if name == "A1":
            for row in res["rows"]:
                ok &= row["n"] == row["ell"] == 1
            ok &= sorted(tuple(r["mu"]) for r in res["rows"]) == [(2 * k,) for k in range(cap + 1)]
        if name == "A2" and not levi:
            adj = next((r for r in res["rows"] if r["mu"] == [1, 1]), None)
            ok &= adj is not None and adj["n"] == adj["ell"] == 2
            triv = next((r for r in res["rows"] if r["mu"] == [0, 0]), None)
            ok &= triv is not None and triv["n"] == triv["ell"] == 1
        details[name] = res
    status = PASS if ok and stable else (INCONCLUSIVE if ok else FAIL)
    return status, details


def shapovalov_check(sl2_depth=5, a2_depth=3):
    rs = build_root_system("A", 1)
    pd = parabolic_split(rs, levi_datum(rs, ()))
    rep = shapovalov_rank(pd, sl2_depth, factor=False)
    lam = MultiPoly.variable("lam1")
    ok = True
    sl2 = []
    for k, row in enumerate(rep):
        expected = MultiPoly.constant(factorial(k))
        for j in range(k):
            expected = expected * (lam - j)
        vm = VermaModule(pd)
        vec = {(k,): MultiPoly.constant(1)}
        for _ in range(k):
            vec = vm.act_vec(vm.cb.e((1,)), vec)
        entry = vec.get(vm.zero, MultiPoly.constant(0))
        sl2.append({"depth": k, "entry": str(entry), "matches": entry == expected, "rank": row["rank"]})
        ok &= entry == expected and row["rank"] == 1
    rs2 = build_root_system("A", 2)
    pd2 = parabolic_split(rs2, levi_datum(rs2, (1,)))
    rep2 = shapovalov_rank(pd2, a2_depth)
    a2 = []
    for row in rep2:
        full = row["rank"] == row["size"]
        ok &= full
        a2.append({"depth": row["depth"], "size": row["size"], "rank": row["rank"],
                   "vanishing_locus": sorted({f for b in row["blocks"] for f, _ in b.get("factors", []) if "lam" in f})})
    return (PASS if ok else FAIL), {"A1": sl2, "A2_S1": a2}


def flatness_check(rs_name="A2", levi=(1,), degree=2, trials=5, seed=0):
    rs = build_root_system(rs_name[0], int(rs_name[1:]))
    pd = parabolic_split(rs, levi_datum(rs, levi))
    ev = flatness_evidence(pd, degree, trials=trials, seed=seed)
    details = {
        "generic_ranks": ev["generic_ranks"],
        "graded_ranks": ev["graded_ranks"],
        "trials": [{"point": {k: str(v) for k, v in t["point"].items()}, "ranks": t["ranks"], "match": t["match"]} for t in ev["trials"]],
    }
    if not ev["stabilized"]:
        return INCONCLUSIVE, details
    return (PASS if ev["flat"] and len(ev["trials"]) >= 5 else FAIL), details


def quantum_check(rs_name="A1", factor=4, pairs=20, seed=0):
    from .uq import UqAlgebra, ad_closure, build_q_slice, equivariance_check, find_Gq
    from .uq.fu import FieldEchelon, ad_element

    rs = build_root_system(rs_name[0], int(rs_name[1:]))
    try:
        alg = UqAlgebra(rs)
    except UnsupportedType as exc:
        return SKIPPED, {"reason": str(exc)}
    hopf = {name: alg.check_hopf(x) for name, x in alg.generators().items()}
    ok = all(all(v.values()) for v in hopf.values())
    details = {"hopf": hopf}
    if rs.rank != 1:
        details["reason"] = "G_q, equivariance and two-parameter slices are implemented for sl2"
        return (PASS if ok else FAIL), details
    gq = find_Gq(alg, factor=factor)
    span = FieldEchelon()
    for x in gq.elements.values():
        span.add(x.terms)
    closed = all(
        not span.reduce(ad_element(alg, kind, 1, x).terms)
        for x in gq.elements.values()
        for kind in ("E", "F", "K")
    )
    limits_ok = {k: set(v) for k, v in gq.limits.items()} == {k: {k} for k in gq.elements}
    details["Gq"] = {"dim": span.rank, "ad_closed": closed, "limits": sorted(gq.limits), "closure_dim": gq.closure_dim,
                     "closure_recomputed": len(ad_closure(alg, alg.Kw(gq.start)))}
    ok &= span.rank == 3 and closed and limits_ok
    eq = equivariance_check(gq, pairs=pairs, seed=seed)
    details["equivariance"] = {"pairs": len(eq["pairs"]), "all_exact": eq["all_exact"]}
    ok &= eq["all_exact"] and len(eq["pairs"]) == pairs
    qs = build_q_slice(gq, 2, order=0)
    details["q_slice_t0_ranks"] = qs.t0_ranks
    details["t0_equals_classical"] = qs.t0_matches_classical
    ok &= qs.t0_ranks == [1, 5, 14] and all(qs.t0_matches_classical)
    return (PASS if ok else FAIL), details


def bracket_check(factor=4):
    from .uq import UqAlgebra, find_Gq, second_bracket_sl2

    alg = UqAlgebra(build_root_system("A", 1))
    res = second_bracket_sl2(find_Gq(alg, factor=factor))
    ok = res["antisymmetric"] and res["proportional"] and res["kks_part_matches"]
    return (PASS if ok else FAIL), res


# -- suites -----------------------------------------------------------------------------------------


CRITERIA = {
    1: "sl2 graded Hilbert function",
    2: "classical fiber dimensions",
    3: "commutativity mod h",
    4: "leading-term evaluation",
    5: "multiplicities n_mu = ell_mu",
    6: "Shapovalov pairing",
    7: "flatness evidence",
    8: "quantum layer",
    9: "second bracket",
}


def run_criterion(n: int, seed: int = 0, factor: int = 4) -> CheckReport:
    name = f"{n}. {CRITERIA[n]}"
    if n == 1:
        return _timed(name, hilbert_check, "A1", (), 3, seed, expected=[1, 5, 14, 30])
    if n == 2:
        return _timed(name, fiber_check, "A1", (), 4, 5, seed)
    if n == 3:
        return _timed(name, commutativity_check)
    if n == 4:
        return _timed(name, leading_term_check, ("A1", "A2"), 50, 3, seed)
    if n == 5:
        return _timed(name, multiplicity_suite, None, seed)
    if n == 6:
        return _timed(name, shapovalov_check)
    if n == 7:
        return _timed(name, flatness_check, "A2", (1,), 2, 5, seed)
    if n == 8:
        return _timed(name, quantum_check, "A1", factor, 20, seed)
    if n == 9:
        return _timed(name, bracket_check, factor)
    raise ValueError(n)


def verify_all(algebra: str = "A1", levi=(), seed: int = 0, t_order: int = 2, factor: int = 4) -> list:
    """Acceptance suite for the configured algebra; quantum checks are skipped at t-order 0."""
    if algebra == "A1" and not levi:
        reports = [run_criterion(n, seed, factor) for n in range(1, 8)]
        if t_order == 0:
            reports += [CheckReport(f"{n}. {CRITERIA[n]}", SKIPPED, {"reason": "t-order 0"}) for n in (8, 9)]
        else:
            reports += [run_criterion(n, seed, factor) for n in (8, 9)]
        return reports
    rs = build_root_system(algebra[0], int(algebra[1:]))
    ld = levi_datum(rs, levi)
    pd = parabolic_split(rs, ld)
    n_params = len(ld.orbit_params)
    reports = [
        _timed("hilbert", hilbert_check, algebra, tuple(levi), 2, seed),
        _timed("commutativity mod h", commutativity_check, ((algebra, tuple(levi)),)),
        _timed("flatness evidence", flatness_check, algebra, tuple(levi), 2, 5, seed),
    ]
    if not levi:
        reports.append(_timed("leading-term evaluation", leading_term_check, (algebra,), 50, 3, seed))
    if rs.type_letter == "A":
        lam0 = tuple(Fraction(3 + 2 * i, 2) for i in range(n_params))
        reports.append(_timed("multiplicities n_mu = ell_mu", multiplicity_suite, [(algebra, tuple(levi), lam0, Fraction(1, 2), 2)], seed))

    def _shap():
        rep = shapovalov_rank(pd, 3 if rs.rank <= 2 else 2)
        ok = all(r["rank"] == r["size"] for r in rep)
        return (PASS if ok else FAIL), {"ranks": [[r["rank"], r["size"]] for r in rep]}

    reports.append(_timed("Shapovalov pairing", _shap))
    if t_order == 0:
        reports.append(CheckReport("quantum layer", SKIPPED, {"reason": "t-order 0"}))
    else:
        reports.append(_timed("quantum layer", quantum_check, algebra, factor, 20, seed))
    reports.append(CheckReport("second bracket", SKIPPED, {"reason": "extracted for sl2 only"}))
    return reports
