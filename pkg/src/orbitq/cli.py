"""Command-line front end.

Exit codes: 0 all checks pass, 1 a check failed, 2 invalid input, 3 inconclusive
(depth cap exhausted before ranks stabilized).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import checks
from .checks import FAIL, INCONCLUSIVE, PASS, SKIPPED
from .exact import MultiPoly
from .liealg import UnsupportedType, build_root_system, chevalley_constants, levi_datum, parabolic_split

ALGEBRAS = ("A1", "A2", "B2", "A3")
EXIT = {PASS: 0, SKIPPED: 0, FAIL: 1, INCONCLUSIVE: 3}


class InputError(ValueError):
    pass


def to_jsonable(x):
    if isinstance(x, dict):
        return {(k if isinstance(k, str) else ",".join(map(str, k)) if isinstance(k, tuple) else str(k)): to_jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [to_jsonable(v) for v in x]
    if isinstance(x, bool) or x is None or isinstance(x, (int, str)):
        return x
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else int(x)
    if isinstance(x, (MultiPoly, float)):
        return str(x)
    return str(x)


# -- configuration ----------------------------------------------------------------------------------


class Config:
    def __init__(self, args):
        self.command = args.command
        self.algebra = args.algebra
        if self.algebra not in ALGEBRAS:
            raise InputError(f"unknown algebra {self.algebra!r}; choose from {', '.join(ALGEBRAS)}")
        self.rs = build_root_system(self.algebra[0], int(self.algebra[1:]))
        try:
            self.levi_simples = tuple(int(x) for x in args.levi.replace(" ", "").split(",") if x)
        except ValueError as exc:
            raise InputError(f"bad levi list {args.levi!r}") from exc
        try:
            self.levi = levi_datum(self.rs, self.levi_simples)
        except ValueError as exc:
            raise InputError(str(exc)) from exc
        self.m = len(self.levi.orbit_params)
        self.lam = None
        if args.lam != "symbolic":
            try:
                vals = [Fraction(x) for x in args.lam.split(",")]
            except (ValueError, ZeroDivisionError) as exc:
                raise InputError(f"bad lambda {args.lam!r}") from exc
            if any(v == 0 for v in vals):
                raise InputError("lambda_i must be nonzero")
            if len(vals) == 1 and self.m > 1:
                vals = vals * self.m
            if len(vals) != self.m:
                raise InputError(f"expected {self.m} lambda values, got {len(vals)}")
            self.lam = vals
        try:
            self.h = Fraction(args.h)
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"bad h {args.h!r}") from exc
        self.degree = args.degree
        self.depth = args.depth
        self.t_order = args.t_order
        if self.t_order < 0 or (self.degree is not None and self.degree < 0) or (self.depth is not None and self.depth < 0):
            raise InputError("degree, depth and t-order must be nonnegative")
        env = os.environ.get("ORBITQ_SEED")
        try:
            self.seed = int(env) if env not in (None, "") else args.seed
        except ValueError as exc:
            raise InputError(f"ORBITQ_SEED must be an integer, got {env!r}") from exc
        self.factor = args.lattice_factor
        self.generator = args.generator
        self.rescaled = args.rescaled
        self.format = args.format
        self.output = args.output

    @property
    def pd(self):
        return parabolic_split(self.rs, self.levi)

    def to_json(self):
        return {
            "algebra": self.algebra,
            "levi": list(self.levi_simples),
            "lambda": "symbolic" if self.lam is None else [str(x) for x in self.lam],
            "h": str(self.h),
            "degree": self.degree,
            "depth": self.depth,
            "t_order": self.t_order,
            "seed": self.seed,
            "lattice_factor": self.factor,
        }

    def numeric_lambda(self):
        return self.lam if self.lam is not None else [Fraction(1)] * self.m


def _sl2_only(cfg):
    if cfg.algebra != "A1":
        raise InputError(f"{cfg.command} is implemented for A1 only")


# -- subcommands: each returns (status, result dict, table or None) ---------------------------------


def cmd_roots(cfg):
    cb = chevalley_constants(cfg.rs)
    names = cb.names
    bad = sum(1 for x in names for y in names for z in names if cb.jacobi_residual(x, y, z))
    result = {"root_system": cfg.rs.to_json(), "chevalley": cb.to_json(), "parabolic": cfg.pd.to_json(), "jacobi_failures": bad}
    return (PASS if bad == 0 else FAIL), result, None


def cmd_verma_act(cfg):
    from .verma import generator_action, rescaled_action, verma_basis

    pd = cfg.pd
    tv = verma_basis(pd, cfg.depth if cfg.depth is not None else 3)
    names = [cfg.generator] if cfg.generator else list(pd.basis.names)
    for n in names:
        if n not in pd.basis.names:
            raise InputError(f"unknown generator {n!r}; basis is {', '.join(pd.basis.names)}")
    fn = rescaled_action if cfg.rescaled else generator_action
    out = {}
    for n in names:
        ga = fn(n, tv)
        out[n] = [
            {"in": list(m), "out": [{"monomial": list(m2), "coefficient": str(c)} for m2, c in sorted(col.items())]}
            for m, col in ga.columns.items()
        ]
    return PASS, {"basis": [list(m) for m in tv.basis], "n_minus_P": list(pd.n_minus_P_basis), "rescaled": cfg.rescaled, "actions": out}, None


def cmd_shapovalov(cfg):
    from .verma import shapovalov_rank

    rep = shapovalov_rank(cfg.pd, cfg.depth if cfg.depth is not None else 3)
    full = all(r["rank"] == r["size"] for r in rep)
    return (PASS if full else FAIL), {"depths": rep, "generic_full_rank": full}, None


def cmd_hilbert(cfg):
    from .quantizer import H, specialized_hilbert

    degree = cfg.degree if cfg.degree is not None else (3 if cfg.algebra == "A1" else 2)
    if cfg.lam is not None:
        if cfg.h == 0:
            raise InputError("h must be nonzero")
        point = dict(zip(cfg.levi.lam_names(), cfg.lam))
        point[H] = cfg.h
        table = specialized_hilbert(cfg.pd, degree, point, depth_cap=cfg.depth)
        status = PASS if table.stabilized else INCONCLUSIVE
        result = table.to_json()
        result["point"] = {k: str(v) for k, v in point.items()}
        result["kind"] = "specialized filtered dims"
        return status, result, table.ranks
    if cfg.depth is not None:
        from .quantizer import hilbert_function

        table, _ = hilbert_function(cfg.pd, degree, depth_cap=cfg.depth)
        return (PASS if table.stabilized else INCONCLUSIVE), table.to_json(), table.ranks
    status, details = checks.hilbert_check(cfg.algebra, cfg.levi_simples, degree, cfg.seed)
    result = {"table": [{"d": d, "rank": r} for d, r in enumerate(details["ranks"])], **details}
    return status, result, details["ranks"]


def cmd_flatness(cfg):
    from .quantizer import flatness_evidence

    degree = cfg.degree if cfg.degree is not None else 2
    ev = flatness_evidence(cfg.pd, degree, trials=5, seed=cfg.seed, depth_cap=cfg.depth)
    status = INCONCLUSIVE if not ev["stabilized"] else (PASS if ev["flat"] else FAIL)
    return status, ev, ev["generic_ranks"]


def cmd_poisson(cfg):
    from .quantizer import commutativity_mod_h

    res = commutativity_mod_h(cfg.pd, cfg.depth)
    return (PASS if res["max_residual"] == 0 else FAIL), res, None


def cmd_multiplicity(cfg):
    if cfg.rs.type_letter != "A":
        raise InputError("the orbit oracle is implemented for type A")
    if cfg.h == 0:
        raise InputError("h must be nonzero")
    degree = cfg.degree if cfg.degree is not None else 2
    status, details = checks.multiplicity_suite([(cfg.algebra, cfg.levi_simples, tuple(cfg.numeric_lambda()), cfg.h, degree)], cfg.seed)
    return status, details[cfg.algebra], None


def cmd_orbit_dim(cfg):
    from .orbit import orbit_filtered_dim, orbit_sample

    if cfg.rs.type_letter != "A":
        raise InputError("orbit sampling is implemented for type A")
    degree = cfg.degree if cfg.degree is not None else 3
    cb = chevalley_constants(cfg.rs)
    labels = checks.full_labels(cfg.rs, cfg.levi, cfg.numeric_lambda())
    count = checks._monomial_count(len(cb.names), degree) + 10
    dims = [orbit_filtered_dim(cb, orbit_sample(cfg.rs, labels, count, cfg.seed), d) for d in range(degree + 1)]
    again = [orbit_filtered_dim(cb, orbit_sample(cfg.rs, labels, count, cfg.seed + 1), d) for d in range(degree + 1)]
    result = {"labels": [str(x) for x in labels], "table": [{"d": d, "rank": r} for d, r in enumerate(dims)],
              "second_batch": again, "stable": dims == again}
    return (PASS if dims == again else INCONCLUSIVE), result, dims


def _gq(cfg):
    from .uq import UqAlgebra, find_Gq

    _sl2_only(cfg)
    return find_Gq(UqAlgebra(cfg.rs), factor=cfg.factor)


def cmd_q_hilbert(cfg):
    from .uq import build_q_slice

    degree = cfg.degree if cfg.degree is not None else 2
    rep = build_q_slice(_gq(cfg), degree, order=cfg.t_order)
    ok = all(rep.t0_matches_classical)
    return (PASS if ok else FAIL), rep.to_json(), rep.t0_ranks


def cmd_gq(cfg):
    g = _gq(cfg)
    return PASS, g.to_json(), None


def cmd_equivariance(cfg):
    from .uq import equivariance_check

    res = equivariance_check(_gq(cfg), pairs=20, seed=cfg.seed)
    return (PASS if res["all_exact"] else FAIL), res, None


def cmd_bracket2(cfg):
    from .uq import second_bracket_sl2

    if cfg.t_order < 2:
        raise InputError("extraction of the second bracket needs --t-order >= 2")
    res = second_bracket_sl2(_gq(cfg), order=cfg.t_order)
    ok = res["antisymmetric"] and res["proportional"] and res["kks_part_matches"]
    return (PASS if ok else FAIL), res, None


def cmd_verify_all(cfg):
    reports = checks.verify_all(cfg.algebra, cfg.levi_simples, seed=cfg.seed, t_order=cfg.t_order, factor=cfg.factor)
    status = checks.overall_status(reports)
    return status, {"checks": [r.to_json() for r in reports]}, reports


COMMANDS = {
    "roots": (cmd_roots, "root system, Chevalley basis and parabolic split"),
    "verma-act": (cmd_verma_act, "generator actions on a truncated generalized Verma module"),
    "shapovalov": (cmd_shapovalov, "pairing matrices with the highest weight vector"),
    "hilbert": (cmd_hilbert, "graded Hilbert function of A_{lambda,h} (or specialized dims)"),
    "flatness": (cmd_flatness, "generic vs specialized slice ranks"),
    "poisson": (cmd_poisson, "commutativity modulo h on all generator pairs"),
    "multiplicity": (cmd_multiplicity, "highest weight vector counts n_mu against ell_mu"),
    "orbit-dim": (cmd_orbit_dim, "filtered dims of polynomial functions on the orbit"),
    "q-hilbert": (cmd_q_hilbert, "ranks of A_{t,lambda,h} slices per t-order (sl2)"),
    "gq": (cmd_gq, "adjoint-type copy G_q in F(U) (sl2)"),
    "equivariance": (cmd_equivariance, "U_q-equivariance of multiplication on random pairs (sl2)"),
    "bracket2": (cmd_bracket2, "KKS and t-direction brackets on linear generators (sl2)"),
    "verify-all": (cmd_verify_all, "run the verification suite"),
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(2, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--algebra", default="A1", help="A1, A2, B2 or A3 (default A1)")
    common.add_argument("--levi", default="", help='simple roots of the Levi factor, e.g. "1" or "1,3" (default: torus)')
    common.add_argument("--lambda", dest="lam", default="symbolic", help='"symbolic" or comma-separated nonzero rationals')
    common.add_argument("--h", default="1", help="value of h for numeric runs (default 1)")
    common.add_argument("--degree", type=int, default=None, help="degree cap")
    common.add_argument("--depth", type=int, default=None, help="depth cap (Verma truncation)")
    common.add_argument("--t-order", type=int, default=2, help="t-adic order of quantum expansions (default 2)")
    common.add_argument("--seed", type=int, default=0, help="random seed (ORBITQ_SEED overrides)")
    common.add_argument("--lattice-factor", type=int, default=4, help="G_q is sought in ad(U) K_{-factor*omega} (default 4)")
    common.add_argument("--generator", default=None, help="verma-act: a single basis element, e.g. e1")
    common.add_argument("--rescaled", action="store_true", help="verma-act: the rescaled action h phi_{lambda/h}")
    common.add_argument("--format", choices=("text", "json", "csv"), default="text")
    common.add_argument("--output", default=None, help="write the report here instead of stdout")
    parser = _Parser(prog="orbitq", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, (_, help_text) in COMMANDS.items():
        sub.add_parser(name, parents=[common], help=help_text, description=help_text)
    return parser


# -- rendering ----------------------------------------------------------------------------------------


def render(cfg, status, result, extra) -> str:
    if cfg.format == "json":
        doc = {"schema": 1, "command": cfg.command, "config": cfg.to_json(), "status": status, "result": to_jsonable(result)}
        return json.dumps(doc, sort_keys=True, indent=1) + "\n"
    if cfg.format == "csv":
        if cfg.command == "verify-all":
            return "check,status\n" + "".join(f"{r.name},{r.status}\n" for r in extra)
        if extra is None:
            return f"command,status\n{cfg.command},{status}\n"
        return "degree,rank\n" + "".join(f"{d},{r}\n" for d, r in enumerate(extra))
    lines = [f"{cfg.command} {cfg.algebra} levi={list(cfg.levi_simples)}: {status}"]
    if cfg.command == "verify-all":
        for r in extra:
            lines.append(f"  [{r.status:>12}] {r.name} ({r.seconds:.1f}s)")
    elif extra is not None:
        lines.append("  degree  rank")
        lines += [f"  {d:>6}  {r}" for d, r in enumerate(extra)]
    else:
        for k, v in sorted(to_jsonable(result).items()):
            if isinstance(v, list) and v and isinstance(v[0], (dict, list)):
                lines.append(f"  {k}: {len(v)} entries (use --format json)")
            elif isinstance(v, dict):
                lines.append(f"  {k}: {{...}} (use --format json)")
            else:
                lines.append(f"  {k}: {v}")
    return "\n".join(lines) + "\n"


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = Config(args)
        fn = COMMANDS[cfg.command][0]
        status, result, extra = fn(cfg)
    except (InputError, UnsupportedType) as exc:
        print(f"orbitq: error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        # constraint violations raised by the library (e.g. lambda_i = 0, empty parameter set)
        print(f"orbitq: error: {exc}", file=sys.stderr)
        return 2
    text = render(cfg, status, result, extra)
    if cfg.output:
        with open(cfg.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT[status]


if __name__ == "__main__":
    sys.exit(main())
