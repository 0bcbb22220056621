"""Command-line entry point: ``emeasure construct|verify|bounds|compare|certify``.

Exit status is 0 exactly when every requested check passed.  Defaults for
the common flags may come from a JSON file named by ``$EMEASURE_CONFIG``.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from . import bounds, certify, checks, compare
from .pade import ConstructionContractError, InputDomainError, check_domain, normalize_system

CONFIG_ENV = "EMEASURE_CONFIG"
ARCHIVE_ENV = "EMEASURE_ARCHIVE"
DEFAULT_ARCHIVE = "emeasure-results.ndjson"

EXIT_FAIL = 1
EXIT_DOMAIN = 2


@dataclass
class RunConfig:
    precision_bits: int | None = None
    jobs: int = 1
    format: str = "text"
    out: str | None = None
    archive: str | None = None
    variants: list[str] = field(default_factory=list)

    def __post_init__(self):
        if self.jobs < 1:
            raise InputDomainError("--jobs must be at least 1")
        if self.format not in ("json", "csv", "text"):
            raise InputDomainError(f"unknown format {self.format!r}")

    @property
    def d_consts(self) -> list[Fraction]:
        out = [bounds.D_CONST]
        if "d=0.174" in self.variants:
            out.append(bounds.D_CONST_VARIANT)
        return out

    @property
    def lambda0_bounded(self) -> bool:
        return "lambda0-bounded" in self.variants


def parse_int_list(text: str) -> list[int]:
    """``"3"``, ``"2,4,6"`` or ``"3..10"`` (inclusive)."""
    out: list[int] = []
    for part in str(text).split(","):
        part = part.strip()
        if ".." in part:
            a, b = part.split("..")
            out.extend(range(int(a), int(b) + 1))
        elif part:
            out.append(int(part))
    return out


def parse_float_list(text: str) -> list[float]:
    return [float(x) for x in str(text).split(",") if x.strip()]


# output ------------------------------------------------------------------------


class Emitter:
    def __init__(self, cfg: RunConfig):
        self.cfg = cfg
        self.fh = open(cfg.out, "w") if cfg.out else sys.stdout

    def write(self, text: str) -> None:
        self.fh.write(text if text.endswith("\n") else text + "\n")

    def json(self, obj) -> None:
        self.write(json.dumps(obj, sort_keys=True))

    def close(self) -> None:
        if self.fh is not sys.stdout:
            self.fh.close()


def _failure(em: Emitter, kind: str, message: str, invariant: str | None = None) -> None:
    report = {"status": "error", "error": kind, "message": message}
    if invariant:
        report["invariant"] = invariant
    if em.cfg.format == "json":
        em.json(report)
    else:
        print(f"error ({kind}): {message}", file=sys.stderr)


def _check_rows(em: Emitter, results: list[checks.CheckResult]) -> bool:
    ok = all(r.passed for r in results)
    fmt = em.cfg.format
    if fmt == "json":
        em.json({"passed": ok, "checks": [r.to_dict() for r in results]})
    elif fmt == "csv":
        em.write("name,params,passed,detail")
        for r in results:
            params = ";".join(f"{k}={v}" for k, v in r.params.items())
            em.write(f"{r.name},{params},{r.passed},\"{r.detail}\"")
    else:
        for r in results:
            params = " ".join(f"{k}={v}" for k, v in r.params.items())
            em.write(f"{'PASS' if r.passed else 'FAIL'}  {r.name:<32} {params}  {r.detail}".rstrip())
        em.write(f"{sum(r.passed for r in results)}/{len(results)} checks passed")
    return ok


# subcommands ---------------------------------------------------------------------


def cmd_construct(args, cfg: RunConfig, em: Emitter) -> int:
    ok = True
    for n in parse_int_list(args.n):
        for k in parse_int_list(args.k):
            for ell in parse_int_list(args.ell):
                check_domain(n, k, ell)
                try:
                    system = normalize_system(n, k, ell, jobs=cfg.jobs)
                except ConstructionContractError as exc:
                    _failure(em, "contract", str(exc), "integrality")
                    return EXIT_FAIL
                det = system.determinant()
                doc = system.to_dict()
                doc["checks"] = {"integrality": True, "determinant_nonzero": det != 0}
                if det == 0:
                    ok = False
                if cfg.format == "text":
                    em.write(f"n={n} k={k} ell={ell} L={system.L} det={det}")
                    for row in system.matrix():
                        em.write("  " + " ".join(str(v) for v in row))
                else:
                    em.json(doc)
    return 0 if ok else EXIT_FAIL


def cmd_verify(args, cfg: RunConfig, em: Emitter) -> int:
    results: list[checks.CheckResult] = []
    strict = args.strict
    if args.deep:
        n, k = parse_int_list(args.n or "2")[0], parse_int_list(args.k or "2")[0]
        ell = parse_int_list(args.ell or "2200")[0]
        for d in cfg.d_consts:
            hyp, rows = checks.deep_check(n, k, ell, cfg.precision_bits or 25000, d)
            for row in rows:
                results.append(checks.CheckResult(
                    "deep_q_and_r", {"n": n, "k": k, "ell": ell, "u": row.u, "d": str(d), "hypothesis": hyp},
                    row.passed,
                    f"log|A|={row.log_abs_A:.2f} <= q={row.q:.2f}; log sum|L|={row.log_sum_L:.2f} <= -r={row.minus_r:.2f}",
                ))
        return 0 if _check_rows(em, results) else EXIT_FAIL

    if args.n or args.k or args.ell:
        grid = [(n, k, ell) for n in parse_int_list(args.n or "2") for k in parse_int_list(args.k or "2")
                for ell in parse_int_list(args.ell or "2..4")]
    else:
        grid = checks.DEFAULT_GRID
    for n, k, ell in grid:
        check_domain(n, k, ell)
        results.extend(checks.structural_check(n, k, ell, strict=strict))
        results.extend(checks.lemma_check(n, k, ell))
    for nk in bounds.C_TABLE:
        results.append(checks.table_check(*nk, lower_fraction=0.9 if strict else 0.0))
    for k in range(2, 11):
        for n in range(2, k + 1):
            results.append(checks.max_product_check(n, k))
    for n, k in ((3, 3), (2, 4), (3, 4), (2, 5)):
        for d in cfg.d_consts:
            for r in checks.proof_chain_check(n, k, d_const=d):
                r.params["d"] = str(d)
                results.append(r)
    return 0 if _check_rows(em, results) else EXIT_FAIL


def cmd_bounds(args, cfg: RunConfig, em: Emitter) -> int:
    rows = []
    k = args.k
    n = args.n
    if args.loglogH is not None:
        inputs = [("loglogH", x) for x in parse_float_list(args.loglogH)]
    elif args.logH is not None:
        inputs = [("logH", x) for x in parse_float_list(args.logH)]
    else:
        raise InputDomainError("give --logH or --loglogH")
    for kind, x in inputs:
        om = bounds.omega_theorem(k, loglogH=x, n=n) if kind == "loglogH" else bounds.omega_theorem(k, x, n=n)
        row = {"k": k, "n": n, kind: x, "omega": om.value, "coefficient": bounds.omega_coefficient(k),
               "d_k": bounds.d_constant(k), "hypothesis_satisfied": om.hypothesis_satisfied}
        if n is not None and kind == "logH":
            eps = bounds.epsilon_H(x, bounds.bound_params(n, k))
            row["epsilon_H"] = eps.value
        rows.append(row)
    if args.ell is not None and n is not None:
        for ell in parse_int_list(args.ell):
            for d in cfg.d_consts:
                q = bounds.q_func(ell, n, k)
                r = bounds.r_func(ell, n, k, d)
                rows.append({"n": n, "k": k, "ell": ell, "d": str(d), "q": q.value, "r": r.value,
                             "hypothesis_satisfied": q.hypothesis_satisfied})
    if cfg.format == "json":
        em.write(json.dumps(rows, sort_keys=True))
    elif cfg.format == "csv":
        keys = sorted({key for r in rows for key in r})
        em.write(",".join(keys))
        for r in rows:
            em.write(",".join(str(r.get(key, "")) for key in keys))
    else:
        for r in rows:
            if "omega" in r:
                em.write(f"omega = {r['omega']:.6f}  (k={k}, {'loglogH' if 'loglogH' in r else 'logH'}="
                         f"{r.get('loglogH', r.get('logH'))}, coefficient {r['coefficient']:.6f}, "
                         f"hypothesis_satisfied={r['hypothesis_satisfied']})")
            else:
                em.write(f"ell={r['ell']} d={r['d']}: q = {r['q']:.6f}, r = {r['r']:.6f}, "
                         f"hypothesis_satisfied={r['hypothesis_satisfied']}")
    return 0


def cmd_compare(args, cfg: RunConfig, em: Emitter) -> int:
    rows = []
    for n in parse_int_list(args.n):
        for k in parse_int_list(args.k):
            if args.loglogH is not None:
                rows += compare.compare_report(n, k, loglogH_list=parse_float_list(args.loglogH))
            else:
                rows += compare.compare_report(n, k, parse_float_list(args.logH))
    if cfg.format == "json":
        em.write(compare.rows_to_json(rows))
    elif cfg.format == "csv":
        em.write(compare.rows_to_csv(rows))
    else:
        for r in rows:
            em.write(f"n={r.n} k={r.k} loglogH={r.log_logH:g}: paper {r.exp_paper:.6f}  "
                     f"mahler {r.exp_mahler:.6f} ({r.mahler_method}; heuristic {r.exp_mahler_heuristic:.6f})  "
                     f"ehlm {r.exp_ehlm:.6f}  winner={r.winner}")
    return 0


def cmd_certify(args, cfg: RunConfig, em: Emitter) -> int:
    n, k = args.n, args.k
    Hs = parse_int_list(args.H)
    kw = dict(jobs=cfg.jobs, lambda0_bounded=cfg.lambda0_bounded)
    if len(Hs) > 1 and min(Hs) >= 3:
        records = certify.empirical_omega_curve(n, k, Hs, cfg.precision_bits, **kw)
    else:
        records = [
            certify.certify_against_theorem(n, k, H, cfg.precision_bits, **kw) if H >= 3
            else certify.min_linear_form(n, k, H, cfg.precision_bits, **kw)
            for H in Hs
        ]
    archive = cfg.archive or os.environ.get(ARCHIVE_ENV) or DEFAULT_ARCHIVE
    if archive != "-":
        with open(archive, "a") as fh:
            for r in records:
                fh.write(r.to_json() + "\n")
    ok = all(r.min_value.excludes_zero() and r.verdict is not False for r in records)
    if cfg.format == "json":
        for r in records:
            em.write(r.to_json())
    elif cfg.format == "csv":
        em.write("n,k,H,min_midpoint,min_radius,precision_bits,argmin,empirical_omega,theorem_omega,"
                 "hypothesis_satisfied,verdict,tuples_scanned")
        for r in records:
            d = r.to_dict()
            em.write(",".join(str(x) for x in (
                r.n, r.k, r.H, d["min_value"]["midpoint_decimal"], d["min_value"]["radius_decimal"],
                d["min_value"]["precision_bits"], " ".join(map(str, r.argmin)), r.empirical_omega,
                r.theorem_omega, r.hypothesis_satisfied, r.verdict, r.tuples_scanned)))
    else:
        for r in records:
            d = r.to_dict()["min_value"]
            line = (f"n={r.n} k={r.k} H={r.H}: min {d['midpoint_decimal']} +/- {d['radius_decimal']} "
                    f"at {list(r.argmin)}")
            if r.theorem_omega is not None:
                line += (f"; empirical omega {r.empirical_omega:.4f} vs theorem omega {r.theorem_omega:.4f}, "
                         f"verdict={r.verdict}, hypothesis_satisfied={r.hypothesis_satisfied}")
            em.write(line)
    return 0 if ok else EXIT_FAIL


# parser ------------------------------------------------------------------------------


def _load_config() -> dict:
    path = os.environ.get(CONFIG_ENV)
    if not path:
        return {}
    return json.loads(Path(path).read_text())


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision-bits", type=int)
    common.add_argument("--jobs", type=int)
    common.add_argument("--format", choices=("json", "csv", "text"))
    common.add_argument("--out")
    common.add_argument("--archive", help="NDJSON file certificates are appended to ('-' disables)")
    common.add_argument("--variant", action="append", default=[], choices=("d=0.17", "d=0.174", "lambda0-bounded"))

    p = argparse.ArgumentParser(prog="emeasure", description="Transcendence measure of e^{1/n}: construction, bounds, certificates.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("construct", parents=[common], help="build and check the normalized approximation system")
    c.add_argument("--n", default="2")
    c.add_argument("--k", default="2")
    c.add_argument("--ell", default="2")
    c.set_defaults(func=cmd_construct)

    v = sub.add_parser("verify", parents=[common], help="run the invariant and lemma suite")
    v.add_argument("--grid", choices=("default",), default="default")
    v.add_argument("--n")
    v.add_argument("--k")
    v.add_argument("--ell")
    v.add_argument("--deep", action="store_true", help="exact large-ell check of q and r (default n=k=2, ell=2200)")
    v.add_argument("--strict", action="store_true",
                   help="use the literal nonzero-coefficient and [0.9v, v] table criteria")
    v.set_defaults(func=cmd_verify)

    b = sub.add_parser("bounds", parents=[common], help="omega(k, H) and related bounds")
    b.add_argument("--k", type=int, required=True)
    b.add_argument("--n", type=int)
    b.add_argument("--logH")
    b.add_argument("--loglogH")
    b.add_argument("--ell")
    b.set_defaults(func=cmd_bounds)

    m = sub.add_parser("compare", parents=[common], help="this construction vs Mahler vs EHLM")
    m.add_argument("--n", default="2")
    m.add_argument("--k", default="2")
    m.add_argument("--logH")
    m.add_argument("--loglogH", default=None)
    m.set_defaults(func=cmd_compare)

    f = sub.add_parser("certify", parents=[common], help="certified minimum of the linear form")
    f.add_argument("--n", type=int, default=2)
    f.add_argument("--k", type=int, default=2)
    f.add_argument("--H", default="1")
    f.set_defaults(func=cmd_certify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    conf = _load_config()
    try:
        cfg = RunConfig(
            precision_bits=args.precision_bits if args.precision_bits is not None else conf.get("precision_bits"),
            jobs=args.jobs if args.jobs is not None else conf.get("jobs", 1),
            format=args.format or conf.get("format", "text"),
            out=args.out or conf.get("out"),
            archive=args.archive or conf.get("archive"),
            variants=args.variant or conf.get("variants", []),
        )
    except InputDomainError as exc:
        print(f"error (input_domain): {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    em = Emitter(cfg)
    try:
        return args.func(args, cfg, em)
    except InputDomainError as exc:
        _failure(em, "input_domain", str(exc))
        return EXIT_DOMAIN
    except (ValueError, ArithmeticError, compare.MahlerSearchExhausted) as exc:
        _failure(em, type(exc).__name__, str(exc))
        return EXIT_FAIL
    finally:
        em.close()


if __name__ == "__main__":
    sys.exit(main())
