"""Command-line entry point: verification suites, witness search, basis tables,
Pfaffians of matrix files, and sample commuting families.

Exit codes: 0 all cases pass, 1 counterexample or failed search, 2 usage
error.  Reports are written atomically and are byte-identical for a given
configuration and seed.
"""

import argparse
import csv
import json
import os
import sys
import tempfile
from dataclasses import dataclass

from . import acceptance
from .acceptance import rng_for
from .cartan import GroupKind, f_t_series, invariant_basis_check
from .commfam import random_cartan_tuple, random_nilpotent_tuple
from .identities import SuiteReport
from .multipoly import format_poly
from .rings import QI, QQ, field_by_name, format_scalar
from .skewlin import mat_from_json, mat_to_json
from .tseries import mono_text
from .witness import solve_pfaffian_system, solve_vanishing_minor_point, AttemptsExhaustedError


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    suite: str = ""
    kind: str = "o"
    n: int = 4
    d: int = 1
    wmax: int = 4
    trunc: int = 0
    field: str = "q"
    seed: int = 0
    cases: int = 10
    jobs: int = 1
    json_path: str = ""


def _default_seed():
    return int(os.environ.get("SKEWALG_SEED", "0"))


def _attempt_budget():
    return int(os.environ.get("SKEWALG_WITNESS_ATTEMPTS", "100"))


def write_json(path, doc):
    text = json.dumps(doc, sort_keys=True, indent=2) + "\n"
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit(reports, cfg, extra=None):
    doc = {
        "reports": [r.to_json() for r in reports],
        "pass": all(r.passed for r in reports),
    }
    if extra:
        doc.update(extra)
    if cfg.json_path:
        write_json(cfg.json_path, doc)
    for r in reports:
        status = "SKIP" if r.skipped else ("PASS" if r.passed else "FAIL")
        print(f"[{status}] {r.suite} {json.dumps(r.params, sort_keys=True)}")
    return 0 if doc["pass"] else 1


def _cell_tuples(cfg, field):
    tuples = []
    for i in range(cfg.cases):
        rng = rng_for(cfg.seed, cfg.suite, cfg.n, cfg.d, "cartan", i)
        tuples.append(random_cartan_tuple(field, cfg.n, cfg.d, rng, 5))
    return tuples


def run_verify_suite(cfg):
    from .identities import (
        check_pf_multiplicative,
        check_sqrt_degree_bound,
        check_trace_identity,
    )
    from .witness import check_homogenized_sqrt

    field = field_by_name(cfg.field)
    if cfg.n < 2:
        raise UsageError("n must be at least 2")
    reports = []
    if cfg.suite == "degree-bound":
        trunc = cfg.trunc or cfg.n // 2 + 2
        if trunc < cfg.n // 2 + 1:
            raise UsageError("truncation must exceed floor(n/2)")
        for tup in _cell_tuples(cfg, field if field.char == 0 else QQ):
            rep = check_sqrt_degree_bound(tup, cfg.wmax, trunc)
            rep.seed = cfg.seed
            reports.append(rep)
        if cfg.n % 2 == 0 and cfg.n >= 4:
            for i in range(cfg.cases // 2):
                rng = rng_for(cfg.seed, cfg.suite, cfg.n, cfg.d, "nilpotent", i)
                tup = random_nilpotent_tuple(cfg.n, cfg.d, rng)
                rep = check_sqrt_degree_bound(tup, cfg.wmax, trunc)
                rep.seed = cfg.seed
                reports.append(rep)
    elif cfg.suite == "ft-square":
        kind = GroupKind(cfg.kind, cfg.n)
        trunc = cfg.trunc or 3
        rep = SuiteReport(
            "ft-square",
            {"kind": cfg.kind, "n": cfg.n, "d": cfg.d, "wmax": cfg.wmax, "trunc": trunc},
            cases=1, seed=cfg.seed,
        )
        try:
            f_t_series(kind, cfg.d, cfg.wmax, trunc, QI if kind.is_orthogonal else field)
        except AssertionError as exc:
            rep.counterexample = {"detail": str(exc)}
        reports.append(rep)
    elif cfg.suite == "basis":
        kind = GroupKind(cfg.kind, cfg.n)
        trunc = cfg.trunc or 3
        rows, failures = invariant_basis_check(
            kind, cfg.d, cfg.wmax, trunc, QI if kind.is_orthogonal else field
        )
        rep = SuiteReport(
            "basis-correspondence",
            {"kind": cfg.kind, "n": cfg.n, "d": cfg.d, "wmax": cfg.wmax, "trunc": trunc},
            cases=len(rows), seed=cfg.seed,
        )
        if failures:
            rep.counterexample = {"failures": failures}
        reports.append(rep)
    elif cfg.suite == "det-vanishing-odd":
        if cfg.n % 2 == 0:
            raise UsageError("this suite needs odd n")
        reports = _det_vanishing_cell(cfg)
    elif cfg.suite == "pf-multiplicative":
        if cfg.n % 2:
            raise UsageError("this suite needs even n")
        for i in range(cfg.cases):
            rng = rng_for(cfg.seed, cfg.suite, cfg.n, i)
            tup = random_cartan_tuple(field, cfg.n, 3, rng, 5)
            rep = check_pf_multiplicative(*tup.mats, params={"case": i})
            rep.seed = cfg.seed
            reports.append(rep)
    elif cfg.suite == "trace-identity":
        m = cfg.n // 2 + 1
        if cfg.d == m:
            # the squared-generators instance Y_j = X_j^2
            rng = rng_for(cfg.seed, cfg.suite, cfg.n, cfg.d, "squares")
            tup = random_cartan_tuple(field, cfg.n, cfg.d, rng, 5)
            exps = [[2 if i == j else 0 for j in range(m)] for i in range(cfg.d)]
            rep = check_trace_identity(tup, exps, {"case": "squares-instance"})
            rep.seed = cfg.seed
            reports.append(rep)
        for i in range(cfg.cases):
            rng = rng_for(cfg.seed, cfg.suite, cfg.n, cfg.d, i)
            tup = random_cartan_tuple(field, cfg.n, cfg.d, rng, 5)
            exps = acceptance._random_even_columns(cfg.d, m, rng)
            rep = check_trace_identity(tup, exps, {"case": i})
            rep.seed = cfg.seed
            reports.append(rep)
    elif cfg.suite == "homogenized-sqrt":
        trunc = cfg.trunc or cfg.n // 2 + 2
        for tup in _cell_tuples(cfg, field if field.char == 0 else QQ):
            rep = check_homogenized_sqrt(tup, cfg.wmax, trunc)
            rep.seed = cfg.seed
            reports.append(rep)
    elif cfg.suite == "conjugation":
        reports = _conjugation_cell(cfg, field)
    else:
        raise UsageError(
            f"unknown suite {cfg.suite!r}; choose from degree-bound, ft-square, "
            "basis, det-vanishing-odd, pf-multiplicative, trace-identity, "
            "homogenized-sqrt, conjugation"
        )
    return reports


def _det_vanishing_cell(cfg):
    from .identities import check_det_vanishing_odd

    reports = []
    for i in range(cfg.cases):
        rng = rng_for(cfg.seed, cfg.suite, cfg.n, cfg.d, i)
        tup = random_cartan_tuple(QQ, cfg.n, cfg.d, rng, 5)
        poly = acceptance._random_zero_constant_poly(cfg.d, rng)
        if not poly:
            continue
        rep = check_det_vanishing_odd(tup, poly, {"case": i})
        rep.seed = cfg.seed
        reports.append(rep)
    return reports


def _conjugation_cell(cfg, field):
    from .commfam import cayley_orthogonal
    from .identities import check_conjugation_invariance

    reports = []
    trunc = cfg.trunc or 2
    for i in range(cfg.cases):
        rng = rng_for(cfg.seed, cfg.suite, cfg.n, cfg.d, i)
        tup = random_cartan_tuple(QQ, cfg.n, cfg.d, rng, 5)
        q = cayley_orthogonal(acceptance.random_skew(QQ, cfg.n, rng, 5))
        rep = check_conjugation_invariance(tup, q, cfg.wmax, trunc, {"case": i})
        rep.seed = cfg.seed
        reports.append(rep)
    return reports


def cmd_verify(args):
    cfg = RunConfig(
        suite=args.suite, kind=args.kind, n=args.n, d=args.d, wmax=args.wmax,
        trunc=args.trunc, field=args.field, seed=args.seed, cases=args.cases,
        json_path=args.json or "",
    )
    reports = run_verify_suite(cfg)
    # the output path is not part of the computation, keep report bytes
    # identical for identical (config, seed)
    config = {k: v for k, v in vars(cfg).items() if k != "json_path"}
    return _emit(reports, cfg, extra={"config": config})


def cmd_witness(args):
    budget = args.attempts or _attempt_budget()
    try:
        if args.vanishing_only:
            w = solve_vanishing_minor_point(args.d, args.seed, attempts=budget)
        else:
            w = solve_pfaffian_system(args.d, args.seed, attempts=budget)
    except AttemptsExhaustedError as exc:
        print(f"FAIL: {exc}", file=sys.stderr)
        if args.d >= 2 and not args.vanishing_only:
            print(
                "note: for d >= 2 the nondegeneracy condition det A != 0 is "
                "identically violated on the vanishing locus; rerun with "
                "--vanishing-only for the attainable constraints",
                file=sys.stderr,
            )
        return 1
    doc = {
        "d": w.d,
        "seed": w.seed,
        "attempts": w.attempts,
        "t_matrix": mat_to_json(w.t_matrix, "q"),
        "h_second_last": format_scalar(w.h_second_last),
        "h_last": format_scalar(w.h_last),
        "a_matrix": mat_to_json(w.a_matrix, "q"),
        "det_a": format_scalar(w.det_a),
    }
    if args.json:
        write_json(args.json, doc)
    else:
        print(json.dumps(doc, sort_keys=True, indent=2))
    return 0


def cmd_basis(args):
    kind = GroupKind(args.kind, args.n)
    field = QI if kind.is_orthogonal else field_by_name(args.field)
    trunc = args.trunc or 3
    rows, failures = invariant_basis_check(kind, args.d, args.wmax, trunc, field)
    out = sys.stdout if not args.csv else open(args.csv, "w", newline="")
    try:
        writer = csv.writer(out)
        writer.writerow(["lambda", "T_monomial", "orbit_sum_poly"])
        for row in rows:
            writer.writerow([row.lam.text(), mono_text(row.mono), format_poly(row.coeff)])
    finally:
        if args.csv:
            out.close()
    if failures:
        for f in failures:
            print(f"FAIL: {f}", file=sys.stderr)
        return 1
    return 0


def cmd_pfaffian(args):
    with open(args.matrix) as handle:
        doc = json.load(handle)
    m = mat_from_json(doc)
    det = m.det()
    print(f"det: {format_scalar(det)}")
    if m.skew:
        pf = m.pf()
        print(f"pf: {format_scalar(pf)}")
        if pf * pf != det:
            print("FAIL: Pf^2 != det", file=sys.stderr)
            return 1
    return 0


def cmd_family(args):
    field = field_by_name(args.field)
    docs = []
    for i in range(args.count):
        rng = rng_for(args.seed, "family", args.n, args.d, i)
        if args.nilpotent:
            tup = random_nilpotent_tuple(args.n, args.d, rng)
            ring_name = "qi"
        else:
            tup = random_cartan_tuple(field, args.n, args.d, rng, 5)
            ring_name = field.name
        docs.append(
            {
                "provenance": tup.provenance,
                "mats": [mat_to_json(m, ring_name) for m in tup.mats],
            }
        )
    doc = {"n": args.n, "d": args.d, "seed": args.seed, "tuples": docs}
    if args.json:
        write_json(args.json, doc)
    else:
        print(json.dumps(doc, sort_keys=True, indent=2))
    return 0


def _run_one_criterion(name, seed, field_name):
    if name == "trace-identity" and field_name not in ("", "q"):
        reports = acceptance.suite_trace_identity(seed, field=field_by_name(field_name))
    else:
        reports = acceptance.run_criterion(name, seed)
    return name, reports


def cmd_all(args):
    seed = args.seed
    names = [name for name, _ in acceptance.CRITERIA]
    results = {}
    if args.jobs > 1:
        # completion order varies; the merge below is fixed by the grid order
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            futures = [
                pool.submit(_run_one_criterion, name, seed, args.field)
                for name in names
            ]
            for fut in futures:
                name, reports = fut.result()
                results[name] = reports
    else:
        for name in names:
            results[name] = _run_one_criterion(name, seed, args.field)[1]
    consolidated = []
    overall = True
    for name in names:
        reports = results[name]
        ok = all(r.passed or r.skipped for r in reports)
        overall = overall and ok
        print(f"[{'PASS' if ok else 'FAIL'}] {name} ({len(reports)} reports)")
        consolidated.append(
            {"criterion": name, "pass": ok, "reports": [r.to_json() for r in reports]}
        )
    doc = {"seed": seed, "pass": overall, "criteria": consolidated}
    if args.json:
        write_json(args.json, doc)
    return 0 if overall else 1


def build_parser():
    parser = argparse.ArgumentParser(
        prog="skewalg",
        description="Exact verification of commuting skew-symmetric matrix identities",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_verify = sub.add_parser("verify", help="run one verification suite cell")
    p_verify.add_argument("--suite", required=True)
    p_verify.add_argument("--kind", default="o", choices=["o", "so-odd", "sp", "so-even"])
    p_verify.add_argument("--n", type=int, default=4)
    p_verify.add_argument("--d", type=int, default=1)
    p_verify.add_argument("--wmax", type=int, default=4)
    p_verify.add_argument("--trunc", type=int, default=0)
    p_verify.add_argument("--field", default="q")
    p_verify.add_argument("--seed", type=int, default=_default_seed())
    p_verify.add_argument("--cases", type=int, default=10)
    p_verify.add_argument("--json")
    p_verify.set_defaults(func=cmd_verify)

    p_witness = sub.add_parser("witness", help="search for a Pfaffian-system witness")
    p_witness.add_argument("--d", type=int, required=True)
    p_witness.add_argument("--seed", type=int, default=_default_seed())
    p_witness.add_argument("--attempts", type=int, default=0)
    p_witness.add_argument("--vanishing-only", action="store_true")
    p_witness.add_argument("--json")
    p_witness.set_defaults(func=cmd_witness)

    p_basis = sub.add_parser("basis", help="print the orbit-sum basis table as CSV")
    p_basis.add_argument("--kind", default="o", choices=["o", "so-odd", "sp", "so-even"])
    p_basis.add_argument("--n", type=int, required=True)
    p_basis.add_argument("--d", type=int, default=1)
    p_basis.add_argument("--wmax", type=int, default=4)
    p_basis.add_argument("--trunc", type=int, default=0)
    p_basis.add_argument("--field", default="q")
    p_basis.add_argument("--csv")
    p_basis.set_defaults(func=cmd_basis)

    p_pf = sub.add_parser("pfaffian", help="Pfaffian and determinant of a matrix file")
    p_pf.add_argument("matrix")
    p_pf.set_defaults(func=cmd_pfaffian)

    p_family = sub.add_parser("family", help="emit sample commuting tuples")
    p_family.add_argument("--n", type=int, required=True)
    p_family.add_argument("--d", type=int, default=2)
    p_family.add_argument("--seed", type=int, default=_default_seed())
    p_family.add_argument("--count", type=int, default=3)
    p_family.add_argument("--field", default="q")
    p_family.add_argument("--nilpotent", action="store_true")
    p_family.add_argument("--json")
    p_family.set_defaults(func=cmd_family)

    p_all = sub.add_parser("all", help="run the full acceptance grid")
    p_all.add_argument("--seed", type=int, default=_default_seed())
    p_all.add_argument("--field", default="")
    p_all.add_argument("--jobs", type=int, default=1,
                       help="run criteria in parallel processes; the merged "
                            "report order is fixed either way")
    p_all.add_argument("--json")
    p_all.set_defaults(func=cmd_all)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, FileNotFoundError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
