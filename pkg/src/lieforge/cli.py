"""Command-line front end.

Exit codes: 0 success, 1 verified negative, 2 usage, parse or constraint error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from typing import List, Optional

from . import families as fam
from . import suite
from .coadjoint import is_invariant, num_invariants_bb
from .exterior import contact_check, contact_search, j0_of_algebra
from .jsonio import FormatError, dump_algebra, load_algebra, load_expr, ratfunc_text
from .liealg import center, derived_series, is_nilpotent, is_solvable, jacobi_check, lower_central_series
from .ring import Poly, rat
from .structure import derivation_space

FAMILY_IDS = ("q2n", "r-lambda", "r-eps", "r-tail", "r-max", "n-n1", "heisenberg", "abelian", "a622", "k-sub")


class UsageError(Exception):
    pass


def default_seed() -> int:
    raw = os.environ.get("LIEFORGE_SEED", "0")
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"LIEFORGE_SEED must be an integer, got {raw!r}") from None


def _require(value, flag, family):
    if value is None:
        raise UsageError(f"family {family} needs {flag}")
    return value


def _fraction(text):
    try:
        return rat(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _tails(items) -> dict:
    out = {}
    for item in items or []:
        for part in item.split(","):
            name, _, value = part.partition("=")
            if not value:
                raise UsageError(f"--tail expects name=value, got {part!r}")
            out[name.strip()] = _fraction(value.strip())
    return out


def family_algebra(args):
    f = args.family
    if f == "q2n":
        return fam.Q(_require(args.m, "--m", f))
    if f == "r-lambda":
        return fam.r_lambda(_require(args.n, "--n", f), args.lambda2)
    if f == "r-eps":
        return fam.r_eps(_require(args.n, "--n", f), args.epsilon)
    if f == "r-tail":
        n = _require(args.n, "--n", f)
        try:
            return fam.r_taillist(n, _tails(args.tail))
        except KeyError as exc:
            raise UsageError(exc.args[0]) from None
    if f == "r-max":
        return fam.r_max(_require(args.n, "--n", f))
    if f == "n-n1":
        return fam.n_n1(_require(args.dim, "--dim", f))
    if f == "heisenberg":
        return fam.heisenberg(_require(args.m, "--m", f))
    if f == "abelian":
        return fam.abelian(_require(args.dim, "--dim", f))
    if f == "a622":
        return fam.A622()
    if f == "k-sub":
        return fam.k_sub(_require(args.n, "--n", f))
    raise UsageError(f"unknown family {f!r}")


def _read(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def cmd_family(args, out) -> int:
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        g = family_algebra(args)
    text = dump_algebra(g)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        out.write(f"wrote {args.out} ({g.dim} generators)\n")
    else:
        out.write(text)
    return 0


def analyze(g) -> dict:
    """Aggregate report; series and derivation fields are null under symbolic parameters."""
    bad = jacobi_check(g)
    report = {"jacobi": not bad}
    numeric = g.is_numeric()
    if numeric:
        report.update(DS=derived_series(g), CDS=lower_central_series(g), nilpotent=is_nilpotent(g),
                      solvable=is_solvable(g), center_dim=center(g).dim)
    else:
        report.update(DS=None, CDS=None, nilpotent=None, solvable=None, center_dim=None)
    j0 = j0_of_algebra(g)
    report.update(N_bb=num_invariants_bb(g), N_rc=g.dim - 2 * j0, j0=j0)
    if numeric and not bad:
        ds = derivation_space(g)
        report.update(der_dim=ds.total_dim, inner_dim=ds.inner_dim)
    return report


def cmd_analyze(args, out) -> int:
    g = load_algebra(_read(args.algebra))
    report = analyze(g)
    if args.report == "json":
        out.write(json.dumps(report, indent=2) + "\n")
    else:
        for k, v in report.items():
            out.write(f"{k}: {json.dumps(v)}\n")
    return 0 if report["jacobi"] and report["N_bb"] == report["N_rc"] else 1


def cmd_verify_invariant(args, out) -> int:
    g = load_algebra(_read(args.algebra))
    try:
        e = load_expr(_read(args.expr), g.registry)
    except FormatError as exc:
        raise UsageError(f"expression does not fit the algebra: {exc}") from None
    failures = dict((i, r) for i, r in is_invariant(g, e))
    for i, label in enumerate(g.labels):
        status = "zero" if i not in failures else f"nonzero: {failures[i]}"
        out.write(f"{label}: {status}\n")
    out.write("invariant\n" if not failures else "not invariant\n")
    return 0 if not failures else 1


def _parse_form(text, g):
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != g.dim:
        raise UsageError(f"--form needs {g.dim} comma-separated coefficients")
    try:
        return [Poly.parse(g.registry, p) for p in parts]
    except (KeyError, ValueError) as exc:
        raise UsageError(f"bad --form entry: {exc}") from None


def cmd_contact(args, out) -> int:
    g = load_algebra(_read(args.algebra))
    if g.dim % 2 == 0:
        raise UsageError(f"contact forms need odd dimension (got {g.dim})")
    if args.form:
        coeff = contact_check(g, _parse_form(args.form, g))
        out.write(f"volume coefficient: {coeff}\n")
        return 0 if coeff else 1
    if not g.is_numeric():
        raise UsageError("contact search needs numeric parameters; use --form for symbolic checks")
    seed = default_seed() if args.seed is None else args.seed
    res = contact_search(g, seed)
    if res.found:
        out.write("contact form found\n")
        out.write("witness: " + ",".join(str(Fraction(c)) for c in res.witness) + "\n")
        out.write(f"volume coefficient at witness: {res.value}\n")
        return 0
    out.write("no linear contact form: volume coefficient vanishes identically\n")
    return 1


def cmd_paper_suite(args, out) -> int:
    try:
        ns = [int(x) for x in args.n.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"--n expects a comma-separated list of integers, got {args.n!r}") from None
    seed = default_seed() if args.seed is None else args.seed
    checks = suite.run(ns, seed)
    for c in checks:
        out.write(c.line() + "\n")
    failed = sum(not c.passed for c in checks)
    out.write(f"{len(checks) - failed}/{len(checks)} checks passed\n")
    return 0 if not failed else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lieforge", description="Exact computations with Lie algebras.")
    sub = p.add_subparsers(dest="command", required=True)

    f = sub.add_parser("family", help="write a builtin algebra as JSON")
    f.add_argument("family", choices=FAMILY_IDS)
    f.add_argument("--m", type=int)
    f.add_argument("--n", type=int)
    f.add_argument("--dim", type=int)
    f.add_argument("--lambda2", type=_fraction, help="omit to keep lambda2 symbolic")
    f.add_argument("--epsilon", type=_fraction, help="omit to keep epsilon symbolic")
    f.add_argument("--tail", action="append", help="tail parameter, e.g. lambda2_5=1 (repeatable)")
    f.add_argument("--out")
    f.set_defaults(run=cmd_family)

    a = sub.add_parser("analyze", help="structural report for an algebra file")
    a.add_argument("algebra")
    a.add_argument("--report", choices=("json", "text"), default="json")
    a.set_defaults(run=cmd_analyze)

    v = sub.add_parser("verify-invariant", help="apply every coadjoint field to an expression")
    v.add_argument("algebra")
    v.add_argument("expr")
    v.set_defaults(run=cmd_verify_invariant)

    c = sub.add_parser("contact", help="check or search for a linear contact form")
    c.add_argument("algebra")
    c.add_argument("--form", help="coefficients c1,...,cN of the 1-form")
    c.add_argument("--seed", type=int)
    c.set_defaults(run=cmd_contact)

    s = sub.add_parser("paper-suite", help="run the end-to-end checks for several n")
    s.add_argument("--n", default="3,4")
    s.add_argument("--seed", type=int)
    s.set_defaults(run=cmd_paper_suite)
    return p


def main(argv: Optional[List[str]] = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        return args.run(args, out)
    except (UsageError, FormatError, fam.ConstraintError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
