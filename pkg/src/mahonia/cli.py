"""Command-line front end.

    mahonia dist   --family snk --n 3 --k 2 --signed
    mahonia verify --identity grpn --r 2,3,4 --n-max 4
    mahonia scan   --conjecture problem1 --n-max 8

Exit codes: 0 success, 1 an asserted identity failed, 2 bad usage,
3 enumeration budget exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from . import enumeration, forest, identities, permstat, wreath
from .qpoly import IntPolynomial

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3

FAMILIES = ("snk", "snk-prime", "rake", "forest", "fmaj-ck", "pi")
CONJECTURES = ("problem1", "problem2")
FORMATS = ("json", "csv")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    target: str | None = None  # family, identity or conjecture
    params: dict = field(default_factory=dict)
    format: str = "json"
    budget: int = enumeration.DEFAULT_BUDGET
    jobs: int = 1

    def __post_init__(self):
        if self.budget <= 0:
            raise UsageError("budget must be positive")
        if self.format not in FORMATS:
            raise UsageError(f"unknown format {self.format!r}")
        if self.jobs < 1:
            raise UsageError("jobs must be at least 1")


def _int_list(text: str) -> list[int]:
    try:
        values = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    if not values:
        raise argparse.ArgumentTypeError("empty list")
    return values


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mahonia", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=FORMATS, default="json")
    common.add_argument("--budget", type=int, default=None,
                        help="maximum objects per enumeration (default: $MAHONIA_BUDGET or 5e6)")
    common.add_argument("--jobs", type=int, default=1)

    grid = argparse.ArgumentParser(add_help=False)
    grid.add_argument("--n-max", type=int, default=6)
    grid.add_argument("--n-min", type=int, default=1)
    grid.add_argument("--k-max", type=int, default=None)
    grid.add_argument("--r", type=_int_list, default=None)
    grid.add_argument("--p", type=_int_list, default=None)
    grid.add_argument("--samples", type=int, default=20)
    grid.add_argument("--seed", type=int, default=0)

    d = sub.add_parser("dist", parents=[common], help="print one distribution polynomial")
    d.add_argument("--family", choices=FAMILIES, required=True)
    d.add_argument("--n", type=int)
    d.add_argument("--k", type=int, default=0)
    d.add_argument("--r", type=int, default=1)
    d.add_argument("--p", type=int, default=1)
    d.add_argument("--signed", action="store_true")
    d.add_argument("--vars", default=None,
                   help="comma-separated variables to keep; the others are set to 1")
    d.add_argument("--forest", default=None,
                   help='forest as JSON {"n":..,"parent":{..}} or a path to such a file')
    d.add_argument("--label", type=_int_list, default=None,
                   help="labelling of the forest; switches to linear extensions")

    v = sub.add_parser("verify", parents=[common, grid], help="check an identity on a grid")
    v.add_argument("--identity", required=True)

    s = sub.add_parser("scan", parents=[common, grid], help="tabulate an open problem")
    s.add_argument("--conjecture", required=True)
    return parser


# -- output ---------------------------------------------------------------

def _poly_csv(poly: IntPolynomial) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(list(poly.vars) + ["coefficient"])
    for e, c in poly.sorted_terms():
        writer.writerow(list(e) + [c])
    return buf.getvalue()


def _rows_csv(rows: Iterable[dict], columns: Sequence[str]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, columns, lineterminator="\n", extrasaction="ignore")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: json.dumps(v, separators=(",", ":")) if isinstance(v, (dict, list)) else v
                         for k, v in row.items()})
    return buf.getvalue()


def _emit(text: str, out) -> None:
    out.write(text if text.endswith("\n") else text + "\n")


# -- commands -------------------------------------------------------------

def _load_forest(spec: str) -> forest.ForestPoset:
    if spec is None:
        raise UsageError("--family forest needs --forest")
    text = spec
    if not spec.lstrip().startswith("{"):
        if not os.path.exists(spec):
            raise UsageError(f"no such forest file {spec!r}")
        with open(spec) as f:
            text = f.read()
    try:
        return forest.ForestPoset.from_json(text)
    except (ValueError, KeyError, TypeError) as e:
        raise UsageError(f"bad forest: {e}")


def _need(args, *names):
    for name in names:
        if getattr(args, name) is None:
            raise UsageError(f"--{name} is required for --family {args.family}")


def compute_distribution(args) -> IntPolynomial:
    fam = args.family
    if fam == "forest":
        P = _load_forest(args.forest)
        if args.label is not None:
            try:
                w = forest.Labelling(P, tuple(args.label))
            except ValueError as e:
                raise UsageError(str(e))
            return forest.le_maj_distribution(w)
        return forest.maj_distribution(P)
    _need(args, "n")
    n, k, r, p = args.n, args.k, args.r, args.p
    if n < 0 or k < 0:
        raise UsageError("n and k must be non-negative")
    if fam in ("snk", "snk-prime"):
        if k > n:
            raise UsageError(f"need k <= n, got n={n}, k={k}")
        if fam == "snk":
            return permstat.signed_distribution(n, k, args.signed, args.jobs)
        return permstat.signed_distribution_prime(n, k, args.signed, args.jobs)
    if fam == "rake":
        if k >= n:
            raise UsageError(f"need k < n, got n={n}, k={k}")
        return forest.rake_signed_distribution(n, k, args.signed)
    if r < 1 or p < 1 or r % p:
        raise UsageError(f"need p | r, got r={r}, p={p}")
    if fam == "fmaj-ck":
        if not 0 <= k < n:
            raise UsageError(f"need 0 <= k < n, got n={n}, k={k}")
        elems = wreath.c_k_set(r, p, n, k)
        if args.signed:
            return wreath.signed_fmaj_inverse_distribution(elems)
        return wreath.fmaj_inverse_distribution(elems)
    if fam == "pi":
        if p != 1:
            raise UsageError("--family pi lives in G(r,n); use --p 1")
        if not 0 <= k <= n:
            raise UsageError(f"need 0 <= k <= n, got n={n}, k={k}")
        return wreath.fmaj_inverse_distribution(wreath.canonical_dual(g) for g in wreath.pi_set(r, n, k))
    raise UsageError(f"unknown family {fam!r}")


def cmd_dist(args, out) -> int:
    poly = compute_distribution(args)
    if args.vars:
        keep = [v.strip() for v in args.vars.split(",") if v.strip()]
        unknown = [v for v in keep if v not in poly.vars]
        if unknown:
            raise UsageError(f"unknown variable(s) {unknown}; have {list(poly.vars)}")
        for v in poly.vars:
            if v not in keep and len(poly.vars) > 1:
                poly = poly.eval_at_one(v)
    _emit(poly.to_json() if args.format == "json" else _poly_csv(poly), out)
    return EXIT_OK


def _grid(args, default_r=(1, 2, 3)) -> identities.Grid:
    if args.n_max < args.n_min:
        raise UsageError("--n-max must be at least --n-min")
    r_values = tuple(args.r) if args.r else default_r
    if any(r < 1 for r in r_values):
        raise UsageError("--r values must be positive")
    return identities.Grid(n_max=args.n_max, n_min=args.n_min, k_max=args.k_max,
                           r_values=r_values, p_values=tuple(args.p) if args.p else None,
                           samples=args.samples, seed=args.seed, jobs=args.jobs)


def cmd_verify(args, out) -> int:
    name = args.identity.replace("-", "_")
    if name not in identities.IDENTITIES:
        raise UsageError(f"unknown identity {args.identity!r}; known: {', '.join(identities.IDENTITIES)}")
    grid = _grid(args)
    failed = False
    rows = []
    for rep in identities.verify(name, grid):
        failed |= not rep.ok
        if args.format == "json":
            _emit(rep.to_json(), out)
        else:
            rows.append({**rep.to_dict(), "lhs": str(rep.lhs), "rhs": str(rep.rhs)})
    if args.format == "csv":
        _emit(_rows_csv(rows, ["identity", "params", "equal", "asserted", "lhs", "rhs"]), out)
    return EXIT_FAIL if failed else EXIT_OK


def scan_rows(conjecture: str, grid: identities.Grid) -> Iterable[dict]:
    if conjecture == "problem1":
        for rep in identities.verify("problem1", grid):
            row = dict(rep.params)
            predicted = row.pop("predicted")
            yield {**row, "prime": rep.lhs, "snk": rep.rhs,
                   "equal": rep.equal, "predicted": predicted}
    elif conjecture == "problem2":
        for rep in identities.verify("problem2", grid):
            factors = identities.bracket_factors(rep.lhs)
            yield {**rep.params, "signed": rep.lhs, "unsigned": rep.rhs,
                   "factors": factors}
    else:
        raise UsageError(f"unknown conjecture {conjecture!r}; known: {', '.join(CONJECTURES)}")


def cmd_scan(args, out) -> int:
    if args.conjecture not in CONJECTURES:
        raise UsageError(f"unknown conjecture {args.conjecture!r}; known: {', '.join(CONJECTURES)}")
    grid = _grid(args, default_r=(2,))
    rows = scan_rows(args.conjecture, grid)
    if args.format == "json":
        for row in rows:
            row = {k: v.to_dict() if isinstance(v, IntPolynomial) else v for k, v in row.items()}
            _emit(json.dumps(row, separators=(",", ":")), out)
    else:
        rows = ({k: str(v) if isinstance(v, IntPolynomial) else v for k, v in row.items()}
                for row in rows)
        cols = (["n", "k", "equal", "predicted", "prime", "snk"] if args.conjecture == "problem1"
                else ["r", "n", "k", "factors", "signed", "unsigned"])
        _emit(_rows_csv(rows, cols), out)
    return EXIT_OK


COMMANDS = {"dist": cmd_dist, "verify": cmd_verify, "scan": cmd_scan}


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    try:
        target = getattr(args, {"dist": "family", "verify": "identity", "scan": "conjecture"}[args.command])
        config = RunConfig(args.command, target=target, params=vars(args), format=args.format,
                           budget=args.budget if args.budget is not None else enumeration.budget(),
                           jobs=args.jobs)
        with enumeration.budget_override(config.budget):
            return COMMANDS[args.command](args, out)
    except UsageError as e:
        print(f"mahonia: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except enumeration.BudgetExceeded as e:
        print(f"mahonia: budget exceeded: {e}", file=sys.stderr)
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
