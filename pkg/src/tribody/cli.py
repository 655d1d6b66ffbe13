"""Batch command line: verify suites, spectrum tables, catalog listing.

Exit codes: 0 all non-erratum checks pass, 1 a check failed, 2 usage or config error.
"""
from __future__ import annotations

import argparse
import json
import re
import sys
from fractions import Fraction

from . import __version__

_RAT = re.compile(r"^[+-]?\d+(/\d+)?$")
SUITE_CHOICES = ("identities", "charts", "spectra", "geometry", "liealg", "appendix", "all")


class UsageError(Exception):
    pass


def rational(text: str) -> Fraction:
    """'p/q' or a bare integer; decimals are refused so every input stays exact."""
    text = text.strip()
    if not _RAT.match(text):
        raise argparse.ArgumentTypeError(f"expected an integer or p/q rational, got {text!r}")
    q = Fraction(text)
    return q


def mass_triple(text: str) -> tuple:
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("masses take three comma-separated rationals, e.g. 1/1,2/1,3/1")
    m = tuple(rational(p) for p in parts)
    if any(x <= 0 for x in m):
        raise argparse.ArgumentTypeError("masses must be positive")
    return m


def _common(p: argparse.ArgumentParser, formats=("json", "text")):
    p.add_argument("--seed", type=int, default=0, help="seed for random rational draws (default 0)")
    p.add_argument("--out", default=None, help="write the output to this file instead of stdout")
    p.add_argument("--format", choices=formats, default=formats[0])


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="tribody", description="Exact checks and spectra for three-body operators.")
    ap.add_argument("--version", action="version", version=f"tribody {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("suite", choices=SUITE_CHOICES)
    v.add_argument("--masses", type=mass_triple, default=None, help="mass triple for the appendix suite")
    _common(v)

    s = sub.add_parser("spectrum", help="eigenvalue table of a spectral model")
    s.add_argument("model")
    s.add_argument("--N", type=int, default=2)
    s.add_argument("--d", type=rational, default=Fraction(3))
    s.add_argument("--omega", type=rational, default=Fraction(1))
    s.add_argument("--gamma", type=rational, default=Fraction(0))
    s.add_argument("--gammaT", type=rational, default=Fraction(0))
    s.add_argument("--A", type=rational, default=Fraction(0))
    _common(s, ("json", "csv", "text"))

    c = sub.add_parser("catalog", help="list every model id")
    c.add_argument("--json", action="store_true", help="emit the catalog/v1 JSON document")
    c.add_argument("--filter", default=None, help="only entries carrying this tag")
    _common(c, ("text", "json"))
    return ap


# commands ------------------------------------------------------------------

def cmd_verify(args) -> tuple[int, str]:
    from .checks import run_suite
    from .report import ERRATUM, FAIL, PASS
    if args.masses is not None and args.suite not in ("appendix", "all"):
        raise UsageError("--masses applies to the appendix suite only")
    reports = run_suite(args.suite, seed=args.seed, masses=args.masses)
    checks = [r for r in reports if r.status != ERRATUM]
    errata = [r for r in reports if r.status == ERRATUM]
    failed = [r for r in checks if r.status == FAIL]
    status = PASS if not failed else FAIL
    if args.format == "text":
        lines = [f"suite {args.suite} seed {args.seed}: {status}"]
        lines += [f"  [{r.status}] {r.check_id} ({len(r.items)} items)" for r in checks]
        if errata:
            lines.append("errata:")
            lines += [f"  {r.check_id}: {r.notes}" for r in errata]
        text = "\n".join(lines) + "\n"
    else:
        doc = {
            "schema": "report/v1",
            "suite": args.suite,
            "seed": args.seed,
            "masses": [str(m) for m in args.masses] if args.masses else None,
            "status": status,
            "summary": {"pass": sum(r.status == PASS for r in checks), "fail": len(failed), "erratum": len(errata)},
            "checks": [r.to_json() for r in checks],
            "errata": [r.to_json() for r in errata],
        }
        text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    return (0 if status == PASS else 1), text


def cmd_spectrum(args) -> tuple[int, str]:
    from .models import ModelParams, UnknownModel
    from .spectra import SPECTRAL, NotInvariant, spectrum_table, table_to_csv
    if args.model not in SPECTRAL:
        raise UsageError(f"{args.model} is not a spectral model; choose one of {', '.join(sorted(SPECTRAL))}")
    if args.N < 0:
        raise UsageError("--N must be a nonnegative integer")
    try:
        params = ModelParams(d=args.d, omega=args.omega, gamma=args.gamma, gammaTilde=args.gammaT, A=args.A,
                             N=args.N)
        table = spectrum_table(args.model, params, args.N)
    except (ValueError, UnknownModel, NotInvariant) as exc:
        raise UsageError(str(exc)) from exc
    if args.format == "csv":
        return 0, f"# {table['convention']}\n" + table_to_csv(table)
    if args.format == "text":
        lines = [f"{args.model} on N={args.N} (dim {table['dim']}): {table['convention']}"]
        for r in table["rows"]:
            lines.append(f"  {r['eigenvalue']:>24}  x{r['multiplicity']}  res={r['residual']:.1e}  {r['source']}")
        for r in table.get("closed_form", []):
            lines.append(f"  {r['eigenvalue']:>24}  x{r['multiplicity']}  {r['source']}")
        return 0, "\n".join(lines) + "\n"
    return 0, json.dumps({"schema": "spectrum/v1", **table}, indent=2, sort_keys=True) + "\n"


def cmd_catalog(args) -> tuple[int, str]:
    from .models import CATALOG, catalog_ids, catalog_json
    if args.json or args.format == "json":
        doc = {"schema": "catalog/v1", "entries": catalog_json(args.filter)}
        return 0, json.dumps(doc, indent=2, sort_keys=True) + "\n"
    lines = []
    for mid in catalog_ids(args.filter):
        e = CATALOG[mid]
        params = ",".join(e.params) or "-"
        lines.append(f"{mid:<24} {e.kind:<12} ({', '.join(e.chart)}) [{params}] {e.anchor}")
    return 0, "\n".join(lines) + "\n"


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    handler = {"verify": cmd_verify, "spectrum": cmd_spectrum, "catalog": cmd_catalog}[args.command]
    try:
        code, text = handler(args)
    except UsageError as exc:
        print(f"tribody {args.command}: error: {exc}", file=sys.stderr)
        return 2
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
