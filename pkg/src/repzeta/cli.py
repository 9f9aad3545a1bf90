"""``repzeta`` command line entry point.

Exit codes: 0 when every check passes, 1 when a mathematical check fails,
2 on budget or I/O errors.
"""

from __future__ import annotations

import argparse
import logging
import sys

from .cache import ConjugacyCache
from .experiments import ExperimentSpec, run, selftest
from .groups import DEFAULT_ENUM_BUDGET, DEFAULT_SWEEP_BUDGET, BudgetExceeded

EXIT_OK, EXIT_FAILED, EXIT_ERROR = 0, 1, 2


def _primes(text):
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma separated primes, got {text!r}")


def _common(sp, group=True, k=True):
    if group:
        sp.add_argument("--scheme", default="sl", help="gl, sl, u, heisenberg or diagonal")
        sp.add_argument("--n", type=int, default=2, help="matrix size")
    sp.add_argument("--f", type=int, default=1, help="residue field degree")
    if k:
        sp.add_argument("--k", type=int, default=2, help="truncation length")
    sp.add_argument("--enum-budget", type=int, default=DEFAULT_ENUM_BUDGET)
    sp.add_argument("--sweep-budget", type=int, default=DEFAULT_SWEEP_BUDGET)
    sp.add_argument("--out", help="write the JSON report here")
    sp.add_argument("--text", dest="text_out", help="write the text rendering here")


def build_parser():
    parser = argparse.ArgumentParser(prog="repzeta", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    parser.add_argument("--json", action="store_true", help="print JSON instead of text")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("verify", help="compare G(F_q[t]/t^k) with G(W_k(F_q))")
    _common(sp)
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--mode", choices=("direct", "prop21", "both"), default="both")

    sp = sub.add_parser("ntable", help="N(G(F_p)) across primes")
    _common(sp, k=False)
    sp.add_argument("--primes", type=_primes, required=True, help="e.g. 3,5,7,11")
    sp.add_argument("--csv", dest="csv_out", help="write the table as CSV here")

    sp = sub.add_parser("pointcount", help="orders and commuting pairs over both rings")
    _common(sp)
    sp.add_argument("--p", type=int, required=True)

    sp = sub.add_parser("unipotent", help="orbit method against the class algebra on U_n(F_q)")
    _common(sp, k=False)
    sp.add_argument("--p", type=int, required=True)
    sp.set_defaults(scheme="u", n=3)

    sp = sub.add_parser("probe-q2", help="SL_2 over F_2[t]/t^4 against Z/16")
    sp.add_argument("--out")
    sp.add_argument("--text", dest="text_out")

    sub.add_parser("selftest", help="run a few small experiments")
    return parser


_KIND = {"verify": "verify-equivalence", "ntable": "n-table", "pointcount": "point-count",
         "unipotent": "unipotent-cross-check", "probe-q2": "counterexample-probe"}


def spec_from_args(args):
    fields = {"kind": _KIND[args.command]}
    if args.command == "probe-q2":
        fields.update(scheme="sl", n=2, p=2, k=4)
    for name in ("scheme", "n", "p", "f", "k", "primes", "mode", "enum_budget",
                 "sweep_budget", "out", "text_out", "csv_out"):
        if hasattr(args, name):
            fields[name] = getattr(args, name)
    return ExperimentSpec(**fields)


def _emit(report, as_json):
    report.write()
    sys.stdout.write(report.dumps() + "\n" if as_json else report.render_text())


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    cache = ConjugacyCache()
    try:
        if args.command == "selftest":
            reports = selftest(cache)
            for r in reports:
                _emit(r, args.json)
            ok = all(r.passed for r in reports)
            print("selftest " + ("passed" if ok else "FAILED"))
            return EXIT_OK if ok else EXIT_FAILED
        report = run(spec_from_args(args), cache)
        _emit(report, args.json)
        return EXIT_OK if report.passed else EXIT_FAILED
    except (BudgetExceeded, OSError) as exc:
        print(f"repzeta: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except ValueError as exc:
        print(f"repzeta: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except AssertionError as exc:
        print(f"repzeta: check failed: {exc}", file=sys.stderr)
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
