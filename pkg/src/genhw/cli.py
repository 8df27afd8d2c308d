"""Command-line front end.

Exit codes: 0 every check passed, 1 some check failed, 2 bad input or
usage, 3 an internal invariant was breached.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings
from typing import Sequence

from . import counting
from .battery import (
    DEFAULT_RANDOM_COUNT, battery_exit_code, file_items, random_items, run_battery, summary_table,
)
from .errors import InputError, InternalInvariantError
from .field import is_prime
from .hwmatrix import char_poly_rev, frobenius_product, g_polynomials, symbolic_matrix, twisted_norm
from .instance import load_spec
from .lattice import full_set
from .verify import (
    CHECKS, DEFAULT_TRIALS, FAIL, Report, check_generic_invertibility, check_hypergeometric,
    constant_term_separation, default_order, run_checks,
)
from .zeta import reduced_p_series

INVERTIBILITY_SUITE = ((2, 2), (3, 2), (2, 3))
INVERTIBILITY_PRIMES = (2, 3, 5)


def tpoly_str(coeffs: Sequence[int], var: str = "t") -> str:
    parts = []
    for k, c in enumerate(coeffs):
        if c == 0:
            continue
        mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
        if not mono:
            parts.append(str(c))
        else:
            parts.append(mono if c == 1 else f"{c}*{mono}")
    return " + ".join(parts) if parts else "0"


def _parse_subset(text: str | None, n: int):
    if text is None:
        return full_set(n)
    try:
        items = [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise InputError(f"bad subset {text!r}; expected comma-separated indices") from exc
    if any(i < 0 or i > n for i in items):
        raise InputError(f"subset {items} is not contained in {{0..{n}}}")
    return frozenset(items)


def _emit(obj: dict, as_json: bool, text: str) -> None:
    if as_json:
        sys.stdout.write(json.dumps(obj, indent=2) + "\n")
    else:
        sys.stdout.write(text.rstrip("\n") + "\n")


def _render_report(rep: dict) -> str:
    line = f"[{rep['status'].upper()}] {rep['check']}"
    if rep.get("witness"):
        line += f"  witness: {json.dumps(rep['witness'])}"
    if rep.get("timing_seconds") is not None:
        line += f"  ({rep['timing_seconds']:.3f}s)"
    return line


def _apply_guard(args) -> None:
    if getattr(args, "guard", None) is not None:
        if args.guard < 1:
            raise InputError("--guard must be positive")
        counting.BRUTE_GUARD = args.guard
        counting.FIBER_GUARD = args.guard


def _check_order(K):
    if K is not None and K < 1:
        raise InputError("--series-order must be >= 1")


# -- subcommands --------------------------------------------------------------

def cmd_matrix(args) -> int:
    spec = load_spec(args.instance)
    I = _parse_subset(args.subset, spec.n)
    M = symbolic_matrix(spec, I)
    prod = frobenius_product(spec, I, symbolic=M)
    det = char_poly_rev(prod)
    obj = {
        "instance": spec.describe(),
        "symbolic": M.to_json(),
        "frobenius_product": prod.to_json()["entries"],
        "det_I_minus_tM": det,
    }
    lines = [f"U^I_min for I = {sorted(I)}: {[list(u) for u in M.index]}",
             "symbolic matrix (L_j = Lambda_j, coefficients mod p):"]
    lines += ["  [" + ", ".join(e.to_str() for e in row) + "]" for row in M.entries]
    lines.append(f"Frobenius product over F_{spec.q}:")
    lines += ["  [" + ", ".join(e.to_str() for e in row) + "]" for row in prod.entries]
    lines.append(f"det(I - tM) = {tpoly_str(det)}  (mod {spec.p})")
    if I == full_set(spec.n) and spec.n % spec.d == 0:
        gs = g_polynomials(spec)
        norms = [twisted_norm(g, spec) for g in gs]
        obj["g_polynomials"] = [g.to_json() for g in gs]
        obj["g_norms"] = norms
        lines.append("g_i: " + "; ".join(g.to_str() for g in gs))
        lines.append(f"twisted norms of g_i: {norms}")
    _emit(obj, args.json, "\n".join(lines))
    return 0


def cmd_zeta(args) -> int:
    _apply_guard(args)
    spec = load_spec(args.instance)
    _check_order(args.series_order)
    K = default_order(spec) if args.series_order is None else args.series_order
    counts, P, red = reduced_p_series(spec, K, method=args.method, workers=args.workers)
    obj = {
        "instance": spec.describe(),
        "order": K,
        "mu": spec.mu,
        "point_counts": counts,
        "p_series_exact": [str(c) for c in P.coeffs],
        "p_series_scaled_mod_p": list(red.coeffs),
    }
    text = "\n".join([
        f"N_1..N_{K} = {', '.join(map(str, counts))}",
        f"P(t) = {tpoly_str(P.coeffs)} + O(t^{K + 1})",
        f"P(q^-{spec.mu} t) mod {spec.p} = {tpoly_str(red.coeffs)} + O(t^{K + 1})",
    ])
    _emit(obj, args.json, text)
    return 0


def _reports_exit(reports: list[Report]) -> int:
    return 1 if any(r.status == FAIL for r in reports) else 0


def cmd_verify(args) -> int:
    _apply_guard(args)
    spec = load_spec(args.instance)
    _check_order(args.series_order)
    reports = run_checks(spec, args.check, K=args.series_order, trials=args.trials,
                         seed=args.seed, method=args.method, workers=args.workers)
    out = [r.to_json(args.timings) for r in reports]
    for r in out:
        r["instance"] = None
    obj = {"instance": spec.describe(), "reports": out}
    _emit(obj, args.json, "\n".join(_render_report(r) for r in out))
    return _reports_exit(reports)


def cmd_hypergeom(args) -> int:
    spec = load_spec(args.instance)
    rep = check_hypergeometric(spec)
    obj = rep.to_json(args.timings)
    _emit(obj, args.json, _render_report(obj))
    return _reports_exit([rep])


def cmd_invertibility(args) -> int:
    if args.suite:
        cases = [(n, d, p) for n, d in INVERTIBILITY_SUITE for p in INVERTIBILITY_PRIMES]
    else:
        if args.n is None or args.d is None or args.p is None:
            raise InputError("give --n, --d and --p, or --suite")
        cases = [(args.n, args.d, args.p)]
    reports = []
    for n, d, p in cases:
        if n < 1 or d < 2:
            raise InputError("need n >= 1 and d >= 2")
        if not is_prime(p):
            raise InputError(f"p = {p} is not prime")
        I = _parse_subset(args.subset, n)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            reports.append(check_generic_invertibility(I, n, d, p, trials=args.trials,
                                                       seed=args.seed))
        reports.append(constant_term_separation(I, n, d, p))
    out = [r.to_json(args.timings) for r in reports]
    text = "\n".join(
        f"n={r['instance']['n']} d={r['instance']['d']} p={r['instance']['p']} "
        f"I={r['instance']['subset']}  " + _render_report(r) for r in out)
    _emit({"reports": out}, args.json, text)
    return _reports_exit(reports)


def cmd_battery(args) -> int:
    if args.random is not None and args.random < 0:
        raise InputError("--random must be >= 0")
    items = file_items(args.paths) if args.paths else []
    count = args.random if args.random is not None else (0 if args.paths else DEFAULT_RANDOM_COUNT)
    items += random_items(count, args.seed)
    result = run_battery(items, workers=args.workers, include_timing=args.timings)
    result = {"seed": args.seed, **result}
    _emit(result, args.json, summary_table(result))
    return battery_exit_code(result)


# -- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="genhw",
        description="Generalized Hasse-Witt matrices and mod-p zeta congruences "
                    "for hypersurfaces over finite fields.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, order=False, workers=False, trials=False):
        p.add_argument("--json", action="store_true", help="emit the JSON report")
        p.add_argument("--timings", action="store_true",
                       help="include wall-clock timings (makes output non-reproducible)")
        if order:
            p.add_argument("--series-order", type=int, default=None, metavar="K",
                           help="compare power series up to t^K (default |U_min| + 3)")
            p.add_argument("--method", choices=counting.METHODS, default="auto",
                           help="point-counting engine")
            p.add_argument("--guard", type=int, default=None,
                           help="limit on enumerated points / fibres")
        if workers:
            p.add_argument("--workers", type=int, default=1, help="worker processes")
        if trials:
            p.add_argument("--trials", type=int, default=DEFAULT_TRIALS,
                           help="Schwartz-Zippel trials")
            p.add_argument("--seed", type=int, default=0, help="random seed")

    p = sub.add_parser("matrix", help="symbolic and evaluated Hasse-Witt matrix, det(I - tM)")
    p.add_argument("instance")
    p.add_argument("--subset", default=None, help="comma-separated subset I (default S)")
    common(p)
    p.set_defaults(func=cmd_matrix)

    p = sub.add_parser("zeta", help="point counts and the P-series")
    p.add_argument("instance")
    common(p, order=True, workers=True)
    p.set_defaults(func=cmd_zeta)

    p = sub.add_parser("verify", help="run congruence and structural checks")
    p.add_argument("instance")
    p.add_argument("--check", choices=CHECKS + ("all",), default="all")
    common(p, order=True, workers=True, trials=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("hypergeom", help="Euler and box operator checks on every entry")
    p.add_argument("instance")
    common(p)
    p.set_defaults(func=cmd_hypergeom)

    p = sub.add_parser("invertibility", help="generic invertibility of the matrix")
    p.add_argument("--n", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--p", type=int)
    p.add_argument("--subset", default=None)
    p.add_argument("--suite", action="store_true",
                   help="run (n,d) in (2,2),(3,2),(2,3) and p in 2,3,5")
    common(p, trials=True)
    p.set_defaults(func=cmd_invertibility)

    p = sub.add_parser("battery", help="run the checks over instance files and random instances")
    p.add_argument("paths", nargs="*", help="instance files or directories of *.hw files")
    p.add_argument("--random", type=int, default=None, metavar="N",
                   help=f"number of random instances (default {DEFAULT_RANDOM_COUNT} "
                        "when no paths are given)")
    p.add_argument("--seed", type=int, default=0)
    common(p, workers=True)
    p.set_defaults(func=cmd_battery)
    return parser


def _format_warning(message, category, filename, lineno, line=None):
    return f"warning: {message}\n"


def main(argv: Sequence[str] | None = None) -> int:
    warnings.formatwarning = _format_warning
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "workers", 1) < 1:
        parser.error("--workers must be >= 1")
    if getattr(args, "trials", 1) < 1:
        parser.error("--trials must be >= 1")
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except InternalInvariantError as exc:
        print(f"internal invariant violated [{exc.code}]: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
