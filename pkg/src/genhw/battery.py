"""Randomised and file-driven batteries of checks.

Instances are keyed (``random-007``, or the file path) and results are
merged in key order, so the report does not depend on the worker count.
"""

from __future__ import annotations

import random
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from .errors import InputError, InternalInvariantError
from .field import make_field
from .instance import HypersurfaceSpec, load_spec, monomials, parse_spec, serialize_spec
from .lattice import enumerate_u_min, full_set
from .verify import (
    FAIL, PASS, SKIP, check_congruence, check_hw_oracle, check_hypergeometric, run_checks,
)

BATTERY_SHAPES = ((2, 2), (2, 3), (3, 2))
BATTERY_PRIMES = (2, 3, 5)
BATTERY_DEGREES = (1, 2)
DEFAULT_RANDOM_COUNT = 50


@dataclass
class BatteryItem:
    key: str
    spec_text: str
    source: str  # "random" or "file"


def random_spec(rng: random.Random) -> HypersurfaceSpec:
    """Full-monomial support, uniformly random coefficients, not all zero."""
    n, d = rng.choice(BATTERY_SHAPES)
    p = rng.choice(BATTERY_PRIMES)
    a = rng.choice(BATTERY_DEGREES)
    F = make_field(p, a)
    support = monomials(n, d)
    while True:
        coeffs = [F.from_encoding(rng.randrange(F.size)) for _ in support]
        if any(not c.is_zero() for c in coeffs):
            break
    return HypersurfaceSpec(p, a, n, d, tuple(support), tuple(coeffs))


def random_items(count: int, seed: int) -> list[BatteryItem]:
    rng = random.Random(seed)
    return [BatteryItem(f"random-{i:03d}", serialize_spec(random_spec(rng)), "random")
            for i in range(count)]


def file_items(paths) -> list[BatteryItem]:
    files: list[Path] = []
    for raw in paths:
        path = Path(raw)
        if path.is_dir():
            files.extend(sorted(path.glob("*.hw")))
        elif path.exists():
            files.append(path)
        else:
            raise InputError(f"no such instance file or directory: {raw}")
    return [BatteryItem(str(f), serialize_spec(load_spec(f)), "file") for f in files]


def battery_order(spec: HypersurfaceSpec) -> int:
    """|U^S_min| + 2."""
    return len(enumerate_u_min(full_set(spec.n), spec.n, spec.d)) + 2


def run_item(item: BatteryItem, include_timing: bool = False) -> dict:
    with warnings.catch_warnings():
        # zero coefficients are expected in random instances
        warnings.simplefilter("ignore")
        spec = parse_spec(item.spec_text)
    out = {"key": item.key, "source": item.source, "instance": spec.describe()}
    try:
        if item.source == "random":
            reports = [check_congruence(spec, battery_order(spec))]
            if spec.mu == 0:
                reports.append(check_hw_oracle(spec))
            reports.append(check_hypergeometric(spec))
        else:
            reports = run_checks(spec, "all")
    except InternalInvariantError as exc:
        out["error"] = {"code": exc.code, "message": str(exc)}
        out["reports"] = []
        return out
    for r in reports:
        r.instance = None  # echoed once per item
    out["reports"] = [r.to_json(include_timing) for r in reports]
    return out


def _run_item_args(args):
    return run_item(*args)


def run_battery(items: list[BatteryItem], workers: int = 1,
                include_timing: bool = False) -> dict:
    args = [(it, include_timing) for it in items]
    if workers > 1 and len(items) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_item_args, args))
    else:
        results = [_run_item_args(a) for a in args]
    results.sort(key=lambda r: r["key"])
    summary = {"instances": len(results), "checks": 0, PASS: 0, FAIL: 0, SKIP: 0, "errors": 0}
    for r in results:
        if "error" in r:
            summary["errors"] += 1
        for rep in r["reports"]:
            summary["checks"] += 1
            summary[rep["status"]] += 1
    return {"summary": summary, "results": results}


def battery_exit_code(result: dict) -> int:
    if result["summary"]["errors"]:
        return 3
    return 1 if result["summary"][FAIL] else 0


def summary_table(result: dict) -> str:
    lines = [f"{'instance':<28} {'p':>2} {'a':>2} {'n':>2} {'d':>2}  checks"]
    for r in result["results"]:
        inst = r["instance"]
        if "error" in r:
            status = f"ERROR {r['error']['code']}: {r['error']['message']}"
        else:
            status = " ".join(f"{rep['check']}={rep['status']}" for rep in r["reports"])
        lines.append(f"{r['key']:<28} {inst['p']:>2} {inst['a']:>2} {inst['n']:>2} {inst['d']:>2}  {status}")
    s = result["summary"]
    lines.append(f"{s['instances']} instances, {s['checks']} checks: "
                 f"{s[PASS]} pass, {s[FAIL]} fail, {s[SKIP]} skip, {s['errors']} errors")
    return "\n".join(lines)

