"""Hypersurface instances f = sum_j lambda_j x^{a_j} over F_q.

Instance files are JSON objects::

    {
      "p": 7, "a": 1, "n": 2, "d": 3,
      "terms": [
        {"exponents": [3, 0, 0], "coeff": "1"},
        {"exponents": [0, 3, 0], "coeff": "1"},
        {"exponents": [0, 0, 3], "coeff": "1"}
      ]
    }

Keys are exactly ``p, a, n, d, terms``; each term has exactly ``exponents``
(n+1 nonnegative integers summing to d) and ``coeff`` (a string such as
``"g^2+1"`` where ``g`` is the generator of F_q, or an integer).  Unknown
keys are rejected.  Term order fixes the variable index j used everywhere.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

from .errors import InstanceError
from .field import FieldCtx, FieldElement, is_prime, make_field, parse_element

TOP_KEYS = {"p", "a", "n", "d", "terms"}
TERM_KEYS = {"exponents", "coeff"}


def augment(exponents: Sequence[int]) -> tuple[int, ...]:
    """a_j -> a_j^+ = (a_0j, ..., a_nj, 1)."""
    return tuple(exponents) + (1,)


@dataclass(frozen=True)
class HypersurfaceSpec:
    p: int
    a: int
    n: int
    d: int
    exponents: tuple[tuple[int, ...], ...]
    coeffs: tuple[FieldElement, ...]

    def __post_init__(self):
        validate(self)

    @property
    def N(self) -> int:
        return len(self.exponents)

    @property
    def q(self) -> int:
        return self.p**self.a

    @cached_property
    def field(self) -> FieldCtx:
        return make_field(self.p, self.a)

    @property
    def mu(self) -> int:
        return -(-(self.n + 1) // self.d) - 1

    @property
    def support(self) -> list[tuple[int, ...]]:
        """Augmented exponent vectors a_j^+ in term order."""
        return [augment(e) for e in self.exponents]

    def with_coeffs(self, coeffs: Sequence[FieldElement]) -> "HypersurfaceSpec":
        return HypersurfaceSpec(self.p, self.a, self.n, self.d, self.exponents, tuple(coeffs))

    def describe(self) -> dict:
        """Echo used in every report, including the field modulus."""
        return {
            "p": self.p,
            "a": self.a,
            "n": self.n,
            "d": self.d,
            "modulus": list(self.field.modulus),
            "terms": [
                {"exponents": list(e), "coeff": c.to_str()}
                for e, c in zip(self.exponents, self.coeffs)
            ],
        }


def validate(spec: HypersurfaceSpec) -> None:
    if not isinstance(spec.p, int) or not is_prime(spec.p):
        raise InstanceError(f"p = {spec.p!r} is not prime")
    for name in ("a", "n", "d"):
        if not isinstance(getattr(spec, name), int):
            raise InstanceError(f"{name} must be an integer")
    if spec.a < 1:
        raise InstanceError("a must be >= 1")
    if spec.n < 1:
        raise InstanceError("n must be >= 1")
    if spec.d < 2:
        raise InstanceError(f"degree d = {spec.d} < 2 is not allowed")
    if not spec.exponents:
        raise InstanceError("instance has no terms")
    if len(spec.coeffs) != len(spec.exponents):
        raise InstanceError("one coefficient per term is required")
    seen = set()
    for e in spec.exponents:
        if len(e) != spec.n + 1:
            raise InstanceError(f"exponent vector {list(e)} must have n+1 = {spec.n + 1} entries")
        if any((not isinstance(x, int)) or x < 0 for x in e):
            raise InstanceError(f"exponent vector {list(e)} has a negative or non-integer entry")
        if sum(e) != spec.d:
            raise InstanceError(
                f"non-homogeneous term {list(e)}: exponent sum {sum(e)} != d = {spec.d}")
        if e in seen:
            raise InstanceError(f"duplicate exponent vector {list(e)}")
        seen.add(e)
    field = spec.field
    for c in spec.coeffs:
        if c.ctx != field:
            raise InstanceError("coefficient does not lie in F_q")
    if all(c.is_zero() for c in spec.coeffs):
        raise InstanceError("degenerate instance: every coefficient is zero, f = 0 defines all of P^n")


def build_spec(p: int, a: int, n: int, d: int, exponents, coeffs) -> HypersurfaceSpec:
    """Construct a spec; coefficients may be FieldElements, ints or strings."""
    if not isinstance(p, int) or not is_prime(p):
        raise InstanceError(f"p = {p!r} is not prime")
    if not isinstance(a, int) or a < 1:
        raise InstanceError("a must be a positive integer")
    field = make_field(p, a)
    conv = []
    for c in coeffs:
        if isinstance(c, FieldElement):
            conv.append(c)
        elif isinstance(c, bool):
            raise InstanceError("malformed coefficient")
        elif isinstance(c, int):
            conv.append(field.from_int(c))
        elif isinstance(c, str):
            try:
                conv.append(parse_element(c, field))
            except ValueError as exc:
                raise InstanceError(str(exc)) from exc
        else:
            raise InstanceError(f"malformed coefficient {c!r}")
    spec = HypersurfaceSpec(p, a, n, d, tuple(tuple(e) for e in exponents), tuple(conv))
    zeros = [j + 1 for j, c in enumerate(conv) if c.is_zero()]
    if zeros:
        warnings.warn(f"zero coefficients at term(s) {zeros}; they stay in the support",
                      stacklevel=2)
    return spec


def parse_spec(text: str) -> HypersurfaceSpec:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceError(f"instance is not valid JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise InstanceError("instance must be a JSON object")
    unknown = set(obj) - TOP_KEYS
    if unknown:
        raise InstanceError(f"unknown key(s): {sorted(unknown)}")
    missing = TOP_KEYS - set(obj)
    if missing:
        raise InstanceError(f"missing key(s): {sorted(missing)}")
    for k in ("p", "a", "n", "d"):
        if not isinstance(obj[k], int) or isinstance(obj[k], bool):
            raise InstanceError(f"{k} must be an integer")
    terms = obj["terms"]
    if not isinstance(terms, list):
        raise InstanceError("terms must be an array")
    exps, coeffs = [], []
    for t in terms:
        if not isinstance(t, dict):
            raise InstanceError("each term must be an object")
        bad = set(t) - TERM_KEYS
        if bad:
            raise InstanceError(f"unknown term key(s): {sorted(bad)}")
        if set(t) != TERM_KEYS:
            raise InstanceError("each term needs 'exponents' and 'coeff'")
        e = t["exponents"]
        if not isinstance(e, list) or not all(isinstance(x, int) and not isinstance(x, bool)
                                              for x in e):
            raise InstanceError(f"exponents must be a list of integers, got {e!r}")
        exps.append(tuple(e))
        coeffs.append(t["coeff"])
    return build_spec(obj["p"], obj["a"], obj["n"], obj["d"], exps, coeffs)


def serialize_spec(spec: HypersurfaceSpec) -> str:
    obj = {
        "p": spec.p,
        "a": spec.a,
        "n": spec.n,
        "d": spec.d,
        "terms": [
            {"exponents": list(e), "coeff": c.to_str()}
            for e, c in zip(spec.exponents, spec.coeffs)
        ],
    }
    return json.dumps(obj, indent=2) + "\n"


def load_spec(path) -> HypersurfaceSpec:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InstanceError(f"cannot read {path}: {exc}") from exc
    return parse_spec(text)


def monomials(n: int, d: int) -> list[tuple[int, ...]]:
    """All exponent vectors of degree d in n+1 variables, lexicographically descending."""
    out = []

    def rec(prefix, left, slots):
        if slots == 1:
            out.append(prefix + (left,))
            return
        for k in range(left, -1, -1):
            rec(prefix + (k,), left - k, slots - 1)

    rec((), d, n + 1)
    return out
