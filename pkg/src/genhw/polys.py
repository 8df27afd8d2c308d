"""Sparse multivariate polynomials over F_p, plus small dense helpers for
univariate polynomials in t over a finite field."""

from __future__ import annotations

from typing import Mapping, Sequence

from .field import FieldCtx, FieldElement


class SparseModPoly:
    """Polynomial in Lambda_1..Lambda_N with coefficients in F_p.

    ``terms`` maps exponent tuples to nonzero residues in [1, p-1].  Exponents
    may be negative, which lets the same class hold Laurent polynomials.
    """

    __slots__ = ("p", "nvars", "terms")

    def __init__(self, p: int, nvars: int, terms: Mapping[tuple[int, ...], int] | None = None):
        self.p = p
        self.nvars = nvars
        self.terms: dict[tuple[int, ...], int] = {}
        if terms:
            for e, c in terms.items():
                c %= p
                if c:
                    self.terms[tuple(e)] = c

    @classmethod
    def constant(cls, p: int, nvars: int, c: int) -> "SparseModPoly":
        return cls(p, nvars, {(0,) * nvars: c})

    @classmethod
    def monomial(cls, p: int, exps: Sequence[int], c: int = 1) -> "SparseModPoly":
        return cls(p, len(exps), {tuple(exps): c})

    def copy(self) -> "SparseModPoly":
        out = SparseModPoly(self.p, self.nvars)
        out.terms = dict(self.terms)
        return out

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        if not isinstance(other, SparseModPoly):
            return NotImplemented
        return self.p == other.p and self.terms == other.terms

    def __repr__(self):
        return f"SparseModPoly(p={self.p}, {self.to_str()})"

    def coefficient(self, exps: Sequence[int]) -> int:
        return self.terms.get(tuple(exps), 0)

    def _acc(self, e, c):
        v = (self.terms.get(e, 0) + c) % self.p
        if v:
            self.terms[e] = v
        else:
            self.terms.pop(e, None)

    def __add__(self, other: "SparseModPoly") -> "SparseModPoly":
        out = self.copy()
        for e, c in other.terms.items():
            out._acc(e, c)
        return out

    def __neg__(self) -> "SparseModPoly":
        return SparseModPoly(self.p, self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "SparseModPoly") -> "SparseModPoly":
        return self + (-other)

    def scale(self, k: int) -> "SparseModPoly":
        return SparseModPoly(self.p, self.nvars, {e: c * k for e, c in self.terms.items()})

    def __mul__(self, other: "SparseModPoly") -> "SparseModPoly":
        out = SparseModPoly(self.p, self.nvars)
        p = self.p
        acc: dict[tuple[int, ...], int] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                acc[e] = (acc.get(e, 0) + c1 * c2) % p
        out.terms = {e: c for e, c in acc.items() if c}
        return out

    def shift(self, exps: Sequence[int]) -> "SparseModPoly":
        """Multiply by the (Laurent) monomial Lambda^exps."""
        return SparseModPoly(
            self.p, self.nvars,
            {tuple(a + b for a, b in zip(e, exps)): c for e, c in self.terms.items()})

    def derivative(self, j: int, times: int = 1) -> "SparseModPoly":
        """(d/dLambda_j)^times, coefficients reduced mod p."""
        if times == 0:
            return self.copy()
        out: dict[tuple[int, ...], int] = {}
        for e, c in self.terms.items():
            k = e[j]
            if k < times:
                continue
            falling = 1
            for t in range(times):
                falling *= k - t
            ne = e[:j] + (k - times,) + e[j + 1:]
            out[ne] = (out.get(ne, 0) + c * falling) % self.p
        return SparseModPoly(self.p, self.nvars, out)

    def apply_derivatives(self, counts: Sequence[int]) -> "SparseModPoly":
        res = self
        for j, k in enumerate(counts):
            if k:
                res = res.derivative(j, k)
        return res

    def max_exponent(self) -> int:
        return max((max(e) for e in self.terms), default=0)

    def evaluate(self, values: Sequence[FieldElement], ctx: FieldCtx) -> FieldElement:
        """Evaluate at a point of F_q^N; F_p coefficients enter via the prime subfield."""
        if len(values) != self.nvars:
            raise ValueError(f"expected {self.nvars} values, got {len(values)}")
        acc = ctx.zero
        cache: dict[tuple[int, int], FieldElement] = {}
        for e, c in self.terms.items():
            term = ctx.from_int(c)
            for j, k in enumerate(e):
                if k:
                    key = (j, k)
                    pw = cache.get(key)
                    if pw is None:
                        pw = values[j] ** k
                        cache[key] = pw
                    term = term * pw
            acc = acc + term
        return acc

    def sorted_terms(self) -> list[tuple[tuple[int, ...], int]]:
        return sorted(self.terms.items(), reverse=True)

    def to_json(self) -> list[dict]:
        return [{"nu": list(e), "c": c} for e, c in self.sorted_terms()]

    def to_str(self, symbol: str = "L") -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                f"{symbol}{j + 1}" + (f"^{k}" if k != 1 else "") for j, k in enumerate(e) if k)
            if not mono:
                parts.append(str(c))
            else:
                parts.append(mono if c == 1 else f"{c}*{mono}")
        return " + ".join(parts)


def poly_det(matrix: Sequence[Sequence[SparseModPoly]]) -> SparseModPoly:
    """Determinant by Laplace expansion along the first row (memoised on columns)."""
    n = len(matrix)
    if n == 0:
        raise ValueError("empty matrix")
    p, nv = matrix[0][0].p, matrix[0][0].nvars
    memo: dict[tuple[int, int], SparseModPoly] = {}

    def minor(row: int, cols: int) -> SparseModPoly:
        if row == n:
            return SparseModPoly.constant(p, nv, 1)
        key = (row, cols)
        if key in memo:
            return memo[key]
        acc = SparseModPoly(p, nv)
        sign = 1
        for c in range(n):
            if cols >> c & 1:
                entry = matrix[row][c]
                if not entry.is_zero():
                    sub = minor(row + 1, cols & ~(1 << c))
                    if not sub.is_zero():
                        term = entry * sub
                        acc = acc + (term if sign > 0 else -term)
                sign = -sign
        memo[key] = acc
        return acc

    return minor(0, (1 << n) - 1)


# -- univariate polynomials in t over F_q: lists of FieldElement, low degree first

def tpoly_trim(a: list[FieldElement]) -> list[FieldElement]:
    while len(a) > 1 and a[-1].is_zero():
        a.pop()
    return a


def tpoly_add(a: Sequence[FieldElement], b: Sequence[FieldElement]) -> list[FieldElement]:
    n = max(len(a), len(b))
    ctx = (a or b)[0].ctx
    out = []
    for i in range(n):
        x = a[i] if i < len(a) else ctx.zero
        y = b[i] if i < len(b) else ctx.zero
        out.append(x + y)
    return tpoly_trim(out)


def tpoly_mul(a: Sequence[FieldElement], b: Sequence[FieldElement]) -> list[FieldElement]:
    ctx = a[0].ctx
    out = [ctx.zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x.is_zero():
            continue
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return tpoly_trim(out)


def tpoly_scale(a: Sequence[FieldElement], c: FieldElement) -> list[FieldElement]:
    return tpoly_trim([x * c for x in a])


def series_mul_mod_p(a: Sequence[int], b: Sequence[int], order: int, p: int) -> list[int]:
    out = [0] * (order + 1)
    for i, x in enumerate(a[: order + 1]):
        if x:
            for j, y in enumerate(b[: order + 1 - i]):
                out[i + j] = (out[i + j] + x * y) % p
    return out


def series_inv_mod_p(a: Sequence[int], order: int, p: int) -> list[int]:
    """Inverse of a power series over F_p with a_0 != 0, truncated at t^order."""
    a = list(a) + [0] * (order + 1 - len(a))
    inv0 = pow(a[0] % p, p - 2, p)
    out = [0] * (order + 1)
    out[0] = inv0
    for m in range(1, order + 1):
        s = sum(a[k] * out[m - k] for k in range(1, m + 1))
        out[m] = (-s * inv0) % p
    return out
