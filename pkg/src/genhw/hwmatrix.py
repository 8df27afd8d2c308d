"""The generalized Hasse-Witt matrices over F_p and what is built from them.

For I a subset of S = {0..n} and u, v in U^I_min the (u, v) entry is

    (-1)^(mu_I + 1) * sum_nu  Lambda^nu / (nu_1! ... nu_N!)   (mod p)

summed over nu in N^N with sum_j nu_j a_j^+ = p*u - v.  Every such nu has
nu_j <= p - 1, so the factorials are units mod p; this is asserted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import FrobeniusFixednessError, InputError
from .field import FieldCtx, FieldElement, embed, frobenius, make_field
from .instance import HypersurfaceSpec
from .lattice import as_subset, enumerate_u_min, full_set, in_u_min, mu_of, solve_nu
from .polys import SparseModPoly, tpoly_add, tpoly_mul, tpoly_scale, tpoly_trim

COFACTOR_MAX_DIM = 6


@dataclass
class HWMatrix:
    I: frozenset[int]
    index: list[tuple[int, ...]]
    entries: list[list]  # SparseModPoly (symbolic) or FieldElement (evaluated)
    symbolic: bool

    @property
    def dim(self) -> int:
        return len(self.index)

    def to_json(self) -> dict:
        if self.symbolic:
            rows = [[e.to_json() for e in row] for row in self.entries]
        else:
            rows = [[e.to_str() for e in row] for row in self.entries]
        return {
            "subset": sorted(self.I),
            "index": [list(u) for u in self.index],
            "entries": rows,
        }


def _inv_factorial_product(nu: Sequence[int], p: int) -> int:
    prod = 1
    for k in nu:
        prod = prod * math.factorial(k) % p
    return pow(prod, p - 2, p)


def symbolic_entry(u: Sequence[int], v: Sequence[int], spec: HypersurfaceSpec,
                   I: Iterable[int] | None = None) -> SparseModPoly:
    I = full_set(spec.n) if I is None else as_subset(I)
    n, d, p = spec.n, spec.d, spec.p
    if not (in_u_min(u, I, n, d) and in_u_min(v, I, n, d)):
        raise ValueError(f"u={list(u)}, v={list(v)} are not both in U^I_min for I={sorted(I)}")
    target = [p * a - b for a, b in zip(u, v)]
    sols = solve_nu(target, spec.support, p, check_bound=True)
    sign = -1 if (mu_of(I, d) + 1) % 2 else 1
    terms = {nu: sign * _inv_factorial_product(nu, p) for nu in sols}
    return SparseModPoly(p, spec.N, terms)


def symbolic_matrix(spec: HypersurfaceSpec, I: Iterable[int] | None = None) -> HWMatrix:
    I = full_set(spec.n) if I is None else as_subset(I)
    index = enumerate_u_min(I, spec.n, spec.d)
    entries = [[symbolic_entry(u, v, spec, I) for v in index] for u in index]
    return HWMatrix(I, index, entries, symbolic=True)


def evaluate(M: HWMatrix, lam: Sequence[FieldElement], ctx: FieldCtx | None = None) -> HWMatrix:
    if not M.symbolic:
        raise ValueError("matrix is already evaluated")
    if ctx is None:
        if not lam:
            raise ValueError("cannot infer the field from an empty point")
        ctx = lam[0].ctx
    nvars = M.entries[0][0].nvars if M.entries else len(lam)
    if len(lam) != nvars:
        raise InputError(f"point has {len(lam)} coordinates, matrix expects {nvars}")
    rows = [[e.evaluate(lam, ctx) for e in row] for row in M.entries]
    return HWMatrix(M.I, M.index, rows, symbolic=False)


def mat_mul(A: list[list[FieldElement]], B: list[list[FieldElement]]) -> list[list[FieldElement]]:
    n, m, k = len(A), len(B), len(B[0]) if B else 0
    ctx = A[0][0].ctx
    out = []
    for i in range(n):
        row = []
        for j in range(k):
            acc = ctx.zero
            for t in range(m):
                acc = acc + A[i][t] * B[t][j]
            row.append(acc)
        out.append(row)
    return out


def frobenius_twist(lam: Sequence[FieldElement], times: int) -> list[FieldElement]:
    out = list(lam)
    for _ in range(times):
        out = [frobenius(x) for x in out]
    return out


def frobenius_product(spec: HypersurfaceSpec, I: Iterable[int] | None = None,
                      symbolic: HWMatrix | None = None) -> HWMatrix:
    """A(lam^{p^(a-1)}) ... A(lam^p) A(lam), highest twist leftmost."""
    M = symbolic if symbolic is not None else symbolic_matrix(spec, I)
    ctx = spec.field
    lam = list(spec.coeffs)
    prod = evaluate(M, lam, ctx).entries
    for i in range(1, spec.a):
        factor = evaluate(M, frobenius_twist(lam, i), ctx).entries
        prod = mat_mul(factor, prod) if prod else prod
    return HWMatrix(M.I, M.index, prod, symbolic=False)


def field_det(matrix: Sequence[Sequence[FieldElement]]) -> FieldElement:
    """Determinant over a field by Gaussian elimination."""
    A = [list(row) for row in matrix]
    n = len(A)
    ctx = A[0][0].ctx
    det = ctx.one
    for c in range(n):
        piv = next((r for r in range(c, n) if not A[r][c].is_zero()), None)
        if piv is None:
            return ctx.zero
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            det = -det
        det = det * A[c][c]
        inv = A[c][c].inverse()
        for r in range(c + 1, n):
            if not A[r][c].is_zero():
                f = A[r][c] * inv
                A[r] = [x - f * y for x, y in zip(A[r], A[c])]
    return det


def _tpoly_det(matrix: list[list[list[FieldElement]]], ctx: FieldCtx) -> list[FieldElement]:
    n = len(matrix)
    memo: dict[tuple[int, int], list[FieldElement]] = {}

    def minor(row: int, cols: int) -> list[FieldElement]:
        if row == n:
            return [ctx.one]
        key = (row, cols)
        if key in memo:
            return memo[key]
        acc = [ctx.zero]
        sign = 1
        for c in range(n):
            if cols >> c & 1:
                entry = matrix[row][c]
                if any(not x.is_zero() for x in entry):
                    term = tpoly_mul(entry, minor(row + 1, cols & ~(1 << c)))
                    acc = tpoly_add(acc, term if sign > 0 else tpoly_scale(term, -ctx.one))
                sign = -sign
        memo[key] = acc
        return acc

    return minor(0, (1 << n) - 1)


def _interpolate(points: list[FieldElement], values: list[FieldElement]) -> list[FieldElement]:
    ctx = points[0].ctx
    result = [ctx.zero]
    for i, (ti, yi) in enumerate(zip(points, values)):
        basis = [ctx.one]
        denom = ctx.one
        for j, tj in enumerate(points):
            if j != i:
                basis = tpoly_mul(basis, [-tj, ctx.one])
                denom = denom * (ti - tj)
        result = tpoly_add(result, tpoly_scale(basis, yi * denom.inverse()))
    return result


def char_poly_rev(M: HWMatrix, cofactor_max_dim: int = COFACTOR_MAX_DIM) -> list[int]:
    """det(I - t M) as a list of F_p coefficients (constant term first).

    Up to ``cofactor_max_dim`` the determinant of I - tM is expanded by
    cofactors with polynomial entries.  Beyond that it is evaluated at dim+1
    points of an extension F_{q^e} with q^e > dim and interpolated.  Every
    coefficient must be fixed by Frobenius, i.e. lie in F_p.
    """
    if M.symbolic:
        raise ValueError("char_poly_rev needs an evaluated matrix")
    D = M.dim
    if D == 0:
        return [1]
    ctx = M.entries[0][0].ctx
    if D <= cofactor_max_dim:
        tm = [[[ctx.one if i == j else ctx.zero, -M.entries[i][j]] for j in range(D)]
              for i in range(D)]
        coeffs = tpoly_trim(_tpoly_det(tm, ctx))
    else:
        e = 1
        while ctx.size**e <= D:
            e += 1
        big = make_field(ctx.p, ctx.m * e) if e > 1 else ctx
        entries = [[embed(x, big) for x in row] for row in M.entries]
        pts = [big.from_encoding(v) for v in range(D + 1)]
        vals = []
        for t in pts:
            mat = [[(big.one if i == j else big.zero) - t * entries[i][j] for j in range(D)]
                   for i in range(D)]
            vals.append(field_det(mat))
        coeffs = tpoly_trim(_interpolate(pts, vals))
    out = []
    for k, c in enumerate(coeffs):
        if frobenius(c) != c:
            raise FrobeniusFixednessError(
                f"coefficient of t^{k} in det(I - tM) is {c.to_str()}, not in F_p")
        out.append(c.value)
    if out[0] != 1:  # pragma: no cover - constant term of det(I - tM)
        raise FrobeniusFixednessError("constant term of det(I - tM) is not 1")
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return out


def u_divisible(n: int, d: int, i: int) -> tuple[int, ...]:
    """(1, ..., 1, 0, 1, ..., 1, n/d) with the zero in position i."""
    return tuple(0 if k == i else 1 for k in range(n + 1)) + (n // d,)


def g_polynomials(spec: HypersurfaceSpec) -> list[SparseModPoly]:
    """Entries of the 1x1 matrices for I = S minus {i}, i = 0..n (needs d | n)."""
    n, d = spec.n, spec.d
    if n % d:
        raise InputError(f"g-polynomials need d | n (n={n}, d={d})")
    out = []
    for i in range(n + 1):
        I = full_set(n) - {i}
        u = u_divisible(n, d, i)
        index = enumerate_u_min(I, n, d)
        if index != [u]:  # pragma: no cover - follows from d | n
            raise AssertionError(f"U^I_min for I = S minus {i} is {index}, expected [{u}]")
        out.append(symbolic_entry(u, u, spec, I))
    return out


def twisted_norm(poly: SparseModPoly, spec: HypersurfaceSpec) -> int:
    """g(lam^{p^(a-1)}) ... g(lam) as an element of F_p."""
    ctx = spec.field
    lam = list(spec.coeffs)
    acc = ctx.one
    for i in range(spec.a):
        acc = acc * poly.evaluate(frobenius_twist(lam, i), ctx)
    if frobenius(acc) != acc:
        raise FrobeniusFixednessError(f"twisted product {acc.to_str()} is not in F_p")
    return acc.value
