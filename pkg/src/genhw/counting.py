"""Exact projective point counts N_k = #X(F_{q^k}).

Four counters, all exact and independent of the Hasse-Witt machinery:

``reference``  pure-Python enumeration of F_Q^{n+1} with FieldElement
               arithmetic; slow, used to validate the others.
``brute``      the same enumeration vectorised with log tables, in blocks by
               the value of x_n, optionally spread over worker processes.
``fibered``    for each point x' of P^{n-1}, the number of distinct roots in
               F_Q of the univariate f(x', T) is deg gcd(f(x', T), T^Q - T),
               read off as D - rank of multiplication by T^Q - T modulo f.
``quadric``    degree 2, odd characteristic: diagonalise the Gram matrix
               over F_q and use the standard count for a diagonal quadratic
               form of given rank and discriminant.

In every case the affine count of nonzero solutions is divisible by Q - 1
and N_k is the quotient; the division is checked.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from typing import Sequence

import numpy as np

from .errors import GuardExceeded, InexactDivisionError, InputError
from .field import FieldElement, LogTables, embed, log_tables, make_field
from .instance import HypersurfaceSpec

BRUTE_AUTO_LIMIT = 1 << 18       # Q^(n+1) up to which "auto" enumerates everything
BRUTE_GUARD = 1 << 26
REFERENCE_GUARD = 1 << 15
FIBER_GUARD = 1 << 21            # number of fibres (points of P^(n-1)) for "fibered"
FIELD_GUARD = 1 << 20
BATCH = 1 << 15

METHODS = ("auto", "reference", "brute", "fibered", "quadric")


def _ext_field(spec: HypersurfaceSpec, k: int, guard: int = FIELD_GUARD):
    if k < 1:
        raise InputError("k must be >= 1")
    return make_field(spec.p, spec.a * k, guard=guard)


def _projective(affine_nonzero: int, Q: int) -> int:
    N, r = divmod(affine_nonzero, Q - 1)
    if r:
        raise InexactDivisionError(
            f"{affine_nonzero} nonzero affine zeros is not divisible by Q - 1 = {Q - 1}")
    return N


# -- reference --------------------------------------------------------------

def count_reference(spec: HypersurfaceSpec, k: int = 1, guard: int = REFERENCE_GUARD) -> int:
    F = _ext_field(spec, k)
    Q = F.size
    if Q ** (spec.n + 1) > guard:
        raise GuardExceeded(f"reference enumeration of {Q}^{spec.n + 1} points exceeds {guard}")
    lam = [embed(c, F) for c in spec.coeffs]
    elements = [FieldElement(F, v) for v in range(Q)]
    zeros = 0
    for x in itertools.product(elements, repeat=spec.n + 1):
        acc = F.zero
        for c, e in zip(lam, spec.exponents):
            term = c
            for xi, ei in zip(x, e):
                if ei:
                    term = term * xi**ei
            acc = acc + term
        if acc.is_zero():
            zeros += 1
    return _projective(zeros - 1, Q)


# -- vectorised helpers -------------------------------------------------------

def _lambda_codes(spec: HypersurfaceSpec, k: int, T: LogTables) -> list[int]:
    return [T.code(embed(c, T.ctx)) for c in spec.coeffs]


def _eval_terms(T: LogTables, lam: Sequence[int], exponents, coords) -> np.ndarray:
    """f at a batch of points; coords[i] holds the log codes of x_i."""
    shape = np.shape(coords[0])
    total = np.zeros(shape, dtype=np.int64)
    powers: dict[tuple[int, int], np.ndarray] = {}
    for c, e in zip(lam, exponents):
        if c == 0:
            continue
        term = np.full(shape, c, dtype=np.int64)
        for i, ei in enumerate(e):
            if ei:
                key = (i, ei)
                if key not in powers:
                    powers[key] = T.power(coords[i], ei)
                term = T.mul(term, powers[key])
        total = T.add(total, term)
    return total


# -- brute --------------------------------------------------------------------

def _brute_blocks(p: int, m: int, n: int, exponents, lam_codes, blocks) -> int:
    T = log_tables(make_field(p, m, guard=FIELD_GUARD))
    Q = T.Q
    idx = np.arange(Q**n, dtype=np.int64)
    coords = [(idx // Q**i) % Q for i in range(n)]
    zeros = 0
    for b in blocks:
        last = np.full(Q**n, b, dtype=np.int64)
        vals = _eval_terms(T, lam_codes, exponents, coords + [last])
        zeros += int(np.count_nonzero(vals == 0))
    return zeros


def count_brute(spec: HypersurfaceSpec, k: int = 1, workers: int = 1,
                guard: int = BRUTE_GUARD) -> int:
    F = _ext_field(spec, k)
    Q = F.size
    if Q ** (spec.n + 1) > guard:
        raise GuardExceeded(f"enumeration of {Q}^{spec.n + 1} points exceeds {guard}")
    T = log_tables(F)
    lam = _lambda_codes(spec, k, T)
    args = (F.p, F.m, spec.n, spec.exponents, lam)
    blocks = list(range(Q))
    if workers <= 1:
        zeros = _brute_blocks(*args, blocks)
    else:
        chunks = [blocks[i::workers] for i in range(workers)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            zeros = sum(pool.map(_brute_blocks, *zip(*[args + (c,) for c in chunks])))
    return _projective(zeros - 1, Q)


# -- fibered ------------------------------------------------------------------

def _poly_mul_T(T: LogTables, a: list, monic: list) -> list:
    """a * T modulo the monic polynomial T^D + sum monic[j] T^j."""
    top = a[-1]
    out = [np.zeros_like(top)] + a[:-1]
    return [T.sub(out[j], T.mul(top, monic[j])) for j in range(len(a))]


def _poly_mulmod(T: LogTables, a: list, b: list, monic: list) -> list:
    D = len(monic)
    prod = [np.zeros_like(a[0]) for _ in range(2 * D - 1)]
    for i in range(D):
        for j in range(D):
            prod[i + j] = T.add(prod[i + j], T.mul(a[i], b[j]))
    for top in range(2 * D - 2, D - 1, -1):
        c = prod[top]
        for j in range(D):
            prod[top - D + j] = T.sub(prod[top - D + j], T.mul(c, monic[j]))
    return prod[:D]


def _batch_rank(T: LogTables, A: np.ndarray) -> np.ndarray:
    """Ranks of a batch of square matrices (shape B x R x C) over F_Q."""
    A = A.copy()
    B, R, C = A.shape
    rank = np.zeros(B, dtype=np.int64)
    rows = np.arange(R)
    for c in range(C):
        cand = (A[:, :, c] != 0) & (rows[None, :] >= rank[:, None])
        has = cand.any(axis=1)
        if not has.any():
            continue
        b = np.nonzero(has)[0]
        piv = np.argmax(cand[b], axis=1)
        r0 = rank[b]
        tmp = A[b, r0, :].copy()
        A[b, r0, :] = A[b, piv, :]
        A[b, piv, :] = tmp
        pivrow = A[b, r0, :]
        pinv = T.inv(pivrow[:, c])
        for r in range(R):
            sel = r > r0
            if not sel.any():
                continue
            bs = b[sel]
            factor = T.mul(A[bs, r, c], pinv[sel])
            A[bs, r, :] = T.sub(A[bs, r, :], T.mul(factor[:, None], pivrow[sel]))
        rank[b] += 1
    return rank


def distinct_root_counts(T: LogTables, coeffs: Sequence[np.ndarray]) -> np.ndarray:
    """Number of distinct roots in F_Q of each polynomial sum_j coeffs[j] T^j.

    The zero polynomial has Q roots.
    """
    coeffs = [np.asarray(c, dtype=np.int64) for c in coeffs]
    B = len(coeffs[0])
    deg = np.full(B, -1, dtype=np.int64)
    for j, c in enumerate(coeffs):
        deg = np.where(c != 0, j, deg)
    counts = np.zeros(B, dtype=np.int64)
    counts[deg == -1] = T.Q
    counts[deg == 1] = 1
    for D in range(2, len(coeffs)):
        sel = np.nonzero(deg == D)[0]
        if not len(sel):
            continue
        c = [coeffs[j][sel] for j in range(D + 1)]
        inv_lead = T.inv(c[D])
        monic = [T.mul(c[j], inv_lead) for j in range(D)]
        one = np.ones(len(sel), dtype=np.int64)
        zero = np.zeros(len(sel), dtype=np.int64)
        h = [one] + [zero] * (D - 1)
        for bit in bin(T.Q)[2:]:
            h = _poly_mulmod(T, h, h, monic)
            if bit == "1":
                h = _poly_mul_T(T, h, monic)
        r = list(h)
        r[1] = T.sub(r[1], one)  # T^Q - T
        cols = []
        cur = r
        for _ in range(D):
            cols.append(np.stack(cur, axis=1))
            cur = _poly_mul_T(T, cur, monic)
        mat = np.stack(cols, axis=2)  # B x D(rows: coefficient) x D(cols: basis)
        counts[sel] = D - _batch_rank(T, mat)
    return counts


def _fibres(n: int, Q: int):
    """Normalised points of P^(n-1) as log-code arrays, in batches."""
    for lead in range(n):
        free = n - 1 - lead
        total = Q**free
        for start in range(0, total, BATCH):
            idx = np.arange(start, min(total, start + BATCH), dtype=np.int64)
            coords = []
            for i in range(n):
                if i < lead:
                    coords.append(np.zeros(len(idx), dtype=np.int64))
                elif i == lead:
                    coords.append(np.ones(len(idx), dtype=np.int64))
                else:
                    coords.append((idx // Q ** (i - lead - 1)) % Q)
            yield coords


def count_fibered(spec: HypersurfaceSpec, k: int = 1, guard: int = FIBER_GUARD) -> int:
    F = _ext_field(spec, k)
    Q = F.size
    n, d = spec.n, spec.d
    nfib = (Q**n - 1) // (Q - 1)
    if nfib > guard:
        raise GuardExceeded(f"{nfib} fibres exceed the guard {guard}")
    T = log_tables(F)
    lam = _lambda_codes(spec, k, T)
    by_power: dict[int, list[tuple[int, tuple[int, ...]]]] = {}
    for c, e in zip(lam, spec.exponents):
        by_power.setdefault(e[n], []).append((c, e[:n]))
    total = 0
    for coords in _fibres(n, Q):
        coeffs = []
        for j in range(d + 1):
            terms = by_power.get(j, [])
            coeffs.append(_eval_terms(T, [c for c, _ in terms], [e for _, e in terms], coords))
        total += int(distinct_root_counts(T, coeffs).sum())
    # the point (0 : ... : 0 : 1)
    top = [c for c, e in zip(lam, spec.exponents) if e[n] == d]
    if not top or top[0] == 0:
        total += 1
    return total


# -- quadric ------------------------------------------------------------------

def _quadratic_character(x: FieldElement) -> int:
    q = x.ctx.size
    v = x ** ((q - 1) // 2)
    return 1 if v == 1 else -1


def diagonalize_quadratic_form(spec: HypersurfaceSpec) -> list[FieldElement]:
    """Nonzero diagonal entries of a diagonalisation of f over F_q (odd p)."""
    if spec.d != 2 or spec.p == 2:
        raise InputError("quadric counting needs d = 2 and odd p")
    F = spec.field
    size = spec.n + 1
    half = F.from_int(2).inverse()
    A = [[F.zero] * size for _ in range(size)]
    for c, e in zip(spec.coeffs, spec.exponents):
        idx = [i for i, x in enumerate(e) for _ in range(x)]
        i, j = idx
        if i == j:
            A[i][i] = A[i][i] + c
        else:
            A[i][j] = A[i][j] + c * half
            A[j][i] = A[j][i] + c * half
    active = list(range(size))
    pivots = []
    while active:
        i = next((i for i in active if not A[i][i].is_zero()), None)
        if i is None:
            pair = next(((i, j) for i in active for j in active
                         if i != j and not A[i][j].is_zero()), None)
            if pair is None:
                break
            i, j = pair
            # e_i <- e_i + e_j makes the (i, i) entry 2 A_ij != 0
            for k in range(size):
                A[i][k] = A[i][k] + A[j][k]
            for k in range(size):
                A[k][i] = A[k][i] + A[k][j]
        a = A[i][i]
        pivots.append(a)
        inv = a.inverse()
        rest = [k for k in active if k != i]
        for k in rest:
            f = A[k][i] * inv
            if f.is_zero():
                continue
            for l in rest:
                A[k][l] = A[k][l] - f * A[i][l]
        for k in rest:
            A[k][i] = F.zero
            A[i][k] = F.zero
        active = rest
    return pivots


def count_quadric(spec: HypersurfaceSpec, k: int = 1) -> int:
    pivots = diagonalize_quadratic_form(spec)
    q = spec.q
    Q = q**k
    r = len(pivots)
    if r == 0:
        raise InputError("the quadratic form is identically zero")
    if r % 2:
        zr = Q ** (r - 1)
    else:
        F = spec.field
        disc = F.one
        for x in pivots:
            disc = disc * x
        if (r // 2) % 2:
            disc = -disc
        eta = _quadratic_character(disc) ** k
        zr = Q ** (r - 1) + (Q - 1) * Q ** (r // 2 - 1) * eta
    affine = Q ** (spec.n + 1 - r) * zr
    return _projective(affine - 1, Q)


# -- dispatch -----------------------------------------------------------------

def choose_method(spec: HypersurfaceSpec, k: int) -> str:
    Q = spec.q**k
    if Q ** (spec.n + 1) <= BRUTE_AUTO_LIMIT:
        return "brute"
    if spec.d == 2 and spec.p != 2:
        return "quadric"
    if Q <= FIELD_GUARD and (Q**spec.n - 1) // (Q - 1) <= FIBER_GUARD:
        return "fibered"
    raise GuardExceeded(
        f"no counter within guards for n={spec.n}, d={spec.d}, q^k={spec.q}^{k}")


def count_points(spec: HypersurfaceSpec, k: int = 1, method: str = "auto",
                 workers: int = 1) -> int:
    """N_k = #X(F_{q^k}) for the projective hypersurface f = 0."""
    if method == "auto":
        method = choose_method(spec, k)
    if method == "reference":
        return count_reference(spec, k)
    if method == "brute":
        return count_brute(spec, k, workers=workers)
    if method == "fibered":
        return count_fibered(spec, k)
    if method == "quadric":
        return count_quadric(spec, k)
    raise InputError(f"unknown counting method {method!r}")
