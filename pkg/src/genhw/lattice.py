"""Lattice-point combinatorics on the hyperplane sum_{i<=n} u_i = d * u_{n+1}.

Index subsets I of S = {0, ..., n} are passed as any iterable of ints and
normalised to frozensets.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .errors import NuBoundViolation


def as_subset(I: Iterable[int]) -> frozenset[int]:
    return frozenset(int(i) for i in I)


def full_set(n: int) -> frozenset[int]:
    return frozenset(range(n + 1))


def mu_of(I: Iterable[int], d: int) -> int:
    """ceil(|I| / d) - 1; equals -1 for the empty set."""
    k = len(as_subset(I))
    return -(-k // d) - 1


def enumerate_u_min(I: Iterable[int], n: int, d: int) -> list[tuple[int, ...]]:
    """Points of U^I_min in ascending lexicographic order.

    u_{n+1} = mu_I + 1 and (u_0, ..., u_n) runs over the compositions of
    d*(mu_I + 1) with u_i >= 1 for i in I and u_i >= 0 otherwise.
    """
    I = as_subset(I)
    if any(i < 0 or i > n for i in I):
        raise ValueError(f"subset {sorted(I)} is not contained in {{0..{n}}}")
    last = mu_of(I, d) + 1
    total = d * last
    lower = [1 if i in I else 0 for i in range(n + 1)]
    out = []

    def rec(i, prefix, left):
        if i == n:
            if left >= lower[n]:
                out.append(tuple(prefix) + (left, last))
            return
        rest_min = sum(lower[i + 1:])
        for k in range(lower[i], left - rest_min + 1):
            prefix.append(k)
            rec(i + 1, prefix, left - k)
            prefix.pop()

    rec(0, [], total)
    return out


def in_u_min(u: Sequence[int], I: Iterable[int], n: int, d: int) -> bool:
    I = as_subset(I)
    if len(u) != n + 2 or any(x < 0 for x in u):
        return False
    if sum(u[: n + 1]) != d * u[n + 1]:
        return False
    if any(u[i] <= 0 for i in I):
        return False
    return u[n + 1] == mu_of(I, d) + 1


def solve_nu(target: Sequence[int], support: Sequence[Sequence[int]], p: int | None = None,
             check_bound: bool = False) -> list[tuple[int, ...]]:
    """All nu in N^N with sum_j nu_j * support[j] == target.

    Backtracking over j in support order, trying values from the residual
    bound downwards.  When ``check_bound`` is set, any solution with some
    nu_j >= p raises NuBoundViolation; callers set it when the target is
    p*u - v with u, v in U^I_min, where such solutions cannot exist.
    """
    target = tuple(target)
    N = len(support)
    if any(t < 0 for t in target):
        return []
    dim = len(target)
    cols = [tuple(col) for col in support]
    # cover[j][i]: some support vector with index >= j is positive in coordinate i
    cover = [[False] * dim for _ in range(N + 1)]
    for j in range(N - 1, -1, -1):
        cover[j] = [cover[j + 1][i] or cols[j][i] > 0 for i in range(dim)]
    out: list[tuple[int, ...]] = []
    nu = [0] * N
    residual = list(target)

    def rec(j):
        if j == N:
            if not any(residual):
                out.append(tuple(nu))
            return
        cv = cover[j]
        for i in range(dim):
            if residual[i] and not cv[i]:
                return
        col = cols[j]
        bound = None
        for i in range(dim):
            if col[i]:
                b = residual[i] // col[i]
                bound = b if bound is None else min(bound, b)
        if bound is None:
            bound = 0  # zero column: only nu_j = 0 keeps the solution set finite
        for val in range(bound, -1, -1):
            nu[j] = val
            if val:
                for i in range(dim):
                    residual[i] -= val * col[i]
            rec(j + 1)
            if val:
                for i in range(dim):
                    residual[i] += val * col[i]
        nu[j] = 0

    rec(0)
    if check_bound:
        if p is None:
            raise ValueError("check_bound requires p")
        for sol in out:
            if any(x >= p for x in sol):
                raise NuBoundViolation(
                    f"solution nu={list(sol)} of target {list(target)} has an entry >= p={p}")
    return out


def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def hermite_rows(rows: list[list[int]]) -> list[list[int]]:
    """Row Hermite normal form of an integer matrix (zero rows dropped)."""
    A = [list(r) for r in rows]
    if not A:
        return []
    ncols = len(A[0])
    r = 0
    for c in range(ncols):
        # gather gcd of column c (rows >= r) into row r
        for i in range(r + 1, len(A)):
            if A[i][c]:
                g, x, y = _ext_gcd(A[r][c], A[i][c])
                a_r, a_i = A[r][c] // g, A[i][c] // g
                new_r = [x * s + y * t for s, t in zip(A[r], A[i])]
                new_i = [a_r * t - a_i * s for s, t in zip(A[r], A[i])]
                A[r], A[i] = new_r, new_i
        if r < len(A) and A[r][c]:
            if A[r][c] < 0:
                A[r] = [-x for x in A[r]]
            piv = A[r][c]
            for i in range(r):
                f = A[i][c] // piv
                if f:
                    A[i] = [s - f * t for s, t in zip(A[i], A[r])]
            r += 1
            if r == len(A):
                break
    return [row for row in A if any(row)]


def relation_lattice_basis(support: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    """Z-basis of L = {l in Z^N : sum_j l_j a_j^+ = 0}.

    Unimodular integer column operations bring the (n+2) x N matrix with
    columns a_j^+ to column echelon form while tracking the transform; the
    transform columns over zero columns span the kernel.  The result is put
    in row Hermite normal form.
    """
    N = len(support)
    if N == 0:
        return []
    dim = len(support[0])
    # columns carry (top: matrix column, bottom: transform column)
    cols = [list(support[j]) + [1 if k == j else 0 for k in range(N)] for j in range(N)]
    pivot = 0
    for row in range(dim):
        if pivot >= N:
            break
        for j in range(pivot + 1, N):
            if cols[j][row]:
                g, x, y = _ext_gcd(cols[pivot][row], cols[j][row])
                a_p, a_j = cols[pivot][row] // g, cols[j][row] // g
                cp, cj = cols[pivot], cols[j]
                cols[pivot] = [x * s + y * t for s, t in zip(cp, cj)]
                cols[j] = [a_p * t - a_j * s for s, t in zip(cp, cj)]
        if cols[pivot][row]:
            pivot += 1
    kernel = [c[dim:] for c in cols[pivot:]]
    for k in kernel:
        top = [sum(k[j] * support[j][i] for j in range(N)) for i in range(dim)]
        if any(top):  # pragma: no cover - column reduction guarantees this
            raise AssertionError("kernel vector fails the defining relation")
    return [tuple(r) for r in hermite_rows(kernel)]


def is_relation(l: Sequence[int], support: Sequence[Sequence[int]]) -> bool:
    dim = len(support[0])
    return all(sum(l[j] * support[j][i] for j in range(len(support))) == 0 for i in range(dim))
