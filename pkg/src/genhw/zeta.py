"""Zeta function of X from point counts, and its reduction mod p.

From N_1..N_K the series Z(t) = exp(sum N_k t^k / k) is built exactly by
m z_m = sum_{k=1}^m N_k z_{m-k}.  The nontrivial factor is

    P(t) = (Z(t) * prod_{i=0}^{n-1} (1 - q^i t))^((-1)^n),

truncated at t^K.  Its coefficients c_m satisfy v_p(c_m) >= a*mu*m, and
(c_m / q^(mu*m)) mod p is the series compared against det(I - tA).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .counting import count_points
from .errors import AxViolation, InexactDivisionError, InputError
from .instance import HypersurfaceSpec


@dataclass(frozen=True)
class ExactSeries:
    """Integer power series truncated at t^order (coeffs[0..order])."""

    coeffs: tuple[int, ...]

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1


@dataclass(frozen=True)
class SeriesModP:
    coeffs: tuple[int, ...]
    p: int

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1


def compute_counts(spec: HypersurfaceSpec, order: int, method: str = "auto",
                   workers: int = 1) -> list[int]:
    """[N_1, ..., N_order]."""
    if order < 1:
        raise InputError("series order must be >= 1")
    return [count_points(spec, k, method=method, workers=workers) for k in range(1, order + 1)]


def zeta_series(counts: Sequence[int]) -> ExactSeries:
    """Z(t) mod t^(K+1) from N_1..N_K."""
    z = [1]
    for m in range(1, len(counts) + 1):
        s = sum(counts[k - 1] * z[m - k] for k in range(1, m + 1))
        val, rem = divmod(s, m)
        if rem:
            raise InexactDivisionError(
                f"{s} is not divisible by {m} at t^{m}; the counts are not those of a variety")
        z.append(val)
    return ExactSeries(tuple(z))


def _mul(a: Sequence[int], b: Sequence[int], order: int) -> list[int]:
    out = [0] * (order + 1)
    for i, x in enumerate(a[: order + 1]):
        if x:
            for j, y in enumerate(b[: order + 1 - i]):
                out[i + j] += x * y
    return out


def _inv(a: Sequence[int], order: int) -> list[int]:
    """Inverse of an integer series with constant term 1."""
    if a[0] != 1:
        raise ValueError("series must start with 1")
    a = list(a) + [0] * (order + 1 - len(a))
    out = [1] + [0] * order
    for m in range(1, order + 1):
        out[m] = -sum(a[k] * out[m - k] for k in range(1, m + 1))
    return out


def p_series(z: ExactSeries, n: int, q: int) -> ExactSeries:
    """P(t) = (Z(t) prod_{i<n} (1 - q^i t))^((-1)^n) to the order of Z."""
    K = z.order
    w = list(z.coeffs)
    for i in range(n):
        w = _mul(w, [1, -(q**i)], K)
    if n % 2:
        w = _inv(w, K)
    return ExactSeries(tuple(w))


def _vp(x: int, p: int) -> int | None:
    if x == 0:
        return None
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


def scale_and_reduce(P: ExactSeries, spec: HypersurfaceSpec) -> SeriesModP:
    """(c_m / q^(mu m)) mod p, after checking v_p(c_m) >= a mu m."""
    p, q, mu = spec.p, spec.q, spec.mu
    out = []
    for m, c in enumerate(P.coeffs):
        need = spec.a * mu * m
        v = _vp(c, p)
        if v is not None and v < need:
            raise AxViolation(
                f"v_p of the t^{m} coefficient {c} is {v} < a*mu*m = {need}")
        out.append((c // q ** (mu * m)) % p)
    return SeriesModP(tuple(out), p)


def reduced_p_series(spec: HypersurfaceSpec, order: int, method: str = "auto",
                     workers: int = 1) -> tuple[list[int], ExactSeries, SeriesModP]:
    """Counts, exact P(t) and its scaled reduction, all to t^order."""
    counts = compute_counts(spec, order, method=method, workers=workers)
    P = p_series(zeta_series(counts), spec.n, spec.q)
    return counts, P, scale_and_reduce(P, spec)


def pad(coeffs: Sequence[int], order: int) -> list[int]:
    """Truncate or zero-pad a coefficient list to t^order."""
    c = list(coeffs[: order + 1])
    return c + [0] * (order + 1 - len(c))
