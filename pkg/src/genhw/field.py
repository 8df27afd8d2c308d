"""Exact arithmetic in F_p, F_q = F_{p^a} and the extensions F_{q^k}.

An element of F_{p^m} is stored reduced, as the integer ``sum(c_i * p**i)``
where ``c_0 + c_1 x + ... + c_{m-1} x^{m-1}`` is its representative modulo
the field's defining polynomial.  Integer order on this encoding is the
lexicographic order on ``(c_{m-1}, ..., c_0)``.

The defining polynomial for ``(p, m)`` is the lexicographically smallest
monic irreducible of degree ``m`` (coefficients listed from ``x^{m-1}`` down
to the constant term), so every run picks the same one.

``LogTables`` gives a vectorised (numpy) view of the same field, used by the
point counters.
"""

from __future__ import annotations

import functools
import itertools
import re
from typing import Iterator, Sequence

import numpy as np

from .errors import GuardExceeded, InputError

DEFAULT_SIZE_GUARD = 1 << 20


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_factors(n: int) -> list[int]:
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


# -- dense polynomials over F_p, coefficient lists low degree first ----------

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _polymod(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    a = _trim(list(a))
    db = len(b) - 1
    inv_lead = pow(b[-1], p - 2, p)
    while len(a) - 1 >= db and a:
        shift = len(a) - 1 - db
        c = a[-1] * inv_lead % p
        for i, bi in enumerate(b):
            a[shift + i] = (a[shift + i] - c * bi) % p
        _trim(a)
    return a


def _monic_polys(p: int, deg: int) -> Iterator[list[int]]:
    """Monic polynomials of degree ``deg`` in lexicographic order (high to low)."""
    for lower in itertools.product(range(p), repeat=deg):
        # lower = (c_{deg-1}, ..., c_0)
        yield list(reversed(lower)) + [1]


def is_irreducible(poly: Sequence[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree <= deg/2."""
    deg = len(poly) - 1
    if deg < 1:
        return False
    for k in range(1, deg // 2 + 1):
        for cand in _monic_polys(p, k):
            if not _polymod(poly, cand, p):
                return False
    return True


def smallest_irreducible(p: int, m: int) -> tuple[int, ...]:
    for cand in _monic_polys(p, m):
        if is_irreducible(cand, p):
            return tuple(cand)
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


class FieldCtx:
    """The finite field F_{p^m} with a fixed defining polynomial.

    Immutable; obtain instances through :func:`make_field`.
    """

    __slots__ = ("p", "m", "modulus", "size", "_reduce_rows", "__weakref__")

    def __init__(self, p: int, m: int, modulus: Sequence[int]):
        self.p = p
        self.m = m
        self.modulus = tuple(modulus)
        self.size = p**m
        # x^(m+i) mod modulus, for folding back high product coefficients
        rows = []
        # x^m = -(c_0 + ... + c_{m-1} x^{m-1})
        cur = [(-c) % p for c in self.modulus[:m]]
        for _ in range(max(m - 1, 0)):
            rows.append(cur)
            top = cur[-1]
            nxt = [0] + cur[:-1]
            cur = [(nxt[i] + top * (-self.modulus[i])) % p for i in range(m)]
        self._reduce_rows = rows

    def __repr__(self):
        return f"FieldCtx(p={self.p}, m={self.m}, modulus={self.modulus_str()})"

    def __eq__(self, other):
        return isinstance(other, FieldCtx) and (self.p, self.m, self.modulus) == (
            other.p, other.m, other.modulus)

    def __hash__(self):
        return hash((self.p, self.m, self.modulus))

    def modulus_str(self) -> str:
        return poly_to_str(self.modulus, "x")

    # -- construction of elements
    @property
    def zero(self) -> "FieldElement":
        return FieldElement(self, 0)

    @property
    def one(self) -> "FieldElement":
        return FieldElement(self, 1)

    @property
    def gen(self) -> "FieldElement":
        """Class of x modulo the defining polynomial."""
        return self.from_coeffs([0, 1])

    def from_int(self, k: int) -> "FieldElement":
        """Image of the integer ``k`` in the prime subfield."""
        return FieldElement(self, k % self.p)

    def from_coeffs(self, coeffs: Sequence[int]) -> "FieldElement":
        c = [x % self.p for x in coeffs]
        if len(c) > self.m:
            c = _polymod(c, self.modulus, self.p)
        return FieldElement(self, self._encode(c))

    def from_encoding(self, value: int) -> "FieldElement":
        if not 0 <= value < self.size:
            raise InputError(f"encoding {value} out of range for F_{self.size}")
        return FieldElement(self, value)

    def _encode(self, coeffs: Sequence[int]) -> int:
        v = 0
        for c in reversed(coeffs):
            v = v * self.p + c
        return v

    def _decode(self, value: int) -> list[int]:
        p = self.p
        out = []
        for _ in range(self.m):
            value, r = divmod(value, p)
            out.append(r)
        return out

    def _mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        p, m = self.p, self.m
        if m == 1:
            return a * b % p
        x = self._decode(a)
        y = self._decode(b)
        prod = [0] * (2 * m - 1)
        for i, xi in enumerate(x):
            if xi:
                for j, yj in enumerate(y):
                    prod[i + j] += xi * yj
        res = prod[:m]
        for i, row in enumerate(self._reduce_rows):
            c = prod[m + i]
            if c:
                for k in range(m):
                    res[k] += c * row[k]
        return self._encode([r % p for r in res])

    def _add(self, a: int, b: int) -> int:
        if self.m == 1:
            return (a + b) % self.p
        x = self._decode(a)
        y = self._decode(b)
        return self._encode([(s + t) % self.p for s, t in zip(x, y)])

    def _neg(self, a: int) -> int:
        if self.m == 1:
            return (-a) % self.p
        return self._encode([(-c) % self.p for c in self._decode(a)])

    def _pow(self, a: int, e: int) -> int:
        result = 1
        base = a
        while e:
            if e & 1:
                result = self._mul(result, base)
            base = self._mul(base, base)
            e >>= 1
        return result

    def mul_matrix(self, y: "FieldElement") -> np.ndarray:
        """Matrix of z -> y*z on coefficient vectors (column i is y*x^i)."""
        cols = []
        xi = self.one
        for _ in range(self.m):
            cols.append((y * xi).coeffs)
            xi = xi * self.gen
        return np.array(cols, dtype=np.int64).T


class FieldElement:
    __slots__ = ("ctx", "value")

    def __init__(self, ctx: FieldCtx, value: int):
        self.ctx = ctx
        self.value = value

    @property
    def coeffs(self) -> tuple[int, ...]:
        return tuple(self.ctx._decode(self.value))

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.ctx is not self.ctx and other.ctx != self.ctx:
                raise InputError("mixing elements of different fields")
            return other.value
        if isinstance(other, int):
            return other % self.ctx.p
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.ctx, self.ctx._add(self.value, o))

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.ctx, self.ctx._neg(self.value))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.ctx, self.ctx._add(self.value, self.ctx._neg(o)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.ctx, self.ctx._mul(self.value, o))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return FieldElement(self.ctx, self.ctx._pow(self.value, e))

    def inverse(self) -> "FieldElement":
        if self.value == 0:
            raise ZeroDivisionError("inverse of zero in a finite field")
        return FieldElement(self.ctx, self.ctx._pow(self.value, self.ctx.size - 2))

    def __truediv__(self, other):
        if isinstance(other, int):
            other = self.ctx.from_int(other)
        return self * other.inverse()

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.ctx == other.ctx and self.value == other.value
        if isinstance(other, int):
            return self.value == other % self.ctx.p
        return NotImplemented

    def __hash__(self):
        return hash((self.ctx.p, self.ctx.m, self.value))

    def __bool__(self):
        return self.value != 0

    def is_zero(self) -> bool:
        return self.value == 0

    def in_prime_field(self) -> bool:
        return self.value < self.ctx.p

    def __int__(self):
        if not self.in_prime_field():
            raise ValueError(f"{self} is not in the prime field")
        return self.value

    def __repr__(self):
        return f"FieldElement({self.to_str()!r}, F_{self.ctx.size})"

    def to_str(self, symbol: str = "g") -> str:
        return poly_to_str(self.coeffs, symbol)


def poly_to_str(coeffs: Sequence[int], symbol: str) -> str:
    """Render ``c_0 + c_1 s + ...`` highest degree first, e.g. ``g^2+2*g+1``."""
    parts = []
    for e in range(len(coeffs) - 1, -1, -1):
        c = coeffs[e]
        if c == 0:
            continue
        if e == 0:
            parts.append(str(c))
        else:
            mono = symbol if e == 1 else f"{symbol}^{e}"
            parts.append(mono if c == 1 else f"{c}*{mono}")
    return "+".join(parts) if parts else "0"


_TERM_RE = re.compile(r"^(?:(\d+)\*?)?(g)(?:\^(\d+))?$|^(\d+)$")


def parse_element(text: str, ctx: FieldCtx) -> FieldElement:
    """Parse an expression such as ``g^2+1`` or ``-3`` into ``ctx``.

    ``g`` denotes the class of x modulo the defining polynomial; it is only
    accepted when ``ctx`` is a proper extension of its prime field.
    """
    s = "".join(str(text).split())
    if not s:
        raise InputError("empty coefficient")
    if s[0] not in "+-":
        s = "+" + s
    pieces = re.findall(r"([+-])([^+-]*)", s)
    if "".join(sign + body for sign, body in pieces) != s:
        raise InputError(f"malformed coefficient {text!r}")
    coeffs: dict[int, int] = {}
    for sign, body in pieces:
        m = _TERM_RE.match(body)
        if not m:
            raise InputError(f"malformed coefficient {text!r}")
        if m.group(4) is not None:
            c, e = int(m.group(4)), 0
        else:
            if ctx.m == 1:
                raise InputError(
                    f"coefficient {text!r} uses the generator g but the base "
                    f"field F_{ctx.p} is prime")
            c = int(m.group(1)) if m.group(1) is not None else 1
            e = int(m.group(3)) if m.group(3) is not None else 1
        if sign == "-":
            c = -c
        coeffs[e] = coeffs.get(e, 0) + c
    result = ctx.zero
    g = ctx.gen
    for e, c in coeffs.items():
        result = result + (g**e if e else ctx.one) * ctx.from_int(c)
    return result


@functools.lru_cache(maxsize=None)
def _build_field(p: int, m: int) -> FieldCtx:
    if m == 1:
        return FieldCtx(p, 1, (0, 1))
    modulus = smallest_irreducible(p, m)
    return FieldCtx(p, m, modulus)


def make_field(p: int, m: int, guard: int = DEFAULT_SIZE_GUARD) -> FieldCtx:
    """F_{p^m} with the deterministic defining polynomial."""
    if not isinstance(p, int) or not is_prime(p):
        raise InputError(f"characteristic {p!r} is not prime")
    if not isinstance(m, int) or m < 1:
        raise InputError(f"extension degree {m!r} must be a positive integer")
    if p**m > guard:
        raise GuardExceeded(f"field size {p}^{m} exceeds the guard {guard}")
    return _build_field(p, m)


def frobenius(x: FieldElement) -> FieldElement:
    """x -> x^p."""
    return x ** x.ctx.p


def all_elements(ctx: FieldCtx, guard: int = DEFAULT_SIZE_GUARD) -> list[FieldElement]:
    if ctx.size > guard:
        raise GuardExceeded(f"cannot enumerate F_{ctx.size}: guard {guard}")
    return [FieldElement(ctx, v) for v in range(ctx.size)]


def _eval_poly(coeffs: Sequence[int], x: FieldElement) -> FieldElement:
    acc = x.ctx.zero
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


@functools.lru_cache(maxsize=None)
def _embedding_images(src: FieldCtx, tgt: FieldCtx) -> tuple[FieldElement, ...]:
    """Images of 1, x, ..., x^{m-1} of ``src`` inside ``tgt``."""
    if src.m == 1:
        return (tgt.one,)
    root = None
    for v in range(tgt.size):
        cand = FieldElement(tgt, v)
        if _eval_poly(src.modulus, cand).is_zero():
            root = cand
            break
    if root is None:  # pragma: no cover - guaranteed by degree divisibility
        raise AssertionError("no root of the source modulus in the target field")
    images = [tgt.one]
    for _ in range(src.m - 1):
        images.append(images[-1] * root)
    return tuple(images)


def embed(x: FieldElement, target: FieldCtx) -> FieldElement:
    """Image of ``x`` under the fixed embedding F_{p^s} -> F_{p^t} (s | t)."""
    src = x.ctx
    if src.p != target.p or target.m % src.m:
        raise InputError(
            f"cannot embed F_{src.p}^{src.m} into F_{target.p}^{target.m}")
    if src == target:
        return x
    images = _embedding_images(src, target)
    acc = target.zero
    for c, img in zip(x.coeffs, images):
        if c:
            acc = acc + img * c
    return acc


def primitive_element(ctx: FieldCtx) -> FieldElement:
    """Smallest (by encoding) generator of the multiplicative group."""
    order = ctx.size - 1
    if order == 1:
        return ctx.one
    factors = prime_factors(order)
    for v in range(2 if ctx.m == 1 else ctx.p, ctx.size):
        g = FieldElement(ctx, v)
        if all(ctx._pow(v, order // f) != 1 for f in factors):
            return g
    raise AssertionError("no primitive element")  # pragma: no cover


class LogTables:
    """Vectorised arithmetic on F_Q via discrete logarithms.

    Elements are coded as ``0`` for zero and ``1 + log_g(x)`` otherwise
    ("log codes"), with ``g`` the primitive element of :func:`primitive_element`.
    Addition goes through the Zech table ``1 + g^i``.
    """

    def __init__(self, ctx: FieldCtx):
        self.ctx = ctx
        self.p = p = ctx.p
        self.Q = Q = ctx.size
        self.M = M = Q - 1
        g = primitive_element(ctx)
        weights = p ** np.arange(ctx.m, dtype=np.int64)
        # powers of g by doubling blocks: block[L:2L] = block[:L] * g^L
        digits = np.zeros((M, ctx.m), dtype=np.int64)
        digits[0] = ctx.one.coeffs
        filled = 1
        gl = g
        while filled < M:
            take = min(filled, M - filled)
            mat = ctx.mul_matrix(gl)
            digits[filled:filled + take] = (digits[:take] @ mat.T) % p
            filled += take
            gl = gl * gl
        self.exp = digits @ weights
        self.log = np.full(Q, -1, dtype=np.int64)
        self.log[self.exp] = np.arange(M, dtype=np.int64)
        if np.any(self.log[1:] < 0):  # pragma: no cover
            raise AssertionError("primitive element does not generate F_Q^*")
        low = self.exp % p
        one_plus = self.exp - low + (low + 1) % p
        self.zech = np.where(one_plus == 0, 0, self.log[one_plus] + 1)
        self.half = M // 2

    # conversions
    def code(self, x: FieldElement) -> int:
        return 0 if x.value == 0 else int(self.log[x.value]) + 1

    def element(self, c: int) -> FieldElement:
        return FieldElement(self.ctx, 0 if c == 0 else int(self.exp[c - 1]))

    # array operations on log codes
    def mul(self, a, b):
        r = (a + b - 2) % self.M + 1
        return np.where((a == 0) | (b == 0), 0, r)

    def add(self, a, b):
        diff = (b - a) % self.M
        z = self.zech[diff]
        r = np.where(z == 0, 0, (a + z - 2) % self.M + 1)
        return np.where(a == 0, b, np.where(b == 0, a, r))

    def neg(self, a):
        if self.p == 2:
            return a
        return np.where(a == 0, 0, (a - 1 + self.half) % self.M + 1)

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def inv(self, a):
        return np.where(a == 0, 0, (-(a - 1)) % self.M + 1)

    def power(self, a, e: int):
        if e == 0:
            return np.ones_like(a)
        return np.where(a == 0, 0, ((a - 1) * e) % self.M + 1)


@functools.lru_cache(maxsize=16)
def log_tables(ctx: FieldCtx) -> LogTables:
    return LogTables(ctx)
