"""Checkers comparing the Hasse-Witt side against independent computations.

Every checker returns a :class:`Report`.  A failing report always carries a
witness: the first mismatching coefficient, entry, monomial or vector.
"""

from __future__ import annotations

import math
import random
import time
import warnings
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

from .errors import InputError, InternalInvariantError
from .field import FieldElement, make_field
from .hwmatrix import (
    char_poly_rev, evaluate, field_det, frobenius_product, g_polynomials, symbolic_entry,
    symbolic_matrix, twisted_norm,
)
from .instance import HypersurfaceSpec, monomials
from .lattice import (
    as_subset, enumerate_u_min, full_set, in_u_min, is_relation, mu_of, relation_lattice_basis,
)
from .polys import SparseModPoly, poly_det, series_inv_mod_p, series_mul_mod_p
from .zeta import pad, reduced_p_series

PASS, FAIL, SKIP = "pass", "fail", "skip"
SZ_EXTENSION_DEGREE = 6
DEFAULT_TRIALS = 20
SYMBOLIC_DET_MAX_DIM = 6


@dataclass
class Report:
    check: str
    status: str
    instance: dict | None = None
    witness: dict | None = None
    details: dict = field(default_factory=dict)
    timing: float | None = None

    @property
    def passed(self) -> bool:
        return self.status == PASS

    @property
    def failed(self) -> bool:
        return self.status == FAIL

    def to_json(self, include_timing: bool = False) -> dict:
        out = {
            "check": self.check,
            "status": self.status,
            "instance": self.instance,
            "witness": self.witness,
            "details": self.details,
        }
        if include_timing:
            out["timing_seconds"] = self.timing
        return out


def _timed(fn):
    def wrapper(*args, **kwargs):
        start = time.perf_counter()
        rep = fn(*args, **kwargs)
        rep.timing = time.perf_counter() - start
        return rep

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    wrapper.__wrapped__ = fn
    return wrapper


def default_order(spec: HypersurfaceSpec) -> int:
    """|U^S_min| + 3."""
    return len(enumerate_u_min(full_set(spec.n), spec.n, spec.d)) + 3


def _first_mismatch(left: Sequence[int], right: Sequence[int]) -> int | None:
    for m, (x, y) in enumerate(zip(left, right)):
        if x != y:
            return m
    return None


def _series_report(name, spec, K, expected, counts, P, red, extra) -> Report:
    got = list(red.coeffs)
    m = _first_mismatch(expected, got)
    details = {
        "order": K,
        "point_counts": counts,
        "p_series_exact": [str(c) for c in P.coeffs],
        "p_series_scaled_mod_p": got,
        "hasse_witt_side_mod_p": expected,
        **extra,
    }
    if m is None:
        return Report(name, PASS, spec.describe(), None, details)
    witness = {"index": m, "hasse_witt_side": expected[m], "point_count_side": got[m]}
    return Report(name, FAIL, spec.describe(), witness, details)


# -- congruences ----------------------------------------------------------------

@_timed
def check_main_congruence(spec: HypersurfaceSpec, K: int | None = None, method: str = "auto",
                          workers: int = 1) -> Report:
    """P(q^-mu t) mod p against det(I - t A(lam^{p^(a-1)}) ... A(lam)), d not dividing n."""
    if spec.n % spec.d == 0:
        raise InputError(f"d = {spec.d} divides n = {spec.n}; use the divisible-case check")
    K = default_order(spec) if K is None else K
    if K < 1:
        raise InputError("series order must be >= 1")
    M = frobenius_product(spec)
    det = char_poly_rev(M)
    counts, P, red = reduced_p_series(spec, K, method=method, workers=workers)
    expected = pad(det, K)
    return _series_report("main", spec, K, expected, counts, P, red,
                          {"det_I_minus_tM": det, "matrix_dim": M.dim})


def divisible_case_series(spec: HypersurfaceSpec, K: int) -> tuple[list[int], list[int], list[int]]:
    """Numerator det(I - tM^S), the twisted norms c_i of g_i, and the quotient series."""
    p = spec.p
    num = char_poly_rev(frobenius_product(spec))
    norms = [twisted_norm(g, spec) for g in g_polynomials(spec)]
    series = pad(num, K)
    for c in norms:
        series = series_mul_mod_p(series, series_inv_mod_p([1, -c % p], K, p), K, p)
    return num, norms, series


@_timed
def check_divisible_case(spec: HypersurfaceSpec, K: int | None = None, method: str = "auto",
                         workers: int = 1) -> Report:
    """P(q^-mu t) mod p against det(I - tM^S) / prod_i (1 - t g_i-norm), d | n."""
    if spec.n % spec.d:
        raise InputError(f"d = {spec.d} does not divide n = {spec.n}; use the main check")
    K = default_order(spec) if K is None else K
    if K < 1:
        raise InputError("series order must be >= 1")
    num, norms, expected = divisible_case_series(spec, K)
    counts, P, red = reduced_p_series(spec, K, method=method, workers=workers)
    return _series_report("divisible", spec, K, expected, counts, P, red,
                          {"det_I_minus_tM": num, "g_norms": norms})


def check_congruence(spec: HypersurfaceSpec, K: int | None = None, method: str = "auto",
                     workers: int = 1) -> Report:
    """Whichever of the two congruence checks applies to (n, d)."""
    if spec.n % spec.d:
        return check_main_congruence(spec, K, method, workers)
    return check_divisible_case(spec, K, method, workers)


# -- classical Hasse-Witt oracle ---------------------------------------------------

def classical_hw_oracle(spec: HypersurfaceSpec) -> list[list[FieldElement]]:
    """Coefficient of x^(pu - v) in f^(p-1), for u, v in U_min (mu = 0 only).

    f^(p-1) is expanded by repeated multiplication over F_q; no multinomial
    formula or lattice solving is involved.
    """
    if spec.mu != 0:
        raise InputError(f"the classical oracle needs mu = 0, this instance has mu = {spec.mu}")
    F = spec.field
    f = {tuple(e): c for e, c in zip(spec.exponents, spec.coeffs) if not c.is_zero()}
    power = {(0,) * (spec.n + 1): F.one}
    for _ in range(spec.p - 1):
        nxt: dict[tuple[int, ...], FieldElement] = {}
        for e1, c1 in power.items():
            for e2, c2 in f.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                nxt[e] = nxt.get(e, F.zero) + c1 * c2
        power = {e: c for e, c in nxt.items() if not c.is_zero()}
    index = enumerate_u_min(full_set(spec.n), spec.n, spec.d)
    out = []
    for u in index:
        row = []
        for v in index:
            target = tuple(spec.p * a - b for a, b in zip(u[:-1], v[:-1]))
            row.append(power.get(target, F.zero))
        out.append(row)
    return out


@_timed
def check_hw_oracle(spec: HypersurfaceSpec) -> Report:
    """evaluate(symbolic_matrix) against the coefficient-extraction oracle, entrywise."""
    M = evaluate(symbolic_matrix(spec), list(spec.coeffs), spec.field)
    oracle = classical_hw_oracle(spec)
    details = {
        "index": [list(u) for u in M.index],
        "matrix": [[x.to_str() for x in row] for row in M.entries],
        "oracle": [[x.to_str() for x in row] for row in oracle],
    }
    for i, u in enumerate(M.index):
        for j, v in enumerate(M.index):
            if M.entries[i][j] != oracle[i][j]:
                witness = {"u": list(u), "v": list(v), "matrix": M.entries[i][j].to_str(),
                           "oracle": oracle[i][j].to_str()}
                return Report("hw-oracle", FAIL, spec.describe(), witness, details)
    return Report("hw-oracle", PASS, spec.describe(), None, details)


# -- hypergeometric annihilation ------------------------------------------------

def _entry(spec, I, u, v, entry):
    return entry if entry is not None else symbolic_entry(u, v, spec, I)


def check_euler(spec: HypersurfaceSpec, I: Iterable[int], u: Sequence[int], v: Sequence[int],
                entry: SparseModPoly | None = None) -> Report:
    """sum_j a_ij nu_j = (pu - v)_i mod p for every monomial and every i."""
    I = as_subset(I)
    poly = _entry(spec, I, u, v, entry)
    p = spec.p
    beta = [p * a - b for a, b in zip(u, v)]
    support = spec.support
    for nu in sorted(poly.terms):
        for i in range(spec.n + 2):
            lhs = sum(support[j][i] * nu[j] for j in range(spec.N))
            if (lhs - beta[i]) % p:
                witness = {"u": list(u), "v": list(v), "nu": list(nu), "coordinate": i,
                           "lhs": lhs, "beta": beta[i]}
                return Report("euler", FAIL, None, witness, {"subset": sorted(I)})
    return Report("euler", PASS, None, None,
                  {"subset": sorted(I), "u": list(u), "v": list(v), "monomials": len(poly)})


def check_box(spec: HypersurfaceSpec, I: Iterable[int], u: Sequence[int], v: Sequence[int],
              l: Sequence[int], entry: SparseModPoly | None = None) -> Report:
    """d^{l+} A_uv - d^{l-} A_uv vanishes identically mod p."""
    if len(l) != spec.N or not is_relation(l, spec.support):
        raise InputError(f"{list(l)} is not a relation among the augmented exponent vectors")
    I = as_subset(I)
    poly = _entry(spec, I, u, v, entry)
    plus = [max(x, 0) for x in l]
    minus = [max(-x, 0) for x in l]
    diff = poly.apply_derivatives(plus) - poly.apply_derivatives(minus)
    if diff.is_zero():
        return Report("box", PASS, None, None, {"subset": sorted(I), "u": list(u), "v": list(v),
                                                "l": list(l)})
    e, c = diff.sorted_terms()[0]
    witness = {"u": list(u), "v": list(v), "l": list(l), "residual_monomial": list(e),
               "residual_coeff": c}
    return Report("box", FAIL, None, witness, {"subset": sorted(I)})


def box_test_vectors(spec: HypersurfaceSpec) -> list[tuple[int, ...]]:
    """Lattice basis plus all pairwise sums of basis vectors."""
    basis = relation_lattice_basis(spec.support)
    out = list(basis)
    for a, b in combinations(basis, 2):
        out.append(tuple(x + y for x, y in zip(a, b)))
    return out


def hypergeometric_subsets(spec: HypersurfaceSpec) -> list[frozenset[int]]:
    S = full_set(spec.n)
    return [S] + [S - {i} for i in range(spec.n + 1)]


@_timed
def check_hypergeometric(spec: HypersurfaceSpec) -> Report:
    """Euler and box checks on every entry of A^S and every A^{S minus i}."""
    vectors = box_test_vectors(spec)
    n_entries = n_box = 0
    for I in hypergeometric_subsets(spec):
        index = enumerate_u_min(I, spec.n, spec.d)
        for u in index:
            for v in index:
                entry = symbolic_entry(u, v, spec, I)
                n_entries += 1
                rep = check_euler(spec, I, u, v, entry)
                if rep.failed:
                    rep.instance = spec.describe()
                    return rep
                for l in vectors:
                    rep = check_box(spec, I, u, v, l, entry)
                    n_box += 1
                    if rep.failed:
                        rep.instance = spec.describe()
                        return rep
    details = {"entries": n_entries, "box_vectors": [list(l) for l in vectors],
               "box_checks": n_box}
    return Report("hypergeometric", PASS, spec.describe(), None, details)


@_timed
def check_euler_all(spec: HypersurfaceSpec) -> Report:
    count = 0
    for I in hypergeometric_subsets(spec):
        index = enumerate_u_min(I, spec.n, spec.d)
        for u in index:
            for v in index:
                rep = check_euler(spec, I, u, v)
                count += 1
                if rep.failed:
                    rep.instance = spec.describe()
                    return rep
    return Report("euler", PASS, spec.describe(), None, {"entries": count})


@_timed
def check_box_all(spec: HypersurfaceSpec) -> Report:
    vectors = box_test_vectors(spec)
    count = 0
    for I in hypergeometric_subsets(spec):
        index = enumerate_u_min(I, spec.n, spec.d)
        for u in index:
            for v in index:
                entry = symbolic_entry(u, v, spec, I)
                for l in vectors:
                    rep = check_box(spec, I, u, v, l, entry)
                    count += 1
                    if rep.failed:
                        rep.instance = spec.describe()
                        return rep
    return Report("box", PASS, spec.describe(), None,
                  {"box_vectors": [list(l) for l in vectors], "box_checks": count})


# -- generic invertibility --------------------------------------------------------

@dataclass
class Arrangement:
    """Support ordered so that every u in U^I_min factors through one distinguished monomial.

    ``permutation[k]`` is the original coordinate placed at position k by
    the relabelling that moves I to {0, ..., h-1}.  ``order`` lists the whole
    support: the mu_I blocks, then the |U^I_min| distinguished monomials,
    then everything else.  ``k_of_u`` maps u in U^I_min to its 1-based k_u.
    """

    I: frozenset[int]
    n: int
    d: int
    mu: int
    permutation: list[int]
    blocks: list[tuple[int, ...]]
    distinguished: list[tuple[int, ...]]
    order: list[tuple[int, ...]]
    k_of_u: dict[tuple[int, ...], int]

    def to_json(self) -> dict:
        return {
            "subset": sorted(self.I),
            "mu": self.mu,
            "permutation": self.permutation,
            "blocks": [list(e) for e in self.blocks],
            "distinguished": [list(e) for e in self.distinguished],
        }


def block_arrangement(I: Iterable[int], n: int, d: int,
                           support: Sequence[Sequence[int]] | None = None) -> Arrangement:
    """Blocks x_{(j-1)d}...x_{jd-1} for j <= mu_I, then the degree-d monomials
    divisible by x_{mu_I d} ... x_{h-1}, in coordinates where I = {0..h-1}."""
    I = as_subset(I)
    if not I:
        raise InputError("the subset I must be nonempty")
    if any(i < 0 or i > n for i in I):
        raise InputError(f"subset {sorted(I)} is not contained in {{0..{n}}}")
    h = len(I)
    mu = mu_of(I, d)
    perm = sorted(I) + sorted(set(range(n + 1)) - I)

    def to_original(e_new):
        e = [0] * (n + 1)
        for k, x in enumerate(e_new):
            e[perm[k]] = x
        return tuple(e)

    blocks = []
    for j in range(1, mu + 1):
        blocks.append(to_original([1 if (j - 1) * d <= k < j * d else 0 for k in range(n + 1)]))
    fixed = range(mu * d, h)
    distinguished = [to_original(e) for e in monomials(n, d) if all(e[k] >= 1 for k in fixed)]
    needed = blocks + distinguished
    if support is None:
        rest = [e for e in monomials(n, d) if e not in set(needed)]
    else:
        support = [tuple(e) for e in support]
        missing = [list(e) for e in needed if e not in set(support)]
        if missing:
            raise InputError(f"support does not contain the needed monomials {missing}")
        rest = [e for e in support if e not in set(needed)]
    # factorization: u = a+_{mu+k_u} + sum_{j<=mu} a+_j for a unique k_u
    base = [sum(b[i] for b in blocks) for i in range(n + 1)] + [mu]
    k_of_u = {}
    for k, e in enumerate(distinguished, start=1):
        u = tuple(base[i] + e[i] for i in range(n + 1)) + (mu + 1,)
        if not in_u_min(u, I, n, d):
            raise InternalInvariantError(f"arranged monomial {list(e)} gives {list(u)} outside U^I_min")
        k_of_u[u] = k
    index = enumerate_u_min(I, n, d)
    if sorted(k_of_u) != index:
        raise InternalInvariantError("the arrangement does not factor every point of U^I_min")
    return Arrangement(I, n, d, mu, perm, blocks, distinguished, needed + rest, k_of_u)


def arranged_spec(arr: Arrangement, p: int) -> HypersurfaceSpec:
    """Spec over F_p with the arranged support (coefficients are irrelevant placeholders)."""
    F = make_field(p, 1)
    return HypersurfaceSpec(p, 1, arr.n, arr.d, tuple(arr.order), tuple(F.one for _ in arr.order))


def distinguished_exponent(arr: Arrangement, p: int) -> tuple[int, ...]:
    """(prod_{j<=mu} L_j)^{(p-1)|U|} (prod_k L_{mu+k})^{p-1}."""
    size = len(arr.distinguished)
    e = [0] * len(arr.order)
    for j in range(arr.mu):
        e[j] = (p - 1) * size
    for k in range(size):
        e[arr.mu + k] = p - 1
    return tuple(e)


def _invertibility_echo(arr: Arrangement, p: int) -> dict:
    return {"n": arr.n, "d": arr.d, "p": p, **arr.to_json()}


@_timed
def check_generic_invertibility(I: Iterable[int], n: int, d: int, p: int,
                                trials: int = DEFAULT_TRIALS, seed: int = 0,
                                support: Sequence[Sequence[int]] | None = None,
                                max_dim: int = SYMBOLIC_DET_MAX_DIM) -> Report:
    """(i) distinguished coefficient of det A^I is 1 mod p; (ii) det A^I is
    nonzero at some random point of F_{p^6}.  Both must hold."""
    arr = block_arrangement(I, n, d, support)
    spec = arranged_spec(arr, p)
    M = symbolic_matrix(spec, arr.I)
    details: dict = {"matrix_dim": M.dim, "support_size": spec.N}
    witness = None
    coeff_ok = True
    if M.dim <= max_dim:
        det = poly_det(M.entries)
        target = distinguished_exponent(arr, p)
        coeff = det.coefficient(target)
        details["distinguished_monomial"] = list(target)
        details["distinguished_coefficient"] = coeff
        details["det_terms"] = len(det)
        if coeff != 1:
            coeff_ok = False
            witness = {"distinguished_monomial": list(target), "coefficient": coeff}
    else:
        warnings.warn(f"symbolic determinant of dimension {M.dim} exceeds {max_dim}; "
                      "coefficient check skipped", stacklevel=2)
        details["distinguished_coefficient"] = None
        details["coefficient_check"] = "skipped: dimension guard"
    big = make_field(p, SZ_EXTENSION_DEGREE)
    rng = random.Random(seed)
    hit = None
    for t in range(trials):
        lam = [big.from_encoding(rng.randrange(big.size)) for _ in range(spec.N)]
        val = field_det(evaluate(M, lam, big).entries)
        if not val.is_zero():
            hit = t
            details["sz_nonzero_value"] = val.to_str()
            break
    details["sz_trials"] = trials
    details["sz_first_nonzero_trial"] = hit
    if hit is None:
        witness = dict(witness or {}, schwartz_zippel="identically zero under Schwartz-Zippel sample")
    status = PASS if coeff_ok and hit is not None else FAIL
    return Report("invertibility", status, _invertibility_echo(arr, p), witness, details)


@_timed
def constant_term_separation(I: Iterable[int], n: int, d: int, p: int,
                             support: Sequence[Sequence[int]] | None = None,
                             max_dim: int = SYMBOLIC_DET_MAX_DIM) -> Report:
    """Constant term of det D^I equals the product of the diagonal constant terms.

    D_uv = (prod_{j<=mu} L_j)^{-(p-1)} L_{mu+k_u}^{-p} L_{mu+k_v} A_uv as a
    Laurent polynomial over F_p.  Also checked: every exponent l in D_uv has
    the sign pattern of L_u, off-diagonal entries have no constant term and
    the diagonal constants equal (-(p-1)!)^{-(mu+1)} mod p.
    """
    arr = block_arrangement(I, n, d, support)
    spec = arranged_spec(arr, p)
    M = symbolic_matrix(spec, arr.I)
    echo = _invertibility_echo(arr, p)
    if M.dim > max_dim:
        return Report("constant-term", SKIP, echo, None,
                      {"reason": f"dimension {M.dim} exceeds guard {max_dim}"})
    mu, N = arr.mu, spec.N
    ks = [arr.k_of_u[u] for u in M.index]
    expected_diag = pow(-math.factorial(p - 1), -(mu + 1), p)
    D = []
    for r, u in enumerate(M.index):
        row = []
        for c, v in enumerate(M.index):
            shift = [0] * N
            for j in range(mu):
                shift[j] = -(p - 1)
            shift[mu + ks[r] - 1] -= p
            shift[mu + ks[c] - 1] += 1
            entry = M.entries[r][c].shift(shift)
            for l in entry.terms:
                nonpos = set(range(mu)) | {mu + ks[r] - 1}
                bad = [j for j in range(N) if (l[j] > 0 if j in nonpos else l[j] < 0)]
                if bad:
                    return Report("constant-term", FAIL, echo,
                                  {"u": list(u), "v": list(v), "exponent": list(l),
                                   "sign_violation_at": bad}, {})
            const = entry.coefficient((0,) * N)
            if r != c and const:
                return Report("constant-term", FAIL, echo,
                              {"u": list(u), "v": list(v), "offdiagonal_constant": const}, {})
            if r == c and const != expected_diag:
                return Report("constant-term", FAIL, echo,
                              {"u": list(u), "diagonal_constant": const,
                               "expected": expected_diag}, {})
            row.append(entry)
        D.append(row)
    diag_prod = 1
    for r in range(len(D)):
        diag_prod = diag_prod * D[r][r].coefficient((0,) * N) % p
    const = poly_det(D).coefficient((0,) * N)
    details = {"matrix_dim": M.dim, "det_constant_term": const,
               "diagonal_constant_product": diag_prod, "diagonal_constant": expected_diag}
    if const != diag_prod:
        return Report("constant-term", FAIL, echo,
                      {"det_constant_term": const, "diagonal_constant_product": diag_prod}, details)
    return Report("constant-term", PASS, echo, None, details)


def check_instance_invertibility(spec: HypersurfaceSpec, trials: int = DEFAULT_TRIALS,
                                 seed: int = 0) -> Report:
    """Invertibility suite for I = S using the instance's own support, if it allows it."""
    try:
        return check_generic_invertibility(full_set(spec.n), spec.n, spec.d, spec.p,
                                           trials=trials, seed=seed, support=spec.exponents)
    except InputError as exc:
        return Report("invertibility", SKIP, spec.describe(), None, {"reason": str(exc)})


# -- instance-level driver ---------------------------------------------------------

CHECKS = ("main", "divisible", "hw-oracle", "euler", "box", "invertibility")


def run_checks(spec: HypersurfaceSpec, which: str = "all", K: int | None = None,
               trials: int = DEFAULT_TRIALS, seed: int = 0, method: str = "auto",
               workers: int = 1) -> list[Report]:
    """Run one named check, or every check that applies to the instance."""
    if which != "all" and which not in CHECKS:
        raise InputError(f"unknown check {which!r}")
    divisible = spec.n % spec.d == 0
    reports = []
    names = CHECKS if which == "all" else (which,)
    for name in names:
        if name == "main":
            if divisible and which == "all":
                continue
            reports.append(check_main_congruence(spec, K, method, workers))
        elif name == "divisible":
            if not divisible and which == "all":
                continue
            reports.append(check_divisible_case(spec, K, method, workers))
        elif name == "hw-oracle":
            if spec.mu != 0:
                if which == "all":
                    reports.append(Report("hw-oracle", SKIP, spec.describe(), None,
                                          {"reason": f"mu = {spec.mu} > 0"}))
                    continue
                raise InputError(f"the classical oracle needs mu = 0 (mu = {spec.mu})")
            reports.append(check_hw_oracle(spec))
        elif name == "euler":
            reports.append(check_euler_all(spec))
        elif name == "box":
            reports.append(check_box_all(spec))
        elif name == "invertibility":
            reports.append(check_instance_invertibility(spec, trials, seed))
    return reports
