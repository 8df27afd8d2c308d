import random

import pytest

from genhw.errors import FrobeniusFixednessError, InputError
from genhw.field import make_field
from genhw.hwmatrix import (
    HWMatrix, char_poly_rev, evaluate, frobenius_product, g_polynomials, symbolic_entry,
    symbolic_matrix, twisted_norm,
)
from genhw.instance import monomials
from genhw.lattice import full_set
from genhw.polys import SparseModPoly

from conftest import coordinate_product, fermat_cubic, make


def test_fermat_p7_entry():
    spec = fermat_cubic(7)
    M = symbolic_matrix(spec)
    assert M.index == [(1, 1, 1, 1)]
    assert M.entries[0][0] == SparseModPoly(7, 3, {(2, 2, 2): 6})
    prod = frobenius_product(spec)
    assert prod.entries[0][0] == 6
    assert char_poly_rev(prod) == [1, 1]


@pytest.mark.parametrize("p", [2, 5])
def test_fermat_supersingular(p):
    spec = fermat_cubic(p)
    assert symbolic_matrix(spec).entries[0][0].is_zero()
    assert char_poly_rev(frobenius_product(spec)) == [1]


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_g_polynomials_of_coordinate_product(p):
    spec = coordinate_product(p, 1, 2)
    gs = g_polynomials(spec)
    # g_0 = -Lambda^(p-1)/(p-1)! = Lambda^(p-1) by Wilson; x_1 or x_2 missing kills g_1, g_2
    assert gs[0] == SparseModPoly(p, 1, {(p - 1,): 1})
    assert gs[1].is_zero() and gs[2].is_zero()
    assert [twisted_norm(g, spec) for g in gs] == [1, 0, 0]


def test_g_polynomials_need_divisibility():
    with pytest.raises(InputError):
        g_polynomials(fermat_cubic(7))


def test_entry_rejects_points_outside_u_min():
    spec = fermat_cubic(7)
    with pytest.raises(ValueError):
        symbolic_entry((3, 0, 0, 1), (1, 1, 1, 1), spec)


def random_fp_matrix(p, dim, rng):
    F = make_field(p, 1)
    return HWMatrix(full_set(1), [(i,) for i in range(dim)],
                    [[F.from_int(rng.randrange(p)) for _ in range(dim)] for _ in range(dim)],
                    symbolic=False)


@pytest.mark.parametrize("p", [2, 3, 5])
def test_cofactor_and_interpolation_agree(p):
    rng = random.Random(p)
    for dim in range(1, 7):
        for _ in range(5):
            M = random_fp_matrix(p, dim, rng)
            assert char_poly_rev(M) == char_poly_rev(M, cofactor_max_dim=0)


def test_char_poly_of_companion_matrix():
    # companion matrix of x^2 - 2x - 3 over F_5: det(I - tM) = 1 - 2t - 3t^2
    F = make_field(5, 1)
    M = HWMatrix(full_set(1), [(0,), (1,)],
                 [[F.from_int(0), F.from_int(3)], [F.from_int(1), F.from_int(2)]], False)
    assert char_poly_rev(M) == [1, 3, 2]


def test_frobenius_fixedness_is_enforced():
    F = make_field(2, 2)
    M = HWMatrix(full_set(1), [(0,)], [[F.gen]], False)
    with pytest.raises(FrobeniusFixednessError):
        char_poly_rev(M)


@pytest.mark.parametrize("n,d,p,a", [(2, 2, 3, 2), (2, 2, 2, 2), (3, 2, 3, 2), (2, 3, 2, 2),
                                     (2, 2, 5, 2), (2, 2, 2, 3)])
def test_frobenius_product_char_poly_in_prime_field(n, d, p, a):
    rng = random.Random(n * 100 + d * 10 + p + a)
    F = make_field(p, a)
    mons = monomials(n, d)
    for _ in range(4):
        coeffs = [F.from_encoding(rng.randrange(F.size)) for _ in mons]
        spec = make(p, a, n, d, mons, coeffs)
        prod = frobenius_product(spec)
        c1 = char_poly_rev(prod)
        c2 = char_poly_rev(prod, cofactor_max_dim=0)
        assert c1 == c2
        assert len(c1) - 1 <= prod.dim


def test_evaluate_checks_arity():
    spec = fermat_cubic(7)
    M = symbolic_matrix(spec)
    with pytest.raises(InputError):
        evaluate(M, [spec.field.one], spec.field)


def test_full_support_quintic_fourfold():
    # n = 4, d = 5: mu = 0, a single point (1,1,1,1,1,1) in U_min
    spec = make(2, 1, 4, 5, monomials(4, 5), [1] * 126)
    M = symbolic_matrix(spec)
    assert M.dim == 1
    # p = 2: p u - v = u, so nu picks exactly one monomial equal to x_0...x_4
    j = spec.exponents.index((1, 1, 1, 1, 1))
    e = [0] * 126
    e[j] = 1
    assert M.entries[0][0] == SparseModPoly(2, 126, {tuple(e): 1})
