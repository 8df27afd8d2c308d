import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from genhw.errors import GuardExceeded, InputError
from genhw.field import (
    FieldElement, all_elements, embed, frobenius, is_irreducible, is_prime, log_tables,
    make_field, parse_element, prime_factors, primitive_element, smallest_irreducible,
)

FIELDS = [(2, 1), (3, 1), (5, 1), (7, 1), (2, 2), (3, 2), (2, 3), (2, 4), (5, 2), (3, 3), (7, 5)]


def elements(ctx):
    return st.integers(0, ctx.size - 1).map(lambda v: FieldElement(ctx, v))


def test_primes():
    assert [n for n in range(30) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert prime_factors(360) == [2, 3, 5]


@pytest.mark.parametrize("p,m,modulus", [
    (3, 2, "x^2+1"), (2, 2, "x^2+x+1"), (2, 4, "x^4+x+1"), (7, 5, "x^5+x+3"),
])
def test_deterministic_moduli(p, m, modulus):
    F = make_field(p, m)
    assert F.modulus_str() == modulus
    assert is_irreducible(F.modulus, p)
    assert smallest_irreducible(p, m) == F.modulus


def test_irreducibility_by_brute_force():
    # a degree-2 or 3 polynomial is irreducible iff it has no root
    for p in (2, 3, 5):
        for m in (2, 3):
            for tail in itertools.product(range(p), repeat=m):
                poly = list(tail) + [1]
                has_root = any(sum(c * x**i for i, c in enumerate(poly)) % p == 0
                               for x in range(p))
                assert is_irreducible(poly, p) == (not has_root)


@pytest.mark.parametrize("p,m", FIELDS)
def test_field_axioms(p, m):
    F = make_field(p, m)

    @settings(max_examples=400, deadline=None)
    @given(elements(F), elements(F), elements(F))
    def check(x, y, z):
        assert (x + y) + z == x + (y + z)
        assert (x * y) * z == x * (y * z)
        assert x * (y + z) == x * y + x * z
        assert x + y == y + x and x * y == y * x
        assert x - x == F.zero
        assert x + F.zero == x and x * F.one == x
        if not x.is_zero():
            assert x * x.inverse() == F.one

    check()


@pytest.mark.parametrize("p,m", FIELDS)
def test_frobenius_order(p, m):
    F = make_field(p, m)

    @settings(max_examples=100, deadline=None)
    @given(elements(F), elements(F))
    def check(x, y):
        z = x
        for _ in range(m):
            z = frobenius(z)
        assert z == x
        assert frobenius(x + y) == frobenius(x) + frobenius(y)
        assert frobenius(x * y) == frobenius(x) * frobenius(y)
        assert x ** (F.size - 1) == (F.zero if x.is_zero() else F.one)

    check()


def test_frobenius_of_generator_f4():
    F = make_field(2, 2)
    assert frobenius(F.gen) == F.gen + 1


@pytest.mark.parametrize("src,tgt", [((2, 2), (2, 4)), ((3, 1), (3, 2)), ((2, 1), (2, 3)),
                                     ((3, 2), (3, 4)), ((2, 2), (2, 6))])
def test_embedding_is_a_ring_homomorphism(src, tgt):
    A, B = make_field(*src), make_field(*tgt)
    elems = all_elements(A)
    images = [embed(x, B) for x in elems]
    assert len(set(images)) == len(elems)
    for x, ix in zip(elems, images):
        for y, iy in zip(elems, images):
            assert embed(x + y, B) == ix + iy
            assert embed(x * y, B) == ix * iy
    # the image is the fixed field of Frobenius^(src degree)
    for ix in images:
        z = ix
        for _ in range(A.m):
            z = frobenius(z)
        assert z == ix


def test_embed_rejects_non_subfield():
    with pytest.raises(InputError):
        embed(make_field(2, 2).gen, make_field(2, 3))


@pytest.mark.parametrize("p,m", [(2, 2), (3, 2), (2, 3), (5, 2), (3, 3)])
def test_parse_round_trip(p, m):
    F = make_field(p, m)
    for x in all_elements(F):
        assert parse_element(x.to_str(), F) == x


def test_parse_examples():
    F = make_field(3, 2)
    g = F.gen
    assert parse_element("g^2+1", F) == g * g + 1
    assert parse_element("-3", F) == F.zero
    assert parse_element(" 2 * g - 1", F) == g * 2 - 1
    assert parse_element("g^2", F) == F.from_int(-1)  # modulus x^2 + 1
    for bad in ["", "h", "g^", "2**g", "g+-", "1.5"]:
        with pytest.raises(InputError):
            parse_element(bad, F)


def test_generator_rejected_over_prime_field():
    with pytest.raises(InputError):
        parse_element("g+1", make_field(5, 1))


def test_field_guard():
    with pytest.raises(GuardExceeded):
        make_field(2, 30)
    with pytest.raises(InputError):
        make_field(4, 1)


@pytest.mark.parametrize("p,m", [(2, 1), (3, 1), (2, 3), (3, 2), (5, 2), (2, 5)])
def test_log_tables_agree_with_scalar_arithmetic(p, m):
    F = make_field(p, m)
    T = log_tables(F)
    g = primitive_element(F)
    seen = set()
    x = F.one
    for _ in range(F.size - 1):
        seen.add(x.value)
        x = x * g
    assert len(seen) == F.size - 1
    elems = all_elements(F)
    codes = np.array([T.code(x) for x in elems])
    A, B = np.meshgrid(codes, codes, indexing="ij")
    for op, ref in [(T.add, lambda x, y: x + y), (T.mul, lambda x, y: x * y),
                    (T.sub, lambda x, y: x - y)]:
        out = op(A, B)
        for i, x in enumerate(elems):
            for j, y in enumerate(elems):
                assert T.element(int(out[i, j])) == ref(x, y)
    inv = T.inv(codes)
    cube = T.power(codes, 3)
    for i, x in enumerate(elems):
        if not x.is_zero():
            assert T.element(int(inv[i])) == x.inverse()
        assert T.element(int(cube[i])) == x**3
