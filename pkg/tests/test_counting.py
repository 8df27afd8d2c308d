import random

import numpy as np
import pytest

from genhw.counting import (
    choose_method, count_brute, count_fibered, count_points, count_quadric, count_reference,
    distinct_root_counts,
)
from genhw.errors import GuardExceeded, InputError
from genhw.field import all_elements, log_tables, make_field
from genhw.instance import monomials

from conftest import coordinate_product, fermat_cubic, make


def random_instance(rng, p, a, n, d):
    F = make_field(p, a)
    mons = monomials(n, d)
    sup = rng.sample(mons, rng.randint(1, len(mons)))
    coeffs = [F.from_encoding(rng.randrange(F.size)) for _ in sup]
    if all(c.is_zero() for c in coeffs):
        coeffs[0] = F.one
    return make(p, a, n, d, sup, coeffs)


def test_spec_examples():
    assert count_points(fermat_cubic(2), 1) == 3
    for p, a in [(2, 1), (3, 1), (2, 2), (5, 1), (3, 2)]:
        q = p**a
        assert count_points(coordinate_product(p, a, 2), 1) == 2 * q + 1
    # x_0^2 + x_1^2 over F_3 has no projective zeros
    assert count_points(make(3, 1, 1, 2, [(2, 0), (0, 2)], [1, 1]), 1) == 0


SHAPES = [(2, 1, 2, 2), (2, 1, 2, 3), (3, 1, 2, 2), (3, 1, 2, 3), (5, 1, 2, 3), (2, 2, 2, 3),
          (3, 1, 3, 2), (2, 1, 3, 2), (3, 2, 2, 2), (2, 1, 2, 4), (3, 1, 3, 3), (2, 1, 1, 3)]


@pytest.mark.parametrize("p,a,n,d", SHAPES)
def test_counters_agree_with_reference(p, a, n, d):
    rng = random.Random(hash((p, a, n, d)) & 0xFFFF)
    for _ in range(3):
        spec = random_instance(rng, p, a, n, d)
        for k in (1, 2):
            if (p ** (a * k)) ** (n + 1) > 5000:
                continue
            ref = count_reference(spec, k)
            assert count_brute(spec, k) == ref
            assert count_fibered(spec, k) == ref
            if d == 2 and p != 2:
                assert count_quadric(spec, k) == ref
            Q = p ** (a * k)
            assert 0 <= ref <= (Q ** (n + 1) - 1) // (Q - 1)


def test_brute_is_independent_of_worker_count():
    spec = fermat_cubic(7)
    assert count_brute(spec, 1, workers=1) == count_brute(spec, 1, workers=3) == 9


@pytest.mark.parametrize("p,a", [(3, 2), (5, 1), (7, 1)])
def test_quadric_formula_against_fibered(p, a):
    rng = random.Random(p * a)
    F = make_field(p, a)
    mons = monomials(3, 2)
    for _ in range(3):
        # random support, including degenerate (low-rank) forms
        sup = rng.sample(mons, rng.randint(1, len(mons)))
        coeffs = [F.from_encoding(rng.randrange(1, F.size)) for _ in sup]
        spec = make(p, a, 3, 2, sup, coeffs)
        for k in (1, 2):
            if (p ** (a * k)) ** 2 > 10000:
                continue
            assert count_quadric(spec, k) == count_fibered(spec, k)


def test_quadric_needs_odd_degree_two():
    with pytest.raises(InputError):
        count_quadric(fermat_cubic(7), 1)
    with pytest.raises(InputError):
        count_quadric(make(2, 1, 2, 2, [(2, 0, 0)], [1]), 1)


@pytest.mark.parametrize("p,m", [(2, 3), (3, 2), (5, 1), (7, 1)])
def test_distinct_root_counts(p, m):
    F = make_field(p, m)
    T = log_tables(F)
    rng = random.Random(p + m)
    elems = all_elements(F)
    polys = []
    for _ in range(60):
        deg = rng.randint(0, 5)
        c = [F.from_encoding(rng.randrange(F.size)) for _ in range(deg + 1)]
        if rng.random() < 0.3:  # force a repeated root
            r = F.from_encoding(rng.randrange(F.size))
            c = [r * r, -(r + r), F.one]
        polys.append(c + [F.zero] * (6 - len(c)))
    polys.append([F.zero] * 6)
    coeffs = [np.array([T.code(pl[j]) for pl in polys]) for j in range(6)]
    got = distinct_root_counts(T, coeffs)
    for pl, g in zip(polys, got):
        roots = sum(1 for x in elems
                    if sum((c * x**j for j, c in enumerate(pl)), F.zero).is_zero())
        assert g == roots


def test_dispatch_and_guards():
    assert choose_method(fermat_cubic(2), 1) == "brute"
    assert choose_method(fermat_cubic(7), 5) == "fibered"
    q9 = make(3, 2, 3, 2, monomials(3, 2), [1] * 10)
    assert choose_method(q9, 4) == "quadric"
    with pytest.raises(GuardExceeded):
        count_points(make(2, 1, 3, 3, [(3, 0, 0, 0)], [1]), 12)
    with pytest.raises(GuardExceeded):
        count_reference(fermat_cubic(7), 2)
    with pytest.raises(InputError):
        count_points(fermat_cubic(2), 1, method="magic")
    with pytest.raises(InputError):
        count_points(fermat_cubic(2), 0)
