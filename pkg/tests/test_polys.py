from hypothesis import given, settings
from hypothesis import strategies as st

from genhw.polys import SparseModPoly, poly_det, series_inv_mod_p, series_mul_mod_p

P = 5


def polys():
    term = st.tuples(st.tuples(st.integers(0, 3), st.integers(0, 3)), st.integers(0, P - 1))
    return st.lists(term, max_size=5).map(lambda ts: SparseModPoly(P, 2, dict(ts)))


@settings(max_examples=100, deadline=None)
@given(polys(), polys(), polys())
def test_ring_laws(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert (a * b) * c == a * (b * c)
    assert (a - a).is_zero()


@settings(max_examples=100, deadline=None)
@given(polys(), polys())
def test_product_rule(a, b):
    assert (a * b).derivative(0) == a.derivative(0) * b + a * b.derivative(0)


def test_derivative_mod_p():
    x = SparseModPoly.monomial(P, (5, 0))
    assert x.derivative(0).is_zero()  # 5 x^4 = 0 mod 5
    y = SparseModPoly.monomial(P, (3, 1), 2)
    assert y.derivative(0, 2) == SparseModPoly.monomial(P, (1, 1), 12)


def test_shift_and_laurent():
    x = SparseModPoly.monomial(P, (1, 2))
    assert x.shift((-1, -2)) == SparseModPoly.constant(P, 2, 1)


def test_det_small():
    one = SparseModPoly.constant(P, 2, 1)
    x = SparseModPoly.monomial(P, (1, 0))
    y = SparseModPoly.monomial(P, (0, 1))
    assert poly_det([[x, y], [one, x]]) == x * x - y
    assert poly_det([[x]]) == x


def test_series():
    a = [1, 2, 3]
    inv = series_inv_mod_p(a, 6, 7)
    assert series_mul_mod_p(a, inv, 6, 7) == [1, 0, 0, 0, 0, 0, 0]
    assert series_inv_mod_p([1, -1], 4, 3) == [1, 1, 1, 1, 1]
