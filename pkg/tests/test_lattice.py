import itertools

from hypothesis import given, settings
from hypothesis import strategies as st

from genhw.errors import NuBoundViolation
from genhw.instance import augment, monomials
from genhw.lattice import (
    enumerate_u_min, full_set, hermite_rows, in_u_min, is_relation, mu_of,
    relation_lattice_basis, solve_nu,
)

import pytest


def naive_u_min(I, n, d):
    last = mu_of(I, d) + 1
    out = []
    for u in itertools.product(range(d * last + 1), repeat=n + 1):
        if sum(u) == d * last and all(u[i] >= 1 for i in I):
            out.append(tuple(u) + (last,))
    return sorted(out)


def test_mu():
    assert mu_of([], 3) == -1
    assert mu_of(range(3), 3) == 0
    assert mu_of(range(4), 3) == 1
    assert mu_of(range(3), 2) == 1


def test_u_min_examples():
    assert enumerate_u_min(full_set(2), 2, 3) == [(1, 1, 1, 1)]
    assert enumerate_u_min(full_set(3), 3, 2) == [(1, 1, 1, 1, 2)]
    assert len(enumerate_u_min(full_set(2), 2, 2)) == 3
    assert enumerate_u_min(full_set(2) - {0}, 2, 2) == [(0, 1, 1, 1)]


@pytest.mark.parametrize("n,d", [(1, 2), (2, 2), (2, 3), (3, 2), (3, 3), (2, 4), (4, 2)])
def test_u_min_matches_naive_generator(n, d):
    for k in range(n + 2):
        for I in itertools.combinations(range(n + 1), k):
            got = enumerate_u_min(I, n, d)
            assert got == naive_u_min(I, n, d)
            assert all(in_u_min(u, I, n, d) for u in got)


def naive_solve(target, support):
    bounds = []
    for col in support:
        b = min((t // c for t, c in zip(target, col) if c), default=0)
        bounds.append(b)
    out = []
    for nu in itertools.product(*[range(b + 1) for b in bounds]):
        if all(sum(n * col[i] for n, col in zip(nu, support)) == target[i]
               for i in range(len(target))):
            out.append(nu)
    return sorted(out)


def test_solve_nu_fermat():
    sup = [augment(e) for e in [(3, 0, 0), (0, 3, 0), (0, 0, 3)]]
    assert solve_nu((6, 6, 6, 6), sup, 7, check_bound=True) == [(2, 2, 2)]


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([(2, 2), (2, 3), (3, 2), (1, 3)]), st.data())
def test_solve_nu_matches_box_scan(nd, data):
    n, d = nd
    mons = monomials(n, d)
    support = [augment(e) for e in data.draw(st.lists(st.sampled_from(mons), min_size=1,
                                                       max_size=len(mons), unique=True))]
    last = data.draw(st.integers(1, 3))
    parts = data.draw(st.lists(st.integers(0, d * last), min_size=n + 1, max_size=n + 1))
    target = tuple(parts) + (last,)
    assert sorted(solve_nu(target, support)) == naive_solve(target, support)


def test_nu_bound_violation_raised():
    sup = [augment(e) for e in [(2, 0), (0, 2), (1, 1)]]
    # 3 * (2,0,1) = (6,0,3): nu_1 = 3 >= p = 3
    with pytest.raises(NuBoundViolation):
        solve_nu((6, 0, 3), sup, 3, check_bound=True)


def test_relation_lattice_examples():
    sup = [(2, 0, 0, 1), (0, 2, 0, 1), (1, 1, 0, 1)]
    assert relation_lattice_basis(sup) == [(1, 1, -2)]
    fermat = [augment(e) for e in [(3, 0, 0), (0, 3, 0), (0, 0, 3)]]
    assert relation_lattice_basis(fermat) == []


@pytest.mark.parametrize("n,d", [(2, 2), (3, 2), (2, 3), (1, 4)])
def test_relation_lattice_full_support(n, d):
    sup = [augment(e) for e in monomials(n, d)]
    basis = relation_lattice_basis(sup)
    assert len(basis) == len(sup) - (n + 1)
    assert all(is_relation(l, sup) for l in basis)
    # basis of the saturated lattice: every small relation is an integer combination
    assert hermite_rows(list(map(list, basis))) == [list(b) for b in basis]


def test_relation_lattice_spans_small_relations():
    sup = [augment(e) for e in monomials(2, 2)]
    basis = relation_lattice_basis(sup)
    hnf = hermite_rows([list(b) for b in basis])
    for l in itertools.product(range(-1, 2), repeat=len(sup)):
        if is_relation(l, sup):
            assert hermite_rows([list(b) for b in basis] + [list(l)]) == hnf


def test_hermite_rows():
    assert hermite_rows([[2, 4], [3, 6]]) == [[1, 2]]
    assert hermite_rows([[0, 0]]) == []
