from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from equitor import _pycore, linalg
from equitor.linalg import (cokernel, det, echelon, hermite_form, identity, left_kernel, matmul,
                            right_kernel, saturation, smith_form, solve_integer, solve_mod1,
                            transpose)


def matrices(max_rows=5, max_cols=5, bound=6):
    return st.integers(1, max_rows).flatmap(
        lambda m: st.integers(1, max_cols).flatmap(
            lambda n: st.lists(st.lists(st.integers(-bound, bound), min_size=n, max_size=n),
                               min_size=m, max_size=m)))


def test_hermite_identity():
    h, u = hermite_form(identity(3))
    assert h == identity(3) and u == identity(3)


def test_hermite_diagonal_is_canonical():
    h, u = hermite_form([[2, 0], [0, 3]])
    assert h == [[2, 0], [0, 3]] and u == identity(2)


def test_hermite_row():
    # a single row is already in row Hermite form
    h, u = hermite_form([[4, 6]])
    assert matmul(u, [[4, 6]]) == h and abs(det(u)) == 1
    h, u = hermite_form([[4], [6]])
    assert h == [[2], [0]] and matmul(u, [[4], [6]]) == h and abs(det(u)) == 1


def test_smith_examples():
    assert smith_form(identity(3)).S == identity(3)
    sd = smith_form([[2, 0], [0, 3]])
    assert sd.diagonal == [1, 6]
    assert matmul(matmul(sd.U, [[2, 0], [0, 3]]), sd.V) == sd.S


def test_solve_integer_examples():
    assert solve_integer(identity(2), [3, -4]).x == [3, -4]
    assert not solve_integer([[2]], [3]).solvable
    r = solve_integer([[2]], [4])
    assert r.x == [2] and r.kernel == []


def test_solve_mod1_examples():
    assert solve_mod1([[2]], [Fraction(1, 2)]).u == [Fraction(1, 4)]
    assert not solve_mod1([[0]], [Fraction(1, 2)]).solvable
    r = solve_mod1([[1, 0], [0, 0]], [Fraction(1, 3), 0])
    assert r.solvable and r.u[0] == Fraction(1, 3)


def test_cokernel_free_and_torsion():
    p = cokernel([[2, 0], [0, 0]], 2)
    assert p.factors == [2, 0]


@given(matrices())
@settings(max_examples=150, deadline=None)
def test_echelon_identity(a):
    h, u, piv = echelon(a)
    assert matmul(u, a) == h
    assert abs(det(u)) == 1
    for r, c in enumerate(piv):
        assert h[r][c] > 0
        assert all(0 <= h[i][c] < h[r][c] for i in range(r))
        assert all(h[r][j] == 0 for j in range(c))


@given(matrices())
@settings(max_examples=150, deadline=None)
def test_compiled_matches_reference(a):
    if linalg._core is None:
        pytest.skip("compiled backend not built")
    assert tuple(linalg._core.echelon(a, True)) == tuple(_pycore.echelon(a, True))
    assert tuple(linalg._core.echelon(a, False)) == tuple(_pycore.echelon(a, False))


@given(matrices())
@settings(max_examples=150, deadline=None)
def test_smith_identities(a):
    sd = smith_form(a)
    assert matmul(matmul(sd.U, a), sd.V) == sd.S
    assert abs(det(sd.U)) == 1 and abs(det(sd.V)) == 1
    d = sd.diagonal
    assert all(x >= 0 for x in d)
    nz = [x for x in d if x]
    assert all(nz[i + 1] % nz[i] == 0 for i in range(len(nz) - 1))
    assert all(x == 0 for x in d[len(nz):])


@given(matrices(4, 6, 4))
@settings(max_examples=150, deadline=None)
def test_saturation_matches_double_kernel(a):
    n = len(a[0])
    if not any(any(r) for r in a):
        return
    perp = right_kernel(a, n)
    oracle = identity(n) if not perp else left_kernel(transpose(perp), n)
    assert saturation(a, n) == oracle


@given(st.lists(st.lists(st.integers(-3, 3), min_size=3, max_size=3), min_size=3, max_size=3),
       st.lists(st.integers(-3, 3), min_size=3, max_size=3))
@settings(max_examples=80, deadline=None)
def test_solve_integer_vs_box(a, b):
    r = solve_integer(a, b)
    box = [x for x in product(range(-4, 5), repeat=3)
           if [sum(a[i][j] * x[j] for j in range(3)) for i in range(3)] == b]
    if r.solvable:
        assert [sum(a[i][j] * r.x[j] for j in range(3)) for i in range(3)] == b
        for k in r.kernel:
            assert all(sum(a[i][j] * k[j] for j in range(3)) == 0 for i in range(3))
    else:
        assert not box


@given(st.lists(st.lists(st.integers(-4, 4), min_size=2, max_size=2), min_size=2, max_size=2),
       st.integers(1, 8), st.lists(st.integers(0, 7), min_size=2, max_size=2))
@settings(max_examples=60, deadline=None)
def test_solve_mod1_vs_enumeration(a, d, nums):
    v = [Fraction(x % d, d) for x in nums]
    r = solve_mod1(a, v)
    divs = [x for x in smith_form(a).diagonal if x] or [1]
    den = d * max(divs)

    def ok(u):
        return all((sum(a[i][j] * u[j] for j in range(2)) - v[i]).denominator == 1 for i in range(2))

    brute = any(ok([Fraction(x, den), Fraction(y, den)]) for x in range(den) for y in range(den))
    assert r.solvable == brute
    if r.solvable:
        assert ok(r.u)
        assert all(0 <= x < 1 for x in r.u)
