from math import gcd, prod

from hypothesis import given, strategies as st
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import smith_normal_form

from ppgroups.abelian import (abelian_tensor_invariants, invariant_factors, invariants_of_product,
                              smith_diagonal)

matrices = st.integers(1, 4).flatmap(
    lambda cols: st.lists(st.lists(st.integers(-12, 12), min_size=cols, max_size=cols), min_size=1, max_size=4))


def sympy_diagonal(rows):
    snf = smith_normal_form(Matrix(rows), domain=ZZ)
    return sorted(abs(snf[i, i]) for i in range(min(snf.shape)) if snf[i, i] != 0)


@given(matrices)
def test_smith_matches_sympy(rows):
    ours = sorted(x for x in smith_diagonal(rows) if x)
    assert ours == sympy_diagonal(rows)


@given(matrices)
def test_smith_divisibility_chain(rows):
    d = [x for x in smith_diagonal(rows) if x]
    assert all(b % a == 0 for a, b in zip(d, d[1:]))


def test_known_tensor_products():
    assert abelian_tensor_invariants([2], [2]) == (2,)
    assert abelian_tensor_invariants([4], [6]) == (2,)
    assert abelian_tensor_invariants([2, 2], [2, 2]) == (2, 2, 2, 2)
    assert abelian_tensor_invariants([9], [3, 3]) == (3, 3)
    assert abelian_tensor_invariants([], [5]) == ()


@given(st.lists(st.integers(1, 30), min_size=1, max_size=3), st.lists(st.integers(1, 30), min_size=1, max_size=3))
def test_tensor_order_is_product_of_gcds(a, b):
    # Z/m (x) Z/n = Z/gcd(m, n), and the tensor distributes over sums
    expected = prod(gcd(x, y) for x in a for y in b)
    assert prod(abelian_tensor_invariants(a, b)) == expected


def test_invariants_of_product():
    assert invariants_of_product([2, 4, 3]) == (2, 12)
    assert invariants_of_product([6, 10]) == (2, 30)


def test_infinite_rejected():
    import pytest
    with pytest.raises(ValueError):
        invariant_factors([[2, 0]], 2)
