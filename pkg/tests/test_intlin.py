import sympy
from sympy.matrices.normalforms import smith_normal_form
from hypothesis import given
from hypothesis import strategies as st

from k3ade import intlin


def _mat(n):
    return st.lists(st.lists(st.integers(-9, 9), min_size=n, max_size=n), min_size=n, max_size=n)


square = st.integers(1, 5).flatmap(_mat)


@given(square)
def test_smith_form(a):
    if sympy.Matrix(a).det() == 0:
        return
    d, u, vinv = intlin.smith_form(a)
    n = len(a)
    # u a = diag(d) vinv
    lhs = intlin.matmul(u, a)
    rhs = intlin.matmul([[d[i] if i == j else 0 for j in range(n)] for i in range(n)], vinv)
    assert lhs == rhs
    assert abs(sympy.Matrix(u).det()) == 1 and abs(sympy.Matrix(vinv).det()) == 1
    assert all(x > 0 for x in d)
    assert all(d[i + 1] % d[i] == 0 for i in range(n - 1))
    # invariant factors agree with sympy
    ref = smith_normal_form(sympy.Matrix(a), domain=sympy.ZZ)
    assert sorted(abs(int(ref[i, i])) for i in range(n)) == sorted(d)


@given(st.integers(1, 5).flatmap(lambda n: st.lists(st.lists(st.integers(-6, 6), min_size=n, max_size=n), min_size=1, max_size=6)))
def test_hnf_rows(a):
    n = len(a[0])
    h, u = intlin.hnf_rows(a, n)
    assert intlin.matmul(u, a) == h
    assert abs(sympy.Matrix(u).det()) == 1
    basis = intlin.lattice_basis(a, n)
    if not basis:
        assert not any(any(r) for r in a)
        return
    coords = intlin.solve_in_basis(basis, a)
    assert intlin.matmul(coords, basis) == [list(r) for r in a]


@given(st.lists(st.lists(st.integers(0, 11), min_size=3, max_size=3), min_size=1, max_size=3), st.integers(2, 12))
def test_kernel_mod(m, modulus):
    basis = intlin.kernel_mod(m, modulus, 3)
    for b in basis:
        assert all(sum(r[i] * b[i] for i in range(3)) % modulus == 0 for r in m)
    # the kernel contains modulus * Z^3, so it has full rank and index dividing modulus^3
    assert len(basis) == 3
    det = abs(sympy.Matrix(basis).det())
    assert modulus**3 % det == 0
    brute = sum(
        1
        for x in range(modulus)
        for y in range(modulus)
        for z in range(modulus)
        if all((r[0] * x + r[1] * y + r[2] * z) % modulus == 0 for r in m)
    )
    assert brute * det == modulus**3


def test_quotient_structure():
    orders, gens = intlin.quotient_structure([[1, 0], [0, 1]], [[2, 0], [0, 6]])
    assert sorted(orders) == [2, 6]
    assert len(gens) == 2
