from fractions import Fraction

import sympy
from hypothesis import given, settings, strategies as st

from delpezzo import linalg

mats = st.integers(1, 5).flatmap(
    lambda n: st.lists(st.lists(st.integers(-4, 4), min_size=n, max_size=n), min_size=n, max_size=n))


@given(mats)
@settings(max_examples=100, deadline=None)
def test_against_sympy(rows):
    A = linalg.to_matrix(rows)
    M = sympy.Matrix(rows)
    assert linalg.rank(A) == M.rank()
    assert linalg.det(A) == M.det()
    x = sympy.symbols("x")
    cp = sympy.Poly(M.charpoly(x).as_expr(), x).all_coeffs()[::-1]
    assert linalg.charpoly(A) == [Fraction(int(c)) for c in cp]
    if M.det() != 0:
        inv = linalg.inverse(A)
        assert linalg.matmul(A, inv) == linalg.identity(len(rows))


@given(mats, st.integers(2, 50).filter(sympy.isprime))
@settings(max_examples=50, deadline=None)
def test_rank_mod_p(rows, p):
    from sympy import GF
    from sympy.polys.matrices import DomainMatrix
    dm = DomainMatrix([[GF(p)(v) for v in r] for r in rows], (len(rows), len(rows[0])), GF(p))
    assert linalg.rank_mod_p(rows, p) == dm.rank()
