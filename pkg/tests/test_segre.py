from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, settings, strategies as st

from delpezzo import segre
from delpezzo.segre import SegreError, SegreSymbol, parse_symbol, segre_symbol
from delpezzo.surfaces import DP4_TABLE, DP4_TYPES, builtin


@pytest.mark.parametrize("row", list(DP4_TABLE))
def test_table_rows(row):
    sym, typ = segre.classify_dp4(*segre.table_pair(row))
    want_sym, want_type, _ = DP4_TYPES[row]
    assert typ == want_type
    assert sym == parse_symbol(want_sym)


def test_rom_walk_is_a1():
    Q1, Q2 = builtin("dp4_rom_walk").forms
    assert segre.classify_dp4(Q1, Q2) == (parse_symbol("(2,1,1,1)"), "A1")


def test_nonsingular():
    A = np.eye(5, dtype=int).tolist()
    Bm = np.diag([1, 2, 3, 4, 5]).tolist()
    assert segre_symbol(A, Bm) == segre.NONSINGULAR


def canonical_pencil(blocks):
    """Block-diagonal (A, B) with A + tB having eigenvalue lam and Jordan block k per block.

    For a block of size k, B = flip matrix F and A = F J_k(lam), both symmetric.
    """
    n = sum(k for _, k in blocks)
    A = [[Fraction(0)] * n for _ in range(n)]
    B = [[Fraction(0)] * n for _ in range(n)]
    o = 0
    for lam, k in blocks:
        for i in range(k):
            B[o + i][o + k - 1 - i] = Fraction(1)
            # F J: entry (i, j) = J[k-1-i][j]
            for j in range(k):
                r = k - 1 - i
                v = lam if r == j else (1 if j == r + 1 else 0)
                A[o + i][o + j] = Fraction(v)
        o += k
    return A, B


def expected_symbol(blocks):
    by = {}
    for lam, k in blocks:
        by.setdefault(lam, []).append(k)
    return SegreSymbol(tuple(tuple(sorted(v, reverse=True)) for v in by.values()))


PARTS5 = [(5,), (4, 1), (3, 2), (3, 1, 1), (2, 2, 1), (2, 1, 1, 1), (1, 1, 1, 1, 1)]
partitions5 = st.sampled_from(PARTS5).flatmap(
    lambda ks: st.lists(st.integers(-3, 3), min_size=len(ks), max_size=len(ks)).map(
        lambda lams: list(zip(lams, ks))))


@given(partitions5, st.integers(0, 10**6))
@settings(max_examples=60, deadline=None)
def test_canonical_pencils_under_congruence(blocks, seed):
    A, B = canonical_pencil(blocks)
    rng = np.random.default_rng(seed)
    while True:
        P = rng.integers(-2, 3, size=(5, 5)).tolist()
        if sympy.Matrix(P).det() != 0:
            break
    got = segre_symbol(segre.congruence(A, P), segre.congruence(B, P))
    assert got == expected_symbol(blocks)


@given(partitions5)
@settings(max_examples=30, deadline=None)
def test_block_sizes_match_sympy_jordan(blocks):
    A, B = canonical_pencil(blocks)
    t = segre.invertible_members(A, B, limit=1)[0]
    M = sympy.Matrix(segre.matmul(segre.inverse(segre.add(A, B, t)), B))
    _, J = M.jordan_form()
    sizes = []
    i = 0
    n = J.shape[0]
    while i < n:
        k = 1
        while i + k < n and J[i + k - 1, i + k] == 1:
            k += 1
        sizes.append(k)
        i += k
    sym = segre_symbol(A, B)
    assert sorted(sizes) == sorted(b for g in sym.groups for b in g)


def test_irrational_eigenvalues_give_separate_groups():
    # the 2x2 block has eigenvalues +-sqrt(2): one irreducible factor, two groups
    A = [[1, 1, 0, 0, 0], [1, -1, 0, 0, 0], [0, 0, 1, 0, 0], [0, 0, 0, 2, 0], [0, 0, 0, 0, 3]]
    B = [[1, 0, 0, 0, 0], [0, 1, 0, 0, 0], [0, 0, 1, 0, 0], [0, 0, 0, 1, 0], [0, 0, 0, 0, 1]]
    assert segre_symbol(A, B) == segre.NONSINGULAR
    # a repeated irrational pair: two groups of two 1-blocks each
    A2 = [[1, 1, 0, 0, 0], [1, -1, 0, 0, 0], [0, 0, 1, 1, 0], [0, 0, 1, -1, 0], [0, 0, 0, 0, 3]]
    assert segre_symbol(A2, B) == parse_symbol("((1,1),(1,1),1)")


@pytest.mark.parametrize("text", ["(2,1,1,1)", "((1,1),2,1)", "((1,1),(1,1),1)", "((4,1))", "(5)", "((2,1),(1,1))"])
def test_symbol_roundtrip(text):
    assert str(parse_symbol(text)) == text


def test_errors():
    with pytest.raises(SegreError):
        segre_symbol([[1, 2], [3, 4]], [[1, 0], [0, 1]])
    Z = [[0] * 5 for _ in range(5)]
    with pytest.raises(SegreError):
        segre_symbol(Z, Z)


def test_polynomial_helpers():
    x = sympy.symbols("x")
    f = sympy.Poly((x - 1) ** 3 * (x + 2) * (x**2 - 3) ** 2, x)
    coeffs = [Fraction(int(c)) for c in reversed(f.all_coeffs())]
    facs = segre.irreducible_factors(coeffs)
    got = sorted((tuple(p), m) for p, m in facs)
    want = sorted([((Fraction(-1), Fraction(1)), 3), ((Fraction(2), Fraction(1)), 1),
                   ((Fraction(-3), Fraction(0), Fraction(1)), 2)])
    assert got == want
    assert segre.rational_roots([Fraction(-6), Fraction(1), Fraction(1)]) == [Fraction(-3), Fraction(2)]
