import itertools
import math
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from delpezzo import arith


@given(st.integers(1, 10**9))
@settings(max_examples=200)
def test_factorize_matches_sympy(n):
    assert dict(arith.factorize(n)) == sympy.factorint(n)


@given(st.integers(1, 5000))
def test_mobius_tau_divisors(n):
    assert arith.mobius(n) == sympy.mobius(n)
    assert arith.tau(n) == sympy.divisor_count(n)
    assert arith.divisors(n) == sympy.divisors(n)
    assert arith.omega(n) == len(sympy.primefactors(n))


def test_mobius_table_and_primes():
    tab = arith.mobius_table(2000)
    assert all(tab[k] == sympy.mobius(k) for k in range(1, 2001))
    assert arith.primes_up_to(10**4) == list(sympy.primerange(2, 10**4 + 1))
    assert all(arith.is_prime(n) == sympy.isprime(n) for n in range(-5, 3000))


@given(st.integers(-10**6, 10**6), st.integers(1, 10**4).filter(lambda n: n % 2))
def test_kronecker_is_jacobi_for_odd(a, n):
    assert arith.kronecker(a, n) == sympy.jacobi_symbol(a, n)


def test_kronecker_at_two():
    # (a/2) = 0 for even a, 1 for a = +-1 mod 8, -1 for a = +-3 mod 8
    for a in range(-40, 41):
        want = 0 if a % 2 == 0 else (1 if a % 8 in (1, 7) else -1)
        assert arith.kronecker(a, 2) == want


@given(st.integers(1, 10**8))
def test_squarefree_decompose(n):
    u, v = arith.squarefree_decompose(n)
    assert u * v * v == n
    assert arith.is_squarefree(u)


def test_phi_star():
    assert arith.phi_star(1) == 1
    assert arith.phi_star(12) == Fraction(1, 3)
    for n in range(1, 300):
        assert arith.phi_star(n) == Fraction(sympy.totient(n), n)


@given(st.integers(-10**30, 10**30))
def test_icbrt(n):
    r = arith.icbrt(n)
    assert r**3 <= n < (r + 1) ** 3


def test_is_cube():
    assert arith.is_cube(Fraction(8, 27))
    assert arith.is_cube(-64)
    assert not arith.is_cube(Fraction(2, 1))
    assert not arith.is_cube(Fraction(4, 9))


def test_primitive_count_small_box():
    box = list(itertools.product(range(-3, 4), repeat=3))
    assert arith.primitive_count(box) == sum(1 for x in box if math.gcd(*x) == 1)


@given(st.integers(0, 500), st.integers(0, 500), st.integers(1, 2000))
def test_coprime_in_interval(lo, width, a):
    hi = lo + width
    assert arith.coprime_in_interval(lo, hi, a) == sum(1 for n in range(lo + 1, hi + 1) if math.gcd(n, a) == 1)
