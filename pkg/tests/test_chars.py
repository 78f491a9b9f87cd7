import cmath
import itertools
import math
import random

import pytest
import sympy

from delpezzo import chars
from delpezzo.chars import CharError

FERMAT = (1, 1, 1, 1)
SPLIT_PRIMES = [p for p in sympy.primerange(7, 101) if p % 3 == 1]


def test_cubes_and_characters():
    assert chars.cubes_mod(7) == {1, 6}
    assert chars.cubes_mod(13) == {1, 5, 8, 12}
    chi, chib = chars.cubic_characters(7)
    assert {a for a in range(1, 7) if chi(a) == chars.ONE} == {1, 6}
    assert chi(3) != chars.ONE and chi(3) * chib(3) == chars.ONE
    with pytest.raises(CharError):
        chars.cubic_characters(5)


@pytest.mark.parametrize("p", SPLIT_PRIMES)
def test_character_laws(p):
    chi, chib = chars.cubic_characters(p)
    cubes = {pow(x, 3, p) for x in range(1, p)}
    total = chars.ZERO
    for a in range(p):
        total = total + chi(a)
    assert total == chars.ZERO
    for a in range(1, p):
        s = chi(a) + chib(a)
        assert s == (chars.Eis(2) if a in cubes else chars.Eis(-1))
    rng = random.Random(p)
    for _ in range(50):
        a, b = rng.randrange(1, p), rng.randrange(1, p)
        assert chi(a * b % p) == chi(a) * chi(b)
    assert chi(0) == chars.ZERO


@pytest.mark.parametrize("p", [7, 13])
def test_jacobi_fast_vs_naive_and_magnitude(p):
    cs = chars.cubic_characters(p)
    for r in (2, 3):
        for combo in itertools.product(cs, repeat=r):
            J = chars.jacobi_sum(combo)
            assert J == chars.jacobi_sum_naive(combo)
            assert abs(abs(complex(J)) - chars.jacobi_magnitude_expected(combo)) < 1e-6


def test_jacobi_examples():
    chi, chib = chars.cubic_characters(7)
    assert abs(complex(chars.jacobi_sum([chi, chib]))) == pytest.approx(6)
    assert abs(complex(chars.jacobi_sum([chi, chi]))) == pytest.approx(0)
    assert abs(complex(chars.jacobi_sum([chi, chi, chib, chib]))) == pytest.approx(42)


def test_delta_examples():
    assert chars.delta_p(FERMAT, 7) == 6
    assert chars.delta_p((1, 1, 1, 2), 7) == -3
    assert chars.delta_p((1, 2, 3, 7), 5) == 0
    with pytest.raises(CharError):
        chars.delta_p((1, 1, 1, 2), 2)
    with pytest.raises(CharError):
        chars.delta_p(FERMAT, 3)


def test_local_count_examples():
    t = chars.local_counts(FERMAT, 2)
    assert (t.N, t.Nstar) == (8, 7)
    t = chars.local_counts(FERMAT, 1)
    assert (t.N, t.Nstar) == (1, 1)
    assert chars.local_counts(FERMAT, 7).Nstar == 594


@pytest.mark.parametrize("q", [2, 3, 4, 5, 6, 8, 9, 12])
def test_counts_against_naive(q):
    for a in (FERMAT, (1, 2, 3, 5), (2, 2, 9, 1)):
        assert chars.count_N(a, q) == chars.count_naive(a, q)
        assert chars.count_Nstar(a, q) == chars.count_naive(a, q, primitive=True)


def test_eq_nstar_random():
    rng = random.Random(1)
    for _ in range(20):
        a = tuple(rng.randrange(1, 40) for _ in range(4))
        for p in sympy.primerange(2, 51):
            if p in chars.bad_primes(a):
                continue
            assert chars.count_Nstar(a, p) == p**3 + p * (p - 1) * chars.delta_p(a, p) - 1


@pytest.mark.parametrize("m,n", [(2, 3), (2, 5), (3, 4), (4, 5), (2, 7), (3, 5)])
def test_nstar_multiplicative(m, n):
    for a in (FERMAT, (1, 2, 3, 5)):
        assert chars.count_Nstar(a, m * n) == chars.count_Nstar(a, m) * chars.count_Nstar(a, n)


@pytest.mark.parametrize("a,p", [(FERMAT, 7), (FERMAT, 5), ((1, 1, 1, 2), 7), (FERMAT, 13)])
def test_hensel(a, p):
    assert chars.hensel_check(a, p, 2)


def test_sigma_p_two_ways():
    for a, p, e in ((FERMAT, 7, 3), ((1, 2, 3, 5), 11, 2), (FERMAT, 2, 5)):
        r = chars.sigma_p_check(a, p, e)
        assert r["decomposition"]
        assert r["sigma_p"] == pytest.approx(chars.count_naive(a, p, primitive=True) / p**3)


def test_exp_sum_T():
    assert chars.exp_sum_T(FERMAT, 1, 1) == pytest.approx(1)
    assert abs(chars.exp_sum_T(FERMAT, 1, 2)) < 1e-12
    for q in (3, 4, 7):
        for aa in range(1, q + 1):
            assert abs(chars.exp_sum_T((1, 2, 3, 5), aa, q) - chars.exp_sum_T_naive((1, 2, 3, 5), aa, q)) < 1e-9


@pytest.mark.parametrize("p,e", [(2, 1), (3, 2), (5, 1), (7, 2), (2, 2)])
def test_sq_identity(p, e):
    r = chars.sq_identity_check(FERMAT, p, e)
    assert r["identity"] and r["multiplicative"]


def test_s2_is_zero():
    assert abs(chars.S_q(FERMAT, 2)) < 1e-9
    assert 2 * chars.count_N(FERMAT, 2) - 16 * chars.count_N(FERMAT, 1) == 0


def test_em_lattice():
    r = chars.em_lattice_check(0.0, 6, 1, (0, 0, 0, 0))
    assert r["sum"][0] == 13**4
    assert chars.em_lattice_check(1e-4, 20, 3, (0, 1, 2, 1))["ok"]
    assert chars.em_lattice_check(1e-4, 20, 1, (0, 0, 0, 0))["ok"]
    with pytest.raises(CharError):
        chars.em_lattice_check(1e-4, 2, 3, (0, 0, 0, 0))


def test_budget():
    with pytest.raises(chars.BudgetExceeded):
        chars.count_N(FERMAT, 13**4)
