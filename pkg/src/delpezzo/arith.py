"""Exact integer and rational kernel used by every other module."""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Iterable, Sequence

SIEVE_BOUND = 10**6

_primes: list[int] = []
_sieve_limit = 0


def primes_up_to(n: int) -> list[int]:
    """Primes <= n by an Eratosthenes sieve (cached for n <= SIEVE_BOUND)."""
    global _primes, _sieve_limit
    if n <= _sieve_limit:
        import bisect
        return _primes[: bisect.bisect_right(_primes, n)]
    if n < 2:
        return []
    flags = bytearray([1]) * (n + 1)
    flags[0] = flags[1] = 0
    for p in range(2, math.isqrt(n) + 1):
        if flags[p]:
            flags[p * p :: p] = bytes(len(range(p * p, n + 1, p)))
    out = [i for i, v in enumerate(flags) if v]
    if n <= SIEVE_BOUND:
        _primes, _sieve_limit = out, n
    return out


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin (exact for n < 3.3e24)."""
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
    for p in small:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@lru_cache(maxsize=1 << 16)
def factorize(n: int) -> tuple[tuple[int, int], ...]:
    """Factorization of n >= 1 as ((p, e), ...) with p increasing."""
    if n < 1:
        raise ValueError(f"factorize needs n >= 1, got {n}")
    out = []
    m = n
    for p in primes_up_to(min(SIEVE_BOUND, max(2, math.isqrt(n)))):
        if p * p > m:
            break
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            out.append((p, e))
    if m > 1:
        if m > SIEVE_BOUND**2 and not is_prime(m):
            raise ValueError(f"cofactor {m} of {n} is beyond the supported range")
        out.append((m, 1))
    return tuple(out)


def prime_divisors(n: int) -> list[int]:
    return [p for p, _ in factorize(n)]


def omega(n: int) -> int:
    return len(factorize(n))


def tau(n: int) -> int:
    t = 1
    for _, e in factorize(n):
        t *= e + 1
    return t


def divisors(n: int) -> list[int]:
    ds = [1]
    for p, e in factorize(n):
        ds = [d * p**k for d in ds for k in range(e + 1)]
    return sorted(ds)


def mobius(n: int) -> int:
    if n < 1:
        raise ValueError("mobius needs n >= 1")
    f = factorize(n)
    if any(e > 1 for _, e in f):
        return 0
    return -1 if len(f) % 2 else 1


def mobius_table(n: int) -> list[int]:
    """mu(0..n) by a linear sieve; mu[0] is unused and set to 0."""
    mu = [1] * (n + 1)
    if n >= 0:
        mu[0] = 0
    is_comp = bytearray(n + 1)
    primes: list[int] = []
    for i in range(2, n + 1):
        if not is_comp[i]:
            primes.append(i)
            mu[i] = -1
        for p in primes:
            if i * p > n:
                break
            is_comp[i * p] = 1
            if i % p == 0:
                mu[i * p] = 0
                break
            mu[i * p] = -mu[i]
    return mu


def squarefree_decompose(n: int) -> tuple[int, int]:
    """Unique (u, v) with n = u v^2 and u squarefree."""
    if n < 1:
        raise ValueError("squarefree_decompose needs n >= 1")
    u = v = 1
    for p, e in factorize(n):
        u *= p ** (e % 2)
        v *= p ** (e // 2)
    return u, v


def is_squarefree(n: int) -> bool:
    return n != 0 and all(e == 1 for _, e in factorize(abs(n)))


def phi_star(n: int) -> Fraction:
    """prod_{p | n} (1 - 1/p), exactly."""
    r = Fraction(1)
    for p in prime_divisors(n):
        r *= Fraction(p - 1, p)
    return r


def gcd_vec(xs: Iterable[int]) -> int:
    g = 0
    for x in xs:
        g = math.gcd(g, x)
    return g


def primitive_count(S: Iterable[Sequence[int]]) -> int:
    """Number of vectors in S with coprime entries, computed twice.

    The direct gcd filter is compared with sum_k mu(k) #{x in S : k | x}.
    """
    vecs = [tuple(int(c) for c in x) for x in S]
    direct = sum(1 for x in vecs if gcd_vec(x) == 1)
    # every k that divides some x also divides the content of x; the
    # content is 0 only for the zero vector, which is never primitive
    contents = [gcd_vec(x) for x in vecs]
    ks: set[int] = set()
    for c in contents:
        if c:
            ks.update(divisors(c))
    via_mu = 0
    for k in ks:
        mu = mobius(k)
        if mu:
            via_mu += mu * sum(1 for c in contents if c and c % k == 0)
    if via_mu != direct:
        raise AssertionError(f"Mobius count {via_mu} != direct count {direct}")
    return direct


def coprime_in_interval(lo: int, hi: int, a: int) -> int:
    """#{lo < n <= hi : gcd(n, a) = 1} by inclusion-exclusion over squarefree d | a."""
    ps = prime_divisors(a)
    total = 0
    for bits in product((0, 1), repeat=len(ps)):
        d = 1
        for b, p in zip(bits, ps):
            if b:
                d *= p
        total += (-1) ** sum(bits) * (hi // d - lo // d)
    return total


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a/n)."""
    if n == 0:
        return 1 if abs(a) == 1 else 0
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -result
    v = 0
    while n % 2 == 0:
        n //= 2
        v += 1
    if v:
        if a % 2 == 0:
            return 0
        if v % 2 and a % 8 in (3, 5):
            result = -result
    # Jacobi symbol (a/n) for odd n > 0
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def icbrt(n: int) -> int:
    """floor of the real cube root of n (any sign)."""
    if n < 0:
        return -icbrt_ceil(-n)
    if n < 1 << 60:
        x = int(round(n ** (1.0 / 3)))
    else:
        # Newton from above: x -> (2x + n // x^2) // 3 decreases to the floor
        x = 1 << ((n.bit_length() + 2) // 3)
        while True:
            y = (2 * x + n // (x * x)) // 3
            if y >= x:
                break
            x = y
    while x * x * x > n:
        x -= 1
    while (x + 1) ** 3 <= n:
        x += 1
    return x


def icbrt_ceil(n: int) -> int:
    r = icbrt(n)
    return r if r**3 == n else r + 1


def is_cube(q: Fraction | int) -> bool:
    """Whether a rational number is the cube of a rational."""
    q = Fraction(q)
    return all(icbrt(abs(v)) ** 3 == abs(v) for v in (q.numerator, q.denominator))


def crt_inverse(a: int, m: int) -> int:
    return pow(a, -1, m)
