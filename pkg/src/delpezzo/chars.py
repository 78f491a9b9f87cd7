"""Cubic characters, Jacobi sums, local counts and exponential sums for diagonal cubics.

Character values live in Z[w] with w a primitive cube root of unity; an
element x + y*w is stored as the integer pair (x, y) and multiplied using
w^2 = -1 - w. Complex floats only appear in the exponential sums.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np
from scipy import integrate

from .arith import is_prime, mobius, prime_divisors

MAX_MODULUS = 5000  # local counts cost about q^2 via value distributions


class CharError(ValueError):
    pass


class BudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class Eis:
    """x + y*w in Z[w]."""
    x: int
    y: int = 0

    def __add__(self, o: "Eis") -> "Eis":
        return Eis(self.x + o.x, self.y + o.y)

    def __sub__(self, o: "Eis") -> "Eis":
        return Eis(self.x - o.x, self.y - o.y)

    def __mul__(self, o: "Eis | int") -> "Eis":
        if isinstance(o, int):
            return Eis(self.x * o, self.y * o)
        # (a + bw)(c + dw) = ac + (ad + bc)w + bd w^2, w^2 = -1 - w
        a, b, c, d = self.x, self.y, o.x, o.y
        return Eis(a * c - b * d, a * d + b * c - b * d)

    __rmul__ = __mul__

    def conj(self) -> "Eis":
        # conj(w) = w^2 = -1 - w
        return Eis(self.x - self.y, -self.y)

    def norm(self) -> int:
        return self.x * self.x - self.x * self.y + self.y * self.y

    def __complex__(self) -> complex:
        return complex(self.x - self.y / 2, self.y * math.sqrt(3) / 2)


ZERO, ONE, W = Eis(0), Eis(1), Eis(0, 1)
W_POW = (ONE, W, W * W)


def primitive_root(p: int) -> int:
    """Least positive primitive root mod p."""
    if not is_prime(p):
        raise CharError(f"{p} is not prime")
    if p == 2:
        return 1
    qs = prime_divisors(p - 1)
    for g in range(2, p):
        if all(pow(g, (p - 1) // q, p) != 1 for q in qs):
            return g
    raise CharError("no primitive root")  # unreachable


@dataclass(frozen=True)
class CubicCharacter:
    """chi(g^k) = w^(k*power mod 3) for the least primitive root g; chi(0) = 0."""
    p: int
    power: int  # 0 trivial, 1 chi, 2 its conjugate
    log: tuple[int, ...]  # discrete log table, log[0] unused

    def exponent(self, a: int) -> int | None:
        a %= self.p
        if a == 0:
            return None
        return self.log[a] * self.power % 3

    def __call__(self, a: int) -> Eis:
        k = self.exponent(a)
        return ZERO if k is None else W_POW[k]

    def conj(self) -> "CubicCharacter":
        return CubicCharacter(self.p, (-self.power) % 3, self.log)

    def __mul__(self, o: "CubicCharacter") -> "CubicCharacter":
        if o.p != self.p:
            raise CharError("characters have different moduli")
        return CubicCharacter(self.p, (self.power + o.power) % 3, self.log)

    @property
    def trivial(self) -> bool:
        return self.power == 0


@lru_cache(maxsize=256)
def _log_table(p: int) -> tuple[int, ...]:
    g = primitive_root(p)
    log = [0] * p
    x = 1
    for k in range(p - 1):
        log[x] = k
        x = x * g % p
    return tuple(log)


def cubic_characters(p: int) -> tuple[CubicCharacter, CubicCharacter]:
    if not is_prime(p) or p % 3 != 1:
        raise CharError(f"need a prime p = 1 mod 3, got {p}")
    log = _log_table(p)
    return CubicCharacter(p, 1, log), CubicCharacter(p, 2, log)


def trivial_character(p: int) -> CubicCharacter:
    return CubicCharacter(p, 0, _log_table(p))


def cubes_mod(p: int) -> set[int]:
    return {pow(x, 3, p) for x in range(1, p)}


def jacobi_sum(chars: Sequence[CubicCharacter]) -> Eis:
    """J_0 = sum over t_1 + ... + t_r = 0 in F_p of prod chi_i(t_i), by brute force.

    The sum is built by convolving the value distributions of the characters,
    so the cost is r*p^2 instead of p^(r-1).
    """
    if len(chars) < 2:
        raise CharError("need at least two characters")
    p = chars[0].p
    if any(c.p != p for c in chars):
        raise CharError("characters have different moduli")
    # dist[s] = sum over t_1..t_k with sum s of prod chi_i(t_i), as Eis
    dist = [chars[0](t) for t in range(p)]
    for c in chars[1:]:
        vals = [c(t) for t in range(p)]
        new = [ZERO] * p
        for s, v in enumerate(dist):
            if v == ZERO:
                continue
            for t, u in enumerate(vals):
                if u != ZERO:
                    new[(s + t) % p] = new[(s + t) % p] + v * u
        dist = new
    return dist[0]


def jacobi_sum_naive(chars: Sequence[CubicCharacter]) -> Eis:
    import itertools
    p = chars[0].p
    total = ZERO
    for ts in itertools.product(range(p), repeat=len(chars) - 1):
        last = -sum(ts) % p
        v = ONE
        for c, t in zip(chars, ts + (last,)):
            v = v * c(t)
        total = total + v
    return total


def jacobi_magnitude_expected(chars: Sequence[CubicCharacter]) -> float:
    p, r = chars[0].p, len(chars)
    if sum(c.power for c in chars) % 3:
        return 0.0
    return (p - 1) * p ** (r / 2 - 1)


def bad_primes(a: Sequence[int]) -> set[int]:
    out = {3}
    for x in a:
        out |= set(prime_divisors(abs(x)))
    return out


def _check_good(a: Sequence[int], p: int) -> None:
    if not is_prime(p):
        raise CharError(f"{p} is not prime")
    if p in bad_primes(a):
        raise CharError(f"{p} is a bad prime for {tuple(a)}")


def delta_p_ratio(a: Sequence[int], p: int) -> int:
    """3*nu_p(a) - 3, nu_p counting i in {2,3,4} with a1 a_i / (a_j a_k) a cube mod p."""
    _check_good(a, p)
    if p % 3 == 2:
        return 0
    C = cubes_mod(p)
    nu = 0
    for i in (1, 2, 3):
        j, k = (t for t in (1, 2, 3) if t != i)
        r = a[0] * a[i] * pow(a[j] * a[k], -1, p) % p
        nu += r in C
    return 3 * nu - 3


def delta_p_characters(a: Sequence[int], p: int) -> int:
    """Sum over non-trivial chi_1..chi_4 with trivial product of prod chi_i(a_i^-1)."""
    _check_good(a, p)
    if p % 3 == 2:
        return 0
    log = _log_table(p)
    inv = [pow(x, -1, p) for x in a]
    total = ZERO
    for s in ((1, 1, 2, 2), (1, 2, 1, 2), (1, 2, 2, 1), (2, 1, 1, 2), (2, 1, 2, 1), (2, 2, 1, 1)):
        k = sum(si * log[v % p] for si, v in zip(s, inv)) % 3
        total = total + W_POW[k]
    # the choices with all four equal (1,1,1,1) and (2,2,2,2) are not in the list
    # because 4 is not 0 mod 3; the six above are all the admissible ones
    if total.y != 0:
        raise CharError("delta_p is not rational")  # cannot happen
    return total.x


def delta_p(a: Sequence[int], p: int) -> int:
    d = delta_p_ratio(a, p)
    c = delta_p_characters(a, p)
    if d != c:
        raise AssertionError(f"delta_p mismatch at p={p}: {d} != {c}")
    return d


# ---- local counts ----

def _cube_hist(c: int, q: int, step: int = 1) -> np.ndarray:
    """h[v] = #{y mod q/step : c*(step*y)^3 = v mod q}."""
    h = np.zeros(q, dtype=np.int64)
    y = np.arange(0, q, step, dtype=np.int64)
    v = (c % q) * (y * y % q) % q * y % q
    np.add.at(h, v, 1)
    return h


def _cyclic_conv(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    q = len(u)
    out = np.zeros(q, dtype=np.int64)
    for s in np.nonzero(u)[0]:
        out += u[s] * np.roll(v, s)
    return out


def _count_zero(a: Sequence[int], q: int, step: int = 1) -> int:
    hs = [_cube_hist(c, q, step) for c in a]
    acc = hs[0]
    for h in hs[1:]:
        acc = _cyclic_conv(acc, h)
    return int(acc[0])


@dataclass(frozen=True)
class LocalTable:
    a: tuple[int, ...]
    q: int
    N: int
    Nstar: int


def _check_budget(q: int) -> None:
    if q < 1 or q > MAX_MODULUS:
        raise BudgetExceeded(f"modulus {q} outside [1, {MAX_MODULUS}]")


def count_N(a: Sequence[int], q: int) -> int:
    """#{x mod q : sum a_i x_i^3 = 0 mod q}."""
    _check_budget(q)
    if q == 1:
        return 1
    return _count_zero(a, q)


def count_Nstar(a: Sequence[int], q: int) -> int:
    """As count_N with gcd(q, x1..x4) = 1, by Moebius over d | rad(q)."""
    _check_budget(q)
    if q == 1:
        return 1
    ps = prime_divisors(q)
    total = 0
    for mask in range(1 << len(ps)):
        d = 1
        for i, p in enumerate(ps):
            if mask >> i & 1:
                d *= p
        total += mobius(d) * _count_zero(a, q, d)
    return total


def count_naive(a: Sequence[int], q: int, primitive: bool = False) -> int:
    import itertools
    n = 0
    for x in itertools.product(range(q), repeat=len(a)):
        if sum(c * v**3 for c, v in zip(a, x)) % q:
            continue
        if primitive and math.gcd(q, *x) != 1:
            continue
        n += 1
    return n


def local_counts(a: Sequence[int], q: int) -> LocalTable:
    a = tuple(int(x) for x in a)
    N, Ns = count_N(a, q), count_Nstar(a, q)
    if not Ns <= N <= q**4:
        raise AssertionError("local counts out of range")
    if is_prime(q) and q not in bad_primes(a):
        expect = q**3 + q * (q - 1) * delta_p(a, q) - 1
        if Ns != expect or Ns != N - 1:
            raise AssertionError(f"N*({q}) = {Ns}, expected {expect}")
    return LocalTable(a, q, N, Ns)


def hensel_check(a: Sequence[int], p: int, e: int) -> bool:
    """N*(p^e) == p^(3e-3) N*(p) for a good prime p."""
    _check_good(a, p)
    return count_Nstar(a, p**e) == p ** (3 * e - 3) * count_Nstar(a, p)


def sigma_p_sequence(a: Sequence[int], p: int, emax: int) -> list[float]:
    """(1 - 1/p) p^(-3e) N(p^e) for e = 1..emax; tends to sigma_p."""
    return [(1 - 1 / p) * count_N(a, p**e) / p ** (3 * e) for e in range(1, emax + 1)]


def sigma_p_check(a: Sequence[int], p: int, emax: int) -> dict:
    """sigma_p computed as p^-3 N*(p) and through the full counts N(p^e).

    Splitting x by v = min ord_p(x_i) gives, for a good prime,
    N(p^e) = sum_{3v < e} p^(8v) N*(p^(e-3v)) + p^(4(e - ceil(e/3))),
    and N*(p^m) = p^(3m) sigma_p; this is asserted exactly for e <= emax.
    """
    _check_good(a, p)
    ns1 = count_Nstar(a, p)
    seq = []
    exact = True
    for e in range(1, emax + 1):
        N = count_N(a, p**e)
        top = -(-e // 3)
        pred = sum(p ** (8 * v) * p ** (3 * (e - 3 * v) - 3) * ns1 for v in range(top)) + p ** (4 * (e - top))
        exact &= N == pred
        seq.append((1 - 1 / p) * N / p ** (3 * e))
    sigma = ns1 / p**3
    return {"p": p, "sigma_p": sigma, "sequence": seq, "decomposition": bool(exact),
            "gap": abs(seq[-1] - sigma)}


# ---- exponential sums ----

def _e(x: np.ndarray) -> np.ndarray:
    return np.exp(2j * np.pi * x)


def exp_sum_T(a: Sequence[int], aa: int, q: int) -> complex:
    """T(aa, q) = sum over r mod q of e(aa C(r)/q), as a product of one-variable sums."""
    r = np.arange(q, dtype=np.int64)
    out = 1 + 0j
    for c in a:
        v = (aa * c % q) * (r * r % q) % q * r % q
        out *= complex(_e(v / q).sum())
    return out


def exp_sum_T_naive(a: Sequence[int], aa: int, q: int) -> complex:
    import itertools
    tot = 0j
    for r in itertools.product(range(q), repeat=len(a)):
        tot += cmath.exp(2j * math.pi * (aa * sum(c * x**3 for c, x in zip(a, r)) % q) / q)
    return tot


def S_q(a: Sequence[int], q: int) -> complex:
    return sum((exp_sum_T(a, aa, q) for aa in range(1, q + 1) if math.gcd(aa, q) == 1), 0j)


def sq_identity_check(a: Sequence[int], p: int, e: int, rtol: float = 1e-6) -> dict:
    """S_{p^e} against p^e N(p^e) - p^(3+e) N(p^(e-1)), plus multiplicativity on small moduli."""
    q = p**e
    lhs = S_q(a, q)
    rhs = q * count_N(a, q) - p ** (3 + e) * count_N(a, p ** (e - 1))
    scale = max(abs(rhs), q**4 * 1e-9, 1.0)
    ok = abs(lhs - rhs) <= rtol * scale
    mult = []
    for m in range(2, 21):
        for n in range(m + 1, 21):
            if math.gcd(m, n) == 1 and m * n <= 20:
                l, r = S_q(a, m * n), S_q(a, m) * S_q(a, n)
                mult.append(abs(l - r) <= rtol * max(abs(r), (m * n) ** 4 * 1e-9, 1.0))
    return {"p": p, "e": e, "S": [lhs.real, lhs.imag], "rhs": rhs, "identity": bool(ok),
            "multiplicative": bool(all(mult)), "ok": bool(ok and all(mult))}


# ---- Euler-Maclaurin lattice sums ----

# Largest ratio seen over 2000 seeded random instances plus all z = 0 cases with
# P <= 7 is 65 (P = 1, r = 1, z = 0: 3^4 points against volume 2^4); doubled.
EM_CONSTANT = 130.0


def _em_1d(z: float, c: int, P: float, r: int, res: int) -> tuple[complex, complex]:
    lo = math.ceil((-P - res) / r)
    hi = math.floor((P - res) / r)
    x = res + r * np.arange(lo, hi + 1, dtype=np.float64)
    s = complex(np.exp(2j * np.pi * z * c * x**3).sum())
    re = integrate.quad(lambda t: math.cos(2 * math.pi * z * c * t**3), -P, P, limit=400, epsabs=1e-12)[0]
    im = integrate.quad(lambda t: math.sin(2 * math.pi * z * c * t**3), -P, P, limit=400, epsabs=1e-12)[0]
    return s, complex(re, im) / r


def em_lattice_check(z: float, P: float, r: int, residues: Sequence[int],
                     coeffs: Sequence[int] = (1, 1, 1, 1)) -> dict:
    """Compare sum_{x = res mod r, |x_i| <= P} e(z C(x)) with r^-n times the box integral."""
    if r > P:
        raise CharError("need r <= P")
    if abs(z) > P ** -2 * (1 + 1e-12):
        raise CharError("need |z| <= P^-2")
    n = len(coeffs)
    s, i = 1 + 0j, 1 + 0j
    for c, res in zip(coeffs, residues):
        a, b = _em_1d(z, c, P, r, res)
        s *= a
        i *= b
    MF = abs(z) * 3 * max(abs(c) for c in coeffs) * P**2
    bound = P ** (n - 1) * (1 + P * MF) / r ** (n - 1)
    ratio = abs(s - i) / bound
    return {"z": z, "P": P, "r": r, "sum": [s.real, s.imag], "integral": [i.real, i.imag],
            "ratio": ratio, "constant": EM_CONSTANT, "ok": ratio <= EM_CONSTANT}

