"""Leading constants: singular integrals, Euler products, Delta(n) and fits."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import mpmath as mp
import numpy as np
from scipy import integrate, special
from scipy.stats import qmc

from .arith import factorize, phi_star, primes_up_to


class ConstantError(RuntimeError):
    pass


# ---------------------------------------------------------------- A1 surface

def in_region_a1(u: float, t: float, v: float) -> bool:
    """0 < u <= 1, t > 0, u t^2 <= 1, u v^2 <= 1, |t v (t - v)| <= 1."""
    return 0 < u <= 1 and t > 0 and u * t * t <= 1 and u * v * v <= 1 and abs(t * v * (t - v)) <= 1


def _measure_quadratic(c2: float, c1: float, lo: float, hi: float, bound: float) -> float:
    """Length of {x in [lo, hi] : |c2 x^2 + c1 x| <= bound}."""
    if hi <= lo:
        return 0.0
    if c2 == 0 and c1 == 0:
        return hi - lo
    pts = {lo, hi}
    for rhs in (bound, -bound):
        # c2 x^2 + c1 x - rhs = 0
        if c2 == 0:
            pts.add(rhs / c1)
            continue
        disc = c1 * c1 + 4 * c2 * rhs
        if disc >= 0:
            s = math.sqrt(disc)
            pts.add((-c1 + s) / (2 * c2))
            pts.add((-c1 - s) / (2 * c2))
    xs = sorted(x for x in pts if lo <= x <= hi)
    total = 0.0
    for a, b in zip(xs, xs[1:]):
        m = 0.5 * (a + b)
        if abs(c2 * m * m + c1 * m) <= bound:
            total += b - a
    return total


def F_1(u: float, v: float) -> float:
    """Length of {t >= 0 : u t^2 <= 1, |t v (t - v)| <= 1}."""
    if u <= 0:
        raise ValueError("u must be positive")
    # t v (t - v) = v t^2 - v^2 t
    return _measure_quadratic(v, -v * v, 0.0, u ** -0.5, 1.0)


def F_2(u: float, epsabs: float = 1e-11) -> float:
    """Area of {(t, v) : t > 0, u t^2 <= 1, u v^2 <= 1, |t v (t - v)| <= 1}."""
    if u <= 0:
        raise ValueError("u must be positive")
    T = u ** -0.5

    def inner(t: float) -> float:
        # v (t - v) = -v^2 + t v, bounded by 1/t in absolute value
        return _measure_quadratic(-1.0, t, -T, T, 1.0 / t)

    # inner changes shape where t^2/4 = 1/t and where the roots leave [-T, T]
    brk = sorted(b for b in (4 ** (1 / 3), T ** -0.5, 2 ** 0.5 * T ** -0.5) if 0 < b < T)
    with warnings.catch_warnings():
        # the inner measure has kinks; roundoff notices arrive well below 1e-9
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        val, _ = integrate.quad(inner, 0, T, points=brk or None, limit=400, epsabs=epsabs, epsrel=1e-10)
    return val


def _log_kernel(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """max(0, -log |a b (a - b)|)."""
    g = np.abs(a * b * (a - b))
    with np.errstate(divide="ignore"):
        out = -np.log(g)
    return np.where(g < 1, out, 0.0)


@dataclass
class IntegralResult:
    value: float
    error: float
    method: str
    others: dict = field(default_factory=dict)


def sigma_a1_quad(tol: float = 1e-6) -> IntegralResult:
    """6 * int_0^1 F_2(u) du by nested adaptive quadrature."""
    val, err = integrate.quad(F_2, 0, 1, limit=400, epsabs=tol * 1e-2, epsrel=tol * 1e-2)
    return IntegralResult(6 * val, 6 * err, "adaptive-quadrature")


def sigma_a1_qmc(m: int = 18, reps: int = 8, seed: int = 0) -> IntegralResult:
    """Scrambled Sobol estimate of the same volume.

    With t = a u^(-1/2), v = b u^(-1/2) the region becomes a in (0,1],
    b in [-1,1], |a b (a - b)| <= u^(3/2); integrating u out leaves
    sigma = 4 * int int max(0, -log|a b (a - b)|) da db.
    """
    ests = []
    for r in range(reps):
        x = qmc.Sobol(d=2, scramble=True, seed=seed + r).random_base2(m)
        a = 1.0 - x[:, 0]
        b = 2.0 * x[:, 1] - 1.0
        ests.append(8.0 * float(np.mean(_log_kernel(a, b))))
    ests = np.array(ests)
    return IntegralResult(float(ests.mean()), float(ests.std(ddof=1) / math.sqrt(reps)), "quasi-monte-carlo")


def sigma_infty_a1(tol: float = 1e-3) -> IntegralResult:
    """sigma_infty of the A1 surface; two methods must agree within 3*tol (relative)."""
    if not 1e-6 <= tol <= 1e-2:
        raise ValueError("tol must lie in [1e-6, 1e-2]")
    q = sigma_a1_quad(min(tol, 1e-4))
    s = sigma_a1_qmc()
    if abs(q.value - s.value) > 3 * tol * abs(q.value):
        raise ConstantError(f"sigma_infty(A1): quadrature {q.value} vs QMC {s.value}")
    return IntegralResult(q.value, max(q.error, abs(q.value - s.value)), q.method,
                          {"qmc": s.value, "qmc_error": s.error})


# ----------------------------------------------------------- Fermat surface

def fermat_integrand(x: np.ndarray) -> np.ndarray:
    """1 / (6 |x1^3 + x2^3 + x3^3|^(2/3)) on the region |x1^3 + x2^3 + x3^3| <= 1."""
    x = np.atleast_2d(np.asarray(x, dtype=float))
    s = np.abs((x**3).sum(axis=1))
    with np.errstate(divide="ignore"):
        out = 1.0 / (6.0 * s ** (2 / 3))
    return np.where(s <= 1, out, 0.0)


def _I(c: float) -> float:
    """int over x in [-1,1] with |c + x^3| <= 1 of |c + x^3|^(-2/3) dx, even in c.

    With y = c + x^3 this is (1/3) int |y|^(-2/3) |y - c|^(-2/3) dy over
    [c - 1, 1] (c >= 0); each piece between the singular points 0 and c is
    integrated with algebraic end-point weights.
    """
    c = abs(c)
    if c == 0:
        return math.inf
    lo, hi = c - 1.0, 1.0
    if lo >= hi:
        return 0.0
    cuts = sorted({lo, hi} | {q for q in (0.0, c) if lo < q < hi})
    total = 0.0
    for l, r in zip(cuts, cuts[1:]):
        if l == 0.0 and r == c:
            total += special.beta(1 / 3, 1 / 3) * c ** (-1 / 3)
            continue
        free = [q for q in (0.0, c) if q not in (l, r)]

        def f(y, free=free):
            h = 1.0
            for q in free:
                h *= abs(y - q) ** (-2 / 3)
            return h

        al = -2 / 3 if l in (0.0, c) else 0.0
        be = -2 / 3 if r in (0.0, c) else 0.0
        if al == 0 and be == 0:
            total += integrate.quad(f, l, r, limit=200, epsabs=1e-13, epsrel=1e-12)[0]
        else:
            total += integrate.quad(f, l, r, weight="alg", wvar=(al, be), limit=200,
                                    epsabs=1e-13, epsrel=1e-12)[0]
    return total / 3.0


def sigma_fermat_quad(tol: float = 1e-6) -> IntegralResult:
    """sigma_infty = (1/9) int_0^2 I(c)^2 dc.

    The density of c = x1^3 + x2^3 on [-1,1]^2 is I(c)/3, so the triple
    integral collapses to one variable; c^(1/3) I(c) -> B(1/3,1/3) as c -> 0.
    """
    b0 = special.beta(1 / 3, 1 / 3)
    g = lambda c: _I(c) ** 2 * c ** (2 / 3) if c > 0 else b0 * b0
    a, ea = integrate.quad(g, 0, 1, weight="alg", wvar=(-2 / 3, 0), limit=200, epsabs=tol * 1e-3)
    b, eb = integrate.quad(lambda c: _I(c) ** 2, 1, 2, limit=200, epsabs=tol * 1e-3)
    return IntegralResult((a + b) / 9, (ea + eb) / 9, "adaptive-quadrature")


def sigma_fermat_qmc(m: int = 20, reps: int = 8, seed: int = 0) -> IntegralResult:
    """Sobol estimate of the triple integral after removing both singular directions.

    x2 = -x1 + v^3 flattens the singular curve c = x1^3 + x2^3 = 0, and then
    x3 = x0 + w^3 with x0 = -cbrt(c) flattens the singular point in x3:
    c + x3^3 = w^3 (3 x0^2 + 3 x0 w^3 + w^6).
    """
    ests = []
    for r in range(reps):
        z = qmc.Sobol(d=3, scramble=True, seed=seed + r).random_base2(m)
        x1 = 2 * z[:, 0] - 1
        vlo, vhi = np.cbrt(x1 - 1), np.cbrt(x1 + 1)
        v = vlo + (vhi - vlo) * z[:, 1]
        v3 = v**3
        c = v3 * (3 * x1 * x1 - 3 * x1 * v3 + v3 * v3)
        x0 = -np.cbrt(c)
        wlo, whi = -np.cbrt(1 + x0), np.cbrt(1 - x0)
        w = wlo + (whi - wlo) * z[:, 2]
        w3 = w**3
        q = 3 * x0 * x0 + 3 * x0 * w3 + w3 * w3
        s = c + (x0 + w3) ** 3
        with np.errstate(divide="ignore", invalid="ignore"):
            f = 9.0 * v * v * np.abs(q) ** (-2 / 3) * (whi - wlo) * (vhi - vlo)
        f = np.where(np.abs(s) <= 1, f, 0.0)
        ests.append(2.0 * float(np.mean(f)) / 6.0)
    ests = np.array(ests)
    return IntegralResult(float(ests.mean()), float(ests.std(ddof=1) / math.sqrt(reps)), "quasi-monte-carlo")


def sigma_infty_fermat(tol: float = 1e-3) -> IntegralResult:
    if not 1e-6 <= tol <= 1e-2:
        raise ValueError("tol must lie in [1e-6, 1e-2]")
    q = sigma_fermat_quad(min(tol, 1e-4))
    s = sigma_fermat_qmc()
    if abs(q.value - s.value) > 3 * tol * abs(q.value):
        raise ConstantError(f"sigma_infty(Fermat): quadrature {q.value} vs QMC {s.value}")
    return IntegralResult(q.value, max(q.error, abs(q.value - s.value)), q.method,
                          {"qmc": s.value, "qmc_error": s.error})


# ------------------------------------------------------------ Euler products

@dataclass(frozen=True)
class EulerProduct:
    """prod_p f_p with f_p a polynomial in x = 1/p chosen by residue class.

    ``factors`` maps a modulus class (m, r) to coefficient lists [c0, c1, ...]
    of f in x; ``exceptional`` overrides single primes with exact values.
    """
    name: str
    factors: dict[tuple[int, int], tuple[int, ...]]
    exceptional: dict[int, Fraction] = field(default_factory=dict)
    kappa: int = 2

    def poly_for(self, p: int) -> tuple[int, ...]:
        for (m, r), cs in self.factors.items():
            if p % m == r:
                return cs
        raise ConstantError(f"no local factor for p={p}")

    def local(self, p: int) -> Fraction:
        if p in self.exceptional:
            return Fraction(self.exceptional[p])
        cs = self.poly_for(p)
        return sum((Fraction(c, p**k) for k, c in enumerate(cs)), Fraction(0))

    def tail_constant(self, P: int) -> float:
        """C with |log f_p| <= C p^-kappa for every p > P, from the coefficients.

        With f = 1 + sum_{k >= kappa} c_k x^k and x <= 1/P, |f - 1| <= x^kappa S
        where S = sum |c_k| P^(kappa - k), and |log(1 + e)| <= |e| / (1 - |e|).
        """
        x0 = 1.0 / P
        C = 0.0
        for cs in self.factors.values():
            if cs[0] != 1 or any(cs[k] for k in range(1, min(self.kappa, len(cs)))):
                raise ConstantError(f"{self.name}: factor is not 1 + O(p^-{self.kappa})")
            S = sum(abs(c) * x0 ** (k - self.kappa) for k, c in enumerate(cs) if k >= self.kappa)
            e = S * x0**self.kappa
            if e >= 1:
                raise ConstantError("prime bound too small for a tail bound")
            C = max(C, S / (1 - e))
        return C


def _poly_mul(*ps: Sequence[int]) -> tuple[int, ...]:
    out = [1]
    for p in ps:
        new = [0] * (len(out) + len(p) - 1)
        for i, a in enumerate(out):
            for j, b in enumerate(p):
                new[i + j] += a * b
        out = new
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return tuple(out)


def _pow(p: Sequence[int], k: int) -> tuple[int, ...]:
    return _poly_mul(*([p] * k)) if k else (1,)


# (1 - x)^4 (1 + 4x + x^2) = 1 - 9x^2 + ...
E2_PRODUCT = EulerProduct("E2(0)", {(1, 0): _poly_mul(_pow((1, -1), 4), (1, 4, 1))})

# G_p(4): p = 1 mod 3 -> (1-x)^7 (1+7x+x^2), p = 2 mod 3 -> (1-x^3)(1-x^2)^3, G_3(4) = 16/27
G4_PRODUCT = EulerProduct(
    "G(4)",
    {(3, 1): _poly_mul(_pow((1, -1), 7), (1, 7, 1)),
     (3, 2): _poly_mul((1, 0, 0, -1), _pow((1, 0, -1), 3))},
    {3: Fraction(16, 27)},
)
# the displayed constant omits G_3(4), which sits inside 2^4 pi^3 sqrt3 / (3! 3^8)
G4_PRODUCT_NO3 = EulerProduct("G(4) without p=3", G4_PRODUCT.factors, {3: Fraction(1)})


def _mobius(n: int) -> int:
    out = 1
    for _, k in factorize(n):
        if k > 1:
            return 0
        out = -out
    return out


def _chi3(n: int) -> int:
    return (0, 1, -1)[n % 3]


def prime_zeta(k: int, twisted: bool = False) -> float:
    """sum_{p != 3} p^-k, or sum_p chi(p) p^-k with chi the character mod 3.

    Moebius inversion of log L(s, chi) = sum_n P_chi^n(n s) / n.
    """
    with mp.workdps(30):
        return float(_prime_zeta(k, twisted))


def _prime_zeta(k: int, twisted: bool):
    tot = mp.mpf(0)
    for n in range(1, 200):
        if k * n > 110:
            break
        mu = _mobius(n)
        if not mu:
            continue
        if twisted and n % 2:
            L = mp.dirichlet(k * n, [0, 1, -1])
        else:
            L = mp.zeta(k * n) * (1 - mp.mpf(3) ** (-k * n))
        tot += mp.mpf(mu) / n * mp.log(L)
    return tot


def _class_tail(k: int, m: int, r: int, ps: np.ndarray) -> float:
    """sum over primes p > P with p = r mod m of p^-k, where ps are the primes <= P."""
    x = ps.astype(np.float64) ** (-k)
    if m == 1:
        return prime_zeta(k) + 3.0**-k - math.fsum(x.tolist())
    if m != 3 or r not in (1, 2):
        raise ConstantError(f"no prime sums for class {r} mod {m}")
    full = (prime_zeta(k) + (1 if r == 1 else -1) * prime_zeta(k, True)) / 2
    return full - math.fsum(x[ps % 3 == r].tolist())


def euler_product(e: EulerProduct, P: int, accelerate: bool = True) -> tuple[float, float]:
    """Product over all p, truncated at P, and a bound on |log(full / returned)|.

    With ``accelerate`` the x^2 and x^3 terms of log f_p are summed over p > P
    exactly, so the remaining tail is O(P^-3).
    """
    if P < 100:
        raise ValueError("prime bound must be at least 100")
    if e.kappa < 2:
        raise ConstantError("kappa < 2: no tail bound")
    ps = np.asarray(primes_up_to(P), dtype=np.int64)
    logs = np.zeros(len(ps))
    x = 1.0 / ps.astype(np.float64)
    groups: dict[tuple[int, ...], list[int]] = {}
    for i, p in enumerate(ps.tolist()):
        if p in e.exceptional:
            logs[i] = math.log(float(e.exceptional[p]))
        else:
            groups.setdefault(e.poly_for(p), []).append(i)
    for cs, idx in groups.items():
        idx = np.array(idx)
        xi = x[idx]
        # f - 1 evaluated directly to keep precision for large p
        d = np.zeros_like(xi)
        for c in reversed(cs[1:]):
            d = d * xi + c
        logs[idx] = np.log1p(d * xi)
    total = math.fsum(logs.tolist())
    C = e.tail_constant(P)
    k = e.kappa
    if not accelerate:
        # sum_{p > P} p^-k <= int_P^inf t^-k dt
        return math.exp(total), C * P ** (1 - k) / (k - 1)
    if k != 2:
        raise ConstantError("acceleration assumes f = 1 + O(p^-2)")
    x0 = 1.0 / P
    C4 = 0.0
    for (m, r), cs in e.factors.items():
        c = list(cs) + [0] * 4
        total += c[2] * _class_tail(2, m, r, ps) + c[3] * _class_tail(3, m, r, ps)
        # |log(1+e) - c2 x^2 - c3 x^3| <= sum_{j>=4} |c_j| x^j + e^2 / (2 (1 - e))
        S4 = sum(abs(cj) * x0 ** (j - 4) for j, cj in enumerate(cs) if j >= 4)
        eps = C * x0**2
        C4 = max(C4, S4 + C**2 / (2 * (1 - eps)))
    return math.exp(total), C4 * P**-3 / 3


def euler_value(e: EulerProduct, P: int = 10**5) -> dict:
    v, t = euler_product(e, P)
    return {"value": v, "log_tail_bound": t, "P": P, "error_bar": v * math.expm1(t)}


def L1_lambda_closed() -> float:
    return math.pi * math.sqrt(3) / 9


def L1_lambda_series(N: int = 10**6) -> tuple[float, float]:
    """sum_{n <= N} (n/3)/n and the alternating-tail bound 1/N."""
    n = np.arange(1, N + 1, dtype=np.float64)
    r = np.arange(1, N + 1) % 3
    lam = np.where(r == 1, 1.0, np.where(r == 2, -1.0, 0.0))
    return math.fsum((lam / n).tolist()), 1.0 / N


def c1_a1(P: int = 10**5, tol: float = 1e-4) -> dict:
    s = sigma_infty_a1(max(tol, 1e-4))
    E2, t = euler_product(E2_PRODUCT, P)
    v = s.value * E2 / 144
    err = v * (s.error / s.value + math.expm1(t))
    return {"value": v, "error_bar": err, "sigma_infty": s.value, "E2": E2, "P": P}


def c1_fermat(P: int = 10**5, tol: float = 1e-4) -> dict:
    s = sigma_infty_fermat(max(tol, 1e-4))
    G, t = euler_product(G4_PRODUCT, P)
    L = L1_lambda_closed()
    v = s.value * L**3 * G / 6
    G_no3, _ = euler_product(G4_PRODUCT_NO3, P)
    displayed = s.value * 2**4 * math.pi**3 * math.sqrt(3) / (6 * 3**8) * G_no3
    if abs(v - displayed) > 1e-12 * v:
        raise ConstantError("closed-form prefactor disagrees with L(1,lambda)^3 G(4) / 3!")
    err = v * (s.error / s.value + math.expm1(t))
    return {"value": v, "error_bar": err, "sigma_infty": s.value, "G4": G, "L1": L, "P": P}


# ------------------------------------------------------------------- Delta(n)

def theta(s0: int, s1: int, s2: int, s3: int) -> Fraction:
    """phi*(s0) phi*(s1 s2 s3) prod_{p | s0, p not | s1 s2 s3} (1 - 2/p), zero unless s1,s2,s3 pairwise coprime."""
    if math.gcd(s1, s2) != 1 or math.gcd(s1, s3) != 1 or math.gcd(s2, s3) != 1:
        return Fraction(0)
    t = s1 * s2 * s3
    out = phi_star(s0) * phi_star(t)
    for p, _ in factorize(s0):
        if t % p:
            out *= Fraction(p - 2, p)
    return out


def delta_fn(n: int) -> float:
    """Delta(n) = sum over n = s0^3 s1^2 s2^2 s3^2 of theta / (s1 s2 s3)^(1/3)."""
    if n < 1:
        raise ValueError("n must be positive")
    total = []
    s0 = 1
    while s0**3 <= n:
        if n % s0**3 == 0:
            m = n // s0**3
            t = math.isqrt(m)
            if t * t == m:
                for s1 in (d for d in range(1, t + 1) if t % d == 0):
                    for s2 in (d for d in range(1, t // s1 + 1) if (t // s1) % d == 0):
                        s3 = t // (s1 * s2)
                        th = theta(s0, s1, s2, s3)
                        if th:
                            total.append(float(th) / t ** (1 / 3))
        s0 += 1
    return math.fsum(total)


def delta_local_coeffs(p: int, K: int) -> list[Fraction]:
    """c_k = Delta(p^k) p^(-k/3), exact, from theta on prime powers."""
    out = [Fraction(0)] * (K + 1)
    for e0 in range(K // 3 + 1):
        for E in range((K - 3 * e0) // 2 + 1):
            k = 3 * e0 + 2 * E
            ways = [(E, 0, 0), (0, E, 0), (0, 0, E)] if E else [(0, 0, 0)]
            for e in ways:
                th = theta(p**e0, p ** e[0], p ** e[1], p ** e[2])
                out[k] += th / Fraction(p) ** (e0 + E)
    return out


def a_p_series(p: int, K: int) -> list[Fraction]:
    """Coefficients of u^k (u = p^-s) in a_p(s) up to u^K."""
    P = Fraction(p)
    one = Fraction(1)

    def geo(step: int, ratio: Fraction) -> list[Fraction]:
        # 1 / (1 - ratio u^step)
        out = [Fraction(0)] * (K + 1)
        k = 0
        while k * step <= K:
            out[k * step] = ratio**k
            k += 1
        return out

    def mul(a, b):
        out = [Fraction(0)] * (K + 1)
        for i, x in enumerate(a):
            if x:
                for j in range(K + 1 - i):
                    out[i + j] += x * b[j]
        return out

    def mono(k: int, c: Fraction) -> list[Fraction]:
        out = [Fraction(0)] * (K + 1)
        if k <= K:
            out[k] = c
        return out

    g2, g3 = geo(2, 1 / P), geo(3, 1 / P)
    terms = [
        mono(0, one),
        mul(mono(2, 3 * (1 - 1 / P) / P), g2),
        mul(mono(3, (1 - 1 / P) * (1 - 2 / P) / P), g3),
        mul(mul(mono(5, 3 * (1 - 1 / P) ** 2 / P**2), g2), g3),
    ]
    return [sum((t[k] for t in terms), Fraction(0)) for k in range(K + 1)]


def a_p_identity(p: int, K: int = 12) -> bool:
    return delta_local_coeffs(p, K) == a_p_series(p, K)


def _phi_star_table(n: int) -> tuple[np.ndarray, list[list[int]]]:
    spf = list(range(n + 1))
    for i in range(2, math.isqrt(n) + 1):
        if spf[i] == i:
            for j in range(i * i, n + 1, i):
                if spf[j] == j:
                    spf[j] = i
    primes_of: list[list[int]] = [[] for _ in range(n + 1)]
    ph = np.ones(n + 1)
    for m in range(2, n + 1):
        x, ps = m, []
        while x > 1:
            q = spf[x]
            ps.append(q)
            while x % q == 0:
                x //= q
        primes_of[m] = ps
        ph[m] = math.prod(1 - 1 / q for q in ps)
    return ph, primes_of


def delta_partial_sum(X: int) -> float:
    """sum_{n <= X} Delta(n), by nested loops over s0^3 s1^2 s2^2 s3^2 <= X."""
    if X < 1:
        return 0.0
    lim = math.isqrt(X)
    s0max = 1
    while (s0max + 1) ** 3 <= X:
        s0max += 1
    ph, primes_of = _phi_star_table(max(lim, s0max, 1))
    cube = np.concatenate(([0.0], np.arange(1, lim + 1, dtype=np.float64) ** (-1 / 3)))
    partial = []
    for s0 in range(1, s0max + 1):
        tmax = math.isqrt(X // s0**3)
        ps0 = primes_of[s0]
        acc = 0.0
        for s1 in range(1, tmax + 1):
            for s2 in range(1, tmax // s1 + 1):
                if math.gcd(s1, s2) != 1:
                    continue
                s12 = s1 * s2
                for s3 in range(1, tmax // s12 + 1):
                    if math.gcd(s12, s3) != 1:
                        continue
                    t = s12 * s3
                    w = ph[s0] * ph[t] * cube[t]
                    for q in ps0:
                        if t % q:
                            w *= 1 - 2 / q
                    acc += w
        partial.append(acc)
    return math.fsum(partial)


def delta_partial_sum_grouped(X: int) -> float:
    """Same sum, grouping ordered coprime triples with product t (3^omega(t) of them)."""
    lim = math.isqrt(X)
    ph, primes_of = _phi_star_table(max(lim, 2))
    out = []
    s0 = 1
    while s0**3 <= X:
        ps0 = set(primes_of[s0]) if s0 <= lim else {p for p, _ in factorize(s0)}
        phs0 = math.prod(1 - 1 / q for q in ps0)
        for t in range(1, math.isqrt(X // s0**3) + 1):
            w = 3 ** len(primes_of[t]) * phs0 * ph[t] / t ** (1 / 3)
            for q in ps0:
                if t % q:
                    w *= 1 - 2 / q
            out.append(w)
        s0 += 1
    return math.fsum(out)


def delta_main_ratio(X: int, E2: float | None = None) -> float:
    """sum_{n <= X} Delta(n) / (X^(1/3) (log X)^3 E2(0) / 48)."""
    if E2 is None:
        E2 = euler_product(E2_PRODUCT, 10**5)[0]
    L = math.log(X)
    return delta_partial_sum(X) / (X ** (1 / 3) * L**3 * E2 / 48)


# --------------------------------------------------------------------- fits

def fit_leading(counts: Sequence[tuple[float, float]], rho: int, terms: int | None = None) -> tuple[float, float]:
    """Least squares of N(B)/B against the top ``terms`` powers (log B)^(rho-1), ...

    With terms = None all powers 0..rho-1 are used. Returns the coefficient
    of (log B)^(rho-1) and the residual norm.
    """
    if len(counts) < 2:
        raise ValueError("need at least two samples")
    Bs = np.array([float(b) for b, _ in counts])
    if np.any(np.diff(Bs) <= 0):
        raise ValueError("B must be increasing")
    y = np.array([float(n) for _, n in counts]) / Bs
    k = rho if terms is None else terms
    L = np.log(Bs)
    A = np.stack([L ** (rho - 1 - j) for j in range(k)], axis=1)
    if np.linalg.matrix_rank(A) < k:
        raise ValueError("degenerate design matrix")
    # scale columns for conditioning
    sc = np.abs(A).max(axis=0)
    coef, *_ = np.linalg.lstsq(A / sc, y, rcond=None)
    coef = coef / sc
    res = float(np.linalg.norm(A @ coef - y))
    return float(coef[0]), res
