"""Lattice point counts on diagonal lines and conics, and their uniform bounds.

M_d(a; B) counts primitive x in Z^3 with a1 x1^d + a2 x2^d + a3 x3^d = 0
and |x_i| <= B_i. The bounds checked here are

    M_1 <= C_LINE  (1 + B1 B2 B3 / max |a_i| B_i)
    M_2 <= C_CONIC (1 + B1 B2 B3 / |a1 a2 a3|)^(1/3) tau(a1 a2 a3)

with constants frozen from a seeded sweep (see ``freeze_constant``).
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .arith import divisors, factorize, is_squarefree, kronecker, mobius, omega, tau
from .parallel import pmap

DEFAULT_BUDGET = 2 * 10**7
SWEEP_CHUNKS = 16

# freeze_constant(lemma): max ratio over sample_instances(lemma, 10^4, seed=0),
# doubled and rounded up. line: 3.9408 (a=(-1,3,6)), conic: 5.6202 (a=(1,1,-1), B ~ 1).
C_LINE = 7.89
C_CONIC = 11.25
# largest S*/AB over serre_sweep(200, seed=0) was 88.0, doubled
C_SERRE = 176.0
SERRE_MIN_SAMPLES = 50


class GonError(ValueError):
    pass


class BudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class BoxCountInstance:
    d: int
    a: tuple[int, int, int]
    B: tuple[float, float, float]

    def __post_init__(self):
        if self.d not in (1, 2):
            raise GonError("degree must be 1 or 2")
        a = tuple(int(x) for x in self.a)
        if len(a) != 3 or 0 in a:
            raise GonError("coefficients must be three nonzero integers")
        if math.gcd(*a) != 1:
            raise GonError("coefficient vector must be primitive")
        if self.d == 2 and any(math.gcd(a[i], a[j]) != 1 for i, j in ((0, 1), (0, 2), (1, 2))):
            raise GonError("conic coefficients must be pairwise coprime")
        if len(self.B) != 3 or min(self.B) <= 0:
            raise GonError("box sides must be positive")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "B", tuple(float(b) for b in self.B))

    def to_dict(self) -> dict:
        return {"d": self.d, "a": list(self.a), "B": list(self.B)}


def _isqrt_exact(v: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Integer square roots of v >= 0 and a mask of exact squares."""
    r = np.floor(np.sqrt(v.astype(np.float64))).astype(np.int64)
    # float sqrt can be off by one near 2^53
    for _ in range(2):
        r = np.where(r * r > v, r - 1, r)
        r = np.where((r + 1) * (r + 1) <= v, r + 1, r)
    return r, r * r == v


def count_Md(inst: BoxCountInstance, budget: int = DEFAULT_BUDGET) -> int:
    """Number of primitive x with sum a_i x_i^d = 0 and |x_i| <= B_i."""
    Bi = [math.floor(b) for b in inst.B]
    if max(Bi) == 0:
        return 0
    # enumerate the two smallest boxes, solve for the third
    order = sorted(range(3), key=lambda i: Bi[i])
    i, j, k = order
    size = (2 * Bi[i] + 1) * (2 * Bi[j] + 1)
    if size > budget:
        raise BudgetExceeded(f"box of {size} points exceeds budget {budget}")
    a = inst.a
    big = max(abs(c) for c in a) * max(Bi) ** inst.d * 3
    if big >= 2**62:
        raise BudgetExceeded("values exceed 64-bit range")
    xi, xj = np.meshgrid(np.arange(-Bi[i], Bi[i] + 1, dtype=np.int64),
                         np.arange(-Bi[j], Bi[j] + 1, dtype=np.int64), indexing="ij")
    xi, xj = xi.ravel(), xj.ravel()
    rest = -(a[i] * xi**inst.d + a[j] * xj**inst.d)
    ok = rest % a[k] == 0
    xi, xj, v = xi[ok], xj[ok], rest[ok] // a[k]
    if inst.d == 1:
        xk = v
        keep = np.abs(xk) <= Bi[k]
        xi, xj, xk = xi[keep], xj[keep], xk[keep]
        g = np.gcd(np.gcd(xi, xj), xk)
        return int(np.count_nonzero(g == 1))
    pos = v >= 0
    xi, xj, v = xi[pos], xj[pos], v[pos]
    r, sq = _isqrt_exact(v)
    keep = sq & (r <= Bi[k])
    xi, xj, r = xi[keep], xj[keep], r[keep]
    g = np.gcd(np.gcd(xi, xj), r)
    prim = g == 1
    # r > 0 gives the two points (.., r) and (.., -r)
    return int(2 * np.count_nonzero(prim & (r > 0)) + np.count_nonzero(prim & (r == 0)))


def line_bound(inst: BoxCountInstance) -> float:
    B1, B2, B3 = inst.B
    return 1 + B1 * B2 * B3 / max(abs(c) * b for c, b in zip(inst.a, inst.B))


def conic_bound(inst: BoxCountInstance) -> float:
    B1, B2, B3 = inst.B
    A = abs(inst.a[0] * inst.a[1] * inst.a[2])
    return (1 + B1 * B2 * B3 / A) ** (1 / 3) * tau(A)


def _bound_report(samples: Sequence[BoxCountInstance], d: int, C: float, workers=None) -> dict:
    for s in samples:
        if s.d != d:
            raise GonError(f"sample has degree {s.d}, expected {d}")
    rows = sweep_rows(samples, workers)
    worst = max(rows, key=lambda r: r["ratio"]) if rows else None
    bad = [r for r in rows if r["ratio"] > C]
    return {
        "constant": C,
        "instances": len(rows),
        "max_ratio": worst["ratio"] if worst else 0.0,
        "worst": worst,
        "violations": bad,
        "ok": not bad,
    }


def check_line_bound(samples: Sequence[BoxCountInstance], C: float = C_LINE, workers=None) -> dict:
    return _bound_report(samples, 1, C, workers)


def check_conic_bound(samples: Sequence[BoxCountInstance], C: float = C_CONIC, workers=None) -> dict:
    return _bound_report(samples, 2, C, workers)


def _row(inst: BoxCountInstance) -> dict:
    n = count_Md(inst)
    b = line_bound(inst) if inst.d == 1 else conic_bound(inst)
    return {"instance": inst.to_dict(), "count": n, "bound": b, "ratio": n / b}


def _rows_chunk(chunk: list[BoxCountInstance]) -> list[dict]:
    return [_row(s) for s in chunk]


def sweep_rows(samples: Sequence[BoxCountInstance], workers=None) -> list[dict]:
    samples = list(samples)
    chunks = [samples[c::SWEEP_CHUNKS] for c in range(SWEEP_CHUNKS)]
    parts = pmap(_rows_chunk, chunks, workers)
    # undo the interleaving so rows follow the sample order
    out: list[dict | None] = [None] * len(samples)
    for c, part in enumerate(parts):
        for k, row in enumerate(part):
            out[c + k * SWEEP_CHUNKS] = row
    return out  # type: ignore[return-value]


def _log_uniform_int(rng: np.random.Generator, hi: float) -> int:
    return max(1, int(math.exp(rng.uniform(0, math.log(hi)))))


def _random_box(rng: np.random.Generator) -> tuple[float, float, float]:
    # mostly moderate boxes, sometimes one long direction
    B = [float(math.exp(rng.uniform(math.log(0.5), math.log(150)))) for _ in range(3)]
    if rng.random() < 0.15:
        B[int(rng.integers(3))] = float(math.exp(rng.uniform(math.log(150), math.log(3000))))
    return tuple(B)


def sample_instances(lemma: str, n: int, seed: int) -> list[BoxCountInstance]:
    """Seeded random instances for ``lemma`` in {'line', 'conic'}."""
    rng = np.random.default_rng(seed)
    out: list[BoxCountInstance] = []
    while len(out) < n:
        B = _random_box(rng)
        top = 10 ** rng.uniform(0, 6)
        a = [_log_uniform_int(rng, top) * int(rng.choice((-1, 1))) for _ in range(3)]
        if lemma == "line":
            if math.gcd(*a) != 1:
                continue
            out.append(BoxCountInstance(1, tuple(a), B))
        elif lemma == "conic":
            if any(math.gcd(a[i], a[j]) != 1 for i, j in ((0, 1), (0, 2), (1, 2))):
                continue
            # bias towards indefinite forms, which are the ones with points
            if rng.random() < 0.8 and len({x > 0 for x in a}) == 1:
                a[int(rng.integers(3))] *= -1
            out.append(BoxCountInstance(2, tuple(a), B))
        else:
            raise GonError(f"unknown lemma {lemma!r}")
    return out


def freeze_constant(lemma: str, n: int = 10**4, seed: int = 0, workers=None) -> float:
    """Twice the largest ratio over a seeded sweep; how C_LINE and C_CONIC were set."""
    rows = sweep_rows(sample_instances(lemma, n, seed), workers)
    return 2 * max(r["ratio"] for r in rows)


# ------------------------------------------------------------ congruences

def rho_congruence(q: int, a: int, b: int) -> int:
    """#{t mod q : a t^2 + b = 0 mod q}."""
    if q < 1:
        raise GonError("q must be positive")
    if q > 10**8:
        raise BudgetExceeded("modulus too large")
    t = np.arange(q, dtype=np.int64)
    t2 = (t * t) % q
    return int(np.count_nonzero((a % q * t2 + b) % q == 0))


def rho_bound(q: int, a: int, b: int) -> int:
    """sum_{d | q} |mu(d)| (-ab / d)."""
    return sum(kronecker(-a * b, d) for d in divisors(q) if mobius(d))


def rho_applicable(q: int, a: int, b: int) -> bool:
    """The inequality is asserted for odd q prime to ab; see notes."""
    return q % 2 == 1 and math.gcd(q, a * b) == 1


def rho_check(q: int, a: int, b: int) -> dict:
    r = rho_congruence(q, a, b)
    bound = rho_bound(q, a, b)
    applicable = rho_applicable(q, a, b)
    return {"q": q, "a": a, "b": b, "count": r, "bound": bound,
            "applicable": applicable, "ok": (r <= bound) or not applicable}


def sample_rho(n: int, seed: int) -> list[tuple[int, int, int]]:
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < n:
        q = int(rng.integers(1, 5000))
        a = int(rng.integers(-200, 201))
        b = int(rng.integers(-200, 201))
        if a == 0 or b == 0:
            continue
        if rng.random() < 0.7 and not rho_applicable(q, a, b):
            continue
        out.append((q, a, b))
    return out


# ---------------------------------------------------------------- conics

def _squarefree_part(n: int) -> int:
    s = -1 if n < 0 else 1
    for p, k in factorize(abs(n)):
        if k % 2:
            s *= p
    return s


def legendre_normal(c: Sequence[int]) -> tuple[int, int, int]:
    """Squarefree, pairwise coprime coefficients of an equivalent diagonal conic."""
    c = [_squarefree_part(x) for x in c]
    if 0 in c:
        raise GonError("zero coefficient")
    changed = True
    while changed:
        changed = False
        for i, j in ((0, 1), (0, 2), (1, 2)):
            g = math.gcd(c[i], c[j])
            if g > 1:
                k = 3 - i - j
                c[i] //= g
                c[j] //= g
                c[k] = _squarefree_part(c[k] * g)
                changed = True
    return tuple(c)


def _is_qr_mod(r: int, n: int) -> bool:
    """r is a square modulo the squarefree integer n."""
    for p, _ in factorize(abs(n)):
        if p == 2:
            continue
        if r % p and pow(r % p, (p - 1) // 2, p) != 1:
            return False
    return True


def conic_soluble(c: Sequence[int]) -> bool:
    """Legendre's criterion for a nonzero rational point on sum c_i x_i^2 = 0."""
    a, b, d = legendre_normal(c)
    if a > 0 and b > 0 and d > 0 or a < 0 and b < 0 and d < 0:
        return False
    return _is_qr_mod(-b * d, a) and _is_qr_mod(-a * d, b) and _is_qr_mod(-a * b, d)


def find_conic_point(a: Sequence[int], b: Sequence[int], bound: int) -> tuple[int, int, int] | None:
    """Nonzero c with sum a_i b_i c_i^2 = 0, |c_i| <= bound, hcf(c_i, c_j) = hcf(a_i, c_j) = 1."""
    al = [a[i] * b[i] for i in range(3)]
    c2 = np.arange(0, bound + 1, dtype=np.int64)
    for c3 in range(0, bound + 1):
        rest = -(al[1] * c2 * c2 + al[2] * c3 * c3)
        ok = rest % al[0] == 0
        v = rest // al[0]
        ok &= v >= 0
        if not ok.any():
            continue
        r, sq = _isqrt_exact(np.where(ok, v, 0))
        hit = np.nonzero(ok & sq & (r <= bound))[0]
        for h in hit:
            c = (int(r[h]), int(c2[h]), c3)
            if c == (0, 0, 0):
                continue
            if any(math.gcd(c[i], c[j]) != 1 for i, j in ((0, 1), (0, 2), (1, 2))):
                continue
            if any(math.gcd(a[i], c[j]) != 1 for i in range(3) for j in range(3) if i != j):
                continue
            return c
    return None


def admissible_ab(a: Sequence[int], b: Sequence[int]) -> bool:
    if 0 in a or 0 in b or math.gcd(*a) != 1 or math.gcd(*b) != 1:
        return False
    if not is_squarefree(abs(a[0] * a[1] * a[2])):
        return False
    return all(math.gcd(a[i], b[j], b[k]) == 1 for i, j, k in ((0, 1, 2), (1, 0, 2), (2, 0, 1)))


def search_bound(a: Sequence[int], b: Sequence[int]) -> int:
    return int(4 * math.isqrt(abs(a[0] * a[1] * a[2] * b[0] * b[1] * b[2])) + 4)


def _signed(rng: np.random.Generator, X: int) -> int:
    return int(rng.integers(1, X + 1)) * int(rng.choice((-1, 1)))


def _conic_sample(args) -> dict:
    a, b = args
    if not admissible_ab(a, b):
        return {"admissible": False}
    al = [a[i] * b[i] for i in range(3)]
    local = conic_soluble(al)
    c = find_conic_point(a, b, search_bound(a, b)) if local else None
    return {"admissible": True, "locally_soluble": local, "witness": c,
            "weight": 2 ** omega(abs(al[0] * al[1] * al[2]))}


def conic_solvability_stats(A: Sequence[int], Bd: Sequence[int], sample_size: int, seed: int = 0,
                            workers=None) -> dict:
    """Sampled estimate of S*(A, B) / AB over the boxes 0 < |a_i| <= A_i, 0 < |b_i| <= B_i.

    A and Bd are the side lengths (powers of two for dyadic levels). A pair
    counts towards S* when the search finds a witness c.
    """
    rng = np.random.default_rng(seed)
    pairs = [(tuple(_signed(rng, x) for x in A), tuple(_signed(rng, x) for x in Bd))
             for _ in range(sample_size)]
    res = pmap(_conic_sample, pairs, workers)
    box = math.prod(2 * x for x in list(A) + list(Bd))
    adm = [r for r in res if r["admissible"]]
    found = [r for r in adm if r["witness"] is not None]
    Sstar = box * sum(r["weight"] for r in found) / sample_size
    AB = math.prod(A) * math.prod(Bd)
    return {
        "A": list(A), "B": list(Bd), "samples": sample_size, "admissible": len(adm),
        "locally_soluble": sum(r["locally_soluble"] for r in adm),
        "witness_found": len(found),
        "S_star_estimate": Sstar, "ratio": Sstar / AB,
    }


# ------------------------------------------------------------------- output

def rows_to_csv(rows: Iterable[dict]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["instance", "count", "bound", "ratio"])
    for r in rows:
        inst = r["instance"]
        key = inst if isinstance(inst, str) else ";".join(f"{k}={v}" for k, v in inst.items())
        w.writerow([key, r["count"], repr(float(r["bound"])), repr(float(r["ratio"]))])
    return buf.getvalue()


def _split_level(k: int) -> tuple[int, int, int]:
    e = [k // 3 + (1 if i < k % 3 else 0) for i in range(3)]
    return tuple(2**x for x in e)


def serre_levels(max_exp: int = 10, step: int = 2) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Box shapes with A = A1 A2 A3 and B = B1 B2 B3 running over 2^0, 2^step, ..., 2^max_exp."""
    ks = range(0, max_exp + 1, step)
    return [(_split_level(ka), _split_level(kb)[::-1]) for ka in ks for kb in ks]


def serre_sweep(sample_size: int = 200, seed: int = 0, workers=None) -> list[dict]:
    return [conic_solvability_stats(A, Bd, sample_size, seed + n, workers)
            for n, (A, Bd) in enumerate(serre_levels())]


def check_serre(sample_size: int = 200, seed: int = 0, C: float = C_SERRE, workers=None) -> dict:
    """Bound the sampled S*/AB statistic by C on every level.

    Each hit is scaled by box volume / sample_size, so below SERRE_MIN_SAMPLES a
    single lucky witness can exceed C; such runs are reported, not asserted.
    """
    rows = serre_sweep(sample_size, seed, workers)
    worst = max(r["ratio"] for r in rows)
    asserted = sample_size >= SERRE_MIN_SAMPLES
    return {"constant": C, "levels": len(rows), "max_ratio": worst, "rows": rows,
            "asserted": asserted, "ok": worst <= C or not asserted}
