"""Universal torsor parametrisations of the A1 sextic and the D4 cubic.

A1: torsor s1*y1 - s2*y2 + s3*y3 = 0 over (s0, s, y), mapped into the
    primed coordinates of the sextic (the builtin dp6_a1 system with x1
    and x3 negated).
D4: torsor s1*u1*y1^2 + s2*u2*y2^2 + s3*u3*y3^2 = 0 over (v, s, u, y),
    mapped onto t1*t2*(t1+t2) = t3^2*t4 with t3, t4 >= 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .arith import is_squarefree
from .forms import HomogeneousForm
from .parallel import pmap
from .surfaces import A1_FORMS, builtin, projective_points


class TorsorError(ValueError):
    pass


@dataclass(frozen=True)
class TorsorMap:
    """Monomial map: coordinate i is signs[i] * prod_j vars[j]^exps[i][j]."""

    name: str
    variables: tuple[str, ...]
    exps: tuple[tuple[int, ...], ...]
    signs: tuple[int, ...]

    def apply(self, vals: Sequence[int]) -> tuple[int, ...]:
        out = []
        for sgn, e in zip(self.signs, self.exps):
            t = sgn
            for v, k in zip(vals, e):
                if k:
                    t *= v**k
            out.append(t)
        return tuple(out)


A1_MAP = TorsorMap(
    "A1",
    ("s0", "s1", "s2", "s3", "y1", "y2", "y3"),
    (
        (1, 1, 1, 0, 1, 1, 0),
        (1, 2, 0, 0, 2, 0, 0),
        (2, 2, 1, 1, 1, 0, 0),
        (1, 0, 2, 0, 0, 2, 0),
        (2, 1, 2, 1, 0, 1, 0),
        (3, 2, 2, 2, 0, 0, 0),
        (0, 0, 0, 0, 1, 1, 1),
    ),
    (1,) * 7,
)

D4_MAP = TorsorMap(
    "D4",
    ("v", "s1", "s2", "s3", "u1", "u2", "u3", "y1", "y2", "y3"),
    (
        (2, 1, 0, 0, 2, 1, 1, 2, 0, 0),
        (2, 0, 1, 0, 1, 2, 1, 0, 2, 0),
        (3, 0, 0, 0, 2, 2, 2, 1, 1, 1),
        (0, 1, 1, 1, 0, 0, 0, 0, 0, 0),
    ),
    (-1, -1, 1, 1),
)

# primed A1 system: the catalogue forms under x1 -> -x1, x3 -> -x3
A1_PRIMED_FORMS = (
    "x1^2-x2*x4", "x1*x5-x3*x4", "x1*x3-x2*x5", "x1*x6-x3*x5", "x2*x6-x3^2",
    "x4*x6-x5^2", "x1^2-x1*x4+x5*x7", "x1^2-x1*x2-x3*x7", "x1*x3-x1*x5+x6*x7",
)


def a1_primed_system() -> list[HomogeneousForm]:
    return [HomogeneousForm.parse(t, 7) for t in A1_PRIMED_FORMS]


def primed_to_builtin(x: Sequence[int]) -> tuple[int, ...]:
    return (-x[0], x[1], -x[2], x[3], x[4], x[5], x[6])


# ---------------------------------------------------------------- A1

@dataclass(frozen=True)
class TorsorPointA1:
    s0: int
    s1: int
    s2: int
    s3: int
    y1: int
    y2: int
    y3: int

    def as_tuple(self) -> tuple[int, ...]:
        return (self.s0, self.s1, self.s2, self.s3, self.y1, self.y2, self.y3)


def a1_violations(t: TorsorPointA1) -> list[str]:
    s0, s1, s2, s3, y1, y2, y3 = t.as_tuple()
    bad = []
    if min(s0, s1, s2, s3, y1) <= 0:
        bad.append("s0, s1, s2, s3, y1 must be positive")
    if y2 == 0:
        bad.append("y2 must be nonzero")
    if s1 * y1 - s2 * y2 + s3 * y3 != 0:
        bad.append("torsor equation s1*y1 - s2*y2 + s3*y3 = 0 fails")
    for (a, b) in ((s1, s2), (s1, s3), (s2, s3)):
        if math.gcd(a, b) != 1:
            bad.append("s_i pairwise coprime fails")
            break
    if math.gcd(y1, s0 * s2 * s3) != 1 or math.gcd(y2, s0 * s1 * s3) != 1 \
            or math.gcd(y3, s0 * s1 * s2) != 1:
        bad.append("gcd(y_i, s0*s_j*s_k) = 1 fails")
    return bad


def psi_a1(t: TorsorPointA1) -> int:
    s0, s1, s2, s3, y1, y2, y3 = t.as_tuple()
    return max(abs(s0**3 * s1**2 * s2**2 * s3**2), abs(y1 * y2 * y3),
               abs(s0 * s1**2 * y1**2), abs(s0 * s2**2 * y2**2))


def a1_map(t: TorsorPointA1) -> tuple[int, ...]:
    bad = a1_violations(t)
    if bad:
        raise TorsorError("; ".join(bad))
    return A1_MAP.apply(t.as_tuple())


def a1_outer(B: int) -> list[tuple[int, int, int, int]]:
    """(s0, s1, s2, s3) with pairwise coprime s_i and s0^3 (s1 s2 s3)^2 <= B."""
    out = []
    s0 = 1
    while s0**3 <= B:
        lim = math.isqrt(B // s0**3)
        for s1 in range(1, lim + 1):
            for s2 in range(1, lim // s1 + 1):
                if math.gcd(s1, s2) != 1:
                    continue
                for s3 in range(1, lim // (s1 * s2) + 1):
                    if math.gcd(s1, s3) == 1 and math.gcd(s2, s3) == 1:
                        out.append((s0, s1, s2, s3))
        s0 += 1
    return out


def a1_points(B: int) -> Iterator[TorsorPointA1]:
    """Every A1 torsor point with Psi <= B (reference enumeration)."""
    for s0, s1, s2, s3 in a1_outer(B):
        ymax2 = math.isqrt(B // (s0 * s2 * s2))
        ymax1 = math.isqrt(B // (s0 * s1 * s1))
        inv = pow(s1, -1, s3) if s3 > 1 else 0
        for y2 in range(-ymax2, ymax2 + 1):
            if y2 == 0 or math.gcd(y2, s0 * s1 * s3) != 1:
                continue
            r = (inv * s2 * y2) % s3 if s3 > 1 else 0
            start = r if r > 0 else s3
            for y1 in range(start, ymax1 + 1, s3):
                if math.gcd(y1, s0 * s2 * s3) != 1:
                    continue
                y3 = (s2 * y2 - s1 * y1) // s3
                if abs(y1 * y2 * y3) > B or math.gcd(y3, s0 * s1 * s2) != 1:
                    continue
                yield TorsorPointA1(s0, s1, s2, s3, y1, y2, y3)


def _a1_kernel_py(quads: np.ndarray, B: int) -> int:
    total = 0
    for s0, s1, s2, s3 in quads.tolist():
        ymax2 = math.isqrt(B // (s0 * s2 * s2))
        ymax1 = math.isqrt(B // (s0 * s1 * s1))
        inv = pow(s1, -1, s3) if s3 > 1 else 0
        g1 = s0 * s2 * s3
        g2 = s0 * s1 * s3
        g3 = s0 * s1 * s2
        for y2 in range(-ymax2, ymax2 + 1):
            if y2 == 0 or math.gcd(y2, g2) != 1:
                continue
            r = (inv * s2 * y2) % s3 if s3 > 1 else 0
            start = r if r > 0 else s3
            for y1 in range(start, ymax1 + 1, s3):
                if math.gcd(y1, g1) != 1:
                    continue
                y3 = (s2 * y2 - s1 * y1) // s3
                if abs(y1 * y2 * y3) <= B and math.gcd(y3, g3) == 1:
                    total += 1
    return total


try:
    import numba

    @numba.njit(cache=True)
    def _gcd(a, b):
        a = abs(a)
        b = abs(b)
        while b:
            a, b = b, a % b
        return a

    @numba.njit(cache=True)
    def _isqrt(n):
        r = np.int64(np.sqrt(np.float64(n)))
        while r * r > n:
            r -= 1
        while (r + 1) * (r + 1) <= n:
            r += 1
        return r

    @numba.njit(cache=True)
    def _modinv(a, m):
        # extended Euclid, m > 1, gcd(a, m) = 1
        t, newt = 0, 1
        r, newr = m, a % m
        while newr:
            q = r // newr
            t, newt = newt, t - q * newt
            r, newr = newr, r - q * newr
        return t % m

    @numba.njit(cache=True)
    def _a1_kernel_nb(quads, B):
        total = 0
        for i in range(quads.shape[0]):
            s0 = quads[i, 0]
            s1 = quads[i, 1]
            s2 = quads[i, 2]
            s3 = quads[i, 3]
            ymax2 = _isqrt(B // (s0 * s2 * s2))
            ymax1 = _isqrt(B // (s0 * s1 * s1))
            inv = _modinv(s1, s3) if s3 > 1 else 0
            g1 = s0 * s2 * s3
            g2 = s0 * s1 * s3
            g3 = s0 * s1 * s2
            for y2 in range(-ymax2, ymax2 + 1):
                if y2 == 0 or _gcd(y2, g2) != 1:
                    continue
                r = ((inv * s2) % s3 * (y2 % s3)) % s3 if s3 > 1 else 0
                start = r if r > 0 else s3
                for y1 in range(start, ymax1 + 1, s3):
                    if _gcd(y1, g1) != 1:
                        continue
                    y3 = (s2 * y2 - s1 * y1) // s3
                    if abs(y1 * y2 * y3) <= B and _gcd(y3, g3) == 1:
                        total += 1
        return total

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    HAVE_NUMBA = False

A1_CHUNKS = 16


def _a1_chunk(args) -> int:
    quads, B, fast = args
    if fast and HAVE_NUMBA:
        return int(_a1_kernel_nb(quads, np.int64(B)))
    return _a1_kernel_py(quads, B)


def a1_count(B: int, workers: int | None = None, fast: bool = True) -> int:
    """#{A1 torsor points : Psi <= B}."""
    if B < 1:
        return 0
    quads = np.array(a1_outer(B), dtype=np.int64).reshape(-1, 4)
    # interleaved chunks balance the heavy small-s entries across workers
    chunks = [quads[i::A1_CHUNKS] for i in range(A1_CHUNKS)]
    return sum(pmap(_a1_chunk, [(c, B, fast) for c in chunks], workers))


# ---------------------------------------------------------------- D4

@dataclass(frozen=True)
class TorsorPointD4:
    v: int
    s1: int
    s2: int
    s3: int
    u1: int
    u2: int
    u3: int
    y1: int
    y2: int
    y3: int

    def as_tuple(self) -> tuple[int, ...]:
        return (self.v, self.s1, self.s2, self.s3, self.u1, self.u2, self.u3, self.y1, self.y2, self.y3)


def d4_violations(t: TorsorPointD4) -> list[str]:
    v, s1, s2, s3, u1, u2, u3, y1, y2, y3 = t.as_tuple()
    bad = []
    if min(v, s1, s2, s3, u3, y1, y2, y3) <= 0:
        bad.append("v, s, u3, y must be positive")
    if u1 == 0 or u2 == 0:
        bad.append("u1, u2 must be nonzero")
    if s1 * u1 * y1**2 + s2 * u2 * y2**2 + s3 * u3 * y3**2 != 0:
        bad.append("torsor equation fails")
    if u1 * u2 * u3 == 0 or not is_squarefree(u1 * u2 * u3):
        bad.append("u1*u2*u3 must be squarefree")
    if math.gcd(s1 * s2 * s3, u1 * u2 * u3 * v) != 1:
        bad.append("gcd(s1*s2*s3, u1*u2*u3*v) = 1 fails")
    if math.gcd(y1, y2) != 1 or math.gcd(y1, y3) != 1 or math.gcd(y2, y3) != 1:
        bad.append("y pairwise coprime fails")
    if math.gcd(y1, s2, s3) != 1 or math.gcd(y2, s1, s3) != 1 or math.gcd(y3, s1, s2) != 1:
        bad.append("gcd(y_i, s_j, s_k) = 1 fails")
    return bad


def psi_d4(t: TorsorPointD4) -> int:
    v, s1, s2, s3, u1, u2, u3, y1, y2, y3 = t.as_tuple()
    return max(abs(s1 * s2 * s3), abs(u1**2 * u2**2 * u3**2 * v**3 * y1 * y2 * y3),
               abs(s1 * u1**2 * u2 * u3 * v**2 * y1**2), abs(s2 * u1 * u2**2 * u3 * v**2 * y2**2))


def d4_map(t: TorsorPointD4) -> tuple[int, ...]:
    bad = d4_violations(t)
    if bad:
        raise TorsorError("; ".join(bad))
    return D4_MAP.apply(t.as_tuple())


def d4_points(B: int) -> Iterator[TorsorPointD4]:
    """Every D4 torsor point with Psi <= B."""
    if B < 1:
        return
    v = 1
    while v**3 <= B:
        v2 = v * v
        for u3 in range(1, B // v2 + 1):
            for au1 in range(1, B // (v2 * u3) + 1):
                for au2 in range(1, B // (v2 * u3 * au1) + 1):
                    uu = au1 * au2 * u3
                    if u3 * au1 * au2 * v2 > B or not is_squarefree(uu):
                        continue
                    # t3 >= u^2 v^3
                    if uu * uu * v2 * v > B:
                        continue
                    for u1 in (au1, -au1):
                        for u2 in (au2, -au2):
                            yield from _d4_inner(B, v, u1, u2, u3)
        v += 1


def _d4_inner(B, v, u1, u2, u3):
    v2 = v * v
    c1 = u1 * u1 * abs(u2) * u3 * v2
    c2 = abs(u1) * u2 * u2 * u3 * v2
    uv = u1 * u1 * u2 * u2 * u3 * u3 * v2 * v
    uvall = abs(u1 * u2 * u3) * v
    for s1 in range(1, B // c1 + 1):
        if math.gcd(s1, uvall) != 1:
            continue
        for s2 in range(1, min(B // c2, B // s1) + 1):
            if math.gcd(s2, uvall) != 1:
                continue
            for s3 in range(1, B // (s1 * s2) + 1):
                if math.gcd(s3, uvall) != 1:
                    continue
                for y1 in range(1, math.isqrt(B // (s1 * c1)) + 1):
                    a = s1 * u1 * y1 * y1
                    for y2 in range(1, math.isqrt(B // (s2 * c2)) + 1):
                        if math.gcd(y1, y2) != 1:
                            continue
                        rhs = -(a + s2 * u2 * y2 * y2)
                        den = s3 * u3
                        if rhs <= 0 or rhs % den:
                            continue
                        q = rhs // den
                        y3 = math.isqrt(q)
                        if y3 * y3 != q or uv * y1 * y2 * y3 > B:
                            continue
                        t = TorsorPointD4(v, s1, s2, s3, u1, u2, u3, y1, y2, y3)
                        if not d4_violations(t):
                            yield t


def d4_count(B: int) -> int:
    if B < 1:
        return 0
    return sum(1 for t in d4_points(B) if max(abs(c) for c in D4_MAP.apply(t.as_tuple())) <= B)


# ---------------------------------------------------------------- bijection checks

def direct_d4_targets(B: int, workers=None) -> set[tuple[int, ...]]:
    """Primitive t with t1 t2 (t1+t2) = t3^2 t4, |t| <= B, t3, t4 >= 1."""
    S = builtin("dp3_d4")
    from .surfaces import box_solutions, primitive_mask
    pts = box_solutions(S.forms, B, workers)
    keep = primitive_mask(pts) & (pts[:, 2] >= 1) & (pts[:, 3] >= 1)
    return {tuple(r) for r in pts[keep].tolist()}


def direct_a1_targets(B: int, workers=None) -> set[tuple[int, ...]]:
    """Primitive solutions of the primed A1 system with |x| <= B and x2, x3, x4, x6 >= 0."""
    from .surfaces import box_solutions, primitive_mask
    pts = box_solutions(a1_primed_system(), B, workers)
    keep = primitive_mask(pts) & (pts[:, 1] >= 0) & (pts[:, 2] >= 0) & (pts[:, 3] >= 0) & (pts[:, 5] >= 0)
    return {tuple(r) for r in pts[keep].tolist()}


def _boundary_class(x: Sequence[int]) -> str:
    zeros = [i + 1 for i in range(6) if x[i] == 0]
    if zeros:
        return "x" + ",".join(map(str, zeros)) + "=0"
    return "interior"


def verify_bijection(surface: str, B: int, workers=None) -> dict:
    """Compare direct solutions with torsor images at height <= B."""
    if B > 200:
        raise TorsorError("verify_bijection materialises both sets; B is capped at 200")
    surface = surface.upper()
    if surface == "D4":
        direct = direct_d4_targets(B, workers)
        mapped_list = [d4_map(t) for t in d4_points(B)]
        mapped_list = [t for t in mapped_list if max(abs(c) for c in t) <= B]
    elif surface == "A1":
        direct = direct_a1_targets(B, workers)
        mapped_list = [a1_map(t) for t in a1_points(B)]
    else:
        raise TorsorError("surface must be A1 or D4")
    mapped = set(mapped_list)
    missing = sorted(direct - mapped)
    extra = sorted(mapped - direct)
    classes: dict[str, int] = {}
    if surface == "A1":
        for x in missing:
            c = _boundary_class(x)
            classes[c] = classes.get(c, 0) + 1
    return {
        "surface": surface,
        "B": B,
        "direct": len(direct),
        "mapped": len(mapped_list),
        "injective": len(mapped) == len(mapped_list),
        "matched": len(direct & mapped),
        "missing": [list(x) for x in missing],
        "extra": [list(x) for x in extra],
        "missing_classes": classes,
    }
