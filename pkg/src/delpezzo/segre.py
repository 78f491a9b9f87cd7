"""Segre symbols of pencils of quadrics in five variables.

For a pencil A + tB with an invertible member P, the Jordan structure of
M = P^-1 B does not depend on the choice of P. Eigenvalues are grouped by
the irreducible rational factor of the characteristic polynomial they are
roots of, and block sizes are read off from dim ker f(M)^k.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Sequence

from .arith import divisors
from .forms import HomogeneousForm
from .linalg import Matrix, add, charpoly, det, inverse, matmul, poly_eval_matrix, rank, to_matrix
from .surfaces import DP4_TABLE, DP4_TYPES

T_BOUND = 25

Poly = list[Fraction]  # coefficients, lowest degree first


class SegreError(ValueError):
    pass


# ---- univariate polynomials over Q ----

def _trim(f: Poly) -> Poly:
    f = list(f)
    while f and f[-1] == 0:
        f.pop()
    return f


def _divmod(f: Poly, g: Poly) -> tuple[Poly, Poly]:
    f, g = _trim(f), _trim(g)
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(len(f) - len(g) + 1, 1)
    r = list(f)
    while len(r) >= len(g):
        c = r[-1] / g[-1]
        k = len(r) - len(g)
        q[k] = c
        for i, gi in enumerate(g):
            r[i + k] -= c * gi
        r = _trim(r)
        if not r:
            break
    return _trim(q), r


def _monic(f: Poly) -> Poly:
    f = _trim(f)
    return [c / f[-1] for c in f]


def _gcd(f: Poly, g: Poly) -> Poly:
    f, g = _trim(f), _trim(g)
    while g:
        f, g = g, _divmod(f, g)[1]
    return _monic(f)


def _deriv(f: Poly) -> Poly:
    return _trim([k * c for k, c in enumerate(f)][1:])


def squarefree_parts(f: Poly) -> list[Poly]:
    """Yun's algorithm: f = prod_i g_i^i with g_i squarefree, coprime; returns [g_1, g_2, ...]."""
    f = _monic(f)
    out: list[Poly] = []
    a = _gcd(f, _deriv(f))
    b = _divmod(f, a)[0]
    c = _divmod(_deriv(f), a)[0]
    d = _trim([x - y for x, y in _zip_pad(c, _deriv(b))])
    while len(b) > 1:
        a = _gcd(b, d)
        out.append(a)
        b = _divmod(b, a)[0]
        c = _divmod(d, a)[0]
        d = _trim([x - y for x, y in _zip_pad(c, _deriv(b))])
    return out


def _zip_pad(f: Poly, g: Poly):
    n = max(len(f), len(g))
    f = list(f) + [Fraction(0)] * (n - len(f))
    g = list(g) + [Fraction(0)] * (n - len(g))
    return zip(f, g)


def rational_roots(f: Poly) -> list[Fraction]:
    f = _trim(f)
    den = lcm(*(c.denominator for c in f))
    ints = [int(c * den) for c in f]
    g = 0
    for v in ints:
        g = gcd(g, v)
    ints = [v // g for v in ints]
    roots = []
    if ints[0] == 0:
        roots.append(Fraction(0))
        k = next(i for i, v in enumerate(ints) if v)
        ints = ints[k:]
    if len(ints) == 1:
        return roots
    for p in divisors(abs(ints[0])):
        for q in divisors(abs(ints[-1])):
            for s in (1, -1):
                r = Fraction(s * p, q)
                if r not in roots and sum(c * r**k for k, c in enumerate(ints)) == 0:
                    roots.append(r)
    return sorted(roots)


def irreducible_factors(f: Poly) -> list[tuple[Poly, int]]:
    """Monic factors with multiplicity: linear factors split off, the remainder kept whole."""
    out = []
    for m, g in enumerate(squarefree_parts(f), start=1):
        if len(g) <= 1:
            continue
        for r in rational_roots(g):
            lin = [-r, Fraction(1)]
            out.append((lin, m))
            g = _divmod(g, lin)[0]
        if len(g) > 1:
            out.append((_monic(g), m))
    return out


# ---- symbols ----

@dataclass(frozen=True)
class SegreSymbol:
    groups: tuple[tuple[int, ...], ...]

    def key(self) -> tuple[tuple[int, ...], ...]:
        return tuple(sorted(self.groups, reverse=True))

    def __str__(self) -> str:
        multi = sorted((g for g in self.groups if len(g) > 1), key=lambda g: (-sum(g), -g[0]))
        single = sorted((g[0] for g in self.groups if len(g) == 1), reverse=True)
        parts = ["(" + ",".join(map(str, g)) + ")" for g in multi] + [str(s) for s in single]
        return "(" + ",".join(parts) + ")"

    def __eq__(self, other) -> bool:
        if not isinstance(other, SegreSymbol):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    @property
    def size(self) -> int:
        return sum(sum(g) for g in self.groups)


def parse_symbol(text: str) -> SegreSymbol:
    """Inverse of str(); e.g. '((1,1),2,1)'."""
    s = text.replace(" ", "")
    if not (s.startswith("(") and s.endswith(")")):
        raise SegreError(f"bad symbol {text!r}")
    s = s[1:-1]
    groups, i = [], 0
    while i < len(s):
        if s[i] == "(":
            j = s.index(")", i)
            groups.append(tuple(sorted((int(x) for x in s[i + 1:j].split(",")), reverse=True)))
            i = j + 2
        else:
            j = s.find(",", i)
            j = len(s) if j < 0 else j
            groups.append((int(s[i:j]),))
            i = j + 1
    return SegreSymbol(tuple(groups))


def _blocks(M: Matrix, f: Poly, mult: int) -> list[int]:
    """Jordan block sizes for each root of the irreducible factor f of multiplicity mult."""
    n = len(M)
    d = len(f) - 1
    F = poly_eval_matrix(f, M)
    P = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    dims = [0]
    for _ in range(mult):
        P = matmul(P, F)
        k = n - rank(P)
        if k % d:
            raise SegreError("factor splits with unequal block structure")
        dims.append(k // d)
    if dims[-1] != mult:
        raise SegreError("kernel dimensions inconsistent with multiplicity")
    ge = [dims[k] - dims[k - 1] for k in range(1, mult + 1)] + [0]
    sizes: list[int] = []
    for k in range(1, mult + 1):
        sizes += [k] * (ge[k - 1] - ge[k])
    return sorted(sizes, reverse=True)


def _symbol_of(M: Matrix) -> SegreSymbol:
    cp = charpoly(M)
    groups: list[tuple[int, ...]] = []
    for f, m in irreducible_factors(cp):
        b = tuple(_blocks(M, f, m))
        groups += [b] * (len(f) - 1)
    sym = SegreSymbol(tuple(groups))
    if sym.size != len(M):
        raise SegreError("block sizes do not add up")
    return sym


def invertible_members(A: Matrix, Bm: Matrix, bound: int = T_BOUND, limit: int | None = None) -> list[int]:
    """t = 0, 1, -1, 2, -2, ... with det(A + tB) != 0, at most ``limit`` of them."""
    out = []
    for t in [0] + [s * k for k in range(1, bound + 1) for s in (1, -1)]:
        if det(add(A, Bm, t)) != 0:
            out.append(t)
            if limit is not None and len(out) >= limit:
                break
    return out


def segre_symbol(A, Bm, bound: int = T_BOUND) -> SegreSymbol:
    """Segre symbol of the pencil spanned by the symmetric matrices A and Bm."""
    A, Bm = to_matrix(A), to_matrix(Bm)
    for X in (A, Bm):
        if len(X) != len(X[0]) or any(X[i][j] != X[j][i] for i in range(len(X)) for j in range(len(X))):
            raise SegreError("matrices must be square and symmetric")
    ts = invertible_members(A, Bm, bound, limit=2)
    if not ts:
        raise SegreError("no invertible pencil member: surface is a cone or pencil degenerate")
    syms = []
    for t in ts[:2]:
        M = matmul(inverse(add(A, Bm, t)), Bm)
        syms.append(_symbol_of(M))
    if len(syms) == 2 and syms[0].key() != syms[1].key():
        raise SegreError(f"symbol depends on pencil member: {syms[0]} vs {syms[1]}")
    return syms[0]


def quadric_matrix(Q: HomogeneousForm) -> Matrix:
    if Q.degree != 2:
        raise SegreError("form is not quadratic")
    n = Q.n
    S = [[Fraction(0)] * n for _ in range(n)]
    for e, c in Q.terms:
        idx = [i for i in range(n) for _ in range(e[i])]
        i, j = idx
        if i == j:
            S[i][i] += c
        else:
            S[i][j] += Fraction(c, 2)
            S[j][i] += Fraction(c, 2)
    return S


TYPE_OF_SYMBOL = {parse_symbol(sym).key(): typ for sym, typ, _ in DP4_TYPES.values()}
NONSINGULAR = SegreSymbol(((1,),) * 5)


def classify_dp4(Q1: HomogeneousForm, Q2: HomogeneousForm) -> tuple[SegreSymbol, str]:
    """Segre symbol and singularity type of the intersection of two quadrics in P^4."""
    if Q1.n != 5 or Q2.n != 5:
        raise SegreError("need quadrics in five variables")
    sym = segre_symbol(quadric_matrix(Q1), quadric_matrix(Q2))
    if sym == NONSINGULAR:
        return sym, "nonsingular"
    typ = TYPE_OF_SYMBOL.get(sym.key())
    if typ is None:
        raise SegreError(f"symbol {sym} is not a listed singular type")
    return sym, typ


def table_pair(row: str) -> tuple[HomogeneousForm, HomogeneousForm]:
    q1, q2 = DP4_TABLE[row]
    return HomogeneousForm.parse(q1, 5), HomogeneousForm.parse(q2, 5)


def congruence(A: Matrix, P: Sequence[Sequence[int]]) -> Matrix:
    Pm = to_matrix(P)
    Pt = [list(r) for r in zip(*Pm)]
    return matmul(matmul(Pt, A), Pm)

