"""Enumeration of integer solutions of form systems in a box |x_i| <= B.

Two engines:

* ``mitm`` for a single form that splits as g(x_i, x_j) + h(x_k, x_l): the
  values of g and -h on the two coordinate planes are sorted and matched.
* ``propagate`` for arbitrary systems: a depth-first search that assigns a
  variable by solving a univariate equation whenever some form has exactly
  one unknown variable left, and branches over [-B, B] otherwise.

Both return every integer solution in the box, the zero vector included.
The caller restricts ``first`` (the values of the outermost branch
variable) to partition the work.
"""

from __future__ import annotations

import math
from itertools import combinations
from typing import Sequence

import numpy as np

from .forms import HomogeneousForm, Poly, coefficients_in, compile_poly

DEFAULT_BUDGET = 10**10


class BudgetExceeded(RuntimeError):
    pass


def split_groups(f: HomogeneousForm) -> tuple[tuple[int, int], tuple[int, int]] | None:
    """Partition of 4 variables into two pairs that no monomial mixes."""
    if f.n != 4:
        return None
    for a in combinations(range(4), 2):
        b = tuple(i for i in range(4) if i not in a)
        ok = True
        for e, _ in f.terms:
            in_a = any(e[i] for i in a)
            in_b = any(e[i] for i in b)
            if in_a and in_b:
                ok = False
                break
        if ok:
            return a, b
    return None


def _values(poly: Poly, idx: tuple[int, int], grid_i: np.ndarray, grid_j: np.ndarray, dtype):
    out = np.zeros(grid_i.shape, dtype=dtype)
    for e, c in poly.items():
        term = np.full(grid_i.shape, c, dtype=dtype)
        if e[idx[0]]:
            term = term * grid_i ** e[idx[0]]
        if e[idx[1]]:
            term = term * grid_j ** e[idx[1]]
        out = out + term
    return out


def mitm_solutions(f: HomogeneousForm, B: int, first: range | None = None) -> np.ndarray:
    """All x in [-B,B]^4 with f(x) = 0 for a split quaternary form."""
    groups = split_groups(f)
    if groups is None:
        raise ValueError("form does not split into two variable pairs")
    a, b = groups
    pa = {e: c for e, c in f.terms if any(e[i] for i in a)}
    pb = {e: c for e, c in f.terms if any(e[i] for i in b)}
    big = sum(abs(c) for _, c in f.terms) * max(B, 1) ** f.degree
    dtype = np.int64 if big < 2**62 else object
    r = np.arange(-B, B + 1, dtype=np.int64 if dtype is np.int64 else object)
    # the second group is the partitioned one
    ra = r
    rb = r if first is None else np.array(list(first), dtype=r.dtype)
    Ai, Aj = np.meshgrid(ra, ra, indexing="ij")
    Ai, Aj = Ai.ravel(), Aj.ravel()
    Bi, Bj = np.meshgrid(rb, r, indexing="ij")
    Bi, Bj = Bi.ravel(), Bj.ravel()
    ga = _values(pa, a, Ai, Aj, dtype)
    gb = -_values(pb, b, Bi, Bj, dtype)
    order = np.argsort(ga, kind="stable")
    gs = ga[order]
    left = np.searchsorted(gs, gb, side="left")
    right = np.searchsorted(gs, gb, side="right")
    counts = right - left
    total = int(counts.sum())
    out = np.zeros((total, 4), dtype=np.int64)
    if total == 0:
        return out
    hb = np.repeat(np.arange(len(gb)), counts)
    starts = np.repeat(left - np.concatenate(([0], np.cumsum(counts)[:-1])), counts)
    ia = order[starts + np.arange(total)]
    out[:, a[0]] = Ai[ia]
    out[:, a[1]] = Aj[ia]
    out[:, b[0]] = Bi[hb]
    out[:, b[1]] = Bj[hb]
    return out


def integer_roots(cs: Sequence[int], B: int) -> list[int] | None:
    """Integer roots in [-B, B] of sum cs[k] v^k; None if the polynomial is 0."""
    cs = list(cs)
    while cs and cs[-1] == 0:
        cs.pop()
    if not cs:
        return None
    roots: list[int] = []
    m = 0
    while cs[m] == 0:
        m += 1
    if m:
        roots.append(0)
        cs = cs[m:]
    d = len(cs) - 1
    if d == 0:
        return roots
    if d == 1:
        c0, c1 = cs
        if c0 % c1 == 0:
            v = -c0 // c1
            if abs(v) <= B:
                roots.append(v)
        return sorted(set(roots))
    if d == 2:
        c0, c1, c2 = cs
        disc = c1 * c1 - 4 * c2 * c0
        if disc < 0:
            return sorted(set(roots))
        s = math.isqrt(disc)
        if s * s != disc:
            return sorted(set(roots))
        for num in (-c1 + s, -c1 - s):
            if num % (2 * c2) == 0:
                v = num // (2 * c2)
                if abs(v) <= B:
                    roots.append(v)
        return sorted(set(roots))
    # higher degree: float roots as candidates, verified exactly
    cand: set[int] = set()
    for z in np.roots([float(c) for c in reversed(cs)]):
        if abs(z.imag) <= 1e-6 * max(1.0, abs(z.real)) + 1e-6:
            x = z.real
            for v in (math.floor(x) - 1, math.floor(x), math.floor(x) + 1, math.floor(x) + 2):
                cand.add(v)
    for v in cand:
        if abs(v) <= B and v != 0 and sum(c * v**k for k, c in enumerate(cs)) == 0:
            roots.append(v)
    return sorted(set(roots))


class Propagator:
    """Depth-first solver for a system of integer forms in a box."""

    def __init__(self, forms: Sequence[HomogeneousForm]):
        if not forms:
            raise ValueError("empty system")
        self.n = forms[0].n
        self.forms = list(forms)
        polys = [f.poly() for f in forms]
        self.eq_mask = [sum(1 << v for v in f.variables()) for f in forms]
        self.eqs_of: list[list[int]] = [[] for _ in range(self.n)]
        for e, f in enumerate(forms):
            for v in f.variables():
                self.eqs_of[v].append(e)
        self.evalf = [eval(f"lambda X: {compile_poly(p)}") for p in polys]
        self.coef: dict[tuple[int, int], object] = {}
        self.deg: dict[tuple[int, int], int] = {}
        for e, p in enumerate(polys):
            for v in forms[e].variables():
                parts = coefficients_in(p, v)
                d = max(parts)
                code = ", ".join(compile_poly(parts.get(k, {})) for k in range(d + 1))
                self.coef[(e, v)] = eval(f"lambda X: ({code},)")
                self.deg[(e, v)] = d
        occ = [len(self.eqs_of[v]) for v in range(self.n)]
        self.branch_order = sorted(range(self.n), key=lambda v: (-occ[v], v))
        self.steps = 0
        self._cand: dict[int, list[tuple[int, int, int]]] = {}

    def _candidates(self, known: int) -> list[tuple[int, int, int]]:
        """(degree, equation, variable) with the variable the only unknown, by degree."""
        c = self._cand.get(known)
        if c is None:
            c = []
            for e, m in enumerate(self.eq_mask):
                rest = m & ~known
                if rest and rest & (rest - 1) == 0:
                    v = rest.bit_length() - 1
                    c.append((self.deg[(e, v)], e, v))
            c.sort()
            self._cand[known] = c
        return c

    def solutions(self, B: int, first: range | None = None, budget: int = DEFAULT_BUDGET) -> list[tuple[int, ...]]:
        out: list[tuple[int, ...]] = []
        X = [0] * self.n
        full = (1 << self.n) - 1
        self.steps = 0
        rng = range(-B, B + 1)

        def consistent(v: int, known: int) -> bool:
            for e in self.eqs_of[v]:
                if self.eq_mask[e] & ~known == 0 and self.evalf[e](X) != 0:
                    return False
            return True

        def rec(known: int, top: bool) -> None:
            if known == full:
                out.append(tuple(X))
                return
            self.steps += 1
            if self.steps > budget:
                raise BudgetExceeded(f"more than {budget} search nodes")
            best = None
            for d, e, v in self._candidates(known):
                roots = integer_roots(self.coef[(e, v)](X), B)
                if roots is None:
                    continue
                if not roots:
                    return
                best = (d, v, roots)
                break
            if best is not None:
                _, v, values = best
            else:
                v = next(u for u in self.branch_order if not known >> u & 1)
                values = rng
            if top and first is not None:
                values = [x for x in values if x in first]
            nk = known | (1 << v)
            for val in values:
                X[v] = val
                if consistent(v, nk):
                    rec(nk, False)
            X[v] = 0

        rec(0, True)
        return out


def solve_box(forms: Sequence[HomogeneousForm], B: int, first: range | None = None,
              budget: int = DEFAULT_BUDGET, engine: str = "auto") -> np.ndarray:
    """All integer solutions in [-B, B]^n (zero vector included) as an int64 array."""
    n = forms[0].n
    if B < 0:
        return np.zeros((0, n), dtype=np.int64)
    if engine == "auto":
        engine = "mitm" if len(forms) == 1 and split_groups(forms[0]) else "propagate"
    if engine == "mitm":
        side = (2 * B + 1) ** 2
        if 2 * side > budget:
            raise BudgetExceeded(f"meet-in-the-middle table of size {side} exceeds budget")
        return mitm_solutions(forms[0], B, first)
    sols = Propagator(forms).solutions(B, first, budget)
    return np.array(sols, dtype=np.int64).reshape(-1, n)


def top_range_chunks(B: int, chunks: int) -> list[range]:
    """Split [-B, B] into contiguous pieces; the split depends only on (B, chunks)."""
    vals = 2 * B + 1
    step = max(1, -(-vals // chunks))
    return [range(lo, min(lo + step, B + 1)) for lo in range(-B, B + 1, step)]
